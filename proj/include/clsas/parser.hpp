#pragma once

#include "clsas/scalar.hpp"

#include <cctype>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clsas {

class ParseError : public std::runtime_error
{
  public:
	ParseError(std::string const &message, std::size_t position)
	    : std::runtime_error("at position " + std::to_string(position) + ": " +
	                         message),
	      position_(position)
	{}
	std::size_t position() const { return position_; }

  private:
	std::size_t position_;
};

namespace detail {

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := rational | symbol | '(' expr ')' | '-' factor | factor '^' uint
class ScalarParser
{
  public:
	ScalarParser(std::string_view text, std::span<Indeterminate const> symbols)
	    : text_(text), symbols_(symbols)
	{}

	Scalar parse()
	{
		Scalar s = expr();
		skip();
		if (pos_ != text_.size())
			fail("unexpected '" + std::string(1, text_[pos_]) + "'");
		return s;
	}

  private:
	Scalar expr()
	{
		Scalar s = term();
		for (;;)
		{
			skip();
			if (accept('+'))
				s += term();
			else if (accept('-'))
				s -= term();
			else
				return s;
		}
	}

	Scalar term()
	{
		Scalar s = factor();
		for (;;)
		{
			skip();
			if (accept('*'))
				s *= factor();
			else if (peek() == '/')
			{
				std::size_t at = pos_++;
				Scalar d = factor();
				if (d.is_zero())
					fail_at("division by the zero polynomial", at);
				s = s / d;
			}
			else
				return s;
		}
	}

	Scalar factor()
	{
		skip();
		Scalar s;
		if (accept('-'))
			return -factor();
		if (accept('('))
		{
			s = expr();
			skip();
			if (!accept(')'))
				fail("expected ')'");
		}
		else if (std::isdigit(static_cast<unsigned char>(peek())))
			s = rational();
		else if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')
			s = identifier();
		else if (pos_ == text_.size())
			fail("unexpected end of expression");
		else
			fail("unexpected '" + std::string(1, text_[pos_]) + "'");
		for (;;)
		{
			skip();
			if (!accept('^'))
				return s;
			skip();
			if (!std::isdigit(static_cast<unsigned char>(peek())))
				fail("expected unsigned integer exponent");
			std::size_t start = pos_;
			Integer e{std::string(digits())};
			if (e > 255)
				fail_at("exponent too large", start);
			s = s.pow(static_cast<unsigned>(e.get_ui()));
		}
	}

	Scalar rational()
	{
		Integer num{std::string(digits())};
		// rational literal: int '/' uint with no intervening whitespace
		if (peek() == '/' && pos_ + 1 < text_.size() &&
		    std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))
		{
			std::size_t at = pos_;
			++pos_;
			Integer den{std::string(digits())};
			if (den == 0)
				fail_at("division by the zero polynomial", at);
			Rational q(num, den);
			q.canonicalize();
			return Scalar(q);
		}
		return Scalar(Rational(num));
	}

	Scalar identifier()
	{
		std::size_t start = pos_;
		while (pos_ < text_.size() &&
		       (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
		        text_[pos_] == '_'))
			++pos_;
		std::string_view name = text_.substr(start, pos_ - start);
		for (auto const &x : symbols_)
			if (x.name() == name)
				return Scalar::variable(x);
		fail_at("unknown symbol '" + std::string(name) + "'", start);
	}

	std::string_view digits()
	{
		std::size_t start = pos_;
		while (std::isdigit(static_cast<unsigned char>(peek())))
			++pos_;
		return text_.substr(start, pos_ - start);
	}

	char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
	bool accept(char c)
	{
		if (peek() != c)
			return false;
		++pos_;
		return true;
	}
	void skip()
	{
		while (pos_ < text_.size() &&
		       std::isspace(static_cast<unsigned char>(text_[pos_])))
			++pos_;
	}
	[[noreturn]] void fail(std::string const &msg) const { fail_at(msg, pos_); }
	[[noreturn]] void fail_at(std::string const &msg, std::size_t at) const
	{
		throw ParseError(msg, at);
	}

	std::string_view text_;
	std::span<Indeterminate const> symbols_;
	std::size_t pos_ = 0;
};

} // namespace detail

/// Parses an arithmetic expression over the given symbols into canonical
/// form. Throws ParseError on syntax errors, unknown symbols, or division
/// by zero.
inline Scalar parse_scalar(std::string_view expr,
                           std::span<Indeterminate const> symbols)
{
	return detail::ScalarParser(expr, symbols).parse();
}

} // namespace clsas
