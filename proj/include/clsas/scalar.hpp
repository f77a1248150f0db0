#pragma once

#include "clsas/polynomial.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace clsas {

class SingularEvaluation : public std::domain_error
{
  public:
	using std::domain_error::domain_error;
};

/**
 * Element of Q(x1..xn) in canonical form: gcd(num, den) = 1 and the
 * denominator has integer coefficients with content 1 and a positive
 * leading coefficient. Two Scalars are equal iff they are structurally
 * equal.
 */
class Scalar
{
  public:
	Scalar() : den_(1) {}
	Scalar(Rational c) : num_(std::move(c)), den_(1) {}
	Scalar(long c) : Scalar(Rational(c)) {}
	Scalar(int c) : Scalar(Rational(c)) {}
	Scalar(Polynomial p) : num_(std::move(p)), den_(1) {}

	Scalar(Polynomial num, Polynomial den)
	{
		if (den.is_zero())
			throw std::domain_error("division by the zero polynomial");
		if (num.is_zero())
		{
			den_ = Polynomial(1);
			return;
		}
		Polynomial g = gcd(num, den);
		if (!g.is_constant())
		{
			num = divide_exact(num, g);
			den = divide_exact(den, g);
		}
		Rational c = den.content();
		num_ = num * (1 / c);
		den_ = den * (1 / c);
	}

	static Scalar variable(Indeterminate x) { return Polynomial::variable(x); }

	Polynomial const &numerator() const { return num_; }
	Polynomial const &denominator() const { return den_; }

	bool is_zero() const { return num_.is_zero(); }
	bool is_polynomial() const { return den_.is_constant(); }
	bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
	Rational constant_value() const
	{
		return num_.constant_value() / den_.constant_value();
	}
	std::uint32_t variables() const { return num_.variables() | den_.variables(); }

	friend bool operator==(Scalar const &a, Scalar const &b)
	{
		return a.num_ == b.num_ && a.den_ == b.den_;
	}

	friend std::strong_ordering compare(Scalar const &a, Scalar const &b)
	{
		if (auto c = compare(a.num_, b.num_); c != 0)
			return c;
		return compare(a.den_, b.den_);
	}

	Scalar operator-() const
	{
		Scalar r = *this;
		r.num_ = -r.num_;
		return r;
	}

	friend Scalar operator+(Scalar const &a, Scalar const &b)
	{
		if (a.is_zero())
			return b;
		if (b.is_zero())
			return a;
		if (a.den_ == b.den_)
		{
			if (a.den_.is_constant())
				return from_canonical(a.num_ + b.num_, a.den_);
			return Scalar(a.num_ + b.num_, a.den_);
		}
		if (a.den_.is_constant() && b.den_.is_constant())
			return from_canonical(a.num_ + b.num_, Polynomial(1));
		// Henrici: only the common part of the denominators can cancel
		Polynomial g = gcd(a.den_, b.den_);
		Polynomial da = divide_exact(a.den_, g), db = divide_exact(b.den_, g);
		Polynomial num = a.num_ * db + b.num_ * da;
		if (num.is_zero())
			return Scalar();
		Polynomial h = gcd(num, g);
		if (!h.is_constant())
		{
			num = divide_exact(num, h);
			g = divide_exact(g, h);
		}
		return normalized(std::move(num), da * db * g);
	}

	friend Scalar operator-(Scalar const &a, Scalar const &b) { return a + (-b); }

	friend Scalar operator*(Scalar const &a, Scalar const &b)
	{
		if (a.is_zero() || b.is_zero())
			return Scalar();
		if (a.den_.is_constant() && b.den_.is_constant())
			return from_canonical(a.num_ * b.num_, Polynomial(1));
		Polynomial g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
		Polynomial n1 = g1.is_constant() ? a.num_ : divide_exact(a.num_, g1);
		Polynomial d2 = g1.is_constant() ? b.den_ : divide_exact(b.den_, g1);
		Polynomial n2 = g2.is_constant() ? b.num_ : divide_exact(b.num_, g2);
		Polynomial d1 = g2.is_constant() ? a.den_ : divide_exact(a.den_, g2);
		return normalized(n1 * n2, d1 * d2);
	}

	Scalar inverse() const
	{
		if (is_zero())
			throw std::domain_error("inverse of zero");
		return normalized(den_, num_);
	}

	friend Scalar operator/(Scalar const &a, Scalar const &b)
	{
		return a * b.inverse();
	}

	Scalar &operator+=(Scalar const &b) { return *this = *this + b; }
	Scalar &operator-=(Scalar const &b) { return *this = *this - b; }
	Scalar &operator*=(Scalar const &b) { return *this = *this * b; }

	Scalar pow(unsigned e) const
	{
		Scalar r(1), base = *this;
		while (e)
		{
			if (e & 1)
				r *= base;
			e >>= 1;
			if (e)
				base *= base;
		}
		return r;
	}

	/// Exact value at a rational point.
	Rational evaluate(std::vector<std::optional<Rational>> const &values) const
	{
		Rational d = den_.evaluate(values);
		if (d == 0)
			throw SingularEvaluation("denominator " + den_.to_string() +
			                         " vanishes at the assignment");
		return num_.evaluate(values) / d;
	}

	Rational evaluate(std::map<Indeterminate, Rational> const &assignment) const
	{
		std::vector<std::optional<Rational>> values(max_symbols);
		for (auto const &[x, v] : assignment)
			values[x.index()] = v;
		return evaluate(values);
	}

	/// Partial evaluation: assigned symbols become their values.
	Scalar substitute(std::map<Indeterminate, Rational> const &assignment) const
	{
		std::vector<std::optional<Rational>> values(max_symbols);
		for (auto const &[x, v] : assignment)
			values[x.index()] = v;
		Polynomial d = den_.substitute(values);
		if (d.is_zero())
			throw SingularEvaluation("denominator " + den_.to_string() +
			                         " vanishes at the assignment");
		return Scalar(num_.substitute(values), std::move(d));
	}

	/// Renders in a form accepted by parse_scalar.
	std::string to_string() const
	{
		if (den_.is_constant() && den_.constant_value() == 1)
			return num_.to_string();
		std::string n = num_.to_string(), d = den_.to_string();
		if (num_.size() > 1)
			n = "(" + n + ")";
		if (den_.size() > 1 || !den_.is_constant())
			d = "(" + d + ")";
		return n + "/" + d;
	}

  private:
	// Caller guarantees gcd(num, den) = 1.
	static Scalar normalized(Polynomial num, Polynomial den)
	{
		if (den.is_zero())
			throw std::domain_error("division by the zero polynomial");
		Scalar r;
		if (num.is_zero())
			return r;
		Rational c = den.content();
		r.num_ = num * (1 / c);
		r.den_ = den * (1 / c);
		return r;
	}

	// Denominator already canonical and coprime to num.
	static Scalar from_canonical(Polynomial num, Polynomial den)
	{
		Scalar r;
		if (num.is_zero())
			return r;
		r.num_ = std::move(num);
		r.den_ = std::move(den);
		return r;
	}

	Polynomial num_;
	Polynomial den_;
};

inline Scalar symbol(std::string_view name)
{
	if (Indeterminate::is_grading_name(name))
		return Scalar::variable(
		    Indeterminate::grading(std::stoul(std::string(name.substr(1)))));
	return Scalar::variable(Indeterminate::parameter(name));
}

} // namespace clsas
