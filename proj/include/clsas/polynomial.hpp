#pragma once

#include "clsas/symbols.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clsas {

using Rational = mpq_class;
using Integer = mpz_class;

/// Exponent vector over the process-wide symbol table.
struct Monomial
{
	std::array<std::uint8_t, max_symbols> exps{};
	std::uint16_t degree = 0;

	static Monomial variable(std::size_t index, unsigned power = 1)
	{
		Monomial m;
		if (power > 255)
			throw std::overflow_error("monomial exponent exceeds 255");
		m.exps.at(index) = static_cast<std::uint8_t>(power);
		m.degree = static_cast<std::uint16_t>(power);
		return m;
	}

	bool is_one() const { return degree == 0; }
	unsigned operator[](std::size_t i) const { return exps[i]; }

	bool divides(Monomial const &other) const
	{
		for (std::size_t i = 0; i < max_symbols; ++i)
			if (exps[i] > other.exps[i])
				return false;
		return true;
	}

	friend Monomial operator*(Monomial const &a, Monomial const &b)
	{
		Monomial m;
		for (std::size_t i = 0; i < max_symbols; ++i)
		{
			unsigned e = unsigned(a.exps[i]) + b.exps[i];
			if (e > 255)
				throw std::overflow_error("monomial exponent exceeds 255");
			m.exps[i] = static_cast<std::uint8_t>(e);
		}
		m.degree = static_cast<std::uint16_t>(a.degree + b.degree);
		return m;
	}

	/// Requires b.divides(a).
	friend Monomial operator/(Monomial const &a, Monomial const &b)
	{
		Monomial m;
		for (std::size_t i = 0; i < max_symbols; ++i)
			m.exps[i] = static_cast<std::uint8_t>(a.exps[i] - b.exps[i]);
		m.degree = static_cast<std::uint16_t>(a.degree - b.degree);
		return m;
	}

	// graded lexicographic; earlier-declared symbols dominate
	friend std::strong_ordering operator<=>(Monomial const &a, Monomial const &b)
	{
		if (auto c = a.degree <=> b.degree; c != 0)
			return c;
		return a.exps <=> b.exps;
	}
	friend bool operator==(Monomial const &, Monomial const &) = default;
};

struct Term
{
	Monomial mono;
	Rational coeff;
};

/**
 * Sparse multivariate polynomial over Q. Terms are kept sorted by
 * decreasing monomial in graded lexicographic order with no zero
 * coefficients, so structural equality is mathematical equality.
 */
class Polynomial
{
  public:
	Polynomial() = default;
	Polynomial(Rational c)
	{
		if (c != 0)
			terms_.push_back({Monomial{}, std::move(c)});
	}
	Polynomial(long c) : Polynomial(Rational(c)) {}
	Polynomial(int c) : Polynomial(Rational(c)) {}

	static Polynomial variable(Indeterminate x)
	{
		Polynomial p;
		p.terms_.push_back({Monomial::variable(x.index()), Rational(1)});
		return p;
	}

	static Polynomial monomial(Monomial m, Rational c)
	{
		Polynomial p;
		if (c != 0)
			p.terms_.push_back({m, std::move(c)});
		return p;
	}

	/// Builds from arbitrary terms; sorts and combines like terms.
	static Polynomial from_terms(std::vector<Term> terms)
	{
		std::sort(terms.begin(), terms.end(),
		          [](Term const &a, Term const &b) { return a.mono > b.mono; });
		Polynomial p;
		for (auto &t : terms)
		{
			if (!p.terms_.empty() && p.terms_.back().mono == t.mono)
				p.terms_.back().coeff += t.coeff;
			else
			{
				if (!p.terms_.empty() && p.terms_.back().coeff == 0)
					p.terms_.pop_back();
				p.terms_.push_back(std::move(t));
			}
		}
		if (!p.terms_.empty() && p.terms_.back().coeff == 0)
			p.terms_.pop_back();
		return p;
	}

	std::vector<Term> const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	bool is_constant() const
	{
		return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
	}
	Rational constant_value() const
	{
		if (!is_constant())
			throw std::logic_error("polynomial is not constant");
		return terms_.empty() ? Rational(0) : terms_[0].coeff;
	}
	Term const &leading() const { return terms_.front(); }
	std::size_t size() const { return terms_.size(); }

	/// Bit i set iff symbol i occurs.
	std::uint32_t variables() const
	{
		std::uint32_t mask = 0;
		for (auto const &t : terms_)
			for (std::size_t i = 0; i < max_symbols; ++i)
				if (t.mono.exps[i])
					mask |= 1u << i;
		return mask;
	}

	unsigned degree_in(std::size_t var) const
	{
		unsigned d = 0;
		for (auto const &t : terms_)
			d = std::max<unsigned>(d, t.mono.exps[var]);
		return d;
	}

	unsigned total_degree() const
	{
		return terms_.empty() ? 0 : terms_.front().mono.degree;
	}

	friend bool operator==(Polynomial const &a, Polynomial const &b)
	{
		if (a.terms_.size() != b.terms_.size())
			return false;
		for (std::size_t i = 0; i < a.terms_.size(); ++i)
			if (a.terms_[i].mono != b.terms_[i].mono ||
			    a.terms_[i].coeff != b.terms_[i].coeff)
				return false;
		return true;
	}

	/// Total order on canonical polynomials, used for deterministic sorting.
	friend std::strong_ordering compare(Polynomial const &a, Polynomial const &b)
	{
		std::size_t n = std::min(a.terms_.size(), b.terms_.size());
		for (std::size_t i = 0; i < n; ++i)
		{
			if (auto c = a.terms_[i].mono <=> b.terms_[i].mono; c != 0)
				return c;
			int s = cmp(a.terms_[i].coeff, b.terms_[i].coeff);
			if (s != 0)
				return s < 0 ? std::strong_ordering::less
				             : std::strong_ordering::greater;
		}
		return a.terms_.size() <=> b.terms_.size();
	}

	Polynomial operator-() const
	{
		Polynomial r = *this;
		for (auto &t : r.terms_)
			t.coeff = -t.coeff;
		return r;
	}

	friend Polynomial operator+(Polynomial const &a, Polynomial const &b)
	{
		return merge(a, b, false);
	}
	friend Polynomial operator-(Polynomial const &a, Polynomial const &b)
	{
		return merge(a, b, true);
	}

	friend Polynomial operator*(Polynomial const &a, Rational const &c)
	{
		if (c == 0)
			return {};
		Polynomial r = a;
		for (auto &t : r.terms_)
			t.coeff *= c;
		return r;
	}

	friend Polynomial operator*(Polynomial const &a, Polynomial const &b)
	{
		if (a.is_zero() || b.is_zero())
			return {};
		if (a.is_constant())
			return b * a.terms_[0].coeff;
		if (b.is_constant())
			return a * b.terms_[0].coeff;
		std::vector<Term> out;
		out.reserve(a.terms_.size() * b.terms_.size());
		for (auto const &s : a.terms_)
			for (auto const &t : b.terms_)
				out.push_back({s.mono * t.mono, s.coeff * t.coeff});
		return from_terms(std::move(out));
	}

	Polynomial &operator+=(Polynomial const &b) { return *this = *this + b; }
	Polynomial &operator-=(Polynomial const &b) { return *this = *this - b; }
	Polynomial &operator*=(Polynomial const &b) { return *this = *this * b; }

	Polynomial pow(unsigned e) const
	{
		Polynomial result(1), base = *this;
		while (e)
		{
			if (e & 1)
				result *= base;
			e >>= 1;
			if (e)
				base *= base;
		}
		return result;
	}

	/// Multiplies every monomial by m.
	Polynomial shifted(Monomial const &m) const
	{
		Polynomial r = *this;
		for (auto &t : r.terms_)
			t.mono = t.mono * m;
		return r;
	}

	/// Exact quotient a/b, or nullopt if b does not divide a.
	friend std::optional<Polynomial> try_divide(Polynomial const &a,
	                                            Polynomial const &b)
	{
		if (b.is_zero())
			throw std::domain_error("polynomial division by zero");
		if (b.is_constant())
			return a * (1 / b.terms_[0].coeff);
		std::vector<Term> quotient;
		Polynomial rem = a;
		auto const &lb = b.leading();
		while (!rem.is_zero())
		{
			auto const &lr = rem.leading();
			if (!lb.mono.divides(lr.mono))
				return std::nullopt;
			Term q{lr.mono / lb.mono, lr.coeff / lb.coeff};
			rem = rem - b.shifted(q.mono) * q.coeff;
			quotient.push_back(std::move(q));
		}
		return from_terms(std::move(quotient));
	}

	friend Polynomial divide_exact(Polynomial const &a, Polynomial const &b)
	{
		auto q = try_divide(a, b);
		if (!q)
			throw std::logic_error("inexact polynomial division");
		return *std::move(q);
	}

	/// Rational content: gcd of numerators over lcm of denominators, signed
	/// like the leading coefficient. Zero for the zero polynomial.
	Rational content() const
	{
		if (terms_.empty())
			return 0;
		Integer num = 0, den = 1;
		for (auto const &t : terms_)
		{
			num = gcd(num, Integer(t.coeff.get_num()));
			den = lcm(den, Integer(t.coeff.get_den()));
		}
		Rational c(num, den);
		c.canonicalize();
		if (terms_.front().coeff < 0)
			c = -c;
		return c;
	}

	/// Integer coefficients with gcd 1 and positive leading coefficient.
	Polynomial primitive() const
	{
		if (terms_.empty())
			return {};
		return *this * (1 / content());
	}

	/// Coefficients with respect to one variable, indexed by power.
	std::vector<Polynomial> coefficients_in(std::size_t var) const
	{
		std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
		for (auto const &t : terms_)
		{
			Term r = t;
			unsigned e = r.mono.exps[var];
			r.mono.exps[var] = 0;
			r.mono.degree = static_cast<std::uint16_t>(r.mono.degree - e);
			buckets[e].push_back(std::move(r));
		}
		std::vector<Polynomial> out;
		out.reserve(buckets.size());
		for (auto &b : buckets)
			out.push_back(from_terms(std::move(b)));
		return out;
	}

	static Polynomial from_coefficients(std::vector<Polynomial> const &coeffs,
	                                    std::size_t var)
	{
		std::vector<Term> out;
		for (std::size_t e = 0; e < coeffs.size(); ++e)
		{
			Monomial shift = e ? Monomial::variable(var, unsigned(e)) : Monomial{};
			for (auto const &t : coeffs[e].terms_)
				out.push_back({t.mono * shift, t.coeff});
		}
		return from_terms(std::move(out));
	}

	/// Replaces the assigned symbols by their values and keeps the rest.
	Polynomial substitute(std::vector<std::optional<Rational>> const &values) const
	{
		std::vector<Term> out;
		for (auto const &t : terms_)
		{
			Term r{t.mono, t.coeff};
			for (std::size_t i = 0; i < values.size() && i < max_symbols; ++i)
			{
				unsigned e = r.mono.exps[i];
				if (!e || !values[i])
					continue;
				Rational p;
				mpz_pow_ui(p.get_num_mpz_t(), values[i]->get_num_mpz_t(), e);
				mpz_pow_ui(p.get_den_mpz_t(), values[i]->get_den_mpz_t(), e);
				r.coeff *= p;
				r.mono.exps[i] = 0;
				r.mono.degree = static_cast<std::uint16_t>(r.mono.degree - e);
			}
			if (r.coeff != 0)
				out.push_back(std::move(r));
		}
		return from_terms(std::move(out));
	}

	/// Evaluates at values indexed by symbol index; throws if a needed
	/// symbol is unassigned.
	Rational evaluate(std::vector<std::optional<Rational>> const &values) const
	{
		Rational sum = 0;
		for (auto const &t : terms_)
		{
			Rational v = t.coeff;
			for (std::size_t i = 0; i < max_symbols; ++i)
			{
				if (!t.mono.exps[i])
					continue;
				if (i >= values.size() || !values[i])
					throw std::invalid_argument(
					    "no value assigned to '" +
					    SymbolTable::instance().info(i).name + "'");
				Rational p;
				mpz_pow_ui(p.get_num_mpz_t(), values[i]->get_num_mpz_t(),
				           t.mono.exps[i]);
				mpz_pow_ui(p.get_den_mpz_t(), values[i]->get_den_mpz_t(),
				           t.mono.exps[i]);
				v *= p;
			}
			sum += v;
		}
		return sum;
	}

	std::string to_string() const
	{
		if (terms_.empty())
			return "0";
		std::ostringstream os;
		bool first = true;
		for (auto const &t : terms_)
		{
			Rational c = t.coeff;
			bool negative = c < 0;
			if (negative)
				c = -c;
			if (first)
				os << (negative ? "-" : "");
			else
				os << (negative ? " - " : " + ");
			first = false;
			std::string mono = monomial_string(t.mono);
			if (mono.empty())
				os << c.get_str();
			else if (c == 1)
				os << mono;
			else
				os << c.get_str() << "*" << mono;
		}
		return os.str();
	}

	static std::string monomial_string(Monomial const &m)
	{
		std::string out;
		for (std::size_t i = 0; i < max_symbols; ++i)
		{
			if (!m.exps[i])
				continue;
			if (!out.empty())
				out += "*";
			out += SymbolTable::instance().info(i).name;
			if (m.exps[i] > 1)
				out += "^" + std::to_string(m.exps[i]);
		}
		return out;
	}

  private:
	static Polynomial merge(Polynomial const &a, Polynomial const &b, bool subtract)
	{
		Polynomial r;
		r.terms_.reserve(a.terms_.size() + b.terms_.size());
		std::size_t i = 0, j = 0;
		while (i < a.terms_.size() || j < b.terms_.size())
		{
			if (j == b.terms_.size() ||
			    (i < a.terms_.size() && a.terms_[i].mono > b.terms_[j].mono))
				r.terms_.push_back(a.terms_[i++]);
			else if (i == a.terms_.size() || a.terms_[i].mono < b.terms_[j].mono)
			{
				r.terms_.push_back(b.terms_[j++]);
				if (subtract)
					r.terms_.back().coeff = -r.terms_.back().coeff;
			}
			else
			{
				Rational c = a.terms_[i].coeff;
				if (subtract)
					c -= b.terms_[j].coeff;
				else
					c += b.terms_[j].coeff;
				if (c != 0)
					r.terms_.push_back({a.terms_[i].mono, std::move(c)});
				++i;
				++j;
			}
		}
		return r;
	}

	std::vector<Term> terms_;
};

namespace detail {

inline int lowest_variable(std::uint32_t mask)
{
	for (int i = 0; i < int(max_symbols); ++i)
		if (mask & (1u << i))
			return i;
	return -1;
}

inline void trim(std::vector<Polynomial> &p)
{
	while (!p.empty() && p.back().is_zero())
		p.pop_back();
}

// Pseudo-remainder of a by b as univariate polynomials in the main
// variable; coefficient vectors are indexed by power.
inline std::vector<Polynomial> pseudo_remainder(std::vector<Polynomial> a,
                                                std::vector<Polynomial> const &b)
{
	std::size_t n = b.size() - 1;
	Polynomial const &lb = b.back();
	// exactly lc(b)^(deg a - deg b + 1) times a, as subresultant PRS requires
	std::size_t steps = a.size() >= b.size() ? a.size() - b.size() + 1 : 0;
	while (!a.empty() && a.size() - 1 >= n)
	{
		std::size_t k = a.size() - 1;
		Polynomial lr = a.back();
		for (auto &c : a)
			c *= lb;
		for (std::size_t j = 0; j <= n; ++j)
			a[j + k - n] -= lr * b[j];
		trim(a);
		--steps;
	}
	if (steps && !a.empty())
	{
		Polynomial scale = lb.pow(unsigned(steps));
		for (auto &c : a)
			c *= scale;
	}
	return a;
}

} // namespace detail

Polynomial gcd(Polynomial const &a, Polynomial const &b);

namespace detail {

inline Polynomial content_in(std::vector<Polynomial> const &coeffs)
{
	Polynomial g;
	for (auto const &c : coeffs)
	{
		g = gcd(g, c);
		if (g.is_constant() && !g.is_zero())
			return Polynomial(1);
	}
	return g;
}

inline std::vector<Polynomial> primitive_part(std::vector<Polynomial> coeffs)
{
	Polynomial c = content_in(coeffs);
	if (!c.is_constant())
		for (auto &x : coeffs)
			x = divide_exact(x, c);
	return coeffs;
}

} // namespace detail

namespace detail {

// Univariate images modulo a prime give exact upper bounds on the degree of
// a gcd in one variable: if g divides a and b, g(x, r) divides both images,
// and deg g(x, r) = deg_x g whenever the leading coefficient of a (or b)
// survives the evaluation.
inline constexpr std::uint64_t image_prime = 2305843009213693951ull; // 2^61 - 1

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b)
{
	return static_cast<std::uint64_t>((unsigned __int128)a * b % image_prime);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e)
{
	std::uint64_t r = 1;
	for (; e; e >>= 1, a = mul_mod(a, a))
		if (e & 1)
			r = mul_mod(r, a);
	return r;
}

inline std::optional<std::uint64_t> reduce_mod(Rational const &q)
{
	std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), image_prime);
	if (d == 0)
		return std::nullopt;
	std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), image_prime);
	return mul_mod(n, pow_mod(d, image_prime - 2));
}

using ImagePoint = std::array<std::uint64_t, max_symbols>;

inline std::optional<std::vector<std::uint64_t>> image_in(Polynomial const &a, std::size_t v,
                                                          ImagePoint const &pt)
{
	std::vector<std::uint64_t> out(a.degree_in(v) + 1, 0);
	for (auto const &t : a.terms())
	{
		auto c = reduce_mod(t.coeff);
		if (!c)
			return std::nullopt;
		std::uint64_t x = *c;
		for (std::size_t i = 0; i < max_symbols; ++i)
			if (i != v && t.mono[i])
				x = mul_mod(x, pow_mod(pt[i], t.mono[i]));
		auto &slot = out[t.mono[v]];
		slot = (slot + x) % image_prime;
	}
	return out;
}

inline void trim_mod(std::vector<std::uint64_t> &p)
{
	while (!p.empty() && p.back() == 0)
		p.pop_back();
}

inline std::size_t gcd_degree_mod(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b)
{
	trim_mod(a);
	trim_mod(b);
	while (!b.empty())
	{
		if (a.size() < b.size())
		{
			std::swap(a, b);
			continue;
		}
		std::uint64_t inv = pow_mod(b.back(), image_prime - 2);
		while (a.size() >= b.size())
		{
			std::uint64_t q = mul_mod(a.back(), inv);
			std::size_t shift = a.size() - b.size();
			for (std::size_t j = 0; j < b.size(); ++j)
				a[j + shift] = (a[j + shift] + image_prime - mul_mod(q, b[j])) % image_prime;
			trim_mod(a);
			if (a.empty())
				break;
		}
		std::swap(a, b);
	}
	return a.empty() ? 0 : a.size() - 1;
}

/// Upper bound on deg_v gcd(a, b), or nullopt if no usable point was found.
inline std::optional<std::size_t> gcd_degree_bound(Polynomial const &a, Polynomial const &b,
                                                   std::size_t v)
{
	std::uint64_t state = 0x9e3779b97f4a7c15ull * (v + 1);
	for (int attempt = 0; attempt < 3; ++attempt)
	{
		ImagePoint pt{};
		for (auto &x : pt)
		{
			// splitmix64
			std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
			z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
			z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
			x = (z ^ (z >> 31)) % image_prime;
		}
		auto ia = image_in(a, v, pt), ib = image_in(b, v, pt);
		if (!ia || !ib)
			return std::nullopt;
		if (ia->back() == 0 && ib->back() == 0)
			continue;
		return gcd_degree_mod(std::move(*ia), std::move(*ib));
	}
	return std::nullopt;
}

} // namespace detail

/// Greatest common divisor in Q[x1..xn], normalized to integer
/// coefficients with gcd 1 and positive leading coefficient. gcd(0,0) = 0.
inline Polynomial gcd(Polynomial const &a, Polynomial const &b)
{
	if (a.is_zero())
		return b.primitive();
	if (b.is_zero())
		return a.primitive();
	if (a.is_constant() || b.is_constant())
		return Polynomial(1);
	if (a.size() <= b.size())
	{
		if (auto q = try_divide(b, a))
			return a.primitive();
	}
	else if (auto q = try_divide(a, b))
		return b.primitive();

	std::uint32_t va = a.variables(), vb = b.variables();
	if (std::uint32_t only = va ^ vb)
	{
		int v = detail::lowest_variable(only);
		if (!(vb & (1u << v)))
			return gcd(detail::content_in(a.coefficients_in(v)), b);
		return gcd(a, detail::content_in(b.coefficients_in(v)));
	}

	// Same variables in both. Variables the gcd provably does not involve
	// reduce the problem to contents; otherwise pivot on the variable of
	// least degree.
	int v = -1;
	unsigned best = ~0u;
	bool all_free = true;
	int free_var = -1;
	for (std::size_t i = 0; i < max_symbols; ++i)
	{
		if (!(va & (1u << i)))
			continue;
		auto bound = detail::gcd_degree_bound(a, b, i);
		if (bound && *bound == 0)
		{
			if (free_var < 0)
				free_var = int(i);
		}
		else
			all_free = false;
		unsigned d = std::max(a.degree_in(i), b.degree_in(i));
		if (d < best)
		{
			best = d;
			v = int(i);
		}
	}
	if (all_free)
		return Polynomial(1);
	if (free_var >= 0)
		return gcd(detail::content_in(a.coefficients_in(free_var)),
		           detail::content_in(b.coefficients_in(free_var)));

	auto ca = a.coefficients_in(v), cb = b.coefficients_in(v);
	Polynomial content = gcd(detail::content_in(ca), detail::content_in(cb));
	ca = detail::primitive_part(std::move(ca));
	cb = detail::primitive_part(std::move(cb));
	if (ca.size() < cb.size())
		std::swap(ca, cb);
	// subresultant PRS
	Polynomial g(1), h(1);
	for (;;)
	{
		std::size_t delta = ca.size() - cb.size();
		auto r = detail::pseudo_remainder(ca, cb);
		if (r.empty())
			break;
		if (r.size() == 1)
		{
			cb = {Polynomial(1)};
			break;
		}
		Polynomial beta = g * h.pow(unsigned(delta));
		for (auto &c : r)
			c = divide_exact(c, beta);
		ca = std::move(cb);
		cb = std::move(r);
		g = ca.back();
		if (delta > 0)
			h = divide_exact(g.pow(unsigned(delta)), h.pow(unsigned(delta - 1)));
	}
	cb = detail::primitive_part(std::move(cb));
	return (content * Polynomial::from_coefficients(cb, v)).primitive();
}

} // namespace clsas
