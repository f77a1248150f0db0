#pragma once

// Random generators for property tests.

#include "clsas/group.hpp"
#include "clsas/scalar.hpp"

#include <random>
#include <set>
#include <vector>

namespace clsas::testing {

class Gen
{
  public:
	explicit Gen(std::uint64_t seed) : rng_(seed) {}

	long integer(long lo, long hi)
	{
		return std::uniform_int_distribution<long>(lo, hi)(rng_);
	}

	Rational rational()
	{
		Rational q(integer(-6, 6), integer(1, 4));
		q.canonicalize();
		return q;
	}

	Polynomial polynomial(std::vector<Indeterminate> const &vars, int max_terms = 3,
	                      int max_deg = 2)
	{
		std::vector<Term> terms;
		int n = int(integer(0, max_terms));
		for (int i = 0; i < n; ++i)
		{
			Monomial m;
			for (auto x : vars)
				if (integer(0, 2) == 0)
					m = m * Monomial::variable(x.index(), unsigned(integer(1, max_deg)));
			terms.push_back({m, rational()});
		}
		return Polynomial::from_terms(std::move(terms));
	}

	Scalar scalar(std::vector<Indeterminate> const &vars)
	{
		Polynomial d;
		while (d.is_zero())
			d = polynomial(vars, 2, 1);
		return Scalar(polynomial(vars), d);
	}

	Scalar nonzero_scalar(std::vector<Indeterminate> const &vars)
	{
		Scalar s;
		while (s.is_zero())
			s = scalar(vars);
		return s;
	}

	GroupElement group_element(std::size_t rank, long radius)
	{
		std::vector<std::int64_t> c(rank);
		for (auto &x : c)
			x = integer(-radius, radius);
		return GroupElement(c);
	}

	std::mt19937_64 &engine() { return rng_; }

  private:
	std::mt19937_64 rng_;
};

} // namespace clsas::testing

namespace clsas::testing {

/// e1, e2 followed by the standard parameters, declared once per process.
inline std::vector<Indeterminate> const &session()
{
	static auto s = declare_session(2);
	return s;
}


} // namespace clsas::testing
