#pragma once

#include "clsas/scalar.hpp"

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clsas {

class RankMismatch : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

/// Element of the free abelian grading group Z^rank, in coordinates with
/// respect to the basis e1..e{rank}.
class GroupElement
{
  public:
	GroupElement() = default;
	explicit GroupElement(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
	GroupElement(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

	static GroupElement zero(std::size_t rank)
	{
		return GroupElement(std::vector<std::int64_t>(rank, 0));
	}
	static GroupElement basis(std::size_t rank, std::size_t k)
	{
		auto g = zero(rank);
		g.coords_.at(k) = 1;
		return g;
	}

	std::size_t rank() const { return coords_.size(); }
	std::vector<std::int64_t> const &coords() const { return coords_; }
	std::int64_t operator[](std::size_t i) const { return coords_[i]; }

	bool is_zero() const
	{
		for (auto c : coords_)
			if (c)
				return false;
		return true;
	}

	/// Largest absolute coordinate.
	std::int64_t norm() const
	{
		std::int64_t m = 0;
		for (auto c : coords_)
			m = std::max(m, c < 0 ? -c : c);
		return m;
	}

	friend GroupElement operator+(GroupElement const &a, GroupElement const &b)
	{
		check_rank(a, b);
		GroupElement r = a;
		for (std::size_t i = 0; i < a.rank(); ++i)
			r.coords_[i] += b.coords_[i];
		return r;
	}

	GroupElement operator-() const
	{
		GroupElement r = *this;
		for (auto &c : r.coords_)
			c = -c;
		return r;
	}

	friend GroupElement operator-(GroupElement const &a, GroupElement const &b)
	{
		return a + (-b);
	}

	friend bool operator==(GroupElement const &a, GroupElement const &b)
	{
		check_rank(a, b);
		return a.coords_ == b.coords_;
	}

	friend std::strong_ordering operator<=>(GroupElement const &a,
	                                        GroupElement const &b)
	{
		check_rank(a, b);
		return a.coords_ <=> b.coords_;
	}

	/// "(1,-2)" style.
	std::string to_string() const
	{
		std::string s = "(";
		for (std::size_t i = 0; i < coords_.size(); ++i)
			s += (i ? "," : "") + std::to_string(coords_[i]);
		return s + ")";
	}

	static void check_rank(GroupElement const &a, GroupElement const &b)
	{
		if (a.rank() != b.rank())
			throw RankMismatch("group elements of rank " + std::to_string(a.rank()) +
			                   " and " + std::to_string(b.rank()));
	}

  private:
	std::vector<std::int64_t> coords_;
};

/// (n1..nv) -> n1*e1 + ... + nv*ev.
inline Scalar embed(GroupElement const &g)
{
	std::vector<Term> terms;
	for (std::size_t i = 0; i < g.rank(); ++i)
		if (g[i])
			terms.push_back(
			    {Monomial::variable(Indeterminate::grading(i + 1).index()),
			     Rational(static_cast<long>(g[i]))});
	return Scalar(Polynomial::from_terms(std::move(terms)));
}

/// Inverse of embed on its image: the unique g with embed(g) = s, if s is
/// an integer combination of e1..e{rank}.
inline std::optional<GroupElement> is_in_group(Scalar const &s, std::size_t rank)
{
	if (!s.is_polynomial() || s.denominator().constant_value() != 1)
		return std::nullopt;
	std::vector<std::int64_t> coords(rank, 0);
	for (auto const &t : s.numerator().terms())
	{
		if (t.mono.degree != 1 || t.coeff.get_den() != 1 ||
		    !t.coeff.get_num().fits_slong_p())
			return std::nullopt;
		std::size_t var = 0;
		while (!t.mono.exps[var])
			++var;
		auto info = SymbolTable::instance().info(var);
		if (!info.grading)
			return std::nullopt;
		std::size_t k = std::stoul(info.name.substr(1));
		if (k == 0 || k > rank)
			return std::nullopt;
		coords[k - 1] = t.coeff.get_num().get_si();
	}
	// the zero scalar is the identity, a constant is not a lattice point
	return GroupElement(std::move(coords));
}

/// All elements with every coordinate in [-radius, radius], sorted
/// lexicographically.
inline std::vector<GroupElement> window(std::size_t rank, std::int64_t radius)
{
	if (radius < 0)
		throw std::invalid_argument("negative window radius");
	std::vector<GroupElement> out;
	std::vector<std::int64_t> c(rank, -radius);
	for (;;)
	{
		out.emplace_back(c);
		std::size_t i = rank;
		while (i > 0)
		{
			--i;
			if (c[i] < radius)
			{
				++c[i];
				break;
			}
			c[i] = -radius;
			if (i == 0)
				return out;
		}
		if (rank == 0)
			return out;
	}
}

inline bool in_window(GroupElement const &g, std::int64_t radius)
{
	return g.norm() <= radius;
}

/// Text label used in element renderings: "0", "e1", "(e1 + 2*e2)".
inline std::string index_label(GroupElement const &g)
{
	Scalar s = embed(g);
	if (s.numerator().size() > 1)
		return "(" + s.to_string() + ")";
	return s.to_string();
}

} // namespace clsas
