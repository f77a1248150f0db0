#pragma once

#include "clsas/verifier.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace clsas {

/// Elements of A (x) C[t, 1/t] in the basis x_{a,i} = L_a (x) t^{i+1}; only
/// BasisKind::Aff symbols occur.
using AffElement = Element;

inline AffElement aff(GroupElement a, std::int64_t i)
{
	return AffElement(BasisSymbol::aff(std::move(a), i));
}

namespace detail {

inline void require_affinizable(StructureSpec const &spec)
{
	if (has_central(spec))
		throw PreconditionError("affinization of a structure with a central element is not "
		                        "supported");
}

/// [x_{a,i}, x_{b,j}] = (i+1)(L_a L_b)_{i+j} - (j+1)(L_b L_a)_{i+j}
template <class Product>
std::optional<AffElement> basis_affine_bracket(GroupElement const &a, std::int64_t i,
                                               GroupElement const &b, std::int64_t j,
                                               Product &&product)
{
	auto const &ab = product(a, b);
	if (!ab)
		return std::nullopt;
	auto const &ba = product(b, a);
	if (!ba)
		return std::nullopt;
	AffElement out;
	Scalar ci(Rational(i + 1)), cj(Rational(j + 1));
	for (auto const &[s, c] : ab->terms())
		out.add(BasisSymbol::aff(s.index, i + j), ci * c);
	for (auto const &[s, c] : ba->terms())
		out.add(BasisSymbol::aff(s.index, i + j), -(cj * c));
	return out;
}

template <class BasisBracket>
std::optional<AffElement> extend_affine(AffElement const &x, AffElement const &y,
                                        BasisBracket &&bracket)
{
	AffElement out;
	for (auto const &[bx, cx] : x.terms())
		for (auto const &[by, cy] : y.terms())
		{
			if (bx.kind != BasisKind::Aff || by.kind != BasisKind::Aff)
				throw TagMismatch("affine bracket expects generators x_{a,i}");
			auto p = bracket(bx.index, bx.degree, by.index, by.degree);
			if (!p)
				return std::nullopt;
			out += (cx * cy) * *p;
		}
	return out;
}

} // namespace detail

/// Balinskii-Novikov bracket on the affinization, extended bilinearly.
/// Returns nullopt when a custom table lacks a needed entry.
inline std::optional<AffElement> try_affine_bracket(StructureSpec const &spec,
                                                    AffElement const &x, AffElement const &y)
{
	detail::require_affinizable(spec);
	auto product = [&](GroupElement const &a, GroupElement const &b) {
		return try_witt_product(spec, a, b);
	};
	return detail::extend_affine(x, y,
	                             [&](GroupElement const &a, std::int64_t i, GroupElement const &b,
	                                 std::int64_t j) {
		                             return detail::basis_affine_bracket(a, i, b, j, product);
	                             });
}

inline AffElement affine_bracket(StructureSpec const &spec, AffElement const &x,
                                 AffElement const &y)
{
	auto r = try_affine_bracket(spec, x, y);
	if (!r)
		throw OutsideTable("bracket needs entries outside the custom table");
	return *std::move(r);
}

namespace detail {

using AffPoint = std::pair<GroupElement, std::int64_t>;

class AffBracketCache
{
  public:
	explicit AffBracketCache(StructureSpec const &spec) : products_(spec) {}

	std::optional<AffElement> const &basis(GroupElement const &a, std::int64_t i,
	                                       GroupElement const &b, std::int64_t j)
	{
		auto key = std::make_tuple(a, i, b, j);
		auto it = memo_.find(key);
		if (it == memo_.end())
			it = memo_
			         .emplace(key, basis_affine_bracket(a, i, b, j,
			                                            [&](GroupElement const &x,
			                                                GroupElement const &y) {
				                                            return products_.witt(x, y);
			                                            }))
			         .first;
		return it->second;
	}

	std::optional<AffElement> bracket(AffElement const &x, AffElement const &y)
	{
		return extend_affine(x, y,
		                     [&](GroupElement const &a, std::int64_t i, GroupElement const &b,
		                         std::int64_t j) { return basis(a, i, b, j); });
	}

  private:
	ProductCache products_;
	std::map<std::tuple<GroupElement, std::int64_t, GroupElement, std::int64_t>,
	         std::optional<AffElement>>
	    memo_;
};

inline std::vector<AffPoint> aff_points(std::size_t rank, std::int64_t group_radius,
                                        std::int64_t t_radius)
{
	std::vector<AffPoint> out;
	for (auto const &a : window(rank, group_radius))
		for (std::int64_t i = -t_radius; i <= t_radius; ++i)
			out.emplace_back(a, i);
	return out;
}

inline std::vector<std::vector<std::int64_t>> aff_inputs(
    std::initializer_list<AffPoint const *> points)
{
	std::vector<std::vector<std::int64_t>> v;
	for (auto const *p : points)
	{
		v.push_back(p->first.coords());
		v.push_back({p->second});
	}
	return v;
}

} // namespace detail

/**
 * Antisymmetry on basis pairs ("antisymmetry") and the Jacobi identity
 * [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on basis triples ("jacobi") of the
 * affinization, with group indices in the window and t-degrees in
 * [-t_radius, t_radius]. Counterexample inputs list each generator as its
 * group coordinates followed by its t-degree.
 */
inline std::vector<Report> check_jacobi(StructureSpec const &spec, std::int64_t group_radius,
                                        std::int64_t t_radius, unsigned workers = 1)
{
	if (group_radius < 1 || t_radius < 1)
		throw std::invalid_argument("check_jacobi needs group and t radii >= 1");
	detail::require_affinizable(spec);
	auto points = detail::aff_points(spec.rank, group_radius, t_radius);
	std::string t_window = "t-degrees in [" + std::to_string(-t_radius) + ", " +
	                       std::to_string(t_radius) + "]";

	Report anti;
	if (auto bad = detail::begin_report(anti, spec, "antisymmetry", group_radius))
		anti = *bad;
	else
	{
		anti.assumptions.push_back(t_window);
		detail::run_cases(
		    anti, points, 2, workers, [&] { return detail::AffBracketCache(spec); },
		    [](detail::AffBracketCache &cache, auto const &args) {
			    auto const &x = *args[0], &y = *args[1];
			    auto const &xy = cache.basis(x.first, x.second, y.first, y.second);
			    auto const &yx = cache.basis(y.first, y.second, x.first, x.second);
			    if (!xy || !yx)
				    return detail::CaseResult::skip();
			    if (*xy == -*yx)
				    return detail::CaseResult::pass();
			    return detail::CaseResult::fail({detail::aff_inputs({&x, &y}),
			                                     xy->to_combination(),
			                                     (-*yx).to_combination(), {}});
		    });
	}

	Report jac;
	if (auto bad = detail::begin_report(jac, spec, "jacobi", group_radius))
		jac = *bad;
	else
	{
		jac.assumptions.push_back(t_window);
		detail::run_cases(
		    jac, points, 3, workers, [&] { return detail::AffBracketCache(spec); },
		    [](detail::AffBracketCache &cache, auto const &args) {
			    auto const &x = *args[0], &y = *args[1], &z = *args[2];
			    AffElement ex = aff(x.first, x.second), ey = aff(y.first, y.second),
			               ez = aff(z.first, z.second);
			    auto const &xy = cache.basis(x.first, x.second, y.first, y.second);
			    auto const &yz = cache.basis(y.first, y.second, z.first, z.second);
			    auto const &zx = cache.basis(z.first, z.second, x.first, x.second);
			    if (!xy || !yz || !zx)
				    return detail::CaseResult::skip();
			    auto t1 = cache.bracket(*xy, ez), t2 = cache.bracket(*yz, ex),
			         t3 = cache.bracket(*zx, ey);
			    if (!t1 || !t2 || !t3)
				    return detail::CaseResult::skip();
			    AffElement sum = *t1 + *t2 + *t3;
			    if (sum.is_zero())
				    return detail::CaseResult::pass();
			    return detail::CaseResult::fail({detail::aff_inputs({&x, &y, &z}),
			                                     sum.to_combination(), Combination{}, {}});
		    });
	}
	return {std::move(anti), std::move(jac)};
}

/// [{"a": [..], "i": n, "coeff": "..."}, ...] in basis order.
inline nlohmann::ordered_json aff_to_json(AffElement const &x)
{
	auto j = nlohmann::ordered_json::array();
	for (auto const &[s, c] : x.terms())
	{
		if (s.kind != BasisKind::Aff)
			throw TagMismatch("not an affinization element");
		nlohmann::ordered_json e;
		e["a"] = s.index.coords();
		e["i"] = s.degree;
		e["coeff"] = c.to_string();
		j.push_back(std::move(e));
	}
	return j;
}

} // namespace clsas
