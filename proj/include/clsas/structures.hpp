#pragma once

#include "clsas/group.hpp"
#include "clsas/report.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace clsas {

/// L_b L_c = (alpha + c + alpha*theta*b)(1 + theta*c) / (1 + theta*(b+c)) L_{b+c}
struct VAlphaTheta
{
	Scalar alpha;
	Scalar theta;
};

/// L_b L_c = (lambda + c) L_{b+c} off the line lambda+b+c = 0, and
/// (lambda + c)(gamma - lambda - c)/(gamma - lambda) L_{-lambda} on it.
struct VGammaLambda
{
	Scalar gamma;
	GroupElement lambda;
};

/// L_a L_b = (alpha + b) L_{a+b} + mu L_{a+b+zeta}
struct WAlphaMuZeta
{
	Scalar alpha;
	Scalar mu;
	GroupElement zeta;
};

/// Central extension of V_{0,theta} with sub-adjacent Lie algebra the
/// Virasoro algebra.
struct VirTheta
{
	Scalar theta;
};

using PairKey = std::pair<GroupElement, GroupElement>;
using PairTable = std::map<PairKey, Scalar>;

/// Structure constants given entry by entry on a finite set of pairs.
struct CustomTable
{
	PairTable f;
	std::optional<PairTable> g;
	std::optional<GroupElement> zeta;
	std::optional<PairTable> phi;
};

using Family = std::variant<VAlphaTheta, VGammaLambda, WAlphaMuZeta, VirTheta, CustomTable>;

struct StructureSpec
{
	std::size_t rank = 0;
	Family family;
};

class TagMismatch : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

/// A product needed an entry outside a custom table's domain.
class OutsideTable : public std::out_of_range
{
  public:
	using std::out_of_range::out_of_range;
};

inline StructureSpec v_alpha_theta(std::size_t rank, Scalar alpha, Scalar theta)
{
	return {rank, VAlphaTheta{std::move(alpha), std::move(theta)}};
}
inline StructureSpec v_gamma_lambda(Scalar gamma, GroupElement lambda)
{
	std::size_t rank = lambda.rank();
	return {rank, VGammaLambda{std::move(gamma), std::move(lambda)}};
}
inline StructureSpec w_alpha_mu_zeta(Scalar alpha, Scalar mu, GroupElement zeta)
{
	std::size_t rank = zeta.rank();
	return {rank, WAlphaMuZeta{std::move(alpha), std::move(mu), std::move(zeta)}};
}
inline StructureSpec vir_theta(std::size_t rank, Scalar theta)
{
	return {rank, VirTheta{std::move(theta)}};
}

/// Pair keys of serialized tables: "1,0|0,-1".
inline std::string coords_string(GroupElement const &g)
{
	std::string s;
	for (std::size_t i = 0; i < g.rank(); ++i)
		s += (i ? "," : "") + std::to_string(g[i]);
	return s;
}

inline std::string pair_key_string(PairKey const &k)
{
	return coords_string(k.first) + "|" + coords_string(k.second);
}

/// Family key as used in spec files.
inline std::string family_name(StructureSpec const &spec)
{
	static char const *const names[] = {"V_alpha_theta", "V_gamma_lambda",
	                                    "W_alpha_mu_zeta", "Vir_theta", "custom"};
	return names[spec.family.index()];
}

inline std::string describe(StructureSpec const &spec)
{
	return std::visit(
	    [](auto const &s) -> std::string {
		    using T = std::decay_t<decltype(s)>;
		    if constexpr (std::is_same_v<T, VAlphaTheta>)
			    return "V_{alpha,theta}(alpha=" + s.alpha.to_string() +
			           ", theta=" + s.theta.to_string() + ")";
		    else if constexpr (std::is_same_v<T, VGammaLambda>)
			    return "V^{gamma,lambda}(gamma=" + s.gamma.to_string() +
			           ", lambda=" + s.lambda.to_string() + ")";
		    else if constexpr (std::is_same_v<T, WAlphaMuZeta>)
			    return "W(alpha=" + s.alpha.to_string() + ", mu=" + s.mu.to_string() +
			           ", zeta=" + s.zeta.to_string() + ")";
		    else if constexpr (std::is_same_v<T, VirTheta>)
			    return "Vir_theta(theta=" + s.theta.to_string() + ")";
		    else
			    return "custom table (" + std::to_string(s.f.size()) + " entries)";
	    },
	    spec.family);
}

inline bool operator==(VAlphaTheta const &a, VAlphaTheta const &b)
{
	return a.alpha == b.alpha && a.theta == b.theta;
}
inline bool operator==(VGammaLambda const &a, VGammaLambda const &b)
{
	return a.gamma == b.gamma && a.lambda == b.lambda;
}
inline bool operator==(WAlphaMuZeta const &a, WAlphaMuZeta const &b)
{
	return a.alpha == b.alpha && a.mu == b.mu && a.zeta == b.zeta;
}
inline bool operator==(VirTheta const &a, VirTheta const &b) { return a.theta == b.theta; }
inline bool operator==(CustomTable const &a, CustomTable const &b)
{
	return a.f == b.f && a.g == b.g && a.zeta == b.zeta && a.phi == b.phi;
}
inline bool operator==(StructureSpec const &a, StructureSpec const &b)
{
	return a.rank == b.rank && a.family == b.family;
}

/// Whether the product has a g-component (an L_{a+b+zeta} term).
inline bool has_shift(StructureSpec const &spec)
{
	if (std::holds_alternative<WAlphaMuZeta>(spec.family))
		return true;
	if (auto const *t = std::get_if<CustomTable>(&spec.family))
		return t->g.has_value();
	return false;
}

/// Whether the algebra carries a central element K.
inline bool has_central(StructureSpec const &spec)
{
	if (std::holds_alternative<VirTheta>(spec.family))
		return true;
	if (auto const *t = std::get_if<CustomTable>(&spec.family))
		return t->phi.has_value();
	return false;
}

inline std::optional<GroupElement> zeta_of(StructureSpec const &spec)
{
	if (auto const *w = std::get_if<WAlphaMuZeta>(&spec.family))
		return w->zeta;
	if (auto const *t = std::get_if<CustomTable>(&spec.family))
		return t->zeta;
	return std::nullopt;
}

namespace detail {

inline void require_rank(StructureSpec const &spec, GroupElement const &a)
{
	if (a.rank() != spec.rank)
		throw RankMismatch("group element " + a.to_string() + " does not have rank " +
		                   std::to_string(spec.rank));
}

inline Scalar v_alpha_theta_f(Scalar const &alpha, Scalar const &theta,
                              GroupElement const &b, GroupElement const &c)
{
	Scalar B = embed(b), C = embed(c);
	return (alpha + C + alpha * theta * B) * (Scalar(1) + theta * C) /
	       (Scalar(1) + theta * (B + C));
}

inline std::optional<Scalar> lookup(PairTable const &t, GroupElement const &a,
                                    GroupElement const &b)
{
	auto it = t.find({a, b});
	if (it == t.end())
		return std::nullopt;
	return it->second;
}

} // namespace detail

/// Coefficient of L_{a+b} in L_a L_b, or nullopt outside a custom table.
inline std::optional<Scalar> try_f(StructureSpec const &spec, GroupElement const &a,
                                   GroupElement const &b)
{
	detail::require_rank(spec, a);
	detail::require_rank(spec, b);
	return std::visit(
	    [&](auto const &s) -> std::optional<Scalar> {
		    using T = std::decay_t<decltype(s)>;
		    if constexpr (std::is_same_v<T, VAlphaTheta>)
			    return detail::v_alpha_theta_f(s.alpha, s.theta, a, b);
		    else if constexpr (std::is_same_v<T, VirTheta>)
			    return detail::v_alpha_theta_f(Scalar(), s.theta, a, b);
		    else if constexpr (std::is_same_v<T, VGammaLambda>)
		    {
			    Scalar lc = embed(s.lambda + b);
			    if (!(s.lambda + a + b).is_zero())
				    return lc;
			    Scalar lam = embed(s.lambda);
			    return lc * (s.gamma - lc) / (s.gamma - lam);
		    }
		    else if constexpr (std::is_same_v<T, WAlphaMuZeta>)
			    return s.alpha + embed(b);
		    else
			    return detail::lookup(s.f, a, b);
	    },
	    spec.family);
}

/// Coefficient of L_{a+b+zeta} in L_a L_b; zero for graded families.
inline std::optional<Scalar> try_g(StructureSpec const &spec, GroupElement const &a,
                                   GroupElement const &b)
{
	if (auto const *w = std::get_if<WAlphaMuZeta>(&spec.family))
		return w->mu;
	if (auto const *t = std::get_if<CustomTable>(&spec.family); t && t->g)
		return detail::lookup(*t->g, a, b);
	return Scalar();
}

/// Coefficient of K in L_a L_b; zero without a central element.
inline std::optional<Scalar> try_phi(StructureSpec const &spec, GroupElement const &a,
                                     GroupElement const &b)
{
	if (auto const *v = std::get_if<VirTheta>(&spec.family))
	{
		if (!(a + b).is_zero())
			return Scalar();
		Scalar B = embed(b), B2 = B * B;
		return Scalar(Rational(1, 24)) *
		       (B2 * B - B - (v->theta - v->theta.inverse()) * B2);
	}
	if (auto const *t = std::get_if<CustomTable>(&spec.family); t && t->phi)
		return detail::lookup(*t->phi, a, b);
	return Scalar();
}

namespace detail {
inline Scalar required(std::optional<Scalar> s, GroupElement const &a,
                       GroupElement const &b)
{
	if (!s)
		throw OutsideTable("no table entry for " + a.to_string() + "|" + b.to_string());
	return *std::move(s);
}
} // namespace detail

inline Scalar f_of(StructureSpec const &spec, GroupElement const &a, GroupElement const &b)
{
	return detail::required(try_f(spec, a, b), a, b);
}
inline Scalar g_of(StructureSpec const &spec, GroupElement const &a, GroupElement const &b)
{
	return detail::required(try_g(spec, a, b), a, b);
}
inline Scalar phi_of(StructureSpec const &spec, GroupElement const &a, GroupElement const &b)
{
	return detail::required(try_phi(spec, a, b), a, b);
}

/// Checks the family's parameter constraints. Symbolic parameters pass with
/// the genericity assumption recorded.
inline Report validate_spec(StructureSpec const &spec)
{
	Report r;
	r.identity = "valid-spec";
	r.rank = spec.rank;
	auto fail = [&](std::string note) {
		Counterexample c;
		c.note = std::move(note);
		r.add_failure(std::move(c));
	};
	auto check_rank = [&](GroupElement const &g, char const *what) {
		++r.cases_checked;
		if (g.rank() != spec.rank)
			fail(std::string(what) + " has rank " + std::to_string(g.rank()));
	};
	// theta^-1 must not be a lattice point
	auto check_inverse = [&](Scalar const &theta) {
		++r.cases_checked;
		if (theta.is_zero())
			return;
		if (is_in_group(theta.inverse(), spec.rank))
			fail("theta^-1 in G");
		else if (theta.is_constant())
			r.assumptions.push_back("grading symbols are independent indeterminates "
			                        "=> constant theta^-1 not in G");
		else
			r.assumptions.push_back("theta generic => theta^-1 not in G");
	};
	std::visit(
	    [&](auto const &s) {
		    using T = std::decay_t<decltype(s)>;
		    if constexpr (std::is_same_v<T, VAlphaTheta>)
			    check_inverse(s.theta);
		    else if constexpr (std::is_same_v<T, VirTheta>)
		    {
			    ++r.cases_checked;
			    if (s.theta.is_zero())
				    fail("theta=0");
			    else
				    check_inverse(s.theta);
		    }
		    else if constexpr (std::is_same_v<T, VGammaLambda>)
		    {
			    check_rank(s.lambda, "lambda");
			    ++r.cases_checked;
			    if (r.passed)
			    {
				    if (s.gamma == embed(s.lambda))
					    fail("gamma=lambda");
				    else if (!is_in_group(s.gamma, spec.rank))
					    r.assumptions.push_back("gamma generic => gamma != lambda");
			    }
		    }
		    else if constexpr (std::is_same_v<T, WAlphaMuZeta>)
		    {
			    check_rank(s.zeta, "zeta");
			    ++r.cases_checked;
			    if (r.passed && s.zeta.is_zero())
				    fail("zeta=0");
		    }
		    else
		    {
			    for (auto const *table : {&s.f, s.g ? &*s.g : nullptr, s.phi ? &*s.phi : nullptr})
				    if (table)
					    for (auto const &[key, value] : *table)
					    {
						    check_rank(key.first, "table index");
						    check_rank(key.second, "table index");
					    }
			    ++r.cases_checked;
			    if (s.g && !s.zeta)
				    fail("g table without zeta");
			    else if (s.zeta)
			    {
				    check_rank(*s.zeta, "zeta");
				    if (r.passed && s.zeta->is_zero())
					    fail("zeta=0");
			    }
		    }
	    },
	    spec.family);
	return r;
}

enum class BasisKind
{
	Witt,
	Central,
	ModuleVec,
	Aff
};

/// L_a, K, v_a or x_{a,i}.
struct BasisSymbol
{
	BasisKind kind = BasisKind::Witt;
	GroupElement index;
	std::int64_t degree = 0;

	static BasisSymbol witt(GroupElement a) { return {BasisKind::Witt, std::move(a), 0}; }
	static BasisSymbol central() { return {BasisKind::Central, {}, 0}; }
	static BasisSymbol module_vec(GroupElement a)
	{
		return {BasisKind::ModuleVec, std::move(a), 0};
	}
	static BasisSymbol aff(GroupElement a, std::int64_t i)
	{
		return {BasisKind::Aff, std::move(a), i};
	}

	friend bool operator==(BasisSymbol const &a, BasisSymbol const &b)
	{
		return a.kind == b.kind && a.index.coords() == b.index.coords() &&
		       a.degree == b.degree;
	}
	friend std::strong_ordering operator<=>(BasisSymbol const &a, BasisSymbol const &b)
	{
		if (auto c = a.kind <=> b.kind; c != 0)
			return c;
		if (auto c = a.index.coords() <=> b.index.coords(); c != 0)
			return c;
		return a.degree <=> b.degree;
	}

	std::string label() const
	{
		switch (kind)
		{
		case BasisKind::Witt: return "L_" + index_label(index);
		case BasisKind::Central: return "K";
		case BasisKind::ModuleVec: return "v_" + index_label(index);
		case BasisKind::Aff:
			return "x_{" + embed(index).to_string() + "," + std::to_string(degree) + "}";
		}
		return "?";
	}
};

/// Finite formal linear combination of basis symbols with no zero
/// coefficients.
class Element
{
  public:
	Element() = default;
	Element(BasisSymbol b, Scalar c = Scalar(1)) { add(std::move(b), std::move(c)); }

	static Element witt(GroupElement a) { return Element(BasisSymbol::witt(std::move(a))); }
	static Element central() { return Element(BasisSymbol::central()); }

	std::map<BasisSymbol, Scalar> const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	Scalar coefficient(BasisSymbol const &b) const
	{
		auto it = terms_.find(b);
		return it == terms_.end() ? Scalar() : it->second;
	}

	void add(BasisSymbol b, Scalar c)
	{
		if (c.is_zero())
			return;
		auto [it, inserted] = terms_.try_emplace(std::move(b), c);
		if (!inserted)
		{
			it->second += c;
			if (it->second.is_zero())
				terms_.erase(it);
		}
	}

	Element &operator+=(Element const &o)
	{
		for (auto const &[b, c] : o.terms_)
			add(b, c);
		return *this;
	}
	Element &operator-=(Element const &o)
	{
		for (auto const &[b, c] : o.terms_)
			add(b, -c);
		return *this;
	}
	friend Element operator+(Element a, Element const &b) { return a += b; }
	friend Element operator-(Element a, Element const &b) { return a -= b; }
	friend Element operator*(Scalar const &s, Element const &x)
	{
		Element r;
		if (s.is_zero())
			return r;
		for (auto const &[b, c] : x.terms_)
			r.terms_.emplace(b, s * c);
		return r;
	}
	Element operator-() const { return Scalar(-1) * *this; }

	friend bool operator==(Element const &a, Element const &b) { return a.terms_ == b.terms_; }

	Combination to_combination() const
	{
		Combination c;
		for (auto const &[b, s] : terms_)
			c.terms.emplace_back(b.label(), s);
		return c;
	}
	std::string to_string() const { return to_combination().to_string(); }

  private:
	std::map<BasisSymbol, Scalar> terms_;
};

/// L_a L_b as an element, or nullopt if a needed custom-table entry is
/// missing.
inline std::optional<Element> try_witt_product(StructureSpec const &spec,
                                               GroupElement const &a,
                                               GroupElement const &b)
{
	auto f = try_f(spec, a, b);
	if (!f)
		return std::nullopt;
	Element out(BasisSymbol::witt(a + b), *f);
	if (has_shift(spec))
	{
		auto g = try_g(spec, a, b);
		if (!g)
			return std::nullopt;
		out.add(BasisSymbol::witt(a + b + *zeta_of(spec)), *g);
	}
	if (has_central(spec))
	{
		auto phi = try_phi(spec, a, b);
		if (!phi)
			return std::nullopt;
		out.add(BasisSymbol::central(), *phi);
	}
	return out;
}

/// Bilinear extension of a basis-level product rule. K annihilates
/// everything in families with a central element.
template <class BasisProduct>
std::optional<Element> extend_bilinear(StructureSpec const &spec, Element const &x,
                                       Element const &y, BasisProduct &&product)
{
	Element out;
	for (auto const &[bx, cx] : x.terms())
		for (auto const &[by, cy] : y.terms())
		{
			if (bx.kind == BasisKind::Central || by.kind == BasisKind::Central)
			{
				if (!has_central(spec))
					throw TagMismatch("central element in a structure without K");
				continue;
			}
			if (bx.kind != BasisKind::Witt || by.kind != BasisKind::Witt)
				throw TagMismatch("multiply expects Witt generators L_a");
			std::optional<Element> p = product(bx.index, by.index);
			if (!p)
				return std::nullopt;
			out += (cx * cy) * *p;
		}
	return out;
}

inline std::optional<Element> try_multiply(StructureSpec const &spec, Element const &x,
                                           Element const &y)
{
	return extend_bilinear(spec, x, y, [&](GroupElement const &a, GroupElement const &b) {
		return try_witt_product(spec, a, b);
	});
}

inline Element multiply(StructureSpec const &spec, Element const &x, Element const &y)
{
	auto p = try_multiply(spec, x, y);
	if (!p)
		throw OutsideTable("product needs entries outside the custom table");
	return *std::move(p);
}

/// [x, y] = xy - yx.
inline Element bracket(StructureSpec const &spec, Element const &x, Element const &y)
{
	return multiply(spec, x, y) - multiply(spec, y, x);
}

/// Structure constants of a spec on all pairs of a window, as a custom
/// table.
inline CustomTable table_of(StructureSpec const &spec, std::int64_t radius)
{
	CustomTable t;
	auto w = window(spec.rank, radius);
	bool shift = has_shift(spec), central = has_central(spec);
	if (shift)
	{
		t.g.emplace();
		t.zeta = zeta_of(spec);
	}
	if (central)
		t.phi.emplace();
	for (auto const &a : w)
		for (auto const &b : w)
		{
			t.f.emplace(PairKey{a, b}, f_of(spec, a, b));
			if (shift)
				t.g->emplace(PairKey{a, b}, g_of(spec, a, b));
			if (central)
				t.phi->emplace(PairKey{a, b}, phi_of(spec, a, b));
		}
	return t;
}

} // namespace clsas
