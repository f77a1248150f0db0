#pragma once

#include "clsas/structures.hpp"

#include <array>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace clsas {

class PreconditionError : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

namespace detail {

enum class Outcome
{
	pass,
	fail,
	skip
};

struct CaseResult
{
	Outcome outcome = Outcome::pass;
	Counterexample counterexample;

	static CaseResult pass() { return {}; }
	static CaseResult skip() { return {Outcome::skip, {}}; }
	static CaseResult fail(Counterexample c) { return {Outcome::fail, std::move(c)}; }
};

/**
 * Runs check over every arity-tuple of points, split into contiguous blocks
 * across workers. Each worker owns the state returned by make_state.
 * Counterexamples are sorted by input tuple after merging, so the report
 * does not depend on the partitioning.
 */
template <class Point, class MakeState, class Check>
void run_cases(Report &report, std::vector<Point> const &points, std::size_t arity,
               unsigned workers, MakeState make_state, Check check)
{
	std::uint64_t total = 1;
	for (std::size_t i = 0; i < arity; ++i)
		total *= points.size();
	workers = std::max(1u, workers);
	if (total < workers)
		workers = static_cast<unsigned>(std::max<std::uint64_t>(total, 1));

	struct Partial
	{
		std::uint64_t checked = 0, skipped = 0;
		std::vector<Counterexample> failures;
		std::exception_ptr error;
	};
	std::vector<Partial> partials(workers);

	auto work = [&](unsigned k) {
		Partial &out = partials[k];
		try
		{
			auto state = make_state();
			std::uint64_t begin = total * k / workers, end = total * (k + 1) / workers;
			std::array<Point const *, 3> args{};
			for (std::uint64_t n = begin; n < end; ++n)
			{
				std::uint64_t rest = n;
				for (std::size_t i = arity; i-- > 0;)
				{
					args[i] = &points[rest % points.size()];
					rest /= points.size();
				}
				CaseResult r = check(state, args);
				switch (r.outcome)
				{
				case Outcome::pass: ++out.checked; break;
				case Outcome::skip: ++out.skipped; break;
				case Outcome::fail:
					++out.checked;
					out.failures.push_back(std::move(r.counterexample));
					break;
				}
			}
		}
		catch (...)
		{
			out.error = std::current_exception();
		}
	};

	if (workers == 1)
		work(0);
	else
	{
		std::vector<std::thread> threads;
		for (unsigned k = 0; k < workers; ++k)
			threads.emplace_back(work, k);
		for (auto &t : threads)
			t.join();
	}
	for (auto &p : partials)
	{
		if (p.error)
			std::rethrow_exception(p.error);
		report.cases_checked += p.checked;
		report.skipped += p.skipped;
		for (auto &c : p.failures)
			report.add_failure(std::move(c));
	}
	report.sort_counterexamples();
}

/// Memoized basis products for one worker.
class ProductCache
{
  public:
	explicit ProductCache(StructureSpec const &spec) : spec_(&spec) {}

	std::optional<Element> const &witt(GroupElement const &a, GroupElement const &b)
	{
		auto it = memo_.find({a, b});
		if (it == memo_.end())
			it = memo_.emplace(PairKey{a, b}, try_witt_product(*spec_, a, b)).first;
		return it->second;
	}

	std::optional<Element> multiply(Element const &x, Element const &y)
	{
		return extend_bilinear(*spec_, x, y,
		                       [&](GroupElement const &a, GroupElement const &b) {
			                       return witt(a, b);
		                       });
	}

	/// (L_a L_b) L_c
	std::optional<Element> left_nested(GroupElement const &a, GroupElement const &b,
	                                   GroupElement const &c)
	{
		auto const &ab = witt(a, b);
		if (!ab)
			return std::nullopt;
		return multiply(*ab, Element::witt(c));
	}

	/// L_a (L_b L_c)
	std::optional<Element> right_nested(GroupElement const &a, GroupElement const &b,
	                                    GroupElement const &c)
	{
		auto const &bc = witt(b, c);
		if (!bc)
			return std::nullopt;
		return multiply(Element::witt(a), *bc);
	}

  private:
	StructureSpec const *spec_;
	std::map<PairKey, std::optional<Element>> memo_;
};

/// Memoized scalar function of a pair.
class PairMemo
{
  public:
	using Fn = std::function<std::optional<Scalar>(GroupElement const &, GroupElement const &)>;
	explicit PairMemo(Fn fn) : fn_(std::move(fn)) {}

	std::optional<Scalar> const &operator()(GroupElement const &a, GroupElement const &b)
	{
		auto it = memo_.find({a, b});
		if (it == memo_.end())
			it = memo_.emplace(PairKey{a, b}, fn_(a, b)).first;
		return it->second;
	}

  private:
	Fn fn_;
	std::map<PairKey, std::optional<Scalar>> memo_;
};

inline std::vector<std::vector<std::int64_t>> inputs_of(
    std::initializer_list<GroupElement const *> args)
{
	std::vector<std::vector<std::int64_t>> v;
	for (auto const *g : args)
		v.push_back(g->coords());
	return v;
}

/// Starts a report; an invalid spec yields a failed report with the
/// violated constraint and no window cases.
inline std::optional<Report> begin_report(Report &r, StructureSpec const &spec,
                                          std::string identity, std::int64_t radius)
{
	r.identity = std::move(identity);
	r.rank = spec.rank;
	r.radius = radius;
	Report v = validate_spec(spec);
	r.assumptions = v.assumptions;
	if (!v.passed)
	{
		for (auto c : v.counterexamples)
			r.add_failure(std::move(c));
		return r;
	}
	return std::nullopt;
}

inline Counterexample scalar_mismatch(std::vector<std::vector<std::int64_t>> inputs,
                                      Scalar lhs, Scalar rhs)
{
	return {std::move(inputs), Combination::scalar(std::move(lhs)),
	        Combination::scalar(std::move(rhs)), {}};
}

inline PairMemo f_memo(StructureSpec const &spec)
{
	return PairMemo([&spec](GroupElement const &a, GroupElement const &b) {
		return try_f(spec, a, b);
	});
}

inline PairMemo g_memo(StructureSpec const &spec)
{
	return PairMemo([&spec](GroupElement const &a, GroupElement const &b) {
		return try_g(spec, a, b);
	});
}

} // namespace detail

/// (xy)z - x(yz) = (yx)z - y(xz) on all basis triples of the window.
inline Report check_left_symmetric(StructureSpec const &spec, std::int64_t radius,
                                   unsigned workers = 1)
{
	Report r;
	if (auto bad = detail::begin_report(r, spec, "left-symmetric", radius))
		return *bad;
	auto w = window(spec.rank, radius);
	detail::run_cases(
	    r, w, 3, workers, [&] { return detail::ProductCache(spec); },
	    [](detail::ProductCache &cache, auto const &args) {
		    auto const &a = *args[0], &b = *args[1], &c = *args[2];
		    auto ab_c = cache.left_nested(a, b, c), a_bc = cache.right_nested(a, b, c);
		    auto ba_c = cache.left_nested(b, a, c), b_ac = cache.right_nested(b, a, c);
		    if (!ab_c || !a_bc || !ba_c || !b_ac)
			    return detail::CaseResult::skip();
		    Element lhs = *ab_c - *a_bc, rhs = *ba_c - *b_ac;
		    if (lhs == rhs)
			    return detail::CaseResult::pass();
		    return detail::CaseResult::fail({detail::inputs_of({&a, &b, &c}),
		                                     lhs.to_combination(), rhs.to_combination(),
		                                     {}});
	    });
	return r;
}

/// (xy)z = (xz)y on all basis triples of the window.
inline Report check_novikov(StructureSpec const &spec, std::int64_t radius,
                            unsigned workers = 1)
{
	Report r;
	if (auto bad = detail::begin_report(r, spec, "novikov", radius))
		return *bad;
	auto w = window(spec.rank, radius);
	detail::run_cases(
	    r, w, 3, workers, [&] { return detail::ProductCache(spec); },
	    [](detail::ProductCache &cache, auto const &args) {
		    auto const &a = *args[0], &b = *args[1], &c = *args[2];
		    auto lhs = cache.left_nested(a, b, c), rhs = cache.left_nested(a, c, b);
		    if (!lhs || !rhs)
			    return detail::CaseResult::skip();
		    if (*lhs == *rhs)
			    return detail::CaseResult::pass();
		    return detail::CaseResult::fail({detail::inputs_of({&a, &b, &c}),
		                                     lhs->to_combination(),
		                                     rhs->to_combination(), {}});
	    });
	return r;
}

/// xy - yx equals the Witt bracket (b-a)L_{a+b}, plus the Virasoro term
/// (b^3-b)/12 delta_{a+b,0} K when the structure has a central element.
inline Report check_sub_adjacent(StructureSpec const &spec, std::int64_t radius,
                                 unsigned workers = 1)
{
	Report r;
	if (auto bad = detail::begin_report(r, spec, "sub-adjacent", radius))
		return *bad;
	auto w = window(spec.rank, radius);
	bool central = has_central(spec);
	detail::run_cases(
	    r, w, 2, workers, [&] { return detail::ProductCache(spec); },
	    [central](detail::ProductCache &cache, auto const &args) {
		    auto const &a = *args[0], &b = *args[1];
		    auto const &ab = cache.witt(a, b);
		    auto const &ba = cache.witt(b, a);
		    if (!ab || !ba)
			    return detail::CaseResult::skip();
		    Element lhs = *ab - *ba;
		    Scalar B = embed(b);
		    Element rhs(BasisSymbol::witt(a + b), B - embed(a));
		    if (central && (a + b).is_zero())
			    rhs.add(BasisSymbol::central(), Scalar(Rational(1, 12)) * (B * B * B - B));
		    if (lhs == rhs)
			    return detail::CaseResult::pass();
		    return detail::CaseResult::fail({detail::inputs_of({&a, &b}),
		                                     lhs.to_combination(), rhs.to_combination(),
		                                     {}});
	    });
	return r;
}

namespace detail {

inline void require_graded(StructureSpec const &spec)
{
	if (has_shift(spec))
		throw PreconditionError("identity requires a graded structure (g = 0)");
}

inline Report skew_f_report(StructureSpec const &spec, std::int64_t radius, unsigned workers)
{
	Report r;
	if (auto bad = begin_report(r, spec, "skew-f", radius))
		return *bad;
	auto w = window(spec.rank, radius);
	run_cases(r, w, 2, workers, [&] { return f_memo(spec); },
	          [](PairMemo &f, auto const &args) {
		          auto const &a = *args[0], &b = *args[1];
		          auto const &fab = f(a, b);
		          auto const &fba = f(b, a);
		          if (!fab || !fba)
			          return CaseResult::skip();
		          Scalar lhs = *fab - *fba, rhs = embed(b) - embed(a);
		          if (lhs == rhs)
			          return CaseResult::pass();
		          return CaseResult::fail(scalar_mismatch(inputs_of({&a, &b}), lhs, rhs));
	          });
	return r;
}

inline Report quadratic_f_report(StructureSpec const &spec, std::int64_t radius,
                                 unsigned workers)
{
	Report r;
	if (auto bad = begin_report(r, spec, "quadratic-f", radius))
		return *bad;
	auto w = window(spec.rank, radius);
	run_cases(r, w, 3, workers, [&] { return f_memo(spec); },
	          [](PairMemo &f, auto const &args) {
		          auto const &a = *args[0], &b = *args[1], &c = *args[2];
		          auto const &f1 = f(a + b, c);
		          auto const &f2 = f(b, c);
		          auto const &f3 = f(a, b + c);
		          auto const &f4 = f(a, c);
		          auto const &f5 = f(b, a + c);
		          if (!f1 || !f2 || !f3 || !f4 || !f5)
			          return CaseResult::skip();
		          Scalar lhs = (embed(b) - embed(a)) * *f1;
		          Scalar rhs = *f2 * *f3 - *f4 * *f5;
		          if (lhs == rhs)
			          return CaseResult::pass();
		          return CaseResult::fail(scalar_mismatch(inputs_of({&a, &b, &c}), lhs, rhs));
	          });
	return r;
}

} // namespace detail

/// f(a,b) - f(b,a) = b - a on pairs ("skew-f") and
/// (b-a) f(a+b,c) = f(b,c) f(a,b+c) - f(a,c) f(b,a+c) on triples
/// ("quadratic-f"). Together with the graded ansatz these are equivalent
/// to a compatible left-symmetric structure.
inline std::vector<Report> check_graded_equations(StructureSpec const &spec,
                                                  std::int64_t radius, unsigned workers = 1)
{
	detail::require_graded(spec);
	return {detail::skew_f_report(spec, radius, workers),
	        detail::quadratic_f_report(spec, radius, workers)};
}

/// The graded equations for f together with the three equations for the
/// shift coefficient g: symmetry ("symmetric-g"), the quadratic relation
/// ("quadratic-g") and the mixed relation ("mixed-fg").
inline std::vector<Report> check_nongraded_equations(StructureSpec const &spec,
                                                     std::int64_t radius,
                                                     unsigned workers = 1)
{
	if (!has_shift(spec))
		throw PreconditionError("identity requires a structure with a shift term");
	std::vector<Report> out = {detail::skew_f_report(spec, radius, workers),
	                           detail::quadratic_f_report(spec, radius, workers)};
	auto w = window(spec.rank, radius);
	GroupElement zeta = *zeta_of(spec);

	Report sym;
	if (auto bad = detail::begin_report(sym, spec, "symmetric-g", radius))
		sym = *bad;
	else
		detail::run_cases(sym, w, 2, workers, [&] { return detail::g_memo(spec); },
		                  [](detail::PairMemo &g, auto const &args) {
			                  auto const &a = *args[0], &b = *args[1];
			                  auto const &gab = g(a, b);
			                  auto const &gba = g(b, a);
			                  if (!gab || !gba)
				                  return detail::CaseResult::skip();
			                  if (*gab == *gba)
				                  return detail::CaseResult::pass();
			                  return detail::CaseResult::fail(detail::scalar_mismatch(
			                      detail::inputs_of({&a, &b}), *gab, *gba));
		                  });
	out.push_back(std::move(sym));

	Report quad;
	if (auto bad = detail::begin_report(quad, spec, "quadratic-g", radius))
		quad = *bad;
	else
		detail::run_cases(
		    quad, w, 3, workers, [&] { return detail::g_memo(spec); },
		    [&zeta](detail::PairMemo &g, auto const &args) {
			    auto const &a = *args[0], &b = *args[1], &c = *args[2];
			    auto const &g1 = g(b, c);
			    auto const &g2 = g(a, b + c + zeta);
			    auto const &g3 = g(a, c);
			    auto const &g4 = g(b, a + c + zeta);
			    if (!g1 || !g2 || !g3 || !g4)
				    return detail::CaseResult::skip();
			    Scalar lhs = *g1 * *g2, rhs = *g3 * *g4;
			    if (lhs == rhs)
				    return detail::CaseResult::pass();
			    return detail::CaseResult::fail(
			        detail::scalar_mismatch(detail::inputs_of({&a, &b, &c}), lhs, rhs));
		    });
	out.push_back(std::move(quad));

	Report mixed;
	if (auto bad = detail::begin_report(mixed, spec, "mixed-fg", radius))
		mixed = *bad;
	else
	{
		struct Memos
		{
			detail::PairMemo f, g;
		};
		detail::run_cases(
		    mixed, w, 3, workers,
		    [&] { return Memos{detail::f_memo(spec), detail::g_memo(spec)}; },
		    [&zeta](Memos &m, auto const &args) {
			    auto const &a = *args[0], &b = *args[1], &c = *args[2];
			    auto const &f_bc = m.f(b, c);
			    auto const &g_a_bc = m.g(a, b + c);
			    auto const &f_ac = m.f(a, c);
			    auto const &g_b_ac = m.g(b, a + c);
			    auto const &g_ac = m.g(a, c);
			    auto const &f_b_acz = m.f(b, a + c + zeta);
			    auto const &g_bc = m.g(b, c);
			    auto const &f_a_bcz = m.f(a, b + c + zeta);
			    auto const &g_ab_c = m.g(a + b, c);
			    if (!f_bc || !g_a_bc || !f_ac || !g_b_ac || !g_ac || !f_b_acz || !g_bc ||
			        !f_a_bcz || !g_ab_c)
				    return detail::CaseResult::skip();
			    Scalar lhs = *f_bc * *g_a_bc - *f_ac * *g_b_ac;
			    Scalar rhs = *g_ac * *f_b_acz - *g_bc * *f_a_bcz +
			                 (embed(b) - embed(a)) * *g_ab_c;
			    if (lhs == rhs)
				    return detail::CaseResult::pass();
			    return detail::CaseResult::fail(
			        detail::scalar_mismatch(detail::inputs_of({&a, &b, &c}), lhs, rhs));
		    });
	}
	out.push_back(std::move(mixed));
	return out;
}

/// A bilinear form phi(L_a, L_b) given as a function of the pair.
using PairFunction =
    std::function<std::optional<Scalar>(GroupElement const &, GroupElement const &)>;

inline PairFunction from_table(PairTable table)
{
	return [t = std::move(table)](GroupElement const &a, GroupElement const &b) {
		return detail::lookup(t, a, b);
	};
}

/// Central-extension conditions for a bilinear form phi over a graded
/// structure: phi(a,b) - phi(b,a) = (b^3-b)/12 delta_{a+b,0} on pairs
/// ("cocycle-skew") and (b-a) phi(a+b,c) = phi(a,b+c) f(b,c) - phi(b,a+c) f(a,c)
/// on triples ("cocycle-compat").
inline std::vector<Report> check_cocycle(StructureSpec const &spec, PairFunction phi,
                                         std::int64_t radius, unsigned workers = 1)
{
	detail::require_graded(spec);
	auto w = window(spec.rank, radius);

	Report skew;
	if (auto bad = detail::begin_report(skew, spec, "cocycle-skew", radius))
		skew = *bad;
	else
		detail::run_cases(
		    skew, w, 2, workers, [&] { return detail::PairMemo(phi); },
		    [](detail::PairMemo &p, auto const &args) {
			    auto const &a = *args[0], &b = *args[1];
			    auto const &pab = p(a, b);
			    auto const &pba = p(b, a);
			    if (!pab || !pba)
				    return detail::CaseResult::skip();
			    Scalar lhs = *pab - *pba, rhs;
			    if ((a + b).is_zero())
			    {
				    Scalar B = embed(b);
				    rhs = Scalar(Rational(1, 12)) * (B * B * B - B);
			    }
			    if (lhs == rhs)
				    return detail::CaseResult::pass();
			    return detail::CaseResult::fail(
			        detail::scalar_mismatch(detail::inputs_of({&a, &b}), lhs, rhs));
		    });

	Report compat;
	if (auto bad = detail::begin_report(compat, spec, "cocycle-compat", radius))
		compat = *bad;
	else
	{
		struct Memos
		{
			detail::PairMemo phi, f;
		};
		detail::run_cases(
		    compat, w, 3, workers, [&] { return Memos{detail::PairMemo(phi), detail::f_memo(spec)}; },
		    [](Memos &m, auto const &args) {
			    auto const &a = *args[0], &b = *args[1], &c = *args[2];
			    auto const &p1 = m.phi(a + b, c);
			    auto const &p2 = m.phi(a, b + c);
			    auto const &f2 = m.f(b, c);
			    auto const &p3 = m.phi(b, a + c);
			    auto const &f3 = m.f(a, c);
			    if (!p1 || !p2 || !f2 || !p3 || !f3)
				    return detail::CaseResult::skip();
			    Scalar lhs = (embed(b) - embed(a)) * *p1;
			    Scalar rhs = *p2 * *f2 - *p3 * *f3;
			    if (lhs == rhs)
				    return detail::CaseResult::pass();
			    return detail::CaseResult::fail(
			        detail::scalar_mismatch(detail::inputs_of({&a, &b, &c}), lhs, rhs));
		    });
	}
	return {std::move(skew), std::move(compat)};
}

/// Uses the structure's own central term.
inline std::vector<Report> check_cocycle(StructureSpec const &spec, std::int64_t radius,
                                         unsigned workers = 1)
{
	return check_cocycle(
	    spec,
	    [&spec](GroupElement const &a, GroupElement const &b) { return try_phi(spec, a, b); },
	    radius, workers);
}

/// L_a v_b = (alpha + b + a*beta) v_{a+b}
struct VModule
{
	Scalar alpha;
	Scalar beta;
};
/// L_a v_b = (a+b) v_{a+b} for b != 0, a(gamma+a) v_a for b = 0
struct AModule
{
	Scalar gamma;
};
/// L_a v_b = b v_{a+b} for a+b != 0, -a(gamma+a) v_0 for a+b = 0
struct BModule
{
	Scalar gamma;
};

using ModuleSpec = std::variant<VModule, AModule, BModule>;

/// Coefficient of v_{a+b} in L_a v_b.
inline Scalar module_action(ModuleSpec const &m, GroupElement const &a, GroupElement const &b)
{
	Scalar A = embed(a), B = embed(b);
	return std::visit(
	    [&](auto const &s) -> Scalar {
		    using T = std::decay_t<decltype(s)>;
		    if constexpr (std::is_same_v<T, VModule>)
			    return s.alpha + B + A * s.beta;
		    else if constexpr (std::is_same_v<T, AModule>)
			    return b.is_zero() ? A * (s.gamma + A) : A + B;
		    else
			    return (a + b).is_zero() ? -A * (s.gamma + A) : B;
	    },
	    m);
}

/// [L_a, L_b] v_c = L_a (L_b v_c) - L_b (L_a v_c) with [L_a, L_b] = (b-a) L_{a+b}
/// on all triples of the window. K acts as zero, so the Virasoro and Witt
/// conditions coincide.
inline Report check_module(ModuleSpec const &m, std::size_t rank, std::int64_t radius,
                           unsigned workers = 1)
{
	Report r;
	r.identity = "module";
	r.rank = rank;
	r.radius = radius;
	r.assumptions.push_back("K acts as zero");
	auto w = window(rank, radius);
	auto act = [&m](GroupElement const &a, Element const &x) {
		Element out;
		for (auto const &[basis, c] : x.terms())
			out.add(BasisSymbol::module_vec(a + basis.index),
			        c * module_action(m, a, basis.index));
		return out;
	};
	detail::run_cases(
	    r, w, 3, workers, [] { return 0; },
	    [&](int, auto const &args) {
		    auto const &a = *args[0], &b = *args[1], &c = *args[2];
		    Element vc(BasisSymbol::module_vec(c));
		    Element lhs = (embed(b) - embed(a)) * act(a + b, vc);
		    Element rhs = act(a, act(b, vc)) - act(b, act(a, vc));
		    if (lhs == rhs)
			    return detail::CaseResult::pass();
		    return detail::CaseResult::fail({detail::inputs_of({&a, &b, &c}),
		                                     lhs.to_combination(), rhs.to_combination(),
		                                     {}});
	    });
	return r;
}

} // namespace clsas
