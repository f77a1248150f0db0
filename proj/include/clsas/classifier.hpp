#pragma once

#include "clsas/linear_solver.hpp"
#include "clsas/verifier.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clsas {

class ClassifyError : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

struct ProbeEntry
{
	std::string family;
	PairKey input;
	Scalar table_value;
	/// Value predicted by the accepted candidate, if any.
	std::optional<Scalar> model_value;
};

struct Candidate
{
	StructureSpec spec;
	/// Always true for listed candidates: they reproduce the whole table.
	bool residual_free = true;
};

struct FitResult
{
	std::vector<Candidate> candidates;
	std::vector<ProbeEntry> probe_log;
};

namespace detail {

inline Scalar entry_or_zero(std::optional<PairTable> const &t, PairKey const &k)
{
	if (!t)
		return Scalar();
	auto it = t->find(k);
	return it == t->end() ? Scalar() : it->second;
}

/// True if spec is valid and reproduces f, g and phi of the table on every
/// window pair (an absent component counts as zero).
inline bool reproduces(StructureSpec const &spec, CustomTable const &table,
                       std::vector<GroupElement> const &w)
{
	if (!validate_spec(spec).passed)
		return false;
	bool shift = has_shift(spec), central = has_central(spec);
	try
	{
		for (auto const &a : w)
			for (auto const &b : w)
			{
				PairKey k{a, b};
				if (!(f_of(spec, a, b) == table.f.at(k)))
					return false;
				if (!((shift ? g_of(spec, a, b) : Scalar()) == entry_or_zero(table.g, k)))
					return false;
				if (!((central ? phi_of(spec, a, b) : Scalar()) == entry_or_zero(table.phi, k)))
					return false;
			}
	}
	catch (std::domain_error const &)
	{
		return false;
	}
	return true;
}

inline void require_complete(CustomTable const &table, std::vector<GroupElement> const &w)
{
	for (auto const &a : w)
		for (auto const &b : w)
		{
			PairKey k{a, b};
			auto missing = [&](char const *what) {
				throw ClassifyError(std::string("table incomplete: no ") + what + " entry for " +
				                    pair_key_string(k));
			};
			if (!table.f.count(k))
				missing("f");
			if (table.g && !table.g->count(k))
				missing("g");
			if (table.phi && !table.phi->count(k))
				missing("phi");
		}
}

/**
 * Values of theta for which V_{alpha,theta} can match the table. Each probe
 * (b,c) with t = f(b,c) gives
 *   alpha*B*C theta^2 + (alpha*C + C^2 + alpha*B - t(B+C)) theta + (alpha + C - t) = 0;
 * linear probes are solved directly and pairs of quadratic probes are
 * combined to cancel theta^2. Every value returned still has to be checked
 * against the whole table.
 */
inline std::vector<Scalar> theta_candidates(Scalar const &alpha, CustomTable const &table,
                                            std::vector<GroupElement> const &w,
                                            std::string const &family,
                                            std::vector<ProbeEntry> &log)
{
	std::size_t rank = w.front().rank();
	std::vector<GroupElement> probes_b, probes_c;
	auto e1 = GroupElement::basis(rank, 0);
	probes_b.push_back(e1);
	probes_c.push_back(e1);
	for (auto const &b : w)
		for (auto const &c : w)
			if (!b.is_zero() && !c.is_zero() && !(b == e1 && c == e1))
			{
				probes_b.push_back(b);
				probes_c.push_back(c);
			}

	struct Quadratic
	{
		Scalar a2, a1, a0;
	};
	std::vector<Quadratic> quads;
	std::vector<Scalar> out;
	auto push = [&](Scalar s) {
		for (auto const &x : out)
			if (x == s)
				return;
		out.push_back(std::move(s));
	};
	int informative = 0;
	for (std::size_t p = 0; p < probes_b.size() && informative < 3; ++p)
	{
		auto const &b = probes_b[p];
		auto const &c = probes_c[p];
		Scalar t = table.f.at({b, c});
		Scalar B = embed(b), C = embed(c);
		Quadratic q{alpha * B * C, alpha * C + C * C + alpha * B - t * (B + C), alpha + C - t};
		if (q.a2.is_zero() && q.a1.is_zero())
		{
			if (!q.a0.is_zero())
			{
				log.push_back({family, {b, c}, t, std::nullopt});
				return {};
			}
			continue;
		}
		log.push_back({family, {b, c}, t, std::nullopt});
		++informative;
		if (q.a2.is_zero())
		{
			push(-q.a0 / q.a1);
			continue;
		}
		if (q.a0.is_zero())
		{
			push(Scalar());
			push(-q.a1 / q.a2);
			continue;
		}
		for (auto const &r : quads)
		{
			Scalar l1 = r.a2 * q.a1 - q.a2 * r.a1, l0 = r.a2 * q.a0 - q.a2 * r.a0;
			if (!l1.is_zero())
				push(-l0 / l1);
			else if (!l0.is_zero())
				return {};
		}
		quads.push_back(q);
	}
	return out;
}

inline void fill_model_values(std::vector<ProbeEntry> &log, std::size_t from,
                              StructureSpec const &spec)
{
	for (std::size_t i = from; i < log.size(); ++i)
		log[i].model_value = f_of(spec, log[i].input.first, log[i].input.second);
}

} // namespace detail

/**
 * Recovers the parameters of every classified family that reproduces the
 * table exactly on the window. alpha is f(0,0); theta, lambda, gamma, mu and
 * zeta are read off probe entries, and each hypothesis is then checked on
 * all window pairs. Distinct families can coincide on a finite window, so
 * the result is a candidate set.
 */
inline FitResult identify(CustomTable const &table, std::int64_t radius)
{
	if (radius < 1)
		throw ClassifyError("radius 0 window contains no probe pair");
	if (table.f.empty())
		throw ClassifyError("table is empty");
	std::size_t rank = table.f.begin()->first.first.rank();
	auto w = window(rank, radius);
	detail::require_complete(table, w);

	FitResult fit;
	auto consider = [&](StructureSpec spec, std::size_t log_from) {
		for (auto const &c : fit.candidates)
			if (c.spec == spec)
				return;
		if (!detail::reproduces(spec, table, w))
			return;
		detail::fill_model_values(fit.probe_log, log_from, spec);
		fit.candidates.push_back({std::move(spec), true});
	};

	GroupElement zero = GroupElement::zero(rank);
	Scalar alpha = table.f.at({zero, zero});
	fit.probe_log.push_back({"all", {zero, zero}, alpha, std::nullopt});

	// V_{alpha,theta}
	{
		std::size_t from = fit.probe_log.size();
		for (auto const &theta :
		     detail::theta_candidates(alpha, table, w, "V_alpha_theta", fit.probe_log))
			consider(v_alpha_theta(rank, alpha, theta), from);
	}

	// V^{gamma,lambda}: f(0,0) = lambda, gamma from an entry on the line
	// lambda + b + c = 0 with lambda + c and c nonzero.
	if (auto lambda = is_in_group(alpha, rank))
	{
		std::size_t from = fit.probe_log.size();
		Scalar L = embed(*lambda);
		for (auto const &c : w)
		{
			GroupElement b = -*lambda - c;
			if (c.is_zero() || (*lambda + c).is_zero() || !in_window(b, radius))
				continue;
			Scalar t = table.f.at({b, c});
			fit.probe_log.push_back({"V_gamma_lambda", {b, c}, t, std::nullopt});
			Scalar C = embed(c), s = L + C;
			if (t == s)
				continue;
			consider(v_gamma_lambda(L - s * C / (t - s), *lambda), from);
			break;
		}
	}

	// W(alpha,mu,zeta); with no shift table this is the mu = 0 member,
	// which coincides with V_{alpha,0} for any zeta.
	{
		std::size_t from = fit.probe_log.size();
		if (table.g && table.zeta)
		{
			Scalar mu = table.g->at({zero, zero});
			fit.probe_log.push_back({"W_alpha_mu_zeta", {zero, zero}, mu, std::nullopt});
			consider(w_alpha_mu_zeta(alpha, mu, *table.zeta), from);
		}
		else if (!table.g)
			consider(w_alpha_mu_zeta(alpha, Scalar(),
			                         table.zeta ? *table.zeta : GroupElement::basis(rank, 0)),
			         from);
	}

	// central extension of V_{0,theta}
	if (table.phi)
	{
		std::size_t from = fit.probe_log.size();
		for (auto const &theta :
		     detail::theta_candidates(alpha, table, w, "Vir_theta", fit.probe_log))
			if (alpha.is_zero())
				consider(vir_theta(rank, theta), from);
	}
	return fit;
}

struct IsoResult
{
	bool isomorphic = false;
	std::string witness;
	std::vector<std::string> assumptions;
};

namespace detail {

/// Graded parametrized form used by the isomorphism test.
inline StructureSpec iso_normal_form(StructureSpec const &spec)
{
	if (auto const *w = std::get_if<WAlphaMuZeta>(&spec.family))
	{
		if (!w->mu.is_zero())
			throw PreconditionError(
			    "isomorphism testing is limited to graded structures (W with mu != 0 given)");
		return v_alpha_theta(spec.rank, w->alpha, Scalar());
	}
	if (std::holds_alternative<CustomTable>(spec.family))
		throw PreconditionError("isomorphism testing needs a parametrized family, not a table");
	return spec;
}

} // namespace detail

/**
 * Decides isomorphism of two graded structures by the classification:
 * (1) equal parameters; (2) V_{alpha,0} and V_{alpha,1/alpha} with alpha not
 * in G; (3) V_{alpha,theta} and V_{-alpha,-theta}; (4) V^{gamma,0} and
 * V^{-gamma,0} with gamma nonzero. Composites of (2) and (3) are included
 * so the relation is transitive. No V_{alpha,theta} is isomorphic to any
 * V^{gamma,lambda}.
 */
inline IsoResult are_isomorphic(StructureSpec const &s1, StructureSpec const &s2)
{
	if (s1.rank != s2.rank)
		throw RankMismatch("rank mismatch: " + std::to_string(s1.rank) + " vs " +
		                   std::to_string(s2.rank));
	for (auto const *s : {&s1, &s2})
	{
		Report v = validate_spec(*s);
		if (!v.passed)
			throw PreconditionError("invalid spec " + describe(*s) + ": " +
			                        v.counterexamples.front().note);
	}
	StructureSpec n1 = detail::iso_normal_form(s1), n2 = detail::iso_normal_form(s2);
	IsoResult r;
	for (auto const *s : {&s1, &s2})
		for (auto const &a : validate_spec(*s).assumptions)
			if (std::find(r.assumptions.begin(), r.assumptions.end(), a) == r.assumptions.end())
				r.assumptions.push_back(a);

	auto *v1 = std::get_if<VAlphaTheta>(&n1.family);
	auto *v2 = std::get_if<VAlphaTheta>(&n2.family);
	auto *g1 = std::get_if<VGammaLambda>(&n1.family);
	auto *g2 = std::get_if<VGammaLambda>(&n2.family);
	auto *c1 = std::get_if<VirTheta>(&n1.family);
	auto *c2 = std::get_if<VirTheta>(&n2.family);

	if (v1 && v2)
	{
		Scalar const &a1 = v1->alpha, &t1 = v1->theta, &a2 = v2->alpha, &t2 = v2->theta;
		if (a1 == a2 && t1 == t2)
			return {true, "case (1): equal parameters; sign +, f1(a,b) = f2(a,b)", r.assumptions};
		if (a2 == -a1 && t2 == -t1)
			return {true, "case (3): (alpha,theta) -> (-alpha,-theta); sign -, L_a -> -L_{-a}, "
			              "f1(a,b) = -f2(-a,-b)",
			        r.assumptions};
		bool alpha_outside = !a1.is_zero() && !is_in_group(a1, n1.rank);
		if (alpha_outside)
		{
			Scalar inv = a1.inverse();
			auto is_pair = [](Scalar const &x, Scalar const &y, Scalar const &p, Scalar const &q) {
				return (x == p && y == q) || (x == q && y == p);
			};
			if (a1.variables())
				r.assumptions.push_back("alpha generic => alpha not in G");
			if (a2 == a1 && is_pair(t1, t2, Scalar(), inv))
				return {true, "case (2): V_{alpha,0} = V_{alpha,1/alpha}, alpha not in G; sign +, "
				              "f1(a,b) = f2(a,b)",
				        r.assumptions};
			if (a2 == -a1 && ((t1.is_zero() && t2 == -inv) || (t1 == inv && t2.is_zero())))
				return {true, "cases (2) and (3) composed: V_{alpha,0} = V_{alpha,1/alpha} ~ "
				              "V_{-alpha,-1/alpha}; sign -, f1(a,b) = -f2(-a,-b)",
				        r.assumptions};
		}
		return {false, "parameters lie in no common isomorphism class", r.assumptions};
	}
	if (g1 && g2)
	{
		if (g1->gamma == g2->gamma && g1->lambda == g2->lambda)
			return {true, "case (1): equal parameters; sign +, f1(a,b) = f2(a,b)", r.assumptions};
		if (g1->lambda.is_zero() && g2->lambda.is_zero() && !g1->gamma.is_zero() &&
		    g2->gamma == -g1->gamma)
			return {true, "case (4): V^{gamma,0} ~ V^{-gamma,0}; sign -, f1(a,b) = -f2(-a,-b)",
			        r.assumptions};
		return {false, "parameters lie in no common isomorphism class", r.assumptions};
	}
	if (c1 && c2)
	{
		if (c1->theta == c2->theta)
			return {true, "case (1): equal parameters; sign +, f1(a,b) = f2(a,b)", r.assumptions};
		if (c2->theta == -c1->theta)
			return {true, "case (3) on V_{0,theta}: theta -> -theta; sign -, L_a -> -L_{-a}, "
			              "K -> -K",
			        r.assumptions};
		return {false, "parameters lie in no common isomorphism class", r.assumptions};
	}
	if (c1 || c2)
		return {false, "a central extension is not isomorphic to a structure without one",
		        r.assumptions};
	return {false, "no isomorphism between V_{alpha,theta} and V^{gamma,lambda}", r.assumptions};
}

enum class CocycleStatus
{
	none,
	unique,
	/// Consistent, but the window leaves some entries free.
	underdetermined
};

inline char const *status_name(CocycleStatus s)
{
	switch (s)
	{
	case CocycleStatus::none: return "none";
	case CocycleStatus::unique: return "unique";
	case CocycleStatus::underdetermined: return "underdetermined";
	}
	return "";
}

struct CocycleSolution
{
	CocycleStatus status = CocycleStatus::none;
	/// Every entry the system pins. When unique this includes all pairs
	/// (a,b) with a+b in the window.
	PairTable phi;
	/// Unpinned entries with a+b outside the window.
	std::size_t free_outside = 0;
	std::size_t unknowns = 0;
	std::size_t equations = 0;
	std::size_t rank = 0;
	std::vector<std::string> assumptions;
};

/**
 * Solves for a central extension phi of a graded structure on the window.
 * Unknowns are phi(a,b) for all window pairs, including a+b != 0. The
 * equations are the skew condition on all pairs and the compatibility
 * condition on triples whose index sums stay in the window. Elimination is
 * exact over the Scalar field, so parameters are treated as generic.
 * Entries phi(a,b) with a+b outside the window are carried along but only
 * pinned where some in-window equation reaches them.
 */
inline CocycleSolution solve_cocycle(StructureSpec const &spec, std::int64_t radius)
{
	if (radius < 2)
		throw std::invalid_argument("cocycle solving needs radius >= 2");
	detail::require_graded(spec);
	Report v = validate_spec(spec);
	if (!v.passed)
		throw PreconditionError("invalid spec: " + v.counterexamples.front().note);

	auto w = window(spec.rank, radius);
	std::map<PairKey, std::size_t> index;
	std::vector<PairKey> keys;
	for (auto const &a : w)
		for (auto const &b : w)
		{
			index.emplace(PairKey{a, b}, keys.size());
			keys.push_back({a, b});
		}

	std::vector<LinearEquation> eqs;
	auto term = [&](LinearEquation &e, GroupElement const &a, GroupElement const &b, Scalar c) {
		if (c.is_zero())
			return;
		std::size_t j = index.at({a, b});
		auto [it, fresh] = e.coeffs.emplace(j, c);
		if (!fresh)
		{
			it->second += c;
			if (it->second.is_zero())
				e.coeffs.erase(it);
		}
	};
	for (auto const &a : w)
		for (auto const &b : w)
		{
			LinearEquation e;
			term(e, a, b, Scalar(1));
			term(e, b, a, Scalar(-1));
			if ((a + b).is_zero())
			{
				Scalar B = embed(b);
				e.rhs = Scalar(Rational(1, 12)) * (B * B * B - B);
			}
			eqs.push_back(std::move(e));
		}
	detail::PairMemo f = detail::f_memo(spec);
	for (auto const &a : w)
		for (auto const &b : w)
		{
			if (!in_window(a + b, radius))
				continue;
			for (auto const &c : w)
			{
				if (!in_window(b + c, radius) || !in_window(a + c, radius))
					continue;
				LinearEquation e;
				term(e, a + b, c, embed(b) - embed(a));
				term(e, a, b + c, -*f(b, c));
				term(e, b, a + c, *f(a, c));
				eqs.push_back(std::move(e));
			}
		}

	LinearSolution sol = solve_linear(keys.size(), eqs);
	CocycleSolution out;
	out.unknowns = keys.size();
	out.equations = eqs.size();
	out.rank = sol.rank;
	out.assumptions = v.assumptions;
	out.assumptions.push_back("parameters generic: elimination over the rational function field");
	if (sol.status == SolveStatus::inconsistent)
		return out;
	// Entries whose index sum leaves the window meet only clipped equations;
	// uniqueness is decided on the others.
	out.status = CocycleStatus::unique;
	for (std::size_t j = 0; j < keys.size(); ++j)
	{
		bool inside = in_window(keys[j].first + keys[j].second, radius);
		if (sol.values[j])
			out.phi.emplace(keys[j], *sol.values[j]);
		else if (inside)
			out.status = CocycleStatus::underdetermined;
		else
			++out.free_outside;
	}
	return out;
}

// JSON

inline nlohmann::ordered_json spec_to_json(StructureSpec const &spec)
{
	nlohmann::ordered_json j;
	j["family"] = family_name(spec);
	j["rank"] = spec.rank;
	std::visit(
	    [&](auto const &s) {
		    using T = std::decay_t<decltype(s)>;
		    if constexpr (std::is_same_v<T, VAlphaTheta>)
		    {
			    j["alpha"] = s.alpha.to_string();
			    j["theta"] = s.theta.to_string();
		    }
		    else if constexpr (std::is_same_v<T, VGammaLambda>)
		    {
			    j["gamma"] = s.gamma.to_string();
			    j["lambda"] = s.lambda.coords();
		    }
		    else if constexpr (std::is_same_v<T, WAlphaMuZeta>)
		    {
			    j["alpha"] = s.alpha.to_string();
			    j["mu"] = s.mu.to_string();
			    j["zeta"] = s.zeta.coords();
		    }
		    else if constexpr (std::is_same_v<T, VirTheta>)
			    j["theta"] = s.theta.to_string();
	    },
	    spec.family);
	j["description"] = describe(spec);
	return j;
}

inline nlohmann::ordered_json pair_table_to_json(PairTable const &t)
{
	nlohmann::ordered_json j = nlohmann::ordered_json::object();
	for (auto const &[k, v] : t)
		j[pair_key_string(k)] = v.to_string();
	return j;
}

inline nlohmann::ordered_json to_json(FitResult const &fit)
{
	nlohmann::ordered_json j;
	j["schema_version"] = report_schema_version;
	j["kind"] = "fit";
	auto cands = nlohmann::ordered_json::array();
	for (auto const &c : fit.candidates)
	{
		auto e = spec_to_json(c.spec);
		e["residual_free"] = c.residual_free;
		cands.push_back(std::move(e));
	}
	j["candidates"] = std::move(cands);
	auto log = nlohmann::ordered_json::array();
	for (auto const &p : fit.probe_log)
	{
		nlohmann::ordered_json e;
		e["family"] = p.family;
		e["input"] = pair_key_string(p.input);
		e["table"] = p.table_value.to_string();
		e["model"] = p.model_value ? nlohmann::ordered_json(p.model_value->to_string())
		                           : nlohmann::ordered_json(nullptr);
		log.push_back(std::move(e));
	}
	j["probe_log"] = std::move(log);
	return j;
}

inline nlohmann::ordered_json to_json(IsoResult const &r)
{
	nlohmann::ordered_json j;
	j["schema_version"] = report_schema_version;
	j["kind"] = "isomorphism";
	j["isomorphic"] = r.isomorphic;
	j["witness"] = r.witness;
	j["assumptions"] = r.assumptions;
	return j;
}

inline nlohmann::ordered_json to_json(CocycleSolution const &s)
{
	nlohmann::ordered_json j;
	j["schema_version"] = report_schema_version;
	j["kind"] = "cocycle";
	j["status"] = status_name(s.status);
	j["system_size"] = {{"unknowns", s.unknowns}, {"equations", s.equations}};
	j["rank"] = s.rank;
	j["free_outside"] = s.free_outside;
	j["assumptions"] = s.assumptions;
	j["phi"] = pair_table_to_json(s.phi);
	return j;
}

} // namespace clsas
