#include "clsas/verifier.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace clsas;
using clsas::testing::session;

namespace {

Scalar sym(char const *name) { return Scalar::variable(*Indeterminate::lookup(name)); }

GroupElement g2(std::int64_t x, std::int64_t y) { return GroupElement({x, y}); }

StructureSpec custom(StructureSpec const &spec, std::int64_t table_radius)
{
	return {spec.rank, table_of(spec, table_radius)};
}

CustomTable &table(StructureSpec &spec) { return std::get<CustomTable>(spec.family); }

Report const &named(std::vector<Report> const &rs, std::string const &id)
{
	for (auto const &r : rs)
		if (r.identity == id)
			return r;
	throw std::logic_error("no report " + id);
}

bool has_inputs(Report const &r, std::vector<std::vector<std::int64_t>> const &in)
{
	for (auto const &c : r.counterexamples)
		if (c.inputs == in)
			return true;
	return false;
}

// Both conditions of a compatible left-symmetric structure.
bool clsas_holds(StructureSpec const &spec, std::int64_t radius)
{
	return check_left_symmetric(spec, radius).passed && check_sub_adjacent(spec, radius).passed;
}

} // namespace

TEST(LeftSymmetric, SymbolicVAlphaThetaRadiusOne)
{
	session();
	auto r = check_left_symmetric(v_alpha_theta(2, sym("alpha"), sym("theta")), 1);
	EXPECT_TRUE(r.passed);
	EXPECT_EQ(r.cases_checked, 729u);
	EXPECT_EQ(r.skipped, 0u);
	EXPECT_EQ(r.identity, "left-symmetric");
	EXPECT_FALSE(r.assumptions.empty());
}

TEST(LeftSymmetric, SymbolicW)
{
	session();
	auto r = check_left_symmetric(w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 1)), 1);
	EXPECT_TRUE(r.passed);
	EXPECT_EQ(r.cases_checked, 729u);
}

TEST(LeftSymmetric, OtherFamilies)
{
	session();
	EXPECT_TRUE(check_left_symmetric(v_gamma_lambda(sym("gamma"), g2(0, 0)), 1).passed);
	EXPECT_TRUE(check_left_symmetric(v_gamma_lambda(sym("gamma"), g2(1, 0)), 1).passed);
	EXPECT_TRUE(check_left_symmetric(vir_theta(2, sym("theta")), 1).passed);
}

TEST(LeftSymmetric, PerturbedEntryFails)
{
	session();
	auto base = v_alpha_theta(2, sym("alpha"), sym("theta"));
	auto spec = custom(base, 2);
	table(spec).f[{g2(0, 0), g2(0, 0)}] = sym("alpha") + Scalar(1);
	auto r = check_left_symmetric(spec, 1);
	EXPECT_FALSE(r.passed);
	ASSERT_FALSE(r.counterexamples.empty());
	EXPECT_EQ(r.cases_checked + r.skipped, 729u);
	// the first violated triple, found by direct search
	EXPECT_EQ(r.counterexamples.front().inputs,
	          (std::vector<std::vector<std::int64_t>>{{-1, -1}, {0, 0}, {0, 0}}));
	auto const &c = r.counterexamples.front();
	EXPECT_FALSE(c.lhs == c.rhs);
}

TEST(LeftSymmetric, UnperturbedTableAgreesWithFamily)
{
	session();
	auto spec = custom(v_alpha_theta(2, sym("alpha"), sym("theta")), 2);
	auto r = check_left_symmetric(spec, 1);
	EXPECT_TRUE(r.passed);
	EXPECT_EQ(r.skipped, 0u);
	EXPECT_EQ(r.cases_checked, 729u);
}

TEST(LeftSymmetric, TableClippingIsCounted)
{
	session();
	auto spec = custom(v_alpha_theta(1, sym("alpha"), sym("theta")), 1);
	auto r = check_left_symmetric(spec, 1);
	EXPECT_TRUE(r.passed);
	EXPECT_GT(r.skipped, 0u);
	EXPECT_EQ(r.cases_checked + r.skipped, 27u);
}

TEST(LeftSymmetric, InvalidSpecReportsConstraint)
{
	session();
	auto r = check_left_symmetric(v_gamma_lambda(Scalar(0), g2(0, 0)), 1);
	EXPECT_FALSE(r.passed);
	EXPECT_EQ(r.cases_checked, 0u);
	ASSERT_FALSE(r.counterexamples.empty());
	EXPECT_FALSE(r.counterexamples.front().note.empty());
}

TEST(GradedEquations, VGammaLambdaRadiusTwo)
{
	session();
	auto rs = check_graded_equations(v_gamma_lambda(sym("gamma"), g2(0, 0)), 2);
	ASSERT_EQ(rs.size(), 2u);
	for (auto const &r : rs)
		EXPECT_TRUE(r.passed) << to_text(r);
	EXPECT_EQ(named(rs, "skew-f").cases_checked, 625u);
	EXPECT_EQ(named(rs, "quadratic-f").cases_checked, 15625u);
}

TEST(GradedEquations, SkewDifference)
{
	session();
	auto spec = v_alpha_theta(2, sym("alpha"), sym("theta"));
	for (auto const &a : window(2, 1))
		for (auto const &b : window(2, 1))
			EXPECT_EQ(f_of(spec, a, b) - f_of(spec, b, a), embed(b) - embed(a));
}

TEST(GradedEquations, ZeroTable)
{
	session();
	CustomTable t;
	for (auto const &a : window(1, 3))
		for (auto const &b : window(1, 3))
			t.f[{a, b}] = Scalar(0);
	StructureSpec spec{1, t};
	auto rs = check_graded_equations(spec, 1);
	EXPECT_TRUE(named(rs, "quadratic-f").passed);
	auto const &skew = named(rs, "skew-f");
	EXPECT_FALSE(skew.passed);
	for (auto const &c : skew.counterexamples)
		EXPECT_NE(c.inputs[0], c.inputs[1]);
	EXPECT_EQ(skew.counterexamples.size(), 6u);
}

TEST(GradedEquations, RejectsShift)
{
	session();
	EXPECT_THROW(check_graded_equations(w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 0)), 1),
	             PreconditionError);
}

TEST(NongradedEquations, WAllPass)
{
	session();
	auto rs = check_nongraded_equations(w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 0)), 1);
	ASSERT_EQ(rs.size(), 5u);
	std::vector<std::string> ids;
	for (auto const &r : rs)
	{
		EXPECT_TRUE(r.passed) << to_text(r);
		EXPECT_EQ(r.skipped, 0u);
		ids.push_back(r.identity);
	}
	EXPECT_EQ(ids, (std::vector<std::string>{"skew-f", "quadratic-f", "symmetric-g",
	                                         "quadratic-g", "mixed-fg"}));
}

TEST(NongradedEquations, ConstantG)
{
	session();
	auto base = w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 0));
	auto spec = custom(base, 3);
	for (auto const &[k, v] : *table(spec).g)
		EXPECT_EQ(v, sym("mu"));
	EXPECT_TRUE(named(check_nongraded_equations(spec, 1), "quadratic-g").passed);
}

TEST(NongradedEquations, AsymmetricG)
{
	session();
	auto spec = custom(w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 0)), 3);
	for (auto &[k, v] : *table(spec).g)
		v = embed(k.first);
	auto rs = check_nongraded_equations(spec, 1);
	auto const &r = named(rs, "symmetric-g");
	EXPECT_FALSE(r.passed);
	EXPECT_TRUE(has_inputs(r, {{1, 0}, {0, 0}}));
}

TEST(NongradedEquations, RequiresShift)
{
	session();
	EXPECT_THROW(check_nongraded_equations(v_alpha_theta(2, sym("alpha"), sym("theta")), 1),
	             PreconditionError);
}

TEST(SubAdjacent, GradedDiagonalVanishes)
{
	session();
	for (auto spec : {v_alpha_theta(2, sym("alpha"), sym("theta")),
	                  v_gamma_lambda(sym("gamma"), g2(1, -1)), vir_theta(2, sym("theta"))})
	{
		auto r = check_sub_adjacent(spec, 2);
		EXPECT_TRUE(r.passed) << to_text(r);
		EXPECT_EQ(r.cases_checked, 625u);
		for (auto const &a : window(2, 2))
			EXPECT_TRUE(bracket(spec, Element::witt(a), Element::witt(a)).is_zero());
	}
}

TEST(SubAdjacent, VirasoroCentralTerm)
{
	session();
	auto spec = vir_theta(2, sym("theta"));
	auto a = g2(1, 2);
	Scalar B = embed(-a);
	Element br = bracket(spec, Element::witt(a), Element::witt(-a));
	EXPECT_EQ(br.coefficient(BasisSymbol::central()), Scalar(Rational(1, 12)) * (B * B * B - B));
}

TEST(SubAdjacent, WShiftTermsCancel)
{
	session();
	auto spec = w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 1));
	EXPECT_TRUE(check_sub_adjacent(spec, 1).passed);
	Element br = bracket(spec, Element::witt(g2(1, 0)), Element::witt(g2(0, 1)));
	EXPECT_EQ(br, Element(BasisSymbol::witt(g2(1, 1)), embed(g2(0, 1)) - embed(g2(1, 0))));
}

TEST(Novikov, WPasses)
{
	session();
	EXPECT_TRUE(check_novikov(w_alpha_mu_zeta(sym("alpha"), sym("mu"), g2(1, 0)), 1).passed);
}

TEST(Novikov, VZeroThetaResidual)
{
	session();
	auto spec = v_alpha_theta(2, Scalar(0), sym("theta"));
	auto r = check_novikov(spec, 1);
	EXPECT_FALSE(r.passed);
	Scalar theta = sym("theta"), alpha(0);
	bool found = false;
	for (auto const &c : r.counterexamples)
	{
		GroupElement a(c.inputs[0]), b(c.inputs[1]), cc(c.inputs[2]);
		if (!a.is_zero() || b.is_zero() || cc.is_zero() || b == cc)
			continue;
		found = true;
		Scalar B = embed(b), C = embed(cc);
		Scalar residual =
		    c.lhs.terms.front().second - c.rhs.terms.front().second;
		Scalar normalized = residual * (Scalar(1) + theta * (B + C)) /
		                    (theta * (alpha * theta - Scalar(1)) * B * C * (B - C));
		EXPECT_TRUE(normalized.is_constant()) << normalized.to_string();
		EXPECT_FALSE(normalized.is_zero());
	}
	EXPECT_TRUE(found);
}

TEST(Novikov, VAlphaThetaResidualIsConstantMultiple)
{
	session();
	Scalar alpha = sym("alpha"), theta = sym("theta");
	auto spec = v_alpha_theta(1, alpha, theta);
	for (std::int64_t b = -2; b <= 2; ++b)
		for (std::int64_t c = -2; c <= 2; ++c)
		{
			if (b == 0 || c == 0 || b == c)
				continue;
			GroupElement z({0}), gb({b}), gc({c});
			Element d = multiply(spec, multiply(spec, Element::witt(z), Element::witt(gb)),
			                     Element::witt(gc)) -
			            multiply(spec, multiply(spec, Element::witt(z), Element::witt(gc)),
			                     Element::witt(gb));
			Scalar B = embed(gb), C = embed(gc);
			Scalar k = d.coefficient(BasisSymbol::witt(gb + gc)) * (Scalar(1) + theta * (B + C)) /
			           (theta * (alpha * theta - Scalar(1)) * B * C * (B - C));
			EXPECT_TRUE(k.is_constant()) << k.to_string();
			EXPECT_FALSE(k.is_zero());
		}
}

TEST(Novikov, VGammaLambdaWitness)
{
	session();
	auto lam = g2(0, 0);
	auto r = check_novikov(v_gamma_lambda(sym("gamma"), lam), 1);
	EXPECT_FALSE(r.passed);
	bool found = false;
	for (auto const &c : r.counterexamples)
	{
		GroupElement a(c.inputs[0]), b(c.inputs[1]), cc(c.inputs[2]);
		if (!(lam + cc).is_zero() && !(lam + a + cc).is_zero() && (lam + a + b).is_zero())
			found = true;
	}
	EXPECT_TRUE(found);
}

TEST(Module, ActionFormulas)
{
	session();
	Scalar alpha = sym("alpha"), beta = sym("beta"), gamma = sym("gamma");
	auto a = g2(1, -1), b = g2(0, 2);
	EXPECT_EQ(module_action(VModule{alpha, beta}, a, b), alpha + embed(b) + embed(a) * beta);
	EXPECT_EQ(module_action(BModule{gamma}, a, -a), -embed(a) * (gamma + embed(a)));
	EXPECT_EQ(module_action(BModule{gamma}, a, b), embed(b));
	EXPECT_EQ(module_action(AModule{gamma}, a, g2(0, 0)), embed(a) * (gamma + embed(a)));
	EXPECT_EQ(module_action(AModule{gamma}, a, b), embed(a) + embed(b));
}

TEST(Module, AllThreeClassesAreModules)
{
	session();
	Scalar alpha = sym("alpha"), beta = sym("beta"), gamma = sym("gamma");
	for (ModuleSpec m : {ModuleSpec(VModule{alpha, beta}), ModuleSpec(AModule{gamma}),
	                     ModuleSpec(BModule{gamma})})
	{
		auto r = check_module(m, 2, 2);
		EXPECT_TRUE(r.passed) << to_text(r);
		EXPECT_EQ(r.cases_checked, 15625u);
	}
}

TEST(Cocycle, VirThetaOwnPhi)
{
	session();
	auto rs = check_cocycle(vir_theta(2, sym("theta")), 2);
	ASSERT_EQ(rs.size(), 2u);
	for (auto const &r : rs)
		EXPECT_TRUE(r.passed) << to_text(r);
	EXPECT_EQ(named(rs, "cocycle-skew").cases_checked, 625u);
	EXPECT_EQ(named(rs, "cocycle-compat").cases_checked, 15625u);
}

TEST(Cocycle, ZeroPhiAgainstVAlphaTheta)
{
	session();
	auto spec = v_alpha_theta(2, sym("alpha"), sym("theta"));
	auto zero = [](GroupElement const &, GroupElement const &) {
		return std::optional<Scalar>(Scalar(0));
	};
	auto rs = check_cocycle(spec, zero, 1);
	EXPECT_TRUE(named(rs, "cocycle-compat").passed);
	auto const &skew = named(rs, "cocycle-skew");
	EXPECT_FALSE(skew.passed);
	for (auto const &c : skew.counterexamples)
	{
		GroupElement a(c.inputs[0]), b(c.inputs[1]);
		EXPECT_TRUE((a + b).is_zero());
		EXPECT_FALSE(a.is_zero());
	}
	// (a,-a) with a != 0 and b^3 - b != 0 for every nonzero window element
	EXPECT_EQ(skew.counterexamples.size(), 8u);
}

TEST(Cocycle, PerturbedPhiFailsAtThatPair)
{
	session();
	auto spec = vir_theta(2, sym("theta"));
	PairTable phi = *table_of(spec, 2).phi;
	auto p = g2(1, 0), q = g2(0, -1);
	phi[{p, q}] += Scalar(1);
	auto rs = check_cocycle(spec, from_table(phi), 1);
	auto const &skew = named(rs, "cocycle-skew");
	EXPECT_FALSE(skew.passed);
	ASSERT_EQ(skew.counterexamples.size(), 2u);
	EXPECT_EQ(skew.counterexamples[0].inputs, (std::vector<std::vector<std::int64_t>>{{0, -1}, {1, 0}}));
	EXPECT_EQ(skew.counterexamples[1].inputs, (std::vector<std::vector<std::int64_t>>{{1, 0}, {0, -1}}));
}

TEST(Cocycle, PhiTableClipping)
{
	session();
	auto spec = vir_theta(1, sym("theta"));
	auto rs = check_cocycle(spec, from_table(*table_of(spec, 1).phi), 1);
	for (auto const &r : rs)
		EXPECT_TRUE(r.passed);
	auto const &compat = named(rs, "cocycle-compat");
	EXPECT_GT(compat.skipped, 0u);
	EXPECT_EQ(compat.cases_checked + compat.skipped, 27u);
}

// Equivalences between the element-level identities and the functional
// equations, on built-in families and on perturbed tables.

TEST(Equivalence, GradedFamiliesAndPerturbations)
{
	session();
	Scalar alpha = sym("alpha"), theta = sym("theta");
	std::vector<StructureSpec> specs = {
	    custom(v_alpha_theta(1, alpha, theta), 4),
	    custom(v_gamma_lambda(sym("gamma"), GroupElement({1})), 4),
	    custom(vir_theta(1, theta), 4),
	};
	clsas::testing::Gen gen(11);
	std::size_t n = specs.size();
	for (std::size_t i = 0; i < n; ++i)
		for (int k = 0; k < 3; ++k)
		{
			auto s = specs[i];
			auto &f = table(s).f;
			auto a = GroupElement({gen.integer(-1, 1)}), b = GroupElement({gen.integer(-1, 1)});
			f[{a, b}] += Scalar(gen.rational());
			specs.push_back(s);
		}
	for (auto const &s : specs)
	{
		bool eqs = all_passed(check_graded_equations(s, 1));
		EXPECT_EQ(clsas_holds(s, 1), eqs);
		// with the skew relation in place, left-symmetry alone is the quadratic relation
		auto rs = check_graded_equations(s, 1);
		if (named(rs, "skew-f").passed)
			EXPECT_EQ(check_left_symmetric(s, 1).passed, named(rs, "quadratic-f").passed);
	}
}

TEST(Equivalence, NongradedFamiliesAndPerturbations)
{
	session();
	Scalar alpha = sym("alpha"), mu = sym("mu");
	auto base = custom(w_alpha_mu_zeta(alpha, mu, GroupElement({1})), 4);
	std::vector<StructureSpec> specs = {base, custom(w_alpha_mu_zeta(alpha, Scalar(0), GroupElement({-1})), 4)};
	clsas::testing::Gen gen(5);
	for (int k = 0; k < 4; ++k)
	{
		auto s = base;
		auto a = GroupElement({gen.integer(-1, 1)}), b = GroupElement({gen.integer(-1, 1)});
		auto &t = k % 2 ? *table(s).g : table(s).f;
		t[{a, b}] += Scalar(gen.rational());
		specs.push_back(s);
	}
	// symmetric perturbation of g
	{
		auto s = base;
		(*table(s).g)[{GroupElement({1}), GroupElement({-1})}] += mu;
		(*table(s).g)[{GroupElement({-1}), GroupElement({1})}] += mu;
		specs.push_back(s);
	}
	for (auto const &s : specs)
		EXPECT_EQ(clsas_holds(s, 1), all_passed(check_nongraded_equations(s, 1)));
}

TEST(Equivalence, FZeroTableIsLeftSymmetricButNotCompatible)
{
	session();
	CustomTable t;
	for (auto const &a : window(1, 3))
		for (auto const &b : window(1, 3))
			t.f[{a, b}] = Scalar(0);
	StructureSpec spec{1, t};
	EXPECT_TRUE(check_left_symmetric(spec, 1).passed);
	EXPECT_FALSE(check_sub_adjacent(spec, 1).passed);
	EXPECT_FALSE(all_passed(check_graded_equations(spec, 1)));
}

TEST(Determinism, WorkerPartitioning)
{
	session();
	auto base = v_alpha_theta(2, sym("alpha"), sym("theta"));
	auto spec = custom(base, 2);
	table(spec).f[{g2(0, 0), g2(0, 0)}] = sym("alpha") + Scalar(1);
	table(spec).f[{g2(1, 0), g2(0, 1)}] += Scalar(2);
	std::string ref = to_json(check_left_symmetric(spec, 1, 1)).dump();
	std::string ref_eq;
	for (auto const &r : check_graded_equations(spec, 1, 1))
		ref_eq += to_json(r).dump();
	for (unsigned w : {2u, 3u, 7u})
	{
		EXPECT_EQ(to_json(check_left_symmetric(spec, 1, w)).dump(), ref);
		std::string eq;
		for (auto const &r : check_graded_equations(spec, 1, w))
			eq += to_json(r).dump();
		EXPECT_EQ(eq, ref_eq);
	}
	EXPECT_EQ(to_json(check_left_symmetric(spec, 1, 1)).dump(), ref);
}

TEST(Determinism, CounterexamplesSorted)
{
	session();
	auto r = check_novikov(v_alpha_theta(2, Scalar(0), sym("theta")), 1, 3);
	for (std::size_t i = 1; i < r.counterexamples.size(); ++i)
		EXPECT_LE(r.counterexamples[i - 1].inputs, r.counterexamples[i].inputs);
}

TEST(ReportInvariant, PassedIffNoCounterexamples)
{
	session();
	for (auto const &r : {check_novikov(v_alpha_theta(1, Scalar(0), sym("theta")), 1),
	                      check_novikov(w_alpha_mu_zeta(sym("alpha"), sym("mu"), GroupElement({1})), 1)})
		EXPECT_EQ(r.passed, r.counterexamples.empty());
}

TEST(ReportJson, Fields)
{
	session();
	auto j = to_json(check_sub_adjacent(vir_theta(1, sym("theta")), 1));
	EXPECT_EQ(j["schema_version"], report_schema_version);
	EXPECT_EQ(j["identity"], "sub-adjacent");
	EXPECT_EQ(j["cases_checked"], 9);
	EXPECT_EQ(j["skipped"], 0);
	EXPECT_TRUE(j["passed"].get<bool>());
	EXPECT_TRUE(j["counterexamples"].empty());
}

// Randomized element-level check: left-symmetry is bilinear, so random
// combinations of generators satisfy it whenever the basis does.
TEST(ElementLevel, RandomCombinationsLeftSymmetric)
{
	session();
	auto spec = v_alpha_theta(1, sym("alpha"), Scalar(Rational(1, 3)));
	clsas::testing::Gen gen(3);
	auto random_element = [&] {
		Element x;
		for (int i = 0; i < 2; ++i)
			x.add(BasisSymbol::witt(GroupElement({gen.integer(-2, 2)})), Scalar(gen.rational()));
		return x;
	};
	for (int n = 0; n < 10; ++n)
	{
		Element x = random_element(), y = random_element(), z = random_element();
		auto m = [&](Element const &p, Element const &q) { return multiply(spec, p, q); };
		EXPECT_EQ(m(m(x, y), z) - m(x, m(y, z)), m(m(y, x), z) - m(y, m(x, z)));
	}
}
