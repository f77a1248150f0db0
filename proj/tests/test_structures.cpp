#include "clsas/parser.hpp"
#include "clsas/structures.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace clsas;
using clsas::testing::session;

namespace {

Scalar S(std::string const &e) { return parse_scalar(e, session()); }

GroupElement G(std::int64_t x, std::int64_t y) { return GroupElement{x, y}; }

StructureSpec valpha() { return v_alpha_theta(2, S("alpha"), S("theta")); }
StructureSpec vgamma0() { return v_gamma_lambda(S("gamma"), G(0, 0)); }
StructureSpec wfamily() { return w_alpha_mu_zeta(S("alpha"), S("mu"), G(1, 1)); }
StructureSpec virasoro() { return vir_theta(2, S("theta")); }

std::vector<StructureSpec> graded_families()
{
	return {valpha(), vgamma0(), v_gamma_lambda(S("gamma"), G(1, -1)), wfamily(),
	        virasoro()};
}

Element L(GroupElement a) { return Element::witt(std::move(a)); }

} // namespace

TEST(Group, Operations)
{
	EXPECT_EQ(G(1, 0) + G(0, 1), G(1, 1));
	EXPECT_EQ(G(1, 2) + (-G(1, 2)), G(0, 0));
	EXPECT_EQ(G(0, 0), GroupElement::zero(2));
	EXPECT_THROW((void)(G(1, 0) + GroupElement{1}), RankMismatch);
}

TEST(Group, Embedding)
{
	EXPECT_EQ(embed(G(1, 2)), S("e1 + 2*e2"));
	EXPECT_TRUE(embed(G(0, 0)).is_zero());
	EXPECT_TRUE((embed(G(3, -1)) + embed(G(-3, 1))).is_zero());
}

TEST(Group, Windows)
{
	EXPECT_EQ(window(2, 0), std::vector<GroupElement>{G(0, 0)});
	auto w1 = window(1, 1);
	EXPECT_EQ(w1, (std::vector<GroupElement>{GroupElement{-1}, GroupElement{0},
	                                         GroupElement{1}}));
	auto w = window(2, 1);
	EXPECT_EQ(w.size(), 9u);
	EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
	EXPECT_EQ(window(3, 2).size(), 125u);
}

TEST(Group, MembershipRoundTripOnWindow)
{
	auto w = window(2, 2);
	std::set<std::string> images;
	for (auto const &g : w)
	{
		EXPECT_EQ(*is_in_group(embed(g), 2), g);
		images.insert(embed(g).to_string());
	}
	EXPECT_EQ(images.size(), w.size());
}

TEST(Validate, GenericParametersPass)
{
	Report r = validate_spec(valpha());
	EXPECT_TRUE(r.passed);
	ASSERT_EQ(r.assumptions.size(), 1u);
	EXPECT_EQ(r.assumptions[0], "theta generic => theta^-1 not in G");
	EXPECT_TRUE(validate_spec(v_alpha_theta(2, S("alpha"), S("0"))).passed);
	EXPECT_TRUE(validate_spec(v_alpha_theta(2, S("2"), S("1/3"))).passed);
}

TEST(Validate, Violations)
{
	Report r = validate_spec(v_gamma_lambda(embed(G(1, 0)), G(1, 0)));
	EXPECT_FALSE(r.passed);
	EXPECT_EQ(r.counterexamples.at(0).note, "gamma=lambda");

	r = validate_spec(w_alpha_mu_zeta(S("alpha"), S("mu"), G(0, 0)));
	EXPECT_FALSE(r.passed);
	EXPECT_EQ(r.counterexamples.at(0).note, "zeta=0");

	r = validate_spec(v_alpha_theta(2, S("alpha"), S("1/e2")));
	EXPECT_FALSE(r.passed);
	EXPECT_EQ(r.counterexamples.at(0).note, "theta^-1 in G");

	r = validate_spec(vir_theta(2, S("0")));
	EXPECT_FALSE(r.passed);
	EXPECT_EQ(r.counterexamples.at(0).note, "theta=0");

	r = validate_spec(StructureSpec{2, WAlphaMuZeta{S("alpha"), S("mu"), G(1, 0)}});
	EXPECT_TRUE(r.passed);
	r = validate_spec(StructureSpec{3, WAlphaMuZeta{S("alpha"), S("mu"), G(1, 0)}});
	EXPECT_FALSE(r.passed);
}

TEST(StructureConstants, VAlphaThetaAxes)
{
	auto spec = valpha();
	for (auto const &a : window(2, 2))
	{
		EXPECT_EQ(f_of(spec, a, G(0, 0)), S("alpha"));
		EXPECT_EQ(f_of(spec, G(0, 0), a), S("alpha") + embed(a));
	}
}

TEST(StructureConstants, VGammaLambdaExceptionalLine)
{
	// b = -a, c = a, lambda = 0: a(gamma - a)/gamma with a = e1
	EXPECT_EQ(f_of(vgamma0(), G(-1, 0), G(1, 0)), S("e1*(gamma - e1)/gamma"));
	EXPECT_EQ(f_of(vgamma0(), G(-1, 1), G(1, 0)), S("e1"));
	// lambda = (1,-1): on the line lambda + b + c = 0 the value lands on L_{-lambda}
	auto spec = v_gamma_lambda(S("gamma"), G(1, -1));
	EXPECT_EQ(f_of(spec, G(-1, 0), G(0, 1)),
	          S("(e1 - e2 + e2)*(gamma - e1 + e2 - e2)/(gamma - e1 + e2)"));
}

TEST(StructureConstants, ShiftAndCentralTerms)
{
	for (auto const &a : window(2, 1))
		for (auto const &b : window(2, 1))
		{
			EXPECT_EQ(g_of(wfamily(), a, b), S("mu"));
			EXPECT_TRUE(g_of(valpha(), a, b).is_zero());
			if (!(a + b).is_zero())
				EXPECT_TRUE(phi_of(virasoro(), a, b).is_zero());
		}
	// b = -a with a = e1 + e2, A = embed(a)
	Scalar A = S("e1 + e2");
	Scalar expected = Scalar(Rational(1, 24)) *
	                  ((-A).pow(3) - (-A) - (S("theta") - S("1/theta")) * A * A);
	EXPECT_EQ(phi_of(virasoro(), G(1, 1), G(-1, -1)), expected);
}

TEST(Products, WFamilyBasisProduct)
{
	auto a = G(1, 0), b = G(-1, 1);
	Element expected = (S("alpha") + embed(b)) * L(a + b) + S("mu") * L(a + b + G(1, 1));
	EXPECT_EQ(multiply(wfamily(), L(a), L(b)), expected);
}

TEST(Products, CentralAnnihilates)
{
	auto spec = virasoro();
	EXPECT_TRUE(multiply(spec, Element::central(), L(G(1, 0))).is_zero());
	EXPECT_TRUE(multiply(spec, L(G(1, 0)), Element::central()).is_zero());
	EXPECT_TRUE(multiply(spec, Element::central(), Element::central()).is_zero());
	EXPECT_THROW(multiply(valpha(), Element::central(), L(G(1, 0))), TagMismatch);
	EXPECT_THROW(multiply(valpha(), Element(BasisSymbol::module_vec(G(0, 0))), L(G(1, 0))),
	             TagMismatch);
}

TEST(Products, ZeroTimesZero)
{
	EXPECT_EQ(multiply(valpha(), L(G(0, 0)), L(G(0, 0))), S("alpha") * L(G(0, 0)));
}

TEST(Brackets, Alternating)
{
	for (auto const &spec : graded_families())
		EXPECT_TRUE(bracket(spec, L(G(1, -1)), L(G(1, -1))).is_zero());
}

TEST(Brackets, WittBracketForWFamily)
{
	auto a = G(1, 0), b = G(0, 1);
	EXPECT_EQ(bracket(wfamily(), L(a), L(b)), (embed(b) - embed(a)) * L(a + b));
}

TEST(Brackets, VirasoroCentralTerm)
{
	auto a = G(1, 1);
	Scalar A = embed(a), B = -A;
	Element expected = (Scalar(-2) * A) * L(G(0, 0)) +
	                   Scalar(Rational(1, 12)) * (B.pow(3) - B) * Element::central();
	EXPECT_EQ(bracket(virasoro(), L(a), L(-a)), expected);
}

TEST(Invariants, SkewPartIsWittBracket)
{
	for (auto const &spec : graded_families())
		for (auto const &a : window(2, 1))
			for (auto const &b : window(2, 1))
				EXPECT_EQ(f_of(spec, a, b) - f_of(spec, b, a), embed(b) - embed(a))
				    << describe(spec) << " at " << a.to_string() << "," << b.to_string();
}

TEST(Invariants, AxisValuesForEveryGradedFamily)
{
	auto zero = G(0, 0);
	for (auto const &spec : graded_families())
	{
		Scalar f00 = f_of(spec, zero, zero);
		for (auto const &a : window(2, 2))
		{
			EXPECT_EQ(f_of(spec, a, zero), f00) << describe(spec);
			EXPECT_EQ(f_of(spec, zero, a), f00 + embed(a)) << describe(spec);
		}
	}
}

TEST(Invariants, VAlphaZeroCoincidesWithUnshiftedW)
{
	auto v = v_alpha_theta(2, S("alpha"), Scalar());
	auto w = w_alpha_mu_zeta(S("alpha"), Scalar(), G(1, 0));
	for (auto const &a : window(2, 1))
		for (auto const &b : window(2, 1))
			EXPECT_EQ(multiply(v, L(a), L(b)), multiply(w, L(a), L(b)));
}

TEST(Invariants, MultiplyIsBilinear)
{
	clsas::testing::Gen gen(7);
	session();
	std::vector<Indeterminate> vars = {*Indeterminate::lookup("alpha"),
	                                   *Indeterminate::lookup("mu")};
	auto random_element = [&] {
		Element x;
		for (int i = 0; i < 3; ++i)
			x += Scalar(gen.polynomial(vars)) * L(gen.group_element(2, 1));
		return x;
	};
	for (auto const &spec : {wfamily(), valpha(), virasoro()})
		for (int iter = 0; iter < 5; ++iter)
		{
			Element x = random_element(), x2 = random_element(), y = random_element();
			EXPECT_EQ(multiply(spec, x + x2, y), multiply(spec, x, y) + multiply(spec, x2, y));
			EXPECT_EQ(multiply(spec, y, x + x2), multiply(spec, y, x) + multiply(spec, y, x2));
		}
}

TEST(CustomTables, LookupAndClipping)
{
	auto spec = StructureSpec{2, table_of(valpha(), 1)};
	EXPECT_EQ(f_of(spec, G(1, 0), G(0, 1)), f_of(valpha(), G(1, 0), G(0, 1)));
	EXPECT_FALSE(try_f(spec, G(2, 0), G(0, 0)));
	EXPECT_THROW(f_of(spec, G(2, 0), G(0, 0)), OutsideTable);
	EXPECT_THROW(multiply(spec, L(G(2, 0)), L(G(0, 0))), OutsideTable);
	EXPECT_EQ(std::get<CustomTable>(spec.family).f.size(), 81u);
}
