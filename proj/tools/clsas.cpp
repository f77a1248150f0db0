#include "clsas/clsas.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

using namespace clsas;
using json = nlohmann::ordered_json;

namespace {

/// Bad input: reported and mapped to exit code 2.
struct InputError : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

using Assignment = std::map<Indeterminate, Rational>;

struct Options
{
	std::string spec, spec2, report, format = "text", eval, identity;
	std::int64_t radius = 1, t_radius = 1;
	bool check_jacobi = false;
};

unsigned workers()
{
	return std::max(1u, std::thread::hardware_concurrency());
}

Assignment parse_eval(std::string const &text)
{
	Assignment out;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ','))
	{
		auto eq = item.find('=');
		if (eq == std::string::npos)
			throw InputError("--eval: expected sym=rational, got '" + item + "'");
		std::string name = item.substr(0, eq), value = item.substr(eq + 1);
		name.erase(0, name.find_first_not_of(' '));
		name.erase(name.find_last_not_of(' ') + 1);
		auto x = Indeterminate::lookup(name);
		if (!x)
			throw InputError("--eval: unknown symbol '" + name + "'");
		Scalar v;
		try
		{
			v = parse_scalar(value, {});
		}
		catch (ParseError const &e)
		{
			throw InputError("--eval: value of '" + name + "' " + e.what());
		}
		out[*x] = v.numerator().constant_value() / v.denominator().constant_value();
	}
	return out;
}

Scalar sub(Scalar const &s, Assignment const &a)
{
	return a.empty() ? s : s.substitute(a);
}

void substitute(Combination &c, Assignment const &a)
{
	Combination out;
	for (auto &[label, s] : c.terms)
		if (auto v = sub(s, a); !v.is_zero())
			out.terms.emplace_back(label, std::move(v));
	c = std::move(out);
}

void substitute(Report &r, Assignment const &a)
{
	for (auto &c : r.counterexamples)
	{
		substitute(c.lhs, a);
		substitute(c.rhs, a);
	}
}

void substitute(PairTable &t, Assignment const &a)
{
	for (auto &[k, v] : t)
		v = sub(v, a);
}

void substitute(StructureSpec &spec, Assignment const &a)
{
	std::visit(
	    [&](auto &s) {
		    using T = std::decay_t<decltype(s)>;
		    if constexpr (std::is_same_v<T, VAlphaTheta>)
			    s = {sub(s.alpha, a), sub(s.theta, a)};
		    else if constexpr (std::is_same_v<T, VGammaLambda>)
			    s.gamma = sub(s.gamma, a);
		    else if constexpr (std::is_same_v<T, WAlphaMuZeta>)
			    s = {sub(s.alpha, a), sub(s.mu, a), s.zeta};
		    else if constexpr (std::is_same_v<T, VirTheta>)
			    s.theta = sub(s.theta, a);
		    else
		    {
			    substitute(s.f, a);
			    if (s.g)
				    substitute(*s.g, a);
			    if (s.phi)
				    substitute(*s.phi, a);
		    }
	    },
	    spec.family);
}

LoadedSpec load(std::string const &path)
{
	if (path.empty())
		throw InputError("--spec is required");
	return load_spec(path);
}

StructureSpec structure(LoadedSpec const &s)
{
	if (!s.structure)
		throw InputError(s.source + ": a structure spec is required here, not a module");
	return *s.structure;
}

void warn_cost(std::size_t rank, std::int64_t radius, unsigned arity, double extra = 1)
{
	double cases = std::pow(double(2 * radius + 1), double(rank * arity)) * extra;
	if (cases > 1e6)
		std::cerr << "warning: about " << std::llround(cases)
		          << " cases; cost grows as (2r+1)^(rank*arity)\n";
}

void emit(Options const &o, json const &j, std::string const &text)
{
	if (o.format == "json")
		std::cout << j.dump(2) << "\n";
	else
		std::cout << text;
	if (!o.report.empty())
	{
		std::ofstream out(o.report);
		if (!out)
			throw InputError(o.report + ": cannot write report");
		out << j.dump(2) << "\n";
	}
}

std::string coefficient_text(Scalar const &c)
{
	if (c.numerator().size() > 1 || !c.is_polynomial())
		return "(" + c.to_string() + ")";
	return c.to_string();
}

std::string basis_label(GroupElement const &g)
{
	std::string s = embed(g).to_string();
	bool plain =
	    std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isalnum(ch); });
	return "L_" + (plain ? s : "{" + s + "}");
}

void append_term(std::string &out, Scalar const &c, std::string const &basis)
{
	if (c.is_zero())
		return;
	std::string piece = c == Scalar(1) ? basis
	                    : c == Scalar(-1) ? "-" + basis
	                                      : coefficient_text(c) + "·" + basis;
	if (out.empty())
		out = piece;
	else if (piece[0] == '-')
		out += " - " + piece.substr(1);
	else
		out += " + " + piece;
}

int cmd_verify(Options const &o)
{
	auto loaded = load(o.spec);
	auto a = parse_eval(o.eval);
	std::vector<Report> reports;
	json spec_json;
	if (o.identity == "module")
	{
		if (!loaded.module)
			throw InputError(loaded.source + ": --identity module needs a module_V, module_A "
			                                 "or module_B spec");
		warn_cost(loaded.rank, o.radius, 2);
		reports.push_back(check_module(*loaded.module, loaded.rank, o.radius, workers()));
		spec_json = {{"family", "module"}, {"rank", loaded.rank}};
	}
	else
	{
		auto spec = structure(loaded);
		spec_json = spec_to_json(spec);
		unsigned w = workers();
		if (o.identity == "left-symmetric")
		{
			warn_cost(spec.rank, o.radius, 3);
			reports.push_back(check_left_symmetric(spec, o.radius, w));
		}
		else if (o.identity == "novikov")
		{
			warn_cost(spec.rank, o.radius, 3);
			reports.push_back(check_novikov(spec, o.radius, w));
		}
		else if (o.identity == "sub-adjacent")
		{
			warn_cost(spec.rank, o.radius, 2);
			reports.push_back(check_sub_adjacent(spec, o.radius, w));
		}
		else if (o.identity == "graded-eqs")
		{
			warn_cost(spec.rank, o.radius, 3);
			reports = check_graded_equations(spec, o.radius, w);
		}
		else if (o.identity == "nongraded-eqs")
		{
			warn_cost(spec.rank, o.radius, 3, 3);
			reports = check_nongraded_equations(spec, o.radius, w);
		}
		else
		{
			warn_cost(spec.rank, o.radius, 3);
			reports = check_cocycle(spec, o.radius, w);
		}
	}
	for (auto &r : reports)
		substitute(r, a);
	bool passed = all_passed(reports);
	json j;
	j["schema_version"] = report_schema_version;
	j["kind"] = "verification";
	j["spec"] = spec_json;
	j["passed"] = passed;
	j["reports"] = json::array();
	std::string text;
	for (auto const &r : reports)
	{
		j["reports"].push_back(to_json(r));
		text += to_text(r);
	}
	text += std::string("passed: ") + (passed ? "true" : "false") + "\n";
	emit(o, j, text);
	return passed ? 0 : 1;
}

int cmd_classify(Options const &o)
{
	auto spec = structure(load(o.spec));
	auto a = parse_eval(o.eval);
	CustomTable table = std::holds_alternative<CustomTable>(spec.family)
	                        ? std::get<CustomTable>(spec.family)
	                        : table_of(spec, o.radius);
	FitResult fit;
	try
	{
		fit = identify(table, o.radius);
	}
	catch (ClassifyError const &e)
	{
		throw InputError(e.what());
	}
	for (auto &c : fit.candidates)
		substitute(c.spec, a);
	for (auto &p : fit.probe_log)
	{
		p.table_value = sub(p.table_value, a);
		if (p.model_value)
			p.model_value = sub(*p.model_value, a);
	}
	std::string text;
	for (auto const &c : fit.candidates)
		text += "candidate: " + describe(c.spec) + "\n";
	for (auto const &p : fit.probe_log)
		text += "probe " + p.family + " " + pair_key_string(p.input) +
		        ": table = " + p.table_value.to_string() + ", model = " +
		        (p.model_value ? p.model_value->to_string() : "-") + "\n";
	text += "candidates: " + std::to_string(fit.candidates.size()) + "\n";
	emit(o, to_json(fit), text);
	return fit.candidates.empty() ? 1 : 0;
}

int cmd_iso(Options const &o)
{
	auto s1 = structure(load(o.spec));
	if (o.spec2.empty())
		throw InputError("iso needs --spec2");
	auto s2 = structure(load(o.spec2));
	if (s1.rank != s2.rank)
		throw InputError(o.spec2 + ": rank " + std::to_string(s2.rank) +
		                 " does not match rank " + std::to_string(s1.rank) + " of " + o.spec);
	parse_eval(o.eval);
	auto r = are_isomorphic(s1, s2);
	std::string text = std::string("isomorphic: ") + (r.isomorphic ? "true" : "false") + "\n" +
	                   "witness: " + r.witness + "\n";
	for (auto const &s : r.assumptions)
		text += "assumption: " + s + "\n";
	emit(o, to_json(r), text);
	return r.isomorphic ? 0 : 1;
}

int cmd_cocycle(Options const &o)
{
	auto spec = structure(load(o.spec));
	auto a = parse_eval(o.eval);
	warn_cost(spec.rank, o.radius, 3);
	auto s = solve_cocycle(spec, o.radius);
	substitute(s.phi, a);
	std::string text = std::string("status: ") + status_name(s.status) + "\n" +
	                   "system: " + std::to_string(s.unknowns) + " unknowns, " +
	                   std::to_string(s.equations) + " equations";
	text += s.status == CocycleStatus::none ? "\n" : ", rank " + std::to_string(s.rank) + "\n";
	if (s.status != CocycleStatus::none)
		text += "free entries with a+b outside the window: " + std::to_string(s.free_outside) +
		        "\n";
	for (auto const &x : s.assumptions)
		text += "assumption: " + x + "\n";
	for (auto const &[k, v] : s.phi)
		if (!v.is_zero())
			text += "phi(" + pair_key_string(k) + ") = " + v.to_string() + "\n";
	emit(o, to_json(s), text);
	return s.status == CocycleStatus::none ? 1 : 0;
}

int cmd_affinize(Options const &o)
{
	auto spec = structure(load(o.spec));
	auto a = parse_eval(o.eval);
	if (o.check_jacobi)
	{
		warn_cost(spec.rank, o.radius, 3, std::pow(double(2 * o.t_radius + 1), 3));
		auto reports = check_jacobi(spec, o.radius, o.t_radius, workers());
		for (auto &r : reports)
			substitute(r, a);
		bool passed = all_passed(reports);
		json j;
		j["schema_version"] = report_schema_version;
		j["kind"] = "verification";
		j["spec"] = spec_to_json(spec);
		j["passed"] = passed;
		j["reports"] = json::array();
		std::string text;
		for (auto const &r : reports)
		{
			j["reports"].push_back(to_json(r));
			text += to_text(r);
		}
		text += std::string("passed: ") + (passed ? "true" : "false") + "\n";
		emit(o, j, text);
		return passed ? 0 : 1;
	}
	json j;
	j["schema_version"] = report_schema_version;
	j["kind"] = "affine-table";
	j["spec"] = spec_to_json(spec);
	j["entries"] = json::array();
	std::string text;
	auto w = window(spec.rank, o.radius);
	for (auto const &x : w)
		for (auto const &y : w)
			for (std::int64_t i = -o.t_radius; i <= o.t_radius; ++i)
				for (std::int64_t k = -o.t_radius; k <= o.t_radius; ++k)
				{
					auto br = try_affine_bracket(spec, aff(x, i), aff(y, k));
					if (!br)
						continue;
					AffElement e;
					for (auto const &[s, c] : br->terms())
						e.add(s, sub(c, a));
					text += "[" + aff(x, i).to_string() + ", " + aff(y, k).to_string() +
					        "] = " + e.to_string() + "\n";
					j["entries"].push_back(
					    {{"a", x.coords()}, {"i", i}, {"b", y.coords()}, {"j", k},
					     {"bracket", aff_to_json(e)}});
				}
	emit(o, j, text);
	return 0;
}

int cmd_table(Options const &o)
{
	auto spec = structure(load(o.spec));
	auto a = parse_eval(o.eval);
	bool shift = has_shift(spec), central = has_central(spec);
	json j;
	j["schema_version"] = report_schema_version;
	j["kind"] = "table";
	j["spec"] = spec_to_json(spec);
	if (auto z = zeta_of(spec))
		j["zeta"] = z->coords();
	j["entries"] = json::array();
	std::string text;
	auto w = window(spec.rank, o.radius);
	for (auto const &x : w)
		for (auto const &y : w)
		{
			auto f = try_f(spec, x, y);
			if (!f)
				continue;
			json e{{"a", x.coords()}, {"b", y.coords()}, {"f", sub(*f, a).to_string()}};
			std::string rhs;
			GroupElement s = x + y;
			append_term(rhs, sub(*f, a), basis_label(s));
			if (shift)
			{
				Scalar g = sub(g_of(spec, x, y), a);
				append_term(rhs, g,
				            s.is_zero() ? "L_zeta" : "L_{" + embed(s).to_string() + " + zeta}");
				e["g"] = g.to_string();
			}
			if (central)
			{
				Scalar p = sub(phi_of(spec, x, y), a);
				append_term(rhs, p, "K");
				e["phi"] = p.to_string();
			}
			text += basis_label(x) + "·" + basis_label(y) + " = " +
			        (rhs.empty() ? "0" : rhs) + "\n";
			j["entries"].push_back(std::move(e));
		}
	emit(o, j, text);
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Exact verification and classification of compatible left-symmetric "
	             "structures on high-rank Witt and Virasoro algebras"};
	app.require_subcommand(1);
	Options o;

	auto common = [&](CLI::App *c) {
		c->add_option("--spec", o.spec, "TOML spec file")->required();
		c->add_option("--radius", o.radius, "window radius")->check(CLI::NonNegativeNumber);
		c->add_option("--report", o.report, "write the JSON report to this path");
		c->add_option("--format", o.format, "stdout format")
		    ->check(CLI::IsMember({"text", "json"}));
		c->add_option("--eval", o.eval, "evaluate output scalars at sym=rat,...");
	};

	auto *verify = app.add_subcommand("verify", "check an identity on a window");
	common(verify);
	verify->add_option("--identity", o.identity, "identity to check")
	    ->required()
	    ->check(CLI::IsMember({"left-symmetric", "graded-eqs", "nongraded-eqs", "sub-adjacent",
	                           "novikov", "module", "cocycle"}));
	auto *classify = app.add_subcommand("classify", "identify the family of a table");
	common(classify);
	auto *iso = app.add_subcommand("iso", "decide isomorphism of two structures");
	common(iso);
	iso->add_option("--spec2", o.spec2, "second TOML spec file")->required();
	auto *cocycle = app.add_subcommand("cocycle", "solve for a central extension");
	common(cocycle);
	auto *affinize = app.add_subcommand("affinize", "affinization bracket and Jacobi check");
	common(affinize);
	affinize->add_flag("--check-jacobi", o.check_jacobi, "verify the Jacobi identity");
	affinize->add_option("--t-radius", o.t_radius, "t-degree radius")
	    ->check(CLI::NonNegativeNumber);
	auto *table = app.add_subcommand("table", "print structure constants");
	common(table);

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::CallForHelp const &e)
	{
		return app.exit(e);
	}
	catch (CLI::CallForAllHelp const &e)
	{
		return app.exit(e);
	}
	catch (CLI::ParseError const &e)
	{
		app.exit(e);
		return 2;
	}

	try
	{
		if (verify->parsed())
			return cmd_verify(o);
		if (classify->parsed())
			return cmd_classify(o);
		if (iso->parsed())
			return cmd_iso(o);
		if (cocycle->parsed())
			return cmd_cocycle(o);
		if (affinize->parsed())
			return cmd_affinize(o);
		return cmd_table(o);
	}
	catch (SpecError const &e)
	{
		std::cerr << "error: " << e.what() << "\n";
	}
	catch (InputError const &e)
	{
		std::cerr << "error: " << e.what() << "\n";
	}
	catch (SingularEvaluation const &e)
	{
		std::cerr << "error: --eval: " << e.what() << "\n";
	}
	catch (std::invalid_argument const &e)
	{
		std::cerr << "error: " << e.what() << "\n";
	}
	catch (std::out_of_range const &e)
	{
		std::cerr << "error: " << e.what() << "\n";
	}
	return 2;
}
