#pragma once

#include "clsas/parser.hpp"
#include "clsas/structures.hpp"
#include "clsas/verifier.hpp"

#include <json.hpp>
#include <toml.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace clsas {

/// Malformed spec file. The message starts with "file:line:col: ".
class SpecError : public std::runtime_error
{
  public:
	using std::runtime_error::runtime_error;
};

/// A parsed spec file: a structure, or a module for the module axioms.
struct LoadedSpec
{
	std::string source;
	std::size_t rank = 0;
	std::optional<StructureSpec> structure;
	std::optional<ModuleSpec> module;
};

namespace detail {

inline std::string where(std::string const &source, toml::source_region const &r)
{
	return source + ":" + std::to_string(r.begin.line) + ":" + std::to_string(r.begin.column);
}

class SpecReader
{
  public:
	SpecReader(toml::table const &t, std::string source, std::filesystem::path dir)
	    : t_(t), source_(std::move(source)), dir_(std::move(dir))
	{}

	[[noreturn]] void fail(toml::node const *n, std::string const &msg) const
	{
		throw SpecError((n ? where(source_, n->source()) : source_) + ": " + msg);
	}

	toml::node const *node(std::string_view key)
	{
		used_.insert(std::string(key));
		return t_.get(key);
	}

	toml::node const &need(std::string_view key)
	{
		auto const *n = node(key);
		if (!n)
			throw SpecError(source_ + ": missing key '" + std::string(key) + "'");
		return *n;
	}

	std::string string(std::string_view key)
	{
		auto const &n = need(key);
		if (auto v = n.value<std::string>(); v && n.is_string())
			return *v;
		fail(&n, "'" + std::string(key) + "' must be a string");
	}

	std::size_t rank()
	{
		auto const &n = need("rank");
		auto v = n.value<std::int64_t>();
		if (!n.is_integer() || !v || *v < 1)
			fail(&n, "'rank' must be a positive integer");
		if (std::size_t(*v) + standard_parameters().size() > max_symbols)
			fail(&n, "rank " + std::to_string(*v) + " exceeds the symbol capacity");
		return std::size_t(*v);
	}

	/// Parameter given as an expression string or an integer.
	Scalar parameter(std::string_view key)
	{
		auto const &n = need(key);
		if (n.is_integer())
			return Scalar(Rational(static_cast<long>(*n.value<std::int64_t>())));
		if (!n.is_string())
			fail(&n, "'" + std::string(key) + "' must be an expression string");
		try
		{
			return parse_scalar(*n.value<std::string>(), symbols_);
		}
		catch (ParseError const &e)
		{
			fail(&n, "in '" + std::string(key) + "': " + e.what());
		}
	}

	GroupElement group(std::string_view key, std::size_t rank)
	{
		auto const &n = need(key);
		auto const *arr = n.as_array();
		if (!arr)
			fail(&n, "'" + std::string(key) + "' must be an integer array");
		std::vector<std::int64_t> c;
		for (auto const &x : *arr)
		{
			if (!x.is_integer())
				fail(&x, "'" + std::string(key) + "' entries must be integers");
			c.push_back(*x.value<std::int64_t>());
		}
		if (c.size() != rank)
			fail(&n, "'" + std::string(key) + "' has " + std::to_string(c.size()) +
			             " coordinates but rank is " + std::to_string(rank));
		return GroupElement(std::move(c));
	}

	CustomTable custom(std::size_t rank)
	{
		auto const &n = need("table");
		if (!n.is_string())
			fail(&n, "'table' must be a path to a JSON file");
		std::filesystem::path p = *n.value<std::string>();
		if (p.is_relative())
			p = dir_ / p;
		std::ifstream in(p);
		if (!in)
			fail(&n, "cannot read table file " + p.string());
		nlohmann::json j;
		try
		{
			j = nlohmann::json::parse(in);
		}
		catch (nlohmann::json::parse_error const &e)
		{
			throw SpecError(p.string() + ":byte " + std::to_string(e.byte) + ": " + e.what());
		}
		return table_from_json(j, p.string(), rank);
	}

	void declare(std::size_t rank) { symbols_ = declare_session(rank); }

	void reject_unknown() const
	{
		for (auto const &[k, v] : t_)
			if (!used_.count(std::string(k.str())))
				throw SpecError(where(source_, k.source()) + ": unknown key '" +
				                std::string(k.str()) + "'");
	}

	PairTable pairs_from_json(nlohmann::json const &j, std::string const &ctx,
	                          std::size_t rank) const
	{
		if (!j.is_object())
			throw SpecError(ctx + ": expected an object of \"a|b\" keys");
		PairTable t;
		for (auto const &[key, val] : j.items())
		{
			std::string at = ctx + ": key \"" + key + "\"";
			auto bar = key.find('|');
			if (bar == std::string::npos)
				throw SpecError(at + ": expected \"a|b\"");
			auto a = coords_from(key.substr(0, bar), at, rank);
			auto b = coords_from(key.substr(bar + 1), at, rank);
			if (!val.is_string() && !val.is_number_integer())
				throw SpecError(at + ": value must be an expression string");
			std::string text = val.is_string() ? val.get<std::string>()
			                                   : std::to_string(val.get<std::int64_t>());
			try
			{
				t[{a, b}] = parse_scalar(text, symbols_);
			}
			catch (ParseError const &e)
			{
				throw SpecError(at + ": " + e.what());
			}
		}
		return t;
	}

	CustomTable table_from_json(nlohmann::json const &j, std::string const &file,
	                            std::size_t rank)
	{
		if (!j.is_object() || !j.contains("f"))
			throw SpecError(file + ": table must be an object with an \"f\" map");
		for (auto const &[k, v] : j.items())
			if (k != "f" && k != "g" && k != "zeta" && k != "phi")
				throw SpecError(file + ": unknown key \"" + k + "\"");
		CustomTable t;
		t.f = pairs_from_json(j["f"], file + ": f", rank);
		if (j.contains("g"))
			t.g = pairs_from_json(j["g"], file + ": g", rank);
		if (j.contains("phi"))
			t.phi = pairs_from_json(j["phi"], file + ": phi", rank);
		if (j.contains("zeta"))
		{
			auto const &z = j["zeta"];
			if (!z.is_array() || z.size() != rank)
				throw SpecError(file + ": zeta must be an integer array of length " +
				                std::to_string(rank));
			std::vector<std::int64_t> c;
			for (auto const &x : z)
			{
				if (!x.is_number_integer())
					throw SpecError(file + ": zeta entries must be integers");
				c.push_back(x.get<std::int64_t>());
			}
			t.zeta = GroupElement(std::move(c));
		}
		return t;
	}

  private:
	static GroupElement coords_from(std::string const &s, std::string const &at,
	                                std::size_t rank)
	{
		std::vector<std::int64_t> c;
		std::stringstream ss(s);
		std::string part;
		while (std::getline(ss, part, ','))
		{
			std::size_t used = 0;
			try
			{
				c.push_back(std::stoll(part, &used));
			}
			catch (std::exception const &)
			{
				used = 0;
			}
			if (used == 0 || part.find_first_not_of(" ", used) != std::string::npos)
				throw SpecError(at + ": bad coordinate '" + part + "'");
		}
		if (c.size() != rank)
			throw SpecError(at + ": " + std::to_string(c.size()) +
			                " coordinates but rank is " + std::to_string(rank));
		return GroupElement(std::move(c));
	}

	toml::table const &t_;
	std::string source_;
	std::filesystem::path dir_;
	std::vector<Indeterminate> symbols_;
	std::set<std::string> used_;
};

} // namespace detail

/**
 * Parses a spec from TOML text. Keys: family, rank, the family's parameters
 * (alpha, theta, gamma, mu, beta as expression strings; lambda, zeta as
 * integer arrays) and for family "custom" a JSON table file
 * {"f": {"a|b": expr}, "g": {...}, "zeta": [..], "phi": {...}} resolved
 * against dir. Families module_V, module_A and module_B describe modules.
 */
inline LoadedSpec parse_spec(std::string_view text, std::string const &source,
                             std::filesystem::path const &dir = ".")
{
	toml::table t;
	try
	{
		t = toml::parse(text, source);
	}
	catch (toml::parse_error const &e)
	{
		throw SpecError(detail::where(source, e.source()) + ": " + std::string(e.description()));
	}
	detail::SpecReader r(t, source, dir);
	LoadedSpec out;
	out.source = source;
	std::string family = r.string("family");
	out.rank = r.rank();
	r.declare(out.rank);
	std::size_t rank = out.rank;

	if (family == "V_alpha_theta")
		out.structure = v_alpha_theta(rank, r.parameter("alpha"), r.parameter("theta"));
	else if (family == "V_gamma_lambda")
		out.structure = v_gamma_lambda(r.parameter("gamma"), r.group("lambda", rank));
	else if (family == "W_alpha_mu_zeta")
		out.structure =
		    w_alpha_mu_zeta(r.parameter("alpha"), r.parameter("mu"), r.group("zeta", rank));
	else if (family == "Vir_theta")
		out.structure = vir_theta(rank, r.parameter("theta"));
	else if (family == "custom")
		out.structure = StructureSpec{rank, r.custom(rank)};
	else if (family == "module_V")
		out.module = VModule{r.parameter("alpha"), r.parameter("beta")};
	else if (family == "module_A")
		out.module = AModule{r.parameter("gamma")};
	else if (family == "module_B")
		out.module = BModule{r.parameter("gamma")};
	else
		r.fail(t.get("family"), "unknown family '" + family + "'");
	r.reject_unknown();
	return out;
}

inline LoadedSpec load_spec(std::filesystem::path const &path)
{
	std::ifstream in(path);
	if (!in)
		throw SpecError(path.string() + ": cannot open spec file");
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_spec(ss.str(), path.string(), path.parent_path());
}

} // namespace clsas
