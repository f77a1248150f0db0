#pragma once

#include "clsas/scalar.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace clsas {

inline constexpr int report_schema_version = 1;

/// A rendered linear combination: (label, coefficient) pairs in basis
/// order. A single unlabeled term is a plain scalar value.
struct Combination
{
	std::vector<std::pair<std::string, Scalar>> terms;

	static Combination scalar(Scalar s)
	{
		Combination c;
		if (!s.is_zero())
			c.terms.emplace_back("", std::move(s));
		return c;
	}

	bool is_zero() const { return terms.empty(); }

	std::string to_string() const
	{
		if (terms.empty())
			return "0";
		std::string out;
		for (auto const &[label, coeff] : terms)
		{
			std::string c = coeff.to_string();
			std::string piece;
			if (label.empty())
				piece = c;
			else if (coeff == Scalar(1))
				piece = label;
			else if (coeff == Scalar(-1))
				piece = "-" + label;
			else if (coeff.numerator().size() > 1 || !coeff.is_polynomial())
				piece = "(" + c + ")*" + label;
			else
				piece = c + "*" + label;
			if (out.empty())
				out = piece;
			else if (piece[0] == '-')
				out += " - " + piece.substr(1);
			else
				out += " + " + piece;
		}
		return out;
	}

	friend bool operator==(Combination const &a, Combination const &b)
	{
		if (a.terms.size() != b.terms.size())
			return false;
		for (std::size_t i = 0; i < a.terms.size(); ++i)
			if (a.terms[i].first != b.terms[i].first ||
			    !(a.terms[i].second == b.terms[i].second))
				return false;
		return true;
	}
};

struct Counterexample
{
	/// Group elements as coordinate vectors; t-degrees and similar integer
	/// indices appear as length-1 vectors.
	std::vector<std::vector<std::int64_t>> inputs;
	Combination lhs;
	Combination rhs;
	/// Set when the failure is a named constraint rather than an equation.
	std::string note;
};

/// Outcome of checking one identity exactly on a finite window.
struct Report
{
	std::string identity;
	std::size_t rank = 0;
	std::int64_t radius = 0;
	std::uint64_t cases_checked = 0;
	std::uint64_t skipped = 0;
	bool passed = true;
	std::vector<std::string> assumptions;
	std::vector<Counterexample> counterexamples;

	void add_failure(Counterexample c)
	{
		passed = false;
		counterexamples.push_back(std::move(c));
	}

	void sort_counterexamples()
	{
		std::stable_sort(counterexamples.begin(), counterexamples.end(),
		                 [](Counterexample const &a, Counterexample const &b) {
			                 return a.inputs < b.inputs;
		                 });
	}
};

inline bool all_passed(std::vector<Report> const &reports)
{
	return std::all_of(reports.begin(), reports.end(),
	                   [](Report const &r) { return r.passed; });
}

inline nlohmann::ordered_json to_json(Report const &r)
{
	nlohmann::ordered_json j;
	j["schema_version"] = report_schema_version;
	j["identity"] = r.identity;
	j["rank"] = r.rank;
	j["radius"] = r.radius;
	j["cases_checked"] = r.cases_checked;
	j["skipped"] = r.skipped;
	j["passed"] = r.passed;
	j["assumptions"] = r.assumptions;
	auto cex = nlohmann::ordered_json::array();
	for (auto const &c : r.counterexamples)
	{
		nlohmann::ordered_json e;
		e["inputs"] = c.inputs;
		e["lhs"] = c.lhs.to_string();
		e["rhs"] = c.rhs.to_string();
		if (!c.note.empty())
			e["note"] = c.note;
		cex.push_back(std::move(e));
	}
	j["counterexamples"] = std::move(cex);
	return j;
}

inline std::string to_text(Report const &r)
{
	std::string s = r.identity + ": " + (r.passed ? "passed" : "FAILED") +
	                " (rank " + std::to_string(r.rank) + ", radius " +
	                std::to_string(r.radius) + ", " +
	                std::to_string(r.cases_checked) + " cases checked";
	if (r.skipped)
		s += ", " + std::to_string(r.skipped) + " skipped";
	s += ")\n";
	for (auto const &a : r.assumptions)
		s += "  assumption: " + a + "\n";
	for (auto const &c : r.counterexamples)
	{
		s += "  counterexample";
		for (auto const &in : c.inputs)
		{
			s += " (";
			for (std::size_t i = 0; i < in.size(); ++i)
				s += (i ? "," : "") + std::to_string(in[i]);
			s += ")";
		}
		if (!c.note.empty())
			s += " [" + c.note + "]";
		s += ": lhs = " + c.lhs.to_string() + ", rhs = " + c.rhs.to_string() + "\n";
	}
	return s;
}

} // namespace clsas
