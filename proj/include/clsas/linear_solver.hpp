#pragma once

#include "clsas/scalar.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace clsas {

/// sum_j coeffs[j] * x_j = rhs
struct LinearEquation
{
	std::map<std::size_t, Scalar> coeffs;
	Scalar rhs;
};

enum class SolveStatus
{
	inconsistent,
	unique,
	underdetermined
};

struct LinearSolution
{
	SolveStatus status = SolveStatus::inconsistent;
	/// Values of unknowns the system determines; nullopt for the rest.
	std::vector<std::optional<Scalar>> values;
	std::size_t rank = 0;
};

namespace detail {

class UnionFind
{
  public:
	explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
	std::size_t find(std::size_t x)
	{
		while (parent_[x] != x)
			x = parent_[x] = parent_[parent_[x]];
		return x;
	}
	void join(std::size_t a, std::size_t b)
	{
		a = find(a);
		b = find(b);
		if (a != b)
			parent_[std::max(a, b)] = std::min(a, b);
	}

  private:
	std::vector<std::size_t> parent_;
};

/// Incremental Gauss-Jordan elimination; pivots on the lowest column.
class EchelonForm
{
  public:
	/// False if the equation contradicts the ones already added.
	bool add(LinearEquation e)
	{
		for (auto const &[col, row] : rows_)
		{
			auto it = e.coeffs.find(col);
			if (it == e.coeffs.end())
				continue;
			Scalar c = it->second;
			e.coeffs.erase(it);
			for (auto const &[j, v] : row.coeffs)
				if (j != col)
					accumulate(e.coeffs, j, -(c * v));
			e.rhs -= c * row.rhs;
		}
		if (e.coeffs.empty())
			return e.rhs.is_zero();
		auto [pivot, lead] = *e.coeffs.begin();
		Scalar inv = lead.inverse();
		for (auto &[j, v] : e.coeffs)
			v *= inv;
		e.rhs *= inv;
		for (auto &[col, row] : rows_)
		{
			auto it = row.coeffs.find(pivot);
			if (it == row.coeffs.end())
				continue;
			Scalar c = it->second;
			row.coeffs.erase(it);
			for (auto const &[j, v] : e.coeffs)
				if (j != pivot)
					accumulate(row.coeffs, j, -(c * v));
			row.rhs -= c * e.rhs;
		}
		rows_.emplace(pivot, std::move(e));
		return true;
	}

	std::size_t rank() const { return rows_.size(); }

	/// Value of x_col if the reduced system pins it.
	std::optional<Scalar> value(std::size_t col) const
	{
		auto it = rows_.find(col);
		if (it == rows_.end() || it->second.coeffs.size() != 1)
			return std::nullopt;
		return it->second.rhs;
	}

  private:
	static void accumulate(std::map<std::size_t, Scalar> &m, std::size_t j, Scalar v)
	{
		auto [it, fresh] = m.emplace(j, v);
		if (!fresh)
		{
			it->second += v;
			if (it->second.is_zero())
				m.erase(it);
		}
	}

	std::map<std::size_t, LinearEquation> rows_;
};

} // namespace detail

/// Exact solution of a sparse linear system over the Scalar field. The
/// unknowns split into independent blocks (connected through shared
/// equations), and each block is eliminated separately.
inline LinearSolution solve_linear(std::size_t unknowns, std::vector<LinearEquation> const &eqs)
{
	detail::UnionFind uf(unknowns);
	for (auto const &e : eqs)
		for (auto const &[j, v] : e.coeffs)
			uf.join(e.coeffs.begin()->first, j);

	LinearSolution out;
	out.values.assign(unknowns, std::nullopt);
	std::map<std::size_t, detail::EchelonForm> blocks;
	for (auto const &e : eqs)
	{
		if (e.coeffs.empty())
		{
			if (!e.rhs.is_zero())
				return out;
			continue;
		}
		auto &block = blocks[uf.find(e.coeffs.begin()->first)];
		if (!block.add(e))
			return out;
	}
	bool all = true;
	for (std::size_t j = 0; j < unknowns; ++j)
	{
		auto it = blocks.find(uf.find(j));
		if (it != blocks.end())
			out.values[j] = it->second.value(j);
		all = all && out.values[j].has_value();
	}
	for (auto const &[root, block] : blocks)
		out.rank += block.rank();
	out.status = all ? SolveStatus::unique : SolveStatus::underdetermined;
	return out;
}

} // namespace clsas
