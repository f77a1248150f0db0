#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clsas {

/// Maximum number of distinct indeterminates in one process. Exponent
/// vectors are stored densely in fixed-size arrays of this length.
inline constexpr std::size_t max_symbols = 16;

class SymbolError : public std::runtime_error
{
  public:
	using std::runtime_error::runtime_error;
};

/**
 * Process-wide registry of indeterminates. The declaration order is the
 * variable order used by the graded-lexicographic term order, so callers
 * that want reproducible canonical forms should declare symbols in a fixed
 * order at startup (see declare_session()).
 */
class SymbolTable
{
  public:
	struct Info
	{
		std::string name;
		bool grading;
	};

	static SymbolTable &instance()
	{
		static SymbolTable table;
		return table;
	}

	std::size_t intern(std::string_view name, bool grading)
	{
		{
			std::shared_lock lock(mutex_);
			if (auto it = index_.find(std::string(name)); it != index_.end())
				return check_kind(it->second, grading);
		}
		std::unique_lock lock(mutex_);
		if (auto it = index_.find(std::string(name)); it != index_.end())
			return check_kind(it->second, grading);
		if (infos_.size() >= max_symbols)
			throw SymbolError("too many indeterminates (limit " +
			                  std::to_string(max_symbols) + ")");
		infos_.push_back({std::string(name), grading});
		index_.emplace(std::string(name), infos_.size() - 1);
		return infos_.size() - 1;
	}

	std::optional<std::size_t> find(std::string_view name) const
	{
		std::shared_lock lock(mutex_);
		auto it = index_.find(std::string(name));
		if (it == index_.end())
			return std::nullopt;
		return it->second;
	}

	Info info(std::size_t index) const
	{
		std::shared_lock lock(mutex_);
		return infos_.at(index);
	}

	std::size_t size() const
	{
		std::shared_lock lock(mutex_);
		return infos_.size();
	}

  private:
	SymbolTable() = default;

	std::size_t check_kind(std::size_t index, bool grading) const
	{
		if (infos_[index].grading != grading)
			throw SymbolError("symbol '" + infos_[index].name +
			                  "' already declared with a different kind");
		return index;
	}

	mutable std::shared_mutex mutex_;
	std::vector<Info> infos_;
	std::unordered_map<std::string, std::size_t> index_;
};

/// A named variable of the rational function field. Grading symbols
/// e1..eN stand for a Z-basis of the grading group; everything else is a
/// structure parameter.
class Indeterminate
{
  public:
	static Indeterminate grading(std::size_t k)
	{
		if (k == 0)
			throw SymbolError("grading symbols are numbered from 1");
		return Indeterminate(
		    SymbolTable::instance().intern("e" + std::to_string(k), true));
	}

	static Indeterminate parameter(std::string_view name)
	{
		if (is_grading_name(name))
			throw SymbolError("'" + std::string(name) +
			                  "' is reserved for grading symbols");
		return Indeterminate(SymbolTable::instance().intern(name, false));
	}

	/// Looks up an already declared symbol.
	static std::optional<Indeterminate> lookup(std::string_view name)
	{
		if (auto i = SymbolTable::instance().find(name))
			return Indeterminate(*i);
		return std::nullopt;
	}

	static bool is_grading_name(std::string_view name)
	{
		if (name.size() < 2 || name[0] != 'e' || name[1] == '0')
			return false;
		for (std::size_t i = 1; i < name.size(); ++i)
			if (name[i] < '0' || name[i] > '9')
				return false;
		return true;
	}

	std::size_t index() const { return index_; }
	std::string name() const { return SymbolTable::instance().info(index_).name; }
	bool is_grading() const { return SymbolTable::instance().info(index_).grading; }

	friend bool operator==(Indeterminate, Indeterminate) = default;
	friend auto operator<=>(Indeterminate, Indeterminate) = default;

  private:
	explicit Indeterminate(std::size_t index) : index_(index) {}
	std::size_t index_;
};

/// Parameter names recognised by spec files, in their canonical
/// declaration order.
inline const std::vector<std::string> &standard_parameters()
{
	static const std::vector<std::string> names = {"alpha", "beta", "theta",
	                                               "gamma", "mu"};
	return names;
}

/// Declares e1..e{rank} followed by the standard parameters and returns
/// them in that order. Calling this first in a process fixes the term
/// order independently of later parsing order.
inline std::vector<Indeterminate> declare_session(std::size_t rank)
{
	std::vector<Indeterminate> out;
	for (std::size_t k = 1; k <= rank; ++k)
		out.push_back(Indeterminate::grading(k));
	for (auto const &name : standard_parameters())
		out.push_back(Indeterminate::parameter(name));
	return out;
}

} // namespace clsas
