#pragma once

#include <stdexcept>
#include <string>

namespace bep {

/// Two fields or a field and a symbol table were built on different grids.
class GridMismatch : public std::invalid_argument {
 public:
  explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration cannot be turned into a runnable experiment (CLI exit code 3).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested experiment cannot run on the available lattice, memory or
/// validated time horizon (CLI exit code 1).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Terminal solver diagnostics.
class SolverError : public std::runtime_error {
 public:
  enum class Kind { cfl_violation, growth_guard, non_finite };

  SolverError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace bep
