#pragma once

// Property suites run by `pwbifurc verify`. Each suite re-derives a family of
// closed-form claims numerically and reports one line per check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwbifurc/map_core.hpp"

namespace pwbifurc {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  MapParams params;  // parameters the suite actually used
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct VerifyOptions {
  /// When unset each suite uses its canonical parameters (nu = 0.5 for
  /// intervals/flip, 0.75 for chaos, 0.2 for stability, random for identity).
  std::optional<MapParams> params;
  std::size_t samples = 1000;
  std::uint64_t seed = 20240601;
};

const std::vector<std::string>& suite_names();

/// Throws Error(InvalidArgument) for an unknown suite and Error(WrongRegime)
/// when the parameters do not belong to the regime the suite is about.
SuiteReport run_suite(const std::string& suite, const VerifyOptions& options = {});

/// Central difference of order 1..3 with one Richardson step, step h.
template <class F>
double richardson_derivative(F&& fn, double x, double h, int order);

}  // namespace pwbifurc

#include "pwbifurc/detail/richardson.hpp"
