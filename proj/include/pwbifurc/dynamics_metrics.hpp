#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pwbifurc/map_core.hpp"

namespace pwbifurc {

struct LyapunovEstimate {
  double exponent = 0.0;
  std::size_t samples = 0;
  /// Iterates that landed exactly on x = mu; their derivative is taken from
  /// the linear side (nu).
  std::size_t boundary_hits = 0;
};

/// (1/n) sum ln|f'(x_i)| over n iterates following `burn_in` discarded ones.
LyapunovEstimate lyapunov_exponent(double x0, const SystemConfig& config, std::size_t burn_in, std::size_t n);

/// Smallest period P <= max_period, or nullopt for an orbit that is not
/// periodic at that resolution ("Chaotic").
using DetectedPeriod = std::optional<std::size_t>;

/// Requires points.size() >= 4 * max_period (Error(InsufficientData)).
/// P is accepted when |x[i+P] - x[i]| <= tol for every index of the sequence.
DetectedPeriod detect_period(std::span<const double> points, double tol, std::size_t max_period);

struct AttractorOptions {
  std::size_t burn_in = 10000;
  std::size_t n_keep = 1000;
  std::size_t max_period = 64;
  /// Absolute period tolerance; defaults to 1e-9 * mu.
  std::optional<double> tol;
  /// Seed; defaults to nu * mu, the point realising the maximal excursion.
  std::optional<double> x0;
};

struct AttractorSample {
  double mu = 0.0;
  std::vector<double> points;
  DetectedPeriod period;
  double lyapunov = 0.0;
  std::size_t boundary_hits = 0;
};

/// Requires a well-posed config.
AttractorSample attractor_sample(const SystemConfig& config, const AttractorOptions& options = {});

/// What to do when an iterate of the reduced map leaves [nu, 1].
enum class EscapePolicy {
  /// Throw Error(OrbitEscaped) once an iterate is more than 1e-9 outside.
  Strict,
  /// Rescale the iterate by the power of nu that puts it back in [nu, 1];
  /// the step then acts as G_{k+j}, exactly as the return of f does when
  /// the excursion is j steps shorter.
  Reinject,
};

struct ReducedOrbit {
  std::vector<double> points;  // kept iterates
  double lyapunov = 0.0;       // mean log-multiplier over the kept steps
  double min_abs_derivative = 0.0;
  std::size_t reinjections = 0;
};

ReducedOrbit reduced_orbit(double lambda, int k, const MapParams& params, double z0, std::size_t burn_in,
                           std::size_t n_keep, EscapePolicy policy = EscapePolicy::Strict);

double g_orbit_lyapunov(double lambda, int k, const MapParams& params, double z0, std::size_t burn_in, std::size_t n,
                        EscapePolicy policy = EscapePolicy::Strict);

}  // namespace pwbifurc
