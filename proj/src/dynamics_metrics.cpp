#include "pwbifurc/dynamics_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pwbifurc/error.hpp"
#include "pwbifurc/induced_map.hpp"

namespace pwbifurc {

LyapunovEstimate lyapunov_exponent(double x0, const SystemConfig& config, std::size_t burn_in, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Lyapunov estimate needs n >= 1");
  double x = x0;
  for (std::size_t i = 0; i < burn_in; ++i) x = eval_map(x, config);
  LyapunovEstimate est;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x == config.mu) ++est.boundary_hits;
    sum += std::log(std::abs(map_derivative(x, config)));
    x = eval_map(x, config);
  }
  est.exponent = sum / static_cast<double>(n);
  est.samples = n;
  return est;
}

DetectedPeriod detect_period(std::span<const double> points, double tol, std::size_t max_period) {
  if (max_period == 0) throw Error(ErrorCode::InvalidArgument, "max_period must be >= 1");
  if (points.size() < 4 * max_period) {
    std::ostringstream os;
    os << points.size() << " points cannot resolve periods up to " << max_period;
    throw Error(ErrorCode::InsufficientData, os.str());
  }
  for (std::size_t period = 1; period <= max_period; ++period) {
    bool matches = true;
    for (std::size_t i = 0; i + period < points.size(); ++i) {
      // Negated form so that NaN never matches.
      if (!(std::abs(points[i + period] - points[i]) <= tol)) {
        matches = false;
        break;
      }
    }
    if (matches) return period;
  }
  return std::nullopt;
}

AttractorSample attractor_sample(const SystemConfig& config, const AttractorOptions& options) {
  require_well_posed(config);
  const double tol = options.tol.value_or(1e-9 * config.mu);
  double x = options.x0.value_or(config.params.nu * config.mu);
  for (std::size_t i = 0; i < options.burn_in; ++i) x = eval_map(x, config);

  AttractorSample sample;
  sample.mu = config.mu;
  sample.points.reserve(options.n_keep);
  double sum = 0.0;
  for (std::size_t i = 0; i < options.n_keep; ++i) {
    sample.points.push_back(x);
    if (x == config.mu) ++sample.boundary_hits;
    sum += std::log(std::abs(map_derivative(x, config)));
    x = eval_map(x, config);
  }
  sample.lyapunov = options.n_keep > 0 ? sum / static_cast<double>(options.n_keep) : 0.0;
  sample.period = detect_period(sample.points, tol, options.max_period);
  return sample;
}

ReducedOrbit reduced_orbit(double lambda, int k, const MapParams& params, double z0, std::size_t burn_in,
                           std::size_t n_keep, EscapePolicy policy) {
  constexpr double kSlack = 1e-9;
  constexpr int kMaxRescale = 4096;
  const ReducedMap g(params, k);
  const double nu = params.nu;
  if (!(z0 >= nu - kSlack && z0 <= 1.0 + kSlack)) throw Error(ErrorCode::OutOfDomain, "z0 outside [nu, 1]");

  ReducedOrbit orbit;
  orbit.points.reserve(n_keep);
  orbit.min_abs_derivative = std::numeric_limits<double>::infinity();
  double z = std::min(std::max(z0, nu), 1.0);
  double sum = 0.0;
  const std::size_t total = burn_in + n_keep;
  for (std::size_t i = 0; i < total; ++i) {
    const bool keep = i >= burn_in;
    if (keep) orbit.points.push_back(z);
    if (z >= 1.0) {
      std::ostringstream os;
      os << "iterate " << i << " reached the singular point z = 1";
      throw Error(ErrorCode::OrbitEscaped, os.str());
    }
    double slope = g.dz(z, lambda, 1);
    double next = g.value(z, lambda);
    if (policy == EscapePolicy::Reinject) {
      int shift = 0;
      while (next < nu && next > 0.0 && shift < kMaxRescale) {
        next /= nu;
        ++shift;
      }
      while (next > 1.0 && shift > -kMaxRescale) {
        next *= nu;
        --shift;
      }
      if (!(next >= nu && next <= 1.0)) {
        std::ostringstream os;
        os << "iterate " << i + 1 << " = " << next << " could not be rescaled into [nu, 1]";
        throw Error(ErrorCode::OrbitEscaped, os.str());
      }
      if (shift != 0) {
        slope *= std::pow(nu, -shift);
        ++orbit.reinjections;
      }
    } else {
      if (!(next >= nu - kSlack && next <= 1.0 + kSlack)) {
        std::ostringstream os;
        os << "iterate " << i + 1 << " = " << next << " left [nu, 1] (lambda=" << lambda << ", k=" << k << ")";
        throw Error(ErrorCode::OrbitEscaped, os.str());
      }
      next = std::min(std::max(next, nu), 1.0);
    }
    if (keep) {
      const double a = std::abs(slope);
      sum += std::log(a);
      orbit.min_abs_derivative = std::min(orbit.min_abs_derivative, a);
    }
    z = next;
  }
  orbit.lyapunov = n_keep > 0 ? sum / static_cast<double>(n_keep) : 0.0;
  return orbit;
}

double g_orbit_lyapunov(double lambda, int k, const MapParams& params, double z0, std::size_t burn_in, std::size_t n,
                        EscapePolicy policy) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Lyapunov estimate needs n >= 1");
  return reduced_orbit(lambda, k, params, z0, burn_in, n, policy).lyapunov;
}

}  // namespace pwbifurc
