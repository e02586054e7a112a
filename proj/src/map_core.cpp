#include "pwbifurc/map_core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "pwbifurc/error.hpp"

namespace pwbifurc {

namespace {

std::string describe(const MapParams& params) {
  std::ostringstream os;
  os << "nu=" << params.nu << " e=" << params.e << " p=" << params.p << " q=" << params.q;
  return os.str();
}

}  // namespace

MapParams MapParams::make(double nu, double e, int p, int q) {
  MapParams params{nu, e, p, q};
  validate(params);
  return params;
}

bool is_valid(const MapParams& params) noexcept {
  return std::isfinite(params.nu) && std::isfinite(params.e) && params.nu > 0.0 && params.nu < 1.0 &&
         params.e > 0.0 && params.q >= 1 && params.p > params.q && std::gcd(params.p, params.q) == 1;
}

void validate(const MapParams& params) {
  if (!is_valid(params)) {
    throw Error(ErrorCode::InvalidParams,
                "require 0 < nu < 1, e > 0, p > q >= 1, gcd(p,q) = 1; got " + describe(params));
  }
}

double rational_power(double base, double exponent) {
  if (base == 0.0) return 0.0;
  return std::exp(exponent * std::log(base));
}

SystemConfig SystemConfig::make(const MapParams& params, double mu) {
  validate(params);
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite");
  return SystemConfig{params, mu};
}

double SystemConfig::well_posedness_bound() const {
  const double r = params.exponent();
  return rational_power(mu, 1.0 - r) * (1.0 - params.nu * params.nu) / rational_power(1.0 - params.nu, r);
}

bool SystemConfig::well_posed() const { return mu > 0.0 && params.e > well_posedness_bound(); }

void require_well_posed(const SystemConfig& config) {
  if (!config.well_posed()) {
    std::ostringstream os;
    os << "mu=" << config.mu << " with " << describe(config.params)
       << " violates e > mu^((p-q)/p)(1-nu^2)/(1-nu)^(q/p)";
    throw Error(ErrorCode::IllPosed, os.str());
  }
}

const char* to_string(Region region) noexcept {
  switch (region) {
    case Region::I: return "RegionI";
    case Region::II: return "RegionII";
    case Region::Boundary: return "Boundary";
  }
  return "Unknown";
}

double eval_map(double x, const SystemConfig& config) {
  const MapParams& pr = config.params;
  if (x >= config.mu) return pr.nu * x;
  return pr.nu * x + pr.e * rational_power(config.mu - x, pr.exponent());
}

Region classify_region(double x, const SystemConfig& config, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "region tolerance must be >= 0");
  const double d = x - config.mu;
  if (std::abs(d) <= tol) return Region::Boundary;
  return d < 0.0 ? Region::I : Region::II;
}

Interval trapping_region(const SystemConfig& config) {
  if (!(config.mu > 0.0)) throw Error(ErrorCode::NonPositiveMu, "trapping region needs mu > 0");
  return Interval{config.params.nu * config.mu, config.mu};
}

Orbit iterate_orbit(double x0, const SystemConfig& config, std::size_t n, double region_tol) {
  Orbit orbit{x0, config, {}};
  orbit.points.reserve(n + 1);
  double x = x0;
  orbit.points.push_back({x, classify_region(x, config, region_tol)});
  for (std::size_t i = 0; i < n; ++i) {
    x = eval_map(x, config);
    orbit.points.push_back({x, classify_region(x, config, region_tol)});
  }
  return orbit;
}

double map_derivative(double x, const SystemConfig& config, Approach at_boundary) {
  const MapParams& pr = config.params;
  if (x > config.mu) return pr.nu;
  if (x == config.mu) {
    if (at_boundary == Approach::Singular) {
      throw Error(ErrorCode::SingularDerivative, "derivative unbounded at x = mu from the singular side");
    }
    return pr.nu;
  }
  const double r = pr.exponent();
  return pr.nu - r * pr.e * rational_power(config.mu - x, r - 1.0);
}

}  // namespace pwbifurc
