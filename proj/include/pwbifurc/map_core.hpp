#pragma once

// The normalized rational-degree map
//
//   f(x, mu) = nu * x                           for x >= mu   (linear side)
//   f(x, mu) = nu * x + e * (mu - x)^(q/p)      for x <= mu   (singular side)
//
// with 0 < nu < 1, e > 0, p > q >= 1 and gcd(p, q) = 1. The family
// nu*x + alpha*mu [+ e (mu - x)^(q/p)] reduces to this one by the shift
// x -> x - alpha*mu/nu, mu -> mu (1 + alpha/nu), which leaves x - mu unchanged.

#include <cstddef>
#include <vector>

namespace pwbifurc {

struct MapParams {
  double nu = 0.5;
  double e = 1.0;
  int p = 2;
  int q = 1;

  /// Validating constructor; throws Error(InvalidParams).
  static MapParams make(double nu, double e, int p, int q);

  /// The singular-branch exponent q/p.
  double exponent() const noexcept { return static_cast<double>(q) / p; }
};

void validate(const MapParams& params);
bool is_valid(const MapParams& params) noexcept;

/// base^exponent for base >= 0, evaluated as exp(exponent * log(base)) and
/// exactly zero at base == 0.
double rational_power(double base, double exponent);

struct SystemConfig {
  MapParams params;
  double mu = 0.0;

  static SystemConfig make(const MapParams& params, double mu);

  /// Right-hand side of the well-posedness inequality
  /// e > mu^((p-q)/p) (1 - nu^2) / (1 - nu)^(q/p).
  double well_posedness_bound() const;

  /// True when mu > 0 and the inequality above holds, i.e. f(nu*mu, mu) > mu.
  bool well_posed() const;
};

/// Throws Error(IllPosed) unless config.well_posed().
void require_well_posed(const SystemConfig& config);

enum class Region { I, II, Boundary };

const char* to_string(Region region) noexcept;

double eval_map(double x, const SystemConfig& config);

/// Boundary iff |x - mu| <= tol, otherwise I (x < mu) or II (x > mu).
Region classify_region(double x, const SystemConfig& config, double tol = 0.0);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

/// W = [nu*mu, mu]. Throws Error(NonPositiveMu) for mu <= 0.
Interval trapping_region(const SystemConfig& config);

struct OrbitPoint {
  double x;
  Region region;
};

struct Orbit {
  double x0 = 0.0;
  SystemConfig config;
  std::vector<OrbitPoint> points;  // points[0].x == x0, n + 1 entries
};

Orbit iterate_orbit(double x0, const SystemConfig& config, std::size_t n, double region_tol = 0.0);

/// Side from which the derivative is taken when x sits exactly on x = mu.
enum class Approach { Linear, Singular };

/// nu for x >= mu, nu - (q e / p) (mu - x)^((q-p)/p) for x < mu. At x == mu the
/// singular side is unbounded: Approach::Singular throws Error(SingularDerivative).
double map_derivative(double x, const SystemConfig& config, Approach at_boundary = Approach::Linear);

}  // namespace pwbifurc
