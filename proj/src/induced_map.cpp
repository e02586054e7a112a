#include "pwbifurc/induced_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwbifurc/error.hpp"

namespace pwbifurc {

namespace {

void require_in_trap(double x0, const SystemConfig& config) {
  const Interval w = trapping_region(config);
  const double slack = 1e-14 * config.mu;
  if (!(x0 >= w.lo - slack && x0 <= w.hi + slack)) {
    std::ostringstream os;
    os << "x0=" << x0 << " outside W=[" << w.lo << ", " << w.hi << "]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
}

void require_unit_z(double z, const MapParams& params) {
  if (!(z >= params.nu && z <= 1.0)) {
    std::ostringstream os;
    os << "z=" << z << " outside [nu, 1]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
}

}  // namespace

ExcursionResult excursion_count(double x0, const SystemConfig& config, int max_steps) {
  require_well_posed(config);
  require_in_trap(x0, config);
  double x = eval_map(x0, config);
  if (x <= config.mu) return NoExcursion{x};
  for (int m = 2; m <= max_steps; ++m) {
    x = eval_map(x, config);
    if (x <= config.mu) return Excursion{m, x};
  }
  std::ostringstream os;
  os << "no return to W within " << max_steps << " steps (mu=" << config.mu << ")";
  throw Error(ErrorCode::BudgetExceeded, os.str());
}

int max_excursion_count(const SystemConfig& config, int max_steps, std::size_t certificate_samples) {
  const Interval w = trapping_region(config);
  const auto seed = excursion_count(w.lo, config, max_steps);
  const auto* top = std::get_if<Excursion>(&seed);
  if (top == nullptr) throw Error(ErrorCode::IllPosed, "f(nu*mu) did not leave region I");
  for (std::size_t i = 1; i < certificate_samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(certificate_samples - 1);
    const double x0 = std::min(w.hi, w.lo + t * (w.hi - w.lo));
    const auto r = excursion_count(x0, config, max_steps);
    if (const auto* ex = std::get_if<Excursion>(&r); ex != nullptr && ex->m > top->m) {
      std::ostringstream os;
      os << "m(" << x0 << ")=" << ex->m << " exceeds m(nu*mu)=" << top->m;
      throw Error(ErrorCode::NotMaximal, os.str());
    }
  }
  return top->m;
}

double induced_map(double z, const SystemConfig& config, int m) {
  const MapParams& pr = config.params;
  require_unit_z(z, pr);
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "excursion count must be >= 1");
  const double r = pr.exponent();
  const double linear = std::pow(pr.nu, m) * config.mu * z;
  const double singular = std::pow(pr.nu, m - 1) * pr.e * rational_power(config.mu, r) * rational_power(1.0 - z, r);
  return linear + singular;
}

double induced_map(double z, const ReturnContext& ctx) { return induced_map(z, ctx.config, ctx.m()); }

double lambda_from_landing(double landing_ratio, const MapParams& params) {
  return std::pow(params.nu / landing_ratio, 1.0 / params.exponent());
}

ReturnContext ReturnContext::make(const SystemConfig& config, int k, int max_steps) {
  const auto seed = excursion_count(config.params.nu * config.mu, config, max_steps);
  const auto* top = std::get_if<Excursion>(&seed);
  if (top == nullptr) throw Error(ErrorCode::IllPosed, "f(nu*mu) did not leave region I");
  if (k < 0 || k > top->m - 2) {
    std::ostringstream os;
    os << "k=" << k << " outside [0, M-2] with M=" << top->m;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  const MapParams& pr = config.params;
  const double landing_ratio = induced_map(pr.nu, config, top->m) / config.mu;
  const double lambda = lambda_from_landing(landing_ratio, pr);
  const double lo = std::pow(pr.nu, 1.0 / pr.exponent());
  if (!(lambda >= lo - 1e-9 && lambda <= 1.0 + 1e-9)) {
    std::ostringstream os;
    os << "lambda=" << lambda << " outside [" << lo << ", 1] (M=" << top->m << ")";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  return ReturnContext{config, top->m, lambda, k};
}

double lambda_param(const SystemConfig& config, int max_steps) {
  return ReturnContext::make(config, 0, max_steps).lambda;
}

ReducedMap::ReducedMap(const MapParams& params, int k) : params_(params), k_(k) {
  validate(params_);
  if (k_ < 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 0");
}

double ReducedMap::prefactor(double lambda) const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
  const double r = params_.exponent();
  return std::pow(params_.nu, 1 - k_) / rational_power(lambda, r);
}

double ReducedMap::value(double z, double lambda) const {
  if (!(z <= 1.0)) throw Error(ErrorCode::OutOfDomain, "reduced map needs z <= 1");
  const double r = params_.exponent();
  return prefactor(lambda) * rational_power((1.0 - z) / (1.0 - params_.nu), r);
}

double ReducedMap::dz(double z, double lambda, int order) const {
  if (!(z < 1.0)) throw Error(ErrorCode::SingularPoint, "z-derivatives of the reduced map blow up at z = 1");
  const double r = params_.exponent();
  const double w = 1.0 - z;
  // d^n/dz^n (1-z)^r = (-1)^n r (r-1) ... (r-n+1) (1-z)^(r-n)
  double falling = 1.0;
  double sign = 1.0;
  switch (order) {
    case 3: falling *= (r - 2.0); sign = -sign; [[fallthrough]];
    case 2: falling *= (r - 1.0); sign = -sign; [[fallthrough]];
    case 1: falling *= r; sign = -sign; break;
    default: throw Error(ErrorCode::InvalidArgument, "derivative order must be 1, 2 or 3");
  }
  const double base = prefactor(lambda) / rational_power(1.0 - params_.nu, r);
  return sign * falling * base * std::pow(w, r - order);
}

double ReducedMap::dlambda(double z, double lambda) const {
  return -params_.exponent() * value(z, lambda) / lambda;
}

double ReducedMap::dlambda_dz(double z, double lambda) const {
  return -params_.exponent() * dz(z, lambda, 1) / lambda;
}

double ReducedMap::fixed_point(double lambda, double tol) const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  auto gap = [&](double z) { return value(z, lambda) - z; };
  double lo = params_.nu;
  double hi = 1.0;
  const double g_lo = gap(lo);
  if (g_lo < 0.0) {
    std::ostringstream os;
    os << "G(nu) - nu = " << g_lo << " < 0 for lambda=" << lambda << ", k=" << k_;
    throw Error(ErrorCode::NoRoot, os.str());
  }
  if (g_lo == 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = gap(mid);
    if (g == 0.0) return mid;
    (g > 0.0 ? lo : hi) = mid;
  }
  const double z = std::abs(gap(lo)) <= std::abs(gap(hi)) ? lo : hi;
  const double residual = std::abs(gap(z));
  const double slope = z < 1.0 ? std::abs(dz(z, lambda, 1)) : 0.0;
  if (residual > tol * (1.0 + slope)) {
    std::ostringstream os;
    os << "bisection residual " << residual << " above tolerance " << tol;
    throw Error(ErrorCode::NoRoot, os.str());
  }
  return z;
}

double reduced_map(double z, double lambda, int k, const MapParams& params) {
  return ReducedMap(params, k).value(z, lambda);
}

double reduced_map_derivative(double z, double lambda, int k, const MapParams& params, int order) {
  return ReducedMap(params, k).dz(z, lambda, order);
}

double reduced_fixed_point(double lambda, int k, const MapParams& params, double tol) {
  return ReducedMap(params, k).fixed_point(lambda, tol);
}

double decomposition_correction(double z, const ReturnContext& ctx) {
  const MapParams& pr = ctx.config.params;
  require_unit_z(z, pr);
  const double r = pr.exponent();
  return std::pow(pr.nu, ctx.M - ctx.k) * (z - pr.nu * rational_power((1.0 - z) / (1.0 - pr.nu), r));
}

double decomposition_residual(double z, const ReturnContext& ctx) {
  const double lhs = induced_map(z, ctx) / ctx.config.mu;
  const double rhs = ReducedMap(ctx.config.params, ctx.k).value(z, ctx.lambda) + decomposition_correction(z, ctx);
  return std::abs(lhs - rhs);
}

}  // namespace pwbifurc
