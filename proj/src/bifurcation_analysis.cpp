#include "pwbifurc/bifurcation_analysis.hpp"

#include <cmath>
#include <sstream>

#include "pwbifurc/error.hpp"
#include "pwbifurc/induced_map.hpp"

namespace pwbifurc {

namespace {

void require_count(int M) {
  if (M < 2) throw Error(ErrorCode::InvalidArgument, "excursion count M must be >= 2");
}

void require_regime(const MapParams& params, RegimeKind wanted) {
  const Regime regime = classify_regime(params);
  if (regime.kind != wanted) {
    std::ostringstream os;
    os << "nu=" << params.nu << " is in the " << to_string(regime.kind) << " regime, need " << to_string(wanted);
    throw Error(ErrorCode::WrongRegime, os.str());
  }
}

// e^(p/(p-q)) (1-nu)^(q/(p-q)): the scale shared by both leading-order mu formulas.
double mu_scale(const MapParams& pr) {
  const double s = 1.0 / (1.0 - pr.exponent());
  return std::pow(pr.e * rational_power(1.0 - pr.nu, pr.exponent()), s);
}

}  // namespace

const char* to_string(RegimeKind kind) noexcept {
  switch (kind) {
    case RegimeKind::StablePeriodic: return "StablePeriodic";
    case RegimeKind::PeriodDoubling: return "PeriodDoubling";
    case RegimeKind::RobustChaos: return "RobustChaos";
  }
  return "Unknown";
}

RegimeBounds regime_bounds(int p, int q) {
  validate(MapParams{0.5, 1.0, p, q});
  const double pd = p;
  const double qd = q;
  const double lower = 1.0 - qd * std::pow(pd + qd, (pd - qd) / qd) / std::pow(pd, pd / qd);
  return RegimeBounds{lower, pd / (pd + qd)};
}

Regime classify_regime(const MapParams& params) {
  validate(params);
  const RegimeBounds b = regime_bounds(params.p, params.q);
  constexpr double kEdge = 1e-12;
  if (std::abs(params.nu - b.nu_lower) <= kEdge || std::abs(params.nu - b.nu_upper) <= kEdge) {
    std::ostringstream os;
    os.precision(17);
    os << "nu=" << params.nu << " sits on a regime boundary (" << b.nu_lower << ", " << b.nu_upper << ")";
    throw Error(ErrorCode::DegenerateBoundary, os.str());
  }
  if (params.nu > b.nu_upper) return {RegimeKind::RobustChaos, b};
  if (params.nu > b.nu_lower) return {RegimeKind::PeriodDoubling, b};
  return {RegimeKind::StablePeriodic, b};
}

double flip_point(int p, int q) { return static_cast<double>(p) / (p + q); }

double lambda_pd(const MapParams& params, int k) {
  validate(params);
  const double pd = params.p;
  const double qd = params.q;
  const double base = qd * std::pow(pd + qd, (pd - qd) / qd) * std::pow(params.nu, pd / qd) /
                      (std::pow(pd, pd / qd) * (1.0 - params.nu));
  return base * std::pow(params.nu, -k * pd / qd);
}

double mu_pd(const MapParams& params, int M) {
  validate(params);
  require_count(M);
  const double pd = params.p;
  const double qd = params.q;
  const double s = pd / (pd - qd);
  const double shape = std::exp((qd * std::log(qd) - pd * std::log(pd)) / (pd - qd));
  return std::pow(params.e, s) * (pd + qd) * shape * std::pow(params.nu, s * (M - 1));
}

double mu_right(const MapParams& params, int M) {
  validate(params);
  require_count(M);
  const double s = static_cast<double>(params.p) / (params.p - params.q);
  return mu_scale(params) * std::pow(params.nu, s * (M - 2));
}

FlipCoefficients flip_coefficients(double z_bar, double lambda, int k, const MapParams& params, double tol) {
  const ReducedMap g(params, k);
  const double residual = std::abs(g.value(z_bar, lambda) - z_bar);
  if (residual > tol) {
    std::ostringstream os;
    os << "|G(z) - z| = " << residual << " at z=" << z_bar << ", lambda=" << lambda;
    throw Error(ErrorCode::NotAFixedPoint, os.str());
  }
  const double g_l = g.dlambda(z_bar, lambda);
  const double g_zz = g.dz(z_bar, lambda, 2);
  const double g_zzz = g.dz(z_bar, lambda, 3);
  const double g_lz = g.dlambda_dz(z_bar, lambda);
  return FlipCoefficients{
      g_l * g_zz + 2.0 * g_lz,
      0.5 * g_zz * g_zz + g_zzz * g_zzz * g_zzz / 3.0,
      0.5 * g_zz * g_zz + g_zzz / 3.0,
  };
}

PDPrediction pd_prediction(const MapParams& params, int M) {
  require_regime(params, RegimeKind::PeriodDoubling);
  require_count(M);
  const double z = flip_point(params.p, params.q);
  const double lambda = lambda_pd(params);
  return PDPrediction{z, lambda, mu_pd(params, M), M, flip_coefficients(z, lambda, 0, params)};
}

OrbitInterval orbit_interval(const MapParams& params, int M) {
  require_regime(params, RegimeKind::PeriodDoubling);
  require_count(M);
  const double lo = mu_pd(params, M);
  const double hi = mu_right(params, M);
  return OrbitInterval{M, lo, hi, hi - lo};
}

double expansion_bound(const MapParams& params, double lambda) {
  validate(params);
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
  return params.q * params.nu / (params.p * (1.0 - params.nu) * rational_power(lambda, params.exponent()));
}

double stability_certificate(const MapParams& params, double lambda, int k) {
  require_regime(params, RegimeKind::StablePeriodic);
  const ReducedMap g(params, k);
  return std::abs(g.dz(g.fixed_point(lambda), lambda, 1));
}

double mu_from_lambda(double lambda, int M, const MapParams& params) {
  validate(params);
  require_count(M);
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
  const double r = params.exponent();
  const double rhs = std::pow(params.nu, 2 - M) / rational_power(lambda, r) - params.nu * params.nu;
  if (!(rhs > 0.0)) throw Error(ErrorCode::OutOfRange, "lambda too large for an excursion of length M");
  const double c = params.e * rational_power(1.0 - params.nu, r);
  return std::pow(c / rhs, 1.0 / (1.0 - r));
}

double mu_from_lambda_leading(double lambda, int M, const MapParams& params) {
  validate(params);
  require_count(M);
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
  const double r = params.exponent();
  const double c = params.e * rational_power(1.0 - params.nu, r);
  return std::pow(c * std::pow(params.nu, M - 2) * rational_power(lambda, r), 1.0 / (1.0 - r));
}

}  // namespace pwbifurc
