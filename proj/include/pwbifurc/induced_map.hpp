#pragma once

// Return machinery on the trapping region W = [nu*mu, mu].
//
// A point x0 = mu*z of W whose image lies in region II is carried back into W
// after m(x0) steps (one singular step, m-1 linear ones). In the rescaled
// coordinate z this return is
//
//   F(z) = nu^m mu z + nu^(m-1) e mu^(q/p) (1 - z)^(q/p),
//
// and with M = m(nu*mu), k = M - m and lambda = (nu / (F(nu)/mu))^(p/q) it
// splits exactly as
//
//   F(z)/mu = G_k(z, lambda) + nu^(M-k) (z - nu ((1 - z)/(1 - nu))^(q/p)),
//   G_k(z, lambda) = nu^(1-k) ((1 - z)/(1 - nu))^(q/p) / lambda^(q/p).

#include <cstddef>
#include <variant>

#include "pwbifurc/map_core.hpp"

namespace pwbifurc {

inline constexpr int kDefaultMaxSteps = 100000;

struct Excursion {
  int m;           // >= 2
  double landing;  // f^m(x0), inside W
};

/// f(x0) stayed in region I; the excursion count is undefined there.
struct NoExcursion {
  double next;
};

using ExcursionResult = std::variant<Excursion, NoExcursion>;

/// Requires x0 in W and a well-posed config. Throws Error(BudgetExceeded) if
/// the orbit has not returned after max_steps iterations.
ExcursionResult excursion_count(double x0, const SystemConfig& config, int max_steps = kDefaultMaxSteps);

/// M(mu) = m(nu*mu, mu). Also checks m(x0) <= M on `certificate_samples`
/// evenly spaced points of W and throws Error(NotMaximal) if one exceeds it.
int max_excursion_count(const SystemConfig& config, int max_steps = kDefaultMaxSteps,
                        std::size_t certificate_samples = 64);

/// Closed-form return F(z) for an excursion of m steps, in x units.
double induced_map(double z, const SystemConfig& config, int m);

/// Immutable (mu, M, lambda, k) bundle. Build it with make().
struct ReturnContext {
  SystemConfig config;
  int M = 0;
  double lambda = 1.0;
  int k = 0;

  /// Computes M by iteration and lambda from the closed-form F(nu). k must
  /// satisfy 0 <= k <= M - 2.
  static ReturnContext make(const SystemConfig& config, int k = 0, int max_steps = kDefaultMaxSteps);

  int m() const noexcept { return M - k; }
};

/// F(z) with m = ctx.m().
double induced_map(double z, const ReturnContext& ctx);

/// lambda = (nu / landing_ratio)^(p/q), where landing_ratio = F(nu)/mu.
double lambda_from_landing(double landing_ratio, const MapParams& params);

/// lambda of a well-posed config; throws Error(OutOfRange) if it falls outside
/// [nu^(p/q), 1] by more than 1e-9.
double lambda_param(const SystemConfig& config, int max_steps = kDefaultMaxSteps);

/// The reduced map G_k(., lambda) and its partial derivatives.
class ReducedMap {
 public:
  explicit ReducedMap(const MapParams& params, int k = 0);

  const MapParams& params() const noexcept { return params_; }
  int k() const noexcept { return k_; }

  /// Defined for z <= 1 (the contract domain is [nu, 1]); lambda > 0.
  double value(double z, double lambda) const;

  /// d^order G / dz^order for order 1, 2 or 3. Throws Error(SingularPoint) at z >= 1.
  double dz(double z, double lambda, int order = 1) const;

  double dlambda(double z, double lambda) const;
  double dlambda_dz(double z, double lambda) const;

  /// The unique fixed point in [nu, 1], by bisection on G - id. The returned
  /// point satisfies |G(z) - z| <= tol * (1 + |G_z(z)|); otherwise, or when
  /// G(nu) < nu, throws Error(NoRoot).
  double fixed_point(double lambda, double tol = 1e-12) const;

 private:
  double prefactor(double lambda) const;

  MapParams params_;
  int k_;
};

double reduced_map(double z, double lambda, int k, const MapParams& params);
double reduced_map_derivative(double z, double lambda, int k, const MapParams& params, int order = 1);
double reduced_fixed_point(double lambda, int k, const MapParams& params, double tol = 1e-12);

/// The term nu^(M-k) (z - nu ((1-z)/(1-nu))^(q/p)) separating F/mu from G_k.
double decomposition_correction(double z, const ReturnContext& ctx);

/// |F(z)/mu - G_k(z, lambda) - correction|.
double decomposition_residual(double z, const ReturnContext& ctx);

}  // namespace pwbifurc
