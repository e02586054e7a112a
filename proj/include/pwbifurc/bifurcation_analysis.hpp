#pragma once

// Closed-form bifurcation predictions for the rational-degree map.
//
// With nu_lower = 1 - q (p+q)^((p-q)/q) / p^(p/q) and nu_upper = p/(p+q):
//   nu > nu_upper            robust chaos (|G_z| > 1 on the whole of [nu, 1])
//   nu_lower < nu < nu_upper  period doubling of the reduced map at
//                            z = p/(p+q), lambda = lambda_pd; stable
//                            M-periodic orbits of f for mu in I_M = (mu_pd, mu_1]
//   nu < nu_lower            every fixed point of the reduced map is stable

#include "pwbifurc/map_core.hpp"

namespace pwbifurc {

enum class RegimeKind { StablePeriodic, PeriodDoubling, RobustChaos };

const char* to_string(RegimeKind kind) noexcept;

struct RegimeBounds {
  double nu_lower;
  double nu_upper;
};

RegimeBounds regime_bounds(int p, int q);

struct Regime {
  RegimeKind kind;
  RegimeBounds bounds;
};

/// Throws Error(DegenerateBoundary) when nu is within 1e-12 of either bound.
Regime classify_regime(const MapParams& params);

/// Fixed point where the reduced-map multiplier equals -1: p/(p+q).
double flip_point(int p, int q);

/// lambda at which G_k flips. For k = 0 this is
/// q (p+q)^((p-q)/q) nu^(p/q) / (p^(p/q) (1 - nu)); G_k(., lambda) equals
/// G_0(., lambda nu^(k p/q)), hence the nu^(-k p/q) factor for k > 0.
double lambda_pd(const MapParams& params, int k = 0);

/// e^(p/(p-q)) (p+q) (q^q/p^p)^(1/(p-q)) nu^(p(M-1)/(p-q)).
double mu_pd(const MapParams& params, int M);

/// Right end of I_M, e^(p/(p-q)) (1-nu)^(q/(p-q)) nu^(p(M-2)/(p-q)): the mu at
/// which the leading-order lambda equals 1.
double mu_right(const MapParams& params, int M);

struct FlipCoefficients {
  double K1;           // G_lambda G_zz + 2 G_lambda_z
  double K2_cubed;     // G_zz^2 / 2 + G_zzz^3 / 3
  double K2_standard;  // G_zz^2 / 2 + G_zzz / 3
};

/// Nondegeneracy coefficients of the flip of G_k at (z_bar, lambda). Throws
/// Error(NotAFixedPoint) if |G_k(z_bar) - z_bar| > tol.
FlipCoefficients flip_coefficients(double z_bar, double lambda, int k, const MapParams& params, double tol = 1e-9);

struct PDPrediction {
  double z_bar;
  double lambda_pd;
  double mu_pd;
  int M;
  FlipCoefficients flip;
};

/// Requires the PeriodDoubling regime (Error(WrongRegime) otherwise) and M >= 2.
PDPrediction pd_prediction(const MapParams& params, int M);

struct OrbitInterval {
  int M;
  double mu_low;   // open end, mu_pd(M)
  double mu_high;  // closed end, mu_right(M)
  double width;

  bool contains(double mu) const noexcept { return mu_low < mu && mu <= mu_high; }
};

OrbitInterval orbit_interval(const MapParams& params, int M);

/// |G_z(nu, lambda)| = q nu / (p (1 - nu) lambda^(q/p)), the lower bound of
/// |G_z| over [nu, 1].
double expansion_bound(const MapParams& params, double lambda);

/// |G_z| at the fixed point of G_k(., lambda). StablePeriodic regime only.
double stability_certificate(const MapParams& params, double lambda, int k = 0);

/// The mu > 0 with excursion count M whose exact lambda equals `lambda`,
/// i.e. the inverse of lambda_param on the M-th branch:
///   e (1-nu)^(q/p) mu^((q-p)/p) = nu^(2-M) lambda^(-q/p) - nu^2.
double mu_from_lambda(double lambda, int M, const MapParams& params);

/// Same inverse with the nu^2 term dropped (valid to O(nu^M)); it reproduces
/// mu_pd at lambda_pd and mu_right at lambda = 1.
double mu_from_lambda_leading(double lambda, int M, const MapParams& params);

}  // namespace pwbifurc
