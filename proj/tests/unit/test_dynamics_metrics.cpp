#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pwbifurc/bifurcation_analysis.hpp"
#include "pwbifurc/dynamics_metrics.hpp"
#include "pwbifurc/error.hpp"
#include "pwbifurc/induced_map.hpp"

using namespace pwbifurc;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

// Multiplier of the fixed point of the exact M-step return, in z units:
//   F(z)/mu = nu^M z + nu^(M-1) e mu^(r-1) (1-z)^r.
double return_multiplier(double mu, int M, double nu, double e, double r) {
  const double a = std::pow(nu, M);
  const double b = std::pow(nu, M - 1) * e * std::pow(mu, r - 1);
  const double z = oracle::scan_root([&](double s) { return a * s + b * std::pow(1 - s, r) - s; }, nu, 1.0);
  return a - b * r * std::pow(1 - z, r - 1);
}

}  // namespace

TEST_CASE("Lyapunov exponent of f") {
  SUBCASE("origin at mu = 0") {
    const LyapunovEstimate le = lyapunov_exponent(0.0, SystemConfig{MapParams{}, 0.0}, 0, 10);
    CHECK(le.exponent == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(le.samples == 10);
    CHECK(le.boundary_hits == 10);
  }
  SUBCASE("chaotic regime is positive") {
    const MapParams pr{0.75, 1, 2, 1};
    for (double mu : {1e-4, 1e-6, 1e-8}) {
      for (double t : {0.8, 0.91, 0.99}) {
        CHECK(lyapunov_exponent(t * mu, SystemConfig{pr, mu}, 10000, 100000).exponent > 0.0);
      }
    }
  }
  SUBCASE("stable regime is negative") {
    const MapParams pr{0.2, 1, 2, 1};
    for (double mu : {1e-4, 3e-6, 1e-8}) {
      CHECK(lyapunov_exponent(0.2 * mu, SystemConfig{pr, mu}, 10000, 10000).exponent < 0.0);
    }
  }
  SUBCASE("matches an independent log-derivative sum") {
    const MapParams pr{0.6, 1.4, 3, 1};
    const double mu = 2e-5;
    double x = 0.7 * mu;
    double sum = 0.0;
    for (int i = 0; i < 100; ++i) x = oracle::f(x, mu, 0.6, 1.4, 3, 1);
    for (int i = 0; i < 1000; ++i) {
      const double d = x >= mu ? 0.6 : 0.6 - (1.4 / 3) * std::pow(mu - x, -2.0 / 3);
      sum += std::log(std::abs(d));
      x = oracle::f(x, mu, 0.6, 1.4, 3, 1);
    }
    const double le = lyapunov_exponent(0.7 * mu, SystemConfig{pr, mu}, 100, 1000).exponent;
    CHECK(le == doctest::Approx(sum / 1000).epsilon(1e-9));
  }
  SUBCASE("deterministic") {
    const SystemConfig c{MapParams{0.75, 1, 2, 1}, 1e-5};
    CHECK(lyapunov_exponent(7e-6, c, 1000, 5000).exponent == lyapunov_exponent(7e-6, c, 1000, 5000).exponent);
  }
  CHECK(code_of([] { lyapunov_exponent(0.0, SystemConfig{MapParams{}, 0.0}, 0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("detect_period") {
  std::vector<double> constant(40, 0.3);
  CHECK(detect_period(constant, 1e-12, 10) == DetectedPeriod{1});
  std::vector<double> alt;
  for (int i = 0; i < 40; ++i) alt.push_back(i % 2 ? 0.7 : 0.2);
  CHECK(detect_period(alt, 1e-12, 10) == DetectedPeriod{2});
  std::vector<double> p7;
  for (int i = 0; i < 400; ++i) p7.push_back(std::sin(i % 7));
  CHECK(detect_period(p7, 1e-12, 64) == DetectedPeriod{7});
  std::vector<double> noisy = alt;
  noisy[17] += 1e-6;
  CHECK_FALSE(detect_period(noisy, 1e-9, 10).has_value());
  CHECK(detect_period(noisy, 1e-5, 10) == DetectedPeriod{2});
  std::vector<double> nan(40, std::nan(""));
  CHECK_FALSE(detect_period(nan, 1.0, 10).has_value());
  CHECK(code_of([&] { detect_period(alt, 1e-9, 11); }) == ErrorCode::InsufficientData);
  CHECK(code_of([&] { detect_period(alt, 1e-9, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("attractor sampling") {
  const MapParams pr;
  SUBCASE("period M inside I_M") {
    for (int M = 4; M <= 8; ++M) {
      const OrbitInterval iv = orbit_interval(pr, M);
      const AttractorSample s = attractor_sample(SystemConfig{pr, iv.mu_low + 0.5 * iv.width});
      CHECK(s.period == DetectedPeriod{static_cast<std::size_t>(M)});
      CHECK(s.lyapunov < 0.0);
      CHECK(s.points.size() == 1000);
    }
  }
  SUBCASE("points stay in the absorbing interval") {
    for (const MapParams& m : {pr, MapParams{0.75, 1, 2, 1}, MapParams{0.3, 2, 3, 2}}) {
      const double mu = 3e-6;
      const SystemConfig c{m, mu};
      const double top = eval_map(m.nu * mu, c);
      const AttractorSample s = attractor_sample(c);
      for (double x : s.points) {
        CHECK(x >= m.nu * mu * (1 - 1e-12));
        CHECK(x <= top * (1 + 1e-12));
      }
    }
  }
  SUBCASE("robust chaos") {
    for (double mu : {1e-3, 1e-5, 1e-7}) {
      const AttractorSample s = attractor_sample(SystemConfig{MapParams{0.75, 1, 2, 1}, mu});
      CHECK_FALSE(s.period.has_value());
      CHECK(s.lyapunov > 0.0);
    }
  }
  SUBCASE("the period-5 orbit loses stability at the exact flip of the 5-step return") {
    const double a = mu_pd(pr, 5);
    const double flip = oracle::scan_root([&](double mu) { return return_multiplier(mu, 5, 0.5, 1.0, 0.5) + 1.0; },
                                          0.9 * a, a, 2000);
    REQUIRE(std::isfinite(flip));
    // The exact flip sits an O(nu^M) distance below the closed-form mu_pd.
    CHECK(flip < a);
    CHECK(flip > 0.97 * a);
    AttractorOptions opts;
    opts.burn_in = 100000;
    opts.n_keep = 4000;
    const AttractorSample above = attractor_sample(SystemConfig{pr, flip * 1.005}, opts);
    CHECK(above.period == DetectedPeriod{5});
    // Just past the flip no stable doubled orbit appears: the orbit is aperiodic.
    const AttractorSample below = attractor_sample(SystemConfig{pr, flip * 0.99}, opts);
    CHECK_FALSE(below.period.has_value());
    CHECK(below.lyapunov > 0.0);
  }
  SUBCASE("custom seed and tolerance") {
    AttractorOptions opts;
    opts.x0 = 0.9 * 1e-4;
    opts.tol = 1e-15;
    const AttractorSample s = attractor_sample(SystemConfig{MapParams{0.2, 1, 2, 1}, 1e-4}, opts);
    CHECK(s.period.has_value());
  }
  CHECK(code_of([] { attractor_sample(SystemConfig{MapParams{}, 1.0}); }) == ErrorCode::IllPosed);
}

TEST_CASE("reduced-map orbits") {
  const MapParams pr;
  SUBCASE("neutral multiplier at the flip") {
    const double lam = lambda_pd(pr);
    CHECK(std::abs(g_orbit_lyapunov(lam, 0, pr, 2.0 / 3.0, 0, 1)) < 1e-12);
  }
  SUBCASE("stable regime settles on the fixed point") {
    const MapParams m{0.2, 1, 2, 1};
    for (double lam : {0.1, 0.5, 0.9}) {
      const double z = reduced_fixed_point(lam, 0, m);
      const double le = g_orbit_lyapunov(lam, 0, m, z + 1e-3, 2000, 2000);
      CHECK(le == doctest::Approx(std::log(z / (2 * (1 - z)))).epsilon(1e-6));
      CHECK(le < 0.0);
      const ReducedOrbit orb = reduced_orbit(lam, 0, m, z + 1e-3, 2000, 256);
      CHECK(detect_period(orb.points, 1e-12, 64) == DetectedPeriod{1});
      CHECK(orb.reinjections == 0);
    }
  }
  SUBCASE("chaotic regime: pointwise expansion and positive exponent") {
    const MapParams m{0.75, 1, 2, 1};
    for (int i = 0; i < 10; ++i) {
      const double lam = 0.5625 + (1 - 0.5625) * (i + 0.5) / 10;
      const ReducedOrbit orb = reduced_orbit(lam, 0, m, 0.83, 1000, 20000, EscapePolicy::Reinject);
      const double bound = expansion_bound(m, lam);
      CHECK(orb.min_abs_derivative >= bound);
      CHECK(orb.lyapunov >= std::log(bound));
      CHECK(orb.lyapunov > 0.0);
      for (double z : orb.points) {
        CHECK(z >= m.nu - 1e-9);
        CHECK(z <= 1.0 + 1e-9);
      }
    }
  }
  SUBCASE("strict policy reports escapes from [nu, 1]") {
    // G(z) < nu once z is close enough to 1, so an expanding orbit leaves the interval.
    const MapParams m{0.75, 1, 2, 1};
    CHECK(code_of([&] { reduced_orbit(0.8, 0, m, 0.83, 1000, 20000); }) == ErrorCode::OrbitEscaped);
    const ReducedOrbit orb = reduced_orbit(0.8, 0, m, 0.83, 1000, 20000, EscapePolicy::Reinject);
    CHECK(orb.reinjections > 0);
  }
  SUBCASE("reinjected steps act as G_(k+j)") {
    const MapParams m{0.75, 1, 2, 1};
    const ReducedOrbit orb = reduced_orbit(0.8, 0, m, 0.83, 0, 2000, EscapePolicy::Reinject);
    const ReducedMap g(m);
    for (std::size_t i = 0; i + 1 < orb.points.size(); ++i) {
      double y = g.value(orb.points[i], 0.8);
      while (y < m.nu) y /= m.nu;
      CHECK(orb.points[i + 1] == doctest::Approx(y).epsilon(1e-12));
    }
  }
  CHECK(code_of([&] { reduced_orbit(0.5, 0, pr, 0.2, 10, 10); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("f orbits stay bounded") {
  for (const MapParams& m : {MapParams{}, MapParams{0.75, 1, 2, 1}, MapParams{0.2, 1, 2, 1}, MapParams{0.5, 1, 5, 4}}) {
    const double mu = 1e-5;
    const SystemConfig c{m, mu};
    const double top = eval_map(m.nu * mu, c);
    double x = 0.93 * mu;
    bool ok = true;
    for (int i = 0; i < 1000000; ++i) {
      x = eval_map(x, c);
      ok = ok && x >= 0.0 && x <= top * (1 + 1e-12);
    }
    CHECK(ok);
  }
}
