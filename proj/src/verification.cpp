#include "pwbifurc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "pwbifurc/bifurcation_analysis.hpp"
#include "pwbifurc/dynamics_metrics.hpp"
#include "pwbifurc/error.hpp"
#include "pwbifurc/induced_map.hpp"

namespace pwbifurc {

namespace {

constexpr std::pair<int, int> kSmallPairs[] = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 3},
                                               {5, 1}, {5, 2}, {5, 3}, {5, 4}};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

class Report {
 public:
  Report(std::string suite, const MapParams& params) : report_{std::move(suite), params, {}} {}

  void check(std::string name, bool ok, std::string detail) {
    report_.checks.push_back({std::move(name), ok, std::move(detail)});
  }

  SuiteReport take() { return std::move(report_); }

 private:
  SuiteReport report_;
};

void require_kind(const MapParams& params, RegimeKind kind) {
  const Regime regime = classify_regime(params);
  if (regime.kind != kind) {
    throw Error(ErrorCode::WrongRegime,
                std::string("suite needs the ") + to_string(kind) + " regime, nu is in " + to_string(regime.kind));
  }
}

SuiteReport identity_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool fixed = opt.params.has_value();
  Report rep("identity", fixed ? *opt.params : MapParams{});

  double worst_identity = 0.0;
  double worst_closed_form = 0.0;
  double lambda_excess = 0.0;
  std::size_t rejected = 0;
  std::size_t done = 0;
  while (done < opt.samples) {
    MapParams pr;
    if (fixed) {
      pr = *opt.params;
    } else {
      const auto [p, q] = kSmallPairs[static_cast<std::size_t>(unit(rng) * std::size(kSmallPairs))];
      const RegimeBounds b = regime_bounds(p, q);
      const double nu = b.nu_lower + (0.02 + 0.96 * unit(rng)) * (b.nu_upper - b.nu_lower);
      pr = MapParams{nu, 0.5 + 1.5 * unit(rng), p, q};
    }
    double mu = 0.0;
    const bool intervals = classify_regime(pr).kind == RegimeKind::PeriodDoubling;
    if (intervals) {
      const int M = 2 + static_cast<int>(unit(rng) * 7);
      const double a = std::log(mu_pd(pr, M));
      const double b = std::log(mu_right(pr, M));
      mu = std::exp(a + unit(rng) * (b - a));
    } else {
      mu = std::exp(std::log(1e-10) + unit(rng) * std::log(1e8));
    }
    const SystemConfig cfg{pr, mu};
    if (!cfg.well_posed()) {
      ++rejected;
      continue;
    }
    const ReturnContext top = ReturnContext::make(cfg);
    const int k = static_cast<int>(unit(rng) * (top.M - 1));
    const ReturnContext ctx = ReturnContext::make(cfg, std::min(k, top.M - 2));
    const double z = pr.nu + unit(rng) * (1.0 - pr.nu);
    const double lhs = induced_map(z, ctx) / mu;
    worst_identity = std::max(worst_identity, decomposition_residual(z, ctx) / std::abs(lhs));

    const auto landing = std::get<Excursion>(excursion_count(pr.nu * mu, cfg)).landing;
    worst_closed_form = std::max(worst_closed_form, rel_diff(induced_map(pr.nu, top), landing));

    const double lo = std::pow(pr.nu, 1.0 / pr.exponent());
    lambda_excess = std::max({lambda_excess, lo - top.lambda, top.lambda - 1.0});
    ++done;
  }
  rep.check("decomposition F/mu = G_k + correction", worst_identity <= 1e-10,
            "max relative residual " + fmt(worst_identity) + " over " + std::to_string(done) + " configs (" +
                std::to_string(rejected) + " ill-posed draws skipped)");
  rep.check("closed-form return matches iteration", worst_closed_form <= 1e-10,
            "max relative gap " + fmt(worst_closed_form));
  rep.check("lambda in [nu^(p/q), 1]", lambda_excess <= 1e-9, "max excursion outside " + fmt(lambda_excess));
  return rep.take();
}

SuiteReport intervals_suite(const VerifyOptions& opt) {
  const MapParams pr = opt.params.value_or(MapParams{0.5, 1.0, 2, 1});
  require_kind(pr, RegimeKind::PeriodDoubling);
  Report rep("intervals", pr);
  const double step = std::pow(pr.nu, static_cast<double>(pr.p) / (pr.p - pr.q));

  bool disjoint = true;
  bool nonempty = true;
  double recurrence = 0.0;
  for (int M = 3; M <= 10; ++M) {
    const OrbitInterval cur = orbit_interval(pr, M);
    const OrbitInterval prev = orbit_interval(pr, M - 1);
    disjoint = disjoint && cur.mu_high <= prev.mu_low;
    nonempty = nonempty && cur.mu_low < cur.mu_high;
    recurrence = std::max({recurrence, rel_diff(cur.mu_low, step * prev.mu_low),
                           rel_diff(cur.mu_high, step * prev.mu_high)});
  }
  double ratio = 0.0;
  for (int k = 1; k <= 3; ++k) {
    for (int M = k + 2; M <= 10; ++M) {
      ratio = std::max(ratio, rel_diff(orbit_interval(pr, M).width,
                                       std::pow(step, k) * orbit_interval(pr, M - k).width));
    }
  }
  rep.check("I_M nonempty", nonempty, "mu_pd(M) < mu_1(M) for M = 3..10");
  rep.check("I_M and I_(M-1) disjoint", disjoint, "M = 3..10");
  rep.check("end points scale by nu^(p/(p-q))", recurrence <= 1e-12, "max relative error " + fmt(recurrence));
  rep.check("widths in geometric progression", ratio <= 1e-12, "max relative error " + fmt(ratio));

  if (SystemConfig{pr, orbit_interval(pr, 4).mu_high}.well_posed()) {
    std::string periods;
    bool all = true;
    for (int M = 4; M <= 8; ++M) {
      const OrbitInterval iv = orbit_interval(pr, M);
      const AttractorSample s = attractor_sample(SystemConfig{pr, 0.5 * (iv.mu_low + iv.mu_high)});
      const std::size_t got = s.period.value_or(0);
      all = all && got == static_cast<std::size_t>(M);
      periods += (periods.empty() ? "" : ",") + std::to_string(got);
    }
    rep.check("f has period M at the middle of I_M", all, "M = 4..8 -> periods " + periods);
  }
  return rep.take();
}

SuiteReport flip_suite(const VerifyOptions& opt) {
  const MapParams pr = opt.params.value_or(MapParams{0.5, 1.0, 2, 1});
  require_kind(pr, RegimeKind::PeriodDoubling);
  Report rep("flip", pr);
  const ReducedMap g(pr);
  const double lam = lambda_pd(pr);
  const double zbar = flip_point(pr.p, pr.q);
  const double lo = std::pow(pr.nu, 1.0 / pr.exponent());
  rep.check("lambda_pd inside (nu^(p/q), 1)", lam > lo && lam < 1.0, "lambda_pd = " + fmt(lam));

  const double zfix = g.fixed_point(lam);
  rep.check("fixed point at lambda_pd is p/(p+q)", std::abs(zfix - zbar) <= 1e-10,
            "|z - p/(p+q)| = " + fmt(std::abs(zfix - zbar)));
  const double slope = g.dz(zbar, lam, 1);
  rep.check("multiplier equals -1", std::abs(slope + 1.0) <= 1e-10, "G_z = " + fmt(slope));

  const FlipCoefficients c = flip_coefficients(zbar, lam, 0, pr);
  rep.check("K1 nonzero", std::abs(c.K1) > 1e-8, "K1 = " + fmt(c.K1));
  rep.check("K2 < 0 (cubed third derivative)", c.K2_cubed < 0.0, "K2 = " + fmt(c.K2_cubed));
  rep.check("K2 < 0 (standard flip coefficient)", c.K2_standard < 0.0, "K2 = " + fmt(c.K2_standard));

  const double hz = 1e-3 * (1.0 - zbar);
  const double hl = 1e-3 * lam;
  auto in_z = [&](double z) { return g.value(z, lam); };
  auto in_l = [&](double l) { return g.value(zbar, l); };
  auto dz_in_l = [&](double l) { return g.dz(zbar, l, 1); };
  double worst = 0.0;
  for (int order = 1; order <= 3; ++order) {
    worst = std::max(worst, rel_diff(richardson_derivative(in_z, zbar, hz, order), g.dz(zbar, lam, order)));
  }
  worst = std::max(worst, rel_diff(richardson_derivative(in_l, lam, hl, 1), g.dlambda(zbar, lam)));
  worst = std::max(worst, rel_diff(richardson_derivative(dz_in_l, lam, hl, 1), g.dlambda_dz(zbar, lam)));
  rep.check("analytic partials match finite differences", worst <= 1e-5, "max relative gap " + fmt(worst));
  return rep.take();
}

SuiteReport chaos_suite(const VerifyOptions& opt) {
  const MapParams pr = opt.params.value_or(MapParams{0.75, 1.0, 2, 1});
  require_kind(pr, RegimeKind::RobustChaos);
  Report rep("chaos", pr);
  const double lo = std::pow(pr.nu, 1.0 / pr.exponent());
  constexpr int kGrid = 50;
  bool expanding = true;
  bool positive = true;
  bool aperiodic = true;
  double min_margin = INFINITY;
  double min_lyap = INFINITY;
  for (int i = 0; i < kGrid; ++i) {
    const double lam = lo + (1.0 - lo) * i / (kGrid - 1);
    const double bound = expansion_bound(pr, lam);
    const ReducedOrbit orb = reduced_orbit(lam, 0, pr, pr.nu + 0.37 * (1.0 - pr.nu), 1000, 20000,
                                           EscapePolicy::Reinject);
    expanding = expanding && bound > 1.0 && orb.min_abs_derivative >= bound;
    positive = positive && orb.lyapunov > 0.0;
    aperiodic = aperiodic && !detect_period(orb.points, 1e-9, 64).has_value();
    min_margin = std::min(min_margin, orb.min_abs_derivative - bound);
    min_lyap = std::min(min_lyap, orb.lyapunov);
  }
  rep.check("|G_z| above the expansion bound > 1", expanding, "min(|G_z| - bound) = " + fmt(min_margin));
  rep.check("reduced-map Lyapunov exponents positive", positive, "min = " + fmt(min_lyap));
  rep.check("no reduced-map period up to 64", aperiodic, std::to_string(kGrid) + " lambda values");

  bool f_positive = true;
  double f_min = INFINITY;
  for (double mu : {1e-8, 1e-6, 1e-4}) {
    const SystemConfig cfg{pr, mu};
    if (!cfg.well_posed()) continue;
    const double le = lyapunov_exponent(pr.nu * mu, cfg, 10000, 100000).exponent;
    f_positive = f_positive && le > 0.0;
    f_min = std::min(f_min, le);
  }
  rep.check("f Lyapunov exponents positive", f_positive, "min = " + fmt(f_min));
  return rep.take();
}

SuiteReport stability_suite(const VerifyOptions& opt) {
  const MapParams pr = opt.params.value_or(MapParams{0.2, 1.0, 2, 1});
  require_kind(pr, RegimeKind::StablePeriodic);
  Report rep("stability", pr);
  const double lo = std::pow(pr.nu, 1.0 / pr.exponent());
  constexpr int kGrid = 20;
  double worst = 0.0;
  bool settles = true;
  for (int i = 0; i < kGrid; ++i) {
    const double lam = lo + (1.0 - lo) * i / (kGrid - 1);
    worst = std::max(worst, stability_certificate(pr, lam));
    const ReducedOrbit orb = reduced_orbit(lam, 0, pr, 0.5 * (pr.nu + 1.0), 5000, 256, EscapePolicy::Reinject);
    settles = settles && detect_period(orb.points, 1e-9, 64) == DetectedPeriod{1};
  }
  rep.check("fixed-point multipliers inside the unit circle", worst < 1.0, "max |G_z| = " + fmt(worst));
  rep.check("reduced-map orbits settle on the fixed point", settles, std::to_string(kGrid) + " lambda values");

  bool periodic = true;
  double f_max = -INFINITY;
  for (double mu : {1e-8, 1e-6, 1e-4}) {
    const SystemConfig cfg{pr, mu};
    if (!cfg.well_posed()) continue;
    for (int j = 0; j < 10; ++j) {
      AttractorOptions ao;
      ao.x0 = mu * (pr.nu + (1.0 - pr.nu) * j / 9.0);
      const AttractorSample s = attractor_sample(cfg, ao);
      periodic = periodic && s.period.has_value() && s.lyapunov < 0.0;
      f_max = std::max(f_max, s.lyapunov);
    }
  }
  rep.check("f orbits seeded across W are periodic and attracting", periodic,
            "max Lyapunov exponent " + fmt(f_max));
  return rep.take();
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "intervals", "flip", "chaos", "stability"};
  return names;
}

SuiteReport run_suite(const std::string& suite, const VerifyOptions& options) {
  if (options.params) validate(*options.params);
  if (suite == "identity") return identity_suite(options);
  if (suite == "intervals") return intervals_suite(options);
  if (suite == "flip") return flip_suite(options);
  if (suite == "chaos") return chaos_suite(options);
  if (suite == "stability") return stability_suite(options);
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
}

}  // namespace pwbifurc
