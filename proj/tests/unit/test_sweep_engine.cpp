#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <sstream>
#include <string>

#include "pwbifurc/bifurcation_analysis.hpp"
#include "pwbifurc/error.hpp"
#include "pwbifurc/sweep_engine.hpp"

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

SweepSpec small_spec() {
  SweepSpec s;
  s.n_samples = 12;
  s.burn_in = 2000;
  s.n_keep = 256;
  return s;
}

}  // namespace

TEST_CASE("spec validation and sampling") {
  SweepSpec s = small_spec();
  CHECK_NOTHROW(validate(s));
  s.mu_min = 0.0;
  CHECK(code_of([&] { validate(s); }) == ErrorCode::InvalidArgument);
  s = small_spec();
  s.mu_max = s.mu_min;
  CHECK(code_of([&] { validate(s); }) == ErrorCode::InvalidArgument);
  s = small_spec();
  s.n_samples = 1;
  CHECK(code_of([&] { validate(s); }) == ErrorCode::InvalidArgument);
  s = small_spec();
  s.n_keep = 100;
  CHECK(code_of([&] { validate(s); }) == ErrorCode::InvalidArgument);

  s = small_spec();
  s.mu_min = 1e-8;
  s.mu_max = 1e-2;
  s.n_samples = 7;
  const auto logs = sample_mus(s);
  REQUIRE(logs.size() == 7);
  CHECK(logs.front() == 1e-8);
  CHECK(logs.back() == 1e-2);
  for (std::size_t i = 1; i < logs.size(); ++i) CHECK(logs[i] / logs[i - 1] == doctest::Approx(10.0).epsilon(1e-12));
  s.scale = SamplingScale::Linear;
  s.mu_min = 1.0;
  s.mu_max = 2.0;
  s.n_samples = 5;
  const auto lin = sample_mus(s);
  CHECK(lin[1] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(lin.back() == 2.0);
}

TEST_CASE("markers") {
  const MapParams pr;
  SweepSpec s = small_spec();
  const OrbitInterval i5 = orbit_interval(pr, 5);
  s.mu_min = i5.mu_low * 1.01;
  s.mu_max = i5.mu_high * 0.99;
  auto m = annotate_markers(s);
  REQUIRE(m.size() == 1);
  CHECK(m[0].M == 5);
  CHECK(m[0].mu_pd == mu_pd(pr, 5));
  CHECK(m[0].mu_1 == mu_right(pr, 5));

  s.mu_min = mu_pd(pr, 6);
  s.mu_max = mu_right(pr, 4);
  m = annotate_markers(s);
  REQUIRE(m.size() == 3);
  CHECK(m[0].M == 4);
  CHECK(m[1].M == 5);
  CHECK(m[2].M == 6);

  // Gap between I_5 and I_4.
  s.mu_min = mu_right(pr, 5) * 1.01;
  s.mu_max = mu_pd(pr, 4) * 0.99;
  CHECK(annotate_markers(s).empty());

  s.params = MapParams{0.75, 1, 2, 1};
  CHECK(code_of([&] { annotate_markers(s); }) == ErrorCode::WrongRegime);
}

TEST_CASE("run_sweep") {
  SUBCASE("one record per sample, ordered, skipped when ill posed") {
    SweepSpec s = small_spec();
    s.mu_min = 1e-3;
    s.mu_max = 5.0;
    const auto recs = run_sweep(s, 2);
    REQUIRE(recs.size() == s.n_samples);
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].mu > recs[i - 1].mu);
    CHECK_FALSE(recs.front().skipped);
    CHECK(recs.back().skipped);
    CHECK(recs.back().points.empty());
    for (const auto& r : recs) {
      if (!r.skipped) CHECK(r.points.size() == s.n_keep);
    }
    s.mu_min = 2.0;
    CHECK(code_of([&] { run_sweep(s); }) == ErrorCode::AllSamplesIllPosed);
  }
  SUBCASE("deterministic for any worker count") {
    SweepSpec s = small_spec();
    s.n_samples = 30;
    s.mu_min = 1e-7;
    const auto a = run_sweep(s, 1);
    const auto b = run_sweep(s, 7);
    std::ostringstream ca, cb;
    write_diagram_csv(ca, a);
    write_diagram_csv(cb, b);
    CHECK(ca.str() == cb.str());
  }
  SUBCASE("chaotic regime keeps a positive exponent") {
    SweepSpec s = small_spec();
    s.params = MapParams{0.75, 1, 2, 1};
    s.mu_min = 1e-8;
    s.mu_max = 1e-2;
    s.n_samples = 25;
    s.n_keep = 2000;
    for (const auto& r : run_sweep(s)) {
      if (r.skipped) continue;
      CHECK(r.lyapunov > 0.0);
      CHECK_FALSE(r.period.has_value());
      CHECK_FALSE(r.predicted_M.has_value());
    }
  }
  SUBCASE("periods across I_5, the gap and I_4") {
    const MapParams pr;
    SweepSpec s = small_spec();
    s.mu_min = 0.5 * (mu_pd(pr, 5) + mu_right(pr, 5));
    s.mu_max = 0.5 * (mu_pd(pr, 4) + mu_right(pr, 4));
    s.n_samples = 40;
    s.n_keep = 1000;
    s.burn_in = 20000;
    const auto recs = run_sweep(s);
    CHECK(recs.front().period == DetectedPeriod{5});
    CHECK(recs.front().predicted_M == 5);
    CHECK(recs.back().period == DetectedPeriod{4});
    CHECK(recs.back().predicted_M == 4);
    // Periods only step down from 5 to 4, with aperiodic samples at most in between.
    int last = 5;
    for (const auto& r : recs) {
      if (!r.period) continue;
      CHECK((*r.period == 4 || *r.period == 5));
      CHECK(static_cast<int>(*r.period) <= last);
      last = static_cast<int>(*r.period);
    }
  }
}

TEST_CASE("period plateaus sit on the predicted intervals") {
  const MapParams pr;
  SweepSpec s;
  s.mu_min = mu_pd(pr, 9);
  s.mu_max = mu_right(pr, 7);
  s.n_samples = 60;
  s.burn_in = 20000;
  s.n_keep = 1000;
  const auto mus = sample_mus(s);
  const double step = mus[1] / mus[0];
  const auto recs = run_sweep(s);
  for (int M = 7; M <= 9; ++M) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : recs) {
      if (r.period == DetectedPeriod{static_cast<std::size_t>(M)}) {
        lo = std::min(lo, r.mu);
        hi = std::max(hi, r.mu);
      }
    }
    INFO("M=", M, " plateau [", lo, ", ", hi, "] vs I_M (", mu_pd(pr, M), ", ", mu_right(pr, M), "]");
    REQUIRE(hi > 0.0);
    CHECK(lo >= mu_pd(pr, M) / step);
    CHECK(hi <= std::min(mu_right(pr, M) * step, s.mu_max));
  }
}

TEST_CASE("CSV and JSON output") {
  std::vector<DiagramRecord> recs(2);
  recs[0].mu = 0.1;
  recs[0].points = {0.05, 0.07};
  recs[0].period = 2;
  recs[0].lyapunov = -0.5;
  recs[1].mu = 0.2;
  recs[1].skipped = true;
  std::ostringstream os;
  write_diagram_csv(os, recs);
  CHECK(os.str() ==
        "mu,point_index,x,period,lyapunov,skipped\n"
        "0.10000000000000001,0,0.050000000000000003,2,-0.5,0\n"
        "0.10000000000000001,1,0.070000000000000007,2,-0.5,0\n"
        "0.20000000000000001,0,nan,0,nan,1\n");
  recs[0].period.reset();
  std::ostringstream chaotic;
  write_diagram_csv(chaotic, {recs[0]});
  CHECK(chaotic.str().find(",0,-0.5,0\n") != std::string::npos);
  CHECK(std::strtod(format_real(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);

  const MapParams pr;
  const auto doc = nlohmann::json::parse(markers_json(pr, {Marker{5, mu_pd(pr, 5), mu_right(pr, 5)}}));
  CHECK(doc["params"]["p"] == 2);
  CHECK(doc["params"]["nu"] == 0.5);
  REQUIRE(doc["markers"].size() == 1);
  CHECK(doc["markers"][0]["M"] == 5);
  CHECK(doc["markers"][0]["mu_pd"].get<double>() == mu_pd(pr, 5));
  CHECK(doc["markers"][0]["mu_1"].get<double>() == mu_right(pr, 5));
}

TEST_CASE("thread count") {
  unsetenv("PWBIFURC_THREADS");
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
  setenv("PWBIFURC_THREADS", "2", 1);
  CHECK(resolve_thread_count(0) <= 2);
  CHECK(resolve_thread_count(8) == 2);
  setenv("PWBIFURC_THREADS", "junk", 1);
  CHECK(resolve_thread_count(5) == 5);
  unsetenv("PWBIFURC_THREADS");
}
