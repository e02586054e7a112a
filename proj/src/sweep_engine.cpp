#include "pwbifurc/sweep_engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pwbifurc/bifurcation_analysis.hpp"
#include "pwbifurc/error.hpp"

namespace pwbifurc {

void validate(const SweepSpec& spec) {
  validate(spec.params);
  if (!(spec.mu_min > 0.0 && spec.mu_min < spec.mu_max && std::isfinite(spec.mu_max))) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs 0 < mu_min < mu_max");
  }
  if (spec.n_samples < 2) throw Error(ErrorCode::InvalidArgument, "sweep needs at least 2 samples");
  if (spec.max_period == 0 || spec.n_keep < 4 * spec.max_period) {
    throw Error(ErrorCode::InvalidArgument, "n_keep must be at least 4 * max_period");
  }
  if (!(spec.period_rel_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "period tolerance must be > 0");
}

std::vector<double> sample_mus(const SweepSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n_samples;
  std::vector<double> mus(n);
  const double span = static_cast<double>(n - 1);
  if (spec.scale == SamplingScale::Linear) {
    for (std::size_t i = 0; i < n; ++i) mus[i] = spec.mu_min + (spec.mu_max - spec.mu_min) * (i / span);
  } else {
    const double a = std::log(spec.mu_min);
    const double b = std::log(spec.mu_max);
    for (std::size_t i = 0; i < n; ++i) mus[i] = std::exp(a + (b - a) * (i / span));
  }
  mus.front() = spec.mu_min;
  mus.back() = spec.mu_max;
  return mus;
}

std::vector<Marker> annotate_markers(const SweepSpec& spec) {
  validate(spec);
  std::vector<Marker> markers;
  constexpr int kMaxCount = 100000;
  for (int M = 2; M <= kMaxCount; ++M) {
    const OrbitInterval iv = orbit_interval(spec.params, M);
    if (iv.mu_high < spec.mu_min) break;
    if (iv.mu_low < spec.mu_max) markers.push_back({M, iv.mu_low, iv.mu_high});
  }
  return markers;
}

unsigned resolve_thread_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("PWBIFURC_THREADS"); cap != nullptr && *cap != '\0') {
    const long v = std::strtol(cap, nullptr, 10);
    if (v >= 1) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

std::vector<DiagramRecord> run_sweep(const SweepSpec& spec, unsigned threads) {
  const std::vector<double> mus = sample_mus(spec);

  std::vector<Marker> markers;
  try {
    markers = annotate_markers(spec);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::WrongRegime) throw;
  }

  AttractorOptions options;
  options.burn_in = spec.burn_in;
  options.n_keep = spec.n_keep;
  options.max_period = spec.max_period;

  std::vector<DiagramRecord> records(mus.size());
  auto evaluate = [&](std::size_t i) {
    DiagramRecord& rec = records[i];
    rec.mu = mus[i];
    for (const Marker& mk : markers) {
      if (mk.mu_pd < rec.mu && rec.mu <= mk.mu_1) rec.predicted_M = mk.M;
    }
    const SystemConfig config{spec.params, rec.mu};
    if (!config.well_posed()) {
      rec.skipped = true;
      return;
    }
    AttractorOptions local = options;
    local.tol = spec.period_rel_tol * rec.mu;
    AttractorSample sample = attractor_sample(config, local);
    rec.points = std::move(sample.points);
    rec.period = sample.period;
    rec.lyapunov = sample.lyapunov;
  };

  const unsigned workers = std::min<std::size_t>(resolve_thread_count(threads), mus.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < mus.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = cursor++; i < mus.size(); i = cursor++) {
          try {
            evaluate(i);
          } catch (...) {
            std::lock_guard<std::mutex> guard(failure_lock);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  if (std::all_of(records.begin(), records.end(), [](const DiagramRecord& r) { return r.skipped; })) {
    throw Error(ErrorCode::AllSamplesIllPosed, "no sampled mu satisfies the well-posedness inequality");
  }
  return records;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_diagram_csv(std::ostream& out, const std::vector<DiagramRecord>& records) {
  out << "mu,point_index,x,period,lyapunov,skipped\n";
  for (const DiagramRecord& rec : records) {
    const std::string mu = format_real(rec.mu);
    if (rec.skipped) {
      out << mu << ",0,nan,0,nan,1\n";
      continue;
    }
    const std::string period = std::to_string(rec.period.value_or(0));
    const std::string lyap = format_real(rec.lyapunov);
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
      out << mu << ',' << i << ',' << format_real(rec.points[i]) << ',' << period << ',' << lyap << ",0\n";
    }
  }
}

std::string markers_json(const MapParams& params, const std::vector<Marker>& markers) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"nu", params.nu}, {"e", params.e}, {"p", params.p}, {"q", params.q}};
  doc["markers"] = nlohmann::ordered_json::array();
  for (const Marker& mk : markers) {
    doc["markers"].push_back({{"M", mk.M}, {"mu_pd", mk.mu_pd}, {"mu_1", mk.mu_1}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace pwbifurc
