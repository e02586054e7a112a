#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pwbifurc/dynamics_metrics.hpp"
#include "pwbifurc/map_core.hpp"

namespace pwbifurc {

enum class SamplingScale { Linear, Logarithmic };

struct SweepSpec {
  MapParams params;
  double mu_min = 1e-6;
  double mu_max = 1e-2;
  std::size_t n_samples = 100;
  SamplingScale scale = SamplingScale::Logarithmic;
  std::size_t burn_in = 10000;
  std::size_t n_keep = 1000;
  std::size_t max_period = 64;
  /// Period tolerance relative to mu.
  double period_rel_tol = 1e-9;
};

/// 0 < mu_min < mu_max, n_samples >= 2, n_keep >= 4 * max_period.
void validate(const SweepSpec& spec);

/// Sample positions in ascending order; the end points are exactly mu_min and mu_max.
std::vector<double> sample_mus(const SweepSpec& spec);

struct DiagramRecord {
  double mu = 0.0;
  bool skipped = false;  // ill-posed sample, no attractor data
  std::vector<double> points;
  DetectedPeriod period;
  double lyapunov = 0.0;
  /// M of the closed-form interval I_M containing mu, if any.
  std::optional<int> predicted_M;
};

struct Marker {
  int M;
  double mu_pd;
  double mu_1;
};

/// Every I_M intersecting [mu_min, mu_max], in increasing M. Throws
/// Error(WrongRegime) outside the PeriodDoubling regime.
std::vector<Marker> annotate_markers(const SweepSpec& spec);

/// Worker count for sweeps: `requested` if nonzero, otherwise the machine
/// parallelism, in both cases capped by PWBIFURC_THREADS when set.
unsigned resolve_thread_count(unsigned requested = 0);

/// One record per sample, ordered by mu. Output does not depend on `threads`.
/// Throws Error(AllSamplesIllPosed) if no sample is well posed.
std::vector<DiagramRecord> run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// 17 significant digits, shortest general notation.
std::string format_real(double value);

/// Header `mu,point_index,x,period,lyapunov,skipped`; one row per kept point,
/// one row with NaN data for a skipped sample. Chaotic is written as period 0.
void write_diagram_csv(std::ostream& out, const std::vector<DiagramRecord>& records);

/// `{"params": {...}, "markers": [{"M", "mu_pd", "mu_1"}, ...]}`.
std::string markers_json(const MapParams& params, const std::vector<Marker>& markers);

}  // namespace pwbifurc
