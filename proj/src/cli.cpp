#include "pwbifurc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "pwbifurc/bifurcation_analysis.hpp"
#include "pwbifurc/error.hpp"
#include "pwbifurc/map_core.hpp"
#include "pwbifurc/sweep_engine.hpp"
#include "pwbifurc/verification.hpp"

namespace pwbifurc {

namespace {

using Json = nlohmann::ordered_json;

struct ParamFlags {
  int p = 2;
  int q = 1;
  double nu = 0.5;
  double e = 1.0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--p", p, "Denominator of the singular exponent q/p")->capture_default_str();
    cmd.add_option("--q", q, "Numerator of the singular exponent q/p (coprime, q < p)")->capture_default_str();
    cmd.add_option("--nu", nu, "Linear contraction rate, 0 < nu < 1")->capture_default_str();
    cmd.add_option("--e", e, "Singular-term coefficient, e > 0")->capture_default_str();
  }

  MapParams params() const { return MapParams::make(nu, e, p, q); }
};

Json params_json(const MapParams& pr) {
  return Json{{"p", pr.p}, {"q", pr.q}, {"nu", pr.nu}, {"e", pr.e}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::WrongRegime:
    case ErrorCode::DegenerateBoundary:
      return kExitRegime;
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Reads `key = value` lines into `--key` tokens for `cmd`. Blank lines and
// `#` comments are skipped; keys the subcommand does not know are reported
// on `err` and dropped.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App& cmd, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config" || cmd.get_option_no_throw("--" + key) == nullptr) {
      err << "warning: " << path << ":" << lineno << ": unknown key '" << key << "' ignored\n";
      continue;
    }
    std::istringstream words(value);
    std::vector<std::string> parts;
    for (std::string w; words >> w;) parts.push_back(w);
    if (parts.size() <= 1) {
      tokens.push_back("--" + key + "=" + value);
    } else {
      tokens.push_back("--" + key);
      tokens.insert(tokens.end(), parts.begin(), parts.end());
    }
  }
  return tokens;
}

std::optional<std::string> find_config(const std::vector<std::string>& args, std::size_t from) {
  std::optional<std::string> path;
  for (std::size_t i = from; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  return path;
}

const char* kPredictFields = R"(Output fields:
  regime       StablePeriodic (nu < nu_lower), PeriodDoubling, or RobustChaos (nu > nu_upper)
  nu_lower     1 - q (p+q)^((p-q)/q) / p^(p/q)
  nu_upper     p / (p+q)
  z_bar        fixed point of the reduced map G at the flip, p/(p+q)
  lambda_pd    lambda where G_z(z_bar) = -1: q (p+q)^((p-q)/q) nu^(p/q) / (p^(p/q) (1-nu))
  K1, K2       flip coefficients G_lambda G_zz + 2 G_lambda_z and G_zz^2/2 + G_zzz/3
               (K2_cubed uses G_zzz^3/3); the flip is nondegenerate when K1 != 0, K2 != 0
  intervals    I_M = (mu_pd(M), mu_1(M)] where f has an attracting M-periodic orbit,
               mu_pd = e^(p/(p-q)) (p+q) (q^q/p^p)^(1/(p-q)) nu^(p(M-1)/(p-q)),
               mu_1  = e^(p/(p-q)) (1-nu)^(q/(p-q)) nu^(p(M-2)/(p-q))
The flip fields and intervals are present only in the PeriodDoubling regime.)";

const char* kSweepFields = R"(Files:
  <out>.csv           mu,point_index,x,period,lyapunov,skipped; one row per kept attractor
                      point, period 0 for no period up to --max-period, one NaN row for an
                      ill-posed mu (skipped = 1)
  <out>.markers.json  closed-form intervals I_M = (mu_pd, mu_1] meeting [mu-min, mu-max]
                      (empty outside the PeriodDoubling regime)
Worker threads default to the machine parallelism, capped by PWBIFURC_THREADS.)";

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bifurcation analysis of the rational-degree piecewise-smooth map\n"
               "  f(x) = nu x + e (mu - x)^(q/p) for x <= mu, nu x for x >= mu",
               "pwbifurc"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_unused;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_unused,
                    "File of key=value lines pre-seeding this command's flags; explicit flags win");
  };

  ParamFlags pf;

  // predict
  std::optional<int> predict_M;
  std::vector<double> predict_range;
  CLI::App* predict = app.add_subcommand("predict", "Closed-form regime, flip and periodic-window predictions (JSON)");
  pf.attach(*predict);
  predict->add_option("--M", predict_M, "Report mu_pd(M) and mu_1(M) for this excursion count (>= 2)");
  predict->add_option("--mu-range", predict_range, "MU_MIN MU_MAX: list every I_M meeting this range "
                                                   "(default: the table for M = 2..10)")
      ->expected(2);
  predict->footer(kPredictFields);
  add_config(predict);

  // simulate
  std::optional<double> sim_x0;
  double sim_mu = 1e-3;
  std::size_t sim_n = 100;
  double sim_tol = 0.0;
  CLI::App* simulate = app.add_subcommand("simulate", "Iterate f and print the orbit as CSV step,x,region");
  pf.attach(*simulate);
  simulate->add_option("--mu", sim_mu, "Bifurcation parameter, must satisfy the well-posedness bound")
      ->capture_default_str();
  simulate->add_option("--x0", sim_x0, "Initial point (default: nu * mu, the left end of W)");
  simulate->add_option("--n", sim_n, "Number of iterations; n + 1 rows are printed")->capture_default_str();
  simulate->add_option("--region-tol", sim_tol, "Distance to mu reported as Boundary")->capture_default_str();
  simulate->footer("region: RegionI for x < mu (singular branch), RegionII for x > mu, Boundary near x = mu");
  add_config(simulate);

  // verify
  std::string suite;
  bool as_json = false;
  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand("verify", "Run a numerical property suite; exit 1 if any check fails");
  pf.attach(*verify);
  verify->add_option("--suite", suite, "identity | intervals | flip | chaos | stability")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_flag("--json", as_json, "Print the report as JSON");
  verify->add_option("--samples", vopt.samples, "Random configurations drawn by the identity suite")
      ->capture_default_str();
  verify->add_option("--seed", vopt.seed, "Seed of the identity suite")->capture_default_str();
  verify->footer(
      "Without --p/--q/--nu/--e each suite uses its own parameters: random for identity,\n"
      "nu = 0.5 for intervals and flip, 0.75 for chaos, 0.2 for stability (p = 2, q = 1, e = 1).\n"
      "Suites that need a regime exit 3 when the given nu lies outside it.");
  add_config(verify);

  // sweep
  SweepSpec spec;
  std::string prefix = "sweep";
  bool log_scale = true;
  unsigned threads = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "Bifurcation diagram over mu (CSV) with interval markers (JSON)");
  pf.attach(*sweep);
  sweep->add_option("--mu-min", spec.mu_min, "Smallest mu")->capture_default_str();
  sweep->add_option("--mu-max", spec.mu_max, "Largest mu")->capture_default_str();
  sweep->add_option("--samples", spec.n_samples, "Number of mu values")->capture_default_str();
  sweep->add_flag("--log,!--linear", log_scale, "Geometric (default) or uniform mu spacing");
  sweep->add_option("--out", prefix, "Output prefix for <out>.csv and <out>.markers.json")->capture_default_str();
  sweep->add_option("--burn-in", spec.burn_in, "Transient iterations discarded per mu")->capture_default_str();
  sweep->add_option("--keep", spec.n_keep, "Attractor points kept per mu")->capture_default_str();
  sweep->add_option("--max-period", spec.max_period, "Largest period searched")->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads, 0 = automatic")->capture_default_str();
  sweep->footer(kSweepFields);
  add_config(sweep);

  std::vector<std::string> full = args;
  try {
    const auto sub = std::find_if(full.begin(), full.end(), [&](const std::string& a) {
      return a == "predict" || a == "simulate" || a == "verify" || a == "sweep";
    });
    if (sub != full.end()) {
      const auto at = static_cast<std::size_t>(sub - full.begin());
      if (const auto path = find_config(full, at + 1)) {
        const auto tokens = config_tokens(*path, *app.get_subcommand(*sub), err);
        full.insert(full.begin() + static_cast<std::ptrdiff_t>(at) + 1, tokens.begin(), tokens.end());
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  std::vector<std::string> reversed(full.rbegin(), full.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (predict->parsed()) {
      const MapParams pr = pf.params();
      const RegimeBounds bounds = regime_bounds(pr.p, pr.q);
      Json doc;
      doc["params"] = params_json(pr);
      const Regime regime = classify_regime(pr);
      doc["regime"] = to_string(regime.kind);
      doc["nu_lower"] = bounds.nu_lower;
      doc["nu_upper"] = bounds.nu_upper;
      if (regime.kind != RegimeKind::PeriodDoubling) {
        if (predict_M || !predict_range.empty()) {
          throw Error(ErrorCode::WrongRegime, "--M and --mu-range need the PeriodDoubling regime, nu is in " +
                                                  std::string(to_string(regime.kind)));
        }
      } else {
        const double zbar = flip_point(pr.p, pr.q);
        const double lam = lambda_pd(pr);
        const FlipCoefficients fc = flip_coefficients(zbar, lam, 0, pr);
        doc["z_bar"] = zbar;
        doc["lambda_pd"] = lam;
        doc["K1"] = fc.K1;
        doc["K2"] = fc.K2_standard;
        doc["K2_cubed"] = fc.K2_cubed;
        doc["K1_nonzero"] = std::abs(fc.K1) > 1e-8;
        doc["K2_negative"] = fc.K2_standard < 0.0 && fc.K2_cubed < 0.0;
        if (predict_M) {
          if (*predict_M < 2) throw Error(ErrorCode::InvalidArgument, "--M must be at least 2");
          doc["M"] = *predict_M;
          doc["mu_pd"] = mu_pd(pr, *predict_M);
          doc["mu_1"] = mu_right(pr, *predict_M);
        }
        std::vector<OrbitInterval> table;
        if (!predict_range.empty()) {
          SweepSpec range;
          range.params = pr;
          range.mu_min = predict_range[0];
          range.mu_max = predict_range[1];
          if (!(range.mu_min > 0.0 && range.mu_min < range.mu_max)) {
            throw Error(ErrorCode::InvalidArgument, "--mu-range needs 0 < MU_MIN < MU_MAX");
          }
          for (const Marker& m : annotate_markers(range)) table.push_back(orbit_interval(pr, m.M));
        } else {
          for (int M = 2; M <= 10; ++M) table.push_back(orbit_interval(pr, M));
        }
        Json rows = Json::array();
        for (const OrbitInterval& iv : table) {
          rows.push_back(Json{{"M", iv.M},
                              {"mu_pd", iv.mu_low},
                              {"mu_1", iv.mu_high},
                              {"width", iv.width},
                              {"well_posed", SystemConfig{pr, iv.mu_high}.well_posed()}});
        }
        doc["intervals"] = rows;
      }
      out << doc.dump(2) << "\n";
      return kExitOk;
    }

    if (simulate->parsed()) {
      const SystemConfig cfg = SystemConfig::make(pf.params(), sim_mu);
      require_well_posed(cfg);
      if (sim_tol < 0.0) throw Error(ErrorCode::InvalidArgument, "--region-tol must be >= 0");
      const Orbit orbit = iterate_orbit(sim_x0.value_or(cfg.params.nu * sim_mu), cfg, sim_n, sim_tol);
      out << "step,x,region\n";
      for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        out << i << ',' << format_real(orbit.points[i].x) << ',' << to_string(orbit.points[i].region) << '\n';
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      const bool custom = !verify->get_option("--p")->empty() || !verify->get_option("--q")->empty() ||
                          !verify->get_option("--nu")->empty() || !verify->get_option("--e")->empty();
      if (custom) vopt.params = pf.params();
      const SuiteReport rep = run_suite(suite, vopt);
      if (as_json) {
        Json checks = Json::array();
        for (const CheckResult& c : rep.checks) {
          checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        Json doc{{"suite", rep.suite}, {"params", params_json(rep.params)}, {"passed", rep.passed()},
                 {"checks", checks}};
        if (rep.suite == "identity" && !custom) doc.erase("params");
        out << doc.dump(2) << "\n";
      } else {
        out << "suite " << rep.suite << "\n";
        for (const CheckResult& c : rep.checks) {
          out << (c.passed ? "  PASS  " : "  FAIL  ") << c.name << ": " << c.detail << "\n";
        }
        out << (rep.passed() ? "all checks passed" : "some checks failed") << "\n";
      }
      return rep.passed() ? kExitOk : kExitCheckFailed;
    }

    if (sweep->parsed()) {
      spec.params = pf.params();
      spec.scale = log_scale ? SamplingScale::Logarithmic : SamplingScale::Linear;
      validate(spec);
      std::vector<Marker> markers;
      try {
        markers = annotate_markers(spec);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::WrongRegime && e.code() != ErrorCode::DegenerateBoundary) throw;
      }
      const auto records = run_sweep(spec, threads);
      const std::string csv_path = prefix + ".csv";
      const std::string json_path = prefix + ".markers.json";
      std::ofstream csv(csv_path, std::ios::binary);
      if (!csv) throw Error(ErrorCode::Io, "cannot open '" + csv_path + "' for writing");
      write_diagram_csv(csv, records);
      csv.close();
      if (!csv) throw Error(ErrorCode::Io, "failed writing '" + csv_path + "'");
      std::ofstream js(json_path, std::ios::binary);
      if (!js) throw Error(ErrorCode::Io, "cannot open '" + json_path + "' for writing");
      js << markers_json(spec.params, markers) << "\n";
      js.close();
      if (!js) throw Error(ErrorCode::Io, "failed writing '" + json_path + "'");
      const auto skipped = std::count_if(records.begin(), records.end(), [](const DiagramRecord& r) {
        return r.skipped;
      });
      err << "wrote " << csv_path << " (" << records.size() << " samples, " << skipped << " ill-posed) and "
          << json_path << " (" << markers.size() << " intervals)\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace pwbifurc
