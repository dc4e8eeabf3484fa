#include "resil/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "resil/empirical.hpp"
#include "resil/io.hpp"
#include "resil/model.hpp"
#include "resil/montecarlo.hpp"
#include "resil/verify.hpp"
#include "resil/version.hpp"

namespace resil::cli {

namespace {

using io::json;

// Printed precision of the human-readable tables.
constexpr int table_digits = 10;

std::string num(double x, int digits = table_digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

void row(std::ostream& out, const std::string& label, const std::string& value) {
  out << std::left << std::setw(24) << label << value << '\n';
}

numerics::Tolerance default_tolerance() {
  numerics::Tolerance tol;
  if (const char* env = std::getenv("RESIL_DEFAULT_TOL")) {
    const std::string text(env);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0)) {
      throw ValidationError("RESIL_DEFAULT_TOL", "RESIL_DEFAULT_TOL: expected a positive number, got '" + text + "'");
    }
    tol.abs_tol = value;
    tol.rel_tol = value;
  }
  return tol;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) {
    throw std::ios_base::failure("cannot write '" + path + "'");
  }
  file << std::setprecision(17);
  return file;
}

std::string describe(const EventModel& m) {
  std::ostringstream os;
  os << restore_kind(m.restore()) << " restore, n_c = " << num(m.total()) << ", o_b = " << num(m.outage_end())
     << " h";
  std::visit(
      [&os](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        os << ", r_a = " << num(r.restore_start) << " h";
        if constexpr (std::is_same_v<T, ConstantRestore>) {
          os << ", r_b = " << num(r.restore_end) << " h";
        } else if constexpr (std::is_same_v<T, LognormalRestore>) {
          os << ", mu = " << num(r.mu) << ", sigma = " << num(r.sigma);
        } else {
          os << ", tau = " << num(r.tau) << " h";
        }
      },
      m.restore());
  return os.str();
}

std::string describe(const NadirLocation& location) {
  if (const auto* p = std::get_if<NadirPoint>(&location)) {
    return "at t = " + num(p->time) + " h";
  }
  const auto& i = std::get<NadirInterval>(location);
  return "on [" + num(i.start) + ", " + num(i.end) + "] h";
}

struct MetricsArgs {
  std::string model;
  bool json = false;
  std::optional<double> tol;
};

int cmd_metrics(const MetricsArgs& args, std::ostream& out) {
  const auto m = io::load_model_file(args.model);
  auto tol = default_tolerance();
  if (args.tol) {
    tol.abs_tol = *args.tol;
    tol.rel_tol = *args.tol;
  }
  const auto report = metrics(m, tol);

  if (args.json) {
    const json doc{{"tool", tool_name},
                   {"version", tool_version},
                   {"input", io::model_to_json(m)},
                   {"metrics", io::metrics_to_json(m, report)}};
    out << doc.dump(2) << '\n';
    return kOk;
  }

  row(out, "model", describe(m));
  row(out, "area", num(report.area));
  row(out, "area_numeric", num(report.area_numeric));
  row(out, "area_discrepancy", num(report.area_discrepancy));
  row(out, "nadir", num(report.nadir.value) + " " + describe(report.nadir.location));
  row(out, "mean_outage_time", num(report.mean_outage_time));
  row(out, "mean_restore_time", num(report.mean_restore_time));
  for (const auto& [name, value] : report.durations) {
    row(out, name, num(value));
  }
  if (std::holds_alternative<LognormalRestore>(m.restore())) {
    row(out, "inflection_time", num(lognormal_inflection_time(m)));
    const auto stationary = lognormal_stationary_time(m);
    row(out, "stationary_time", stationary ? num(*stationary) : std::string("none"));
  }
  return kOk;
}

struct CurveArgs {
  std::string model;
  double t_max = 0.0;
  int steps = 0;
  std::string out;
};

int cmd_curve(const CurveArgs& args, std::ostream& out) {
  const auto m = io::load_model_file(args.model);
  if (!(args.t_max > 0.0) || !std::isfinite(args.t_max)) {
    throw ValidationError("t-max", "--t-max: must be positive");
  }
  if (args.steps < 2) {
    throw ValidationError("steps", "--steps: must be at least 2");
  }
  auto file = open_output(args.out);
  file << "t,O_bar,R_bar,P_bar\n";
  for (int i = 0; i <= args.steps; ++i) {
    const double t = i == args.steps ? args.t_max : args.t_max * i / args.steps;
    file << t << ',' << mean_cum_outages(m, t) << ',' << mean_cum_restores(m, t) << ','
         << mean_performance(m, t) << '\n';
  }
  if (!file) {
    throw std::ios_base::failure("cannot write '" + args.out + "'");
  }
  out << "wrote " << args.steps + 1 << " rows to " << args.out << '\n';
  return kOk;
}

struct EmpiricalArgs {
  std::string data;
  bool json = false;
};

int cmd_empirical(const EmpiricalArgs& args, std::ostream& out) {
  const auto event = empirical::load_event_file(args.data);
  const auto report = empirical::empirical_metrics(event);
  if (args.json) {
    const json doc{{"tool", tool_name},
                   {"version", tool_version},
                   {"input", args.data},
                   {"metrics", io::empirical_to_json(report)}};
    out << doc.dump(2) << '\n';
    return kOk;
  }
  row(out, "records", std::to_string(report.count));
  row(out, "total_quantity", num(report.total_quantity));
  row(out, "area", num(report.area));
  row(out, "area_pairwise", num(report.area_pairwise));
  row(out, "nadir", num(report.nadir) + " at t = " + num(report.nadir_time) + " h");
  row(out, "duration", num(report.duration));
  row(out, "mean_repair_time", num(report.mean_repair_time));
  return kOk;
}

struct SimulateArgs {
  std::string model;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  double grid_max = 0.0;
  int grid_steps = 0;
  std::optional<double> quantity_mean;
  std::optional<std::string> out;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  const auto m = io::load_model_file(args.model);
  if (!(args.grid_max > 0.0) || !std::isfinite(args.grid_max)) {
    throw ValidationError("grid-max", "--grid-max: must be positive");
  }
  if (args.grid_steps < 1) {
    throw ValidationError("grid-steps", "--grid-steps: must be at least 1");
  }
  montecarlo::SimulationConfig cfg;
  cfg.realizations = args.realizations;
  cfg.seed = args.seed;
  if (args.quantity_mean) {
    cfg.quantity = montecarlo::ConstantQuantity{*args.quantity_mean};
  }
  for (int i = 0; i <= args.grid_steps; ++i) {
    cfg.grid.push_back(i == args.grid_steps ? args.grid_max : args.grid_max * i / args.grid_steps);
  }
  cfg.validate();

  const auto area = montecarlo::estimate_mean_area(m, cfg);
  const auto curve = montecarlo::estimate_mean_curve(m, cfg);
  const std::size_t count = montecarlo::resolve_count(m, cfg);
  const double closed = area_closed_form(m);
  // Realizations carry `count` outages of the configured quantity, which can
  // differ from n_c by rounding.
  const double scale = static_cast<double>(count) * montecarlo::mean_quantity(cfg.quantity) / m.total();
  const double expected = closed * scale;
  const std::string na = "n/a";

  row(out, "model", describe(m));
  row(out, "realizations", std::to_string(cfg.realizations));
  row(out, "seed", std::to_string(cfg.seed));
  row(out, "outages_per_event", std::to_string(count));
  row(out, "mc_mean_area", num(area.mean));
  row(out, "mc_area_stderr", area.std_error ? num(*area.std_error) : na);
  row(out, "closed_form_area", num(closed));
  row(out, "expected_area", num(expected));
  row(out, "z_score", area.std_error && *area.std_error > 0.0 ? num((area.mean - expected) / *area.std_error) : na);
  row(out, "mean_realized_nadir", num(curve.mean_realized_nadir.mean));
  row(out, "mean_curve_nadir", num(nadir(m).value * scale));
  row(out, "positive_fraction", num(curve.positive_fraction));

  if (args.out) {
    auto file = open_output(*args.out);
    file << "t,mean,stderr\n";
    for (std::size_t g = 0; g < curve.grid.size(); ++g) {
      file << curve.grid[g] << ',' << curve.mean[g] << ',';
      if (curve.std_error.empty()) {
        file << "NA";
      } else {
        file << curve.std_error[g];
      }
      file << '\n';
    }
    if (!file) {
      throw std::ios_base::failure("cannot write '" + *args.out + "'");
    }
    row(out, "curve_csv", *args.out);
  }
  return kOk;
}

struct VerifyArgs {
  std::string model;
  std::size_t realizations = 10000;
  std::uint64_t seed = 1;
  std::optional<double> threshold_override;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const auto m = io::load_model_file(args.model);
  verify::Options options;
  options.realizations = args.realizations;
  options.seed = args.seed;
  options.quadrature = default_tolerance();
  options.threshold_override = args.threshold_override;
  const auto checks = verify::run(m, options);

  row(out, "model", describe(m));
  for (const auto& c : checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(48) << c.name << "observed "
        << std::setw(14) << num(c.observed, 6) << "limit " << std::setw(14) << num(c.limit, 6) << c.detail << '\n';
  }
  const bool ok = verify::all_passed(checks);
  out << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resilience metrics for power-system outage and restore events", "resil"};
  app.set_version_flag("--version", std::string(tool_version));
  app.require_subcommand(1);

  MetricsArgs metrics_args;
  auto* metrics_cmd = app.add_subcommand("metrics", "Closed-form area, nadir and durations of a model");
  metrics_cmd->add_option("--model", metrics_args.model, "Model JSON file")->required();
  metrics_cmd->add_flag("--json", metrics_args.json, "Emit a JSON report");
  metrics_cmd->add_option("--tol", metrics_args.tol, "Quadrature tolerance (absolute and relative)");

  CurveArgs curve_args;
  auto* curve_cmd = app.add_subcommand("curve", "Write the mean outage, restore and performance curves as CSV");
  curve_cmd->add_option("--model", curve_args.model, "Model JSON file")->required();
  curve_cmd->add_option("--t-max", curve_args.t_max, "End of the time grid (h)")->required();
  curve_cmd->add_option("--steps", curve_args.steps, "Number of grid intervals")->required();
  curve_cmd->add_option("--out", curve_args.out, "Output CSV path")->required();

  EmpiricalArgs empirical_args;
  auto* empirical_cmd = app.add_subcommand("empirical", "Area, nadir and duration of recorded event data");
  empirical_cmd->add_option("--data", empirical_args.data, "Event CSV file")->required();
  empirical_cmd->add_flag("--json", empirical_args.json, "Emit a JSON report");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimates of the mean area and curve");
  simulate_cmd->add_option("--model", simulate_args.model, "Model JSON file")->required();
  simulate_cmd->add_option("--realizations", simulate_args.realizations, "Number of realizations")->required();
  simulate_cmd->add_option("--seed", simulate_args.seed, "Random seed")->required();
  simulate_cmd->add_option("--grid-max", simulate_args.grid_max, "End of the estimation grid (h)")->required();
  simulate_cmd->add_option("--grid-steps", simulate_args.grid_steps, "Number of grid intervals")->required();
  simulate_cmd->add_option("--quantity-mean", simulate_args.quantity_mean, "Quantity carried by each outage");
  simulate_cmd->add_option("--out", simulate_args.out, "Curve estimate CSV path");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check closed forms against quadrature, grids and Monte Carlo");
  verify_cmd->add_option("--model", verify_args.model, "Model JSON file")->required();
  verify_cmd->add_option("--realizations", verify_args.realizations, "Monte Carlo realizations")->capture_default_str();
  verify_cmd->add_option("--seed", verify_args.seed, "Random seed")->capture_default_str();
  verify_cmd->add_option("--threshold-override", verify_args.threshold_override)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidationError;
  }

  try {
    if (metrics_cmd->parsed()) {
      return cmd_metrics(metrics_args, out);
    }
    if (curve_cmd->parsed()) {
      return cmd_curve(curve_args, out);
    }
    if (empirical_cmd->parsed()) {
      return cmd_empirical(empirical_args, out);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(simulate_args, out);
    }
    return cmd_verify(verify_args, out);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
}

}  // namespace resil::cli
