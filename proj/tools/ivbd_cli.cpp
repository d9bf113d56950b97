// ivbd: identified sets, breakdown analysis, bootstrap inference, and
// simulation for binary-outcome IV designs under bounded violations of
// instrument independence.
//
// Exit codes: 0 success; 1 runtime error; 2 input schema violation;
// 3 assumption-diagnostic failure (override with --ignore-assumptions).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ivbd/bounds.hpp"
#include "ivbd/breakdown.hpp"
#include "ivbd/calibration.hpp"
#include "ivbd/csv.hpp"
#include "ivbd/estimators.hpp"
#include "ivbd/inference.hpp"
#include "ivbd/oracle.hpp"
#include "ivbd/simulation.hpp"
#include "ivbd/types.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitSchema = 2;
constexpr int kExitAssumptions = 3;

json interval_json(const ivbd::Interval& iv) { return json::array({iv.lb(), iv.ub()}); }

json assumptions_json(const ivbd::AssumptionReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"label", c.label},
                     {"relaxation_below_propensity", c.relaxation_below_propensity},
                     {"fs_lower_positive", c.fs_lower_positive},
                     {"relevant", c.relevant}});
  }
  return {{"pass", report.pass()},
          {"relaxation_below_propensity", report.relaxation_below_propensity},
          {"fs_lower_positive", report.fs_lower_positive},
          {"relevant", report.relevant},
          {"cells", std::move(cells)}};
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw ivbd::Error("cannot open output file: " + output_path);
  out << text;
}

int default_threads() {
  if (const char* env = std::getenv("IVBD_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

/// Shared ingestion flags and the estimate step with assumption gating.
struct DataOptions {
  std::string data_path;
  long drop_thin_cells = 0;
  bool ignore_assumptions = false;
  std::string output_path;
  int threads = default_threads();

  void attach(CLI::App* cmd, bool with_data = true) {
    if (with_data) {
      cmd->add_option("--data", data_path, "input CSV (columns y,d,z + covariates)")
          ->required();
    }
    cmd->add_option("--drop-thin-cells", drop_thin_cells,
                    "drop covariate cells with any (z,x) stratum thinner than "
                    "this and renormalize the cell weights")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--ignore-assumptions", ignore_assumptions,
                  "report assumption diagnostics but do not fail on them");
    cmd->add_option("--output", output_path, "write the report here instead of stdout");
    cmd->add_option("--threads", threads, "worker threads (env IVBD_THREADS)")
        ->check(CLI::PositiveNumber);
  }

  ivbd::CellTable load(const ivbd::Dataset& dataset,
                       std::vector<std::string>* dropped) const {
    const ivbd::EstimateOptions options{.min_stratum_count = drop_thin_cells};
    ivbd::CellTable table = ivbd::estimate_cells(dataset.records, options, dropped);
    if (dropped && !dropped->empty()) {
      std::cerr << "warning: dropped " << dropped->size()
                << " covariate cell(s) below the stratum-size threshold\n";
    }
    return table;
  }

  /// Returns false (and prints why) when diagnostics fail and are not ignored.
  bool gate(const ivbd::AssumptionReport& report) const {
    if (report.pass() || ignore_assumptions) return true;
    std::cerr << "assumption diagnostics failed:";
    if (!report.relaxation_below_propensity)
      std::cerr << " relaxation-not-below-propensity";
    if (!report.fs_lower_positive) std::cerr << " first-stage-lower-bound-not-positive";
    if (!report.relevant) std::cerr << " instrument-not-relevant";
    std::cerr << "\nfailing cells:";
    for (const auto& c : report.cells) {
      if (!(c.relaxation_below_propensity && c.fs_lower_positive && c.relevant)) {
        std::cerr << ' ' << c.label;
      }
    }
    std::cerr << "\n(use --ignore-assumptions to proceed)\n";
    return false;
  }
};

int run_bounds(const DataOptions& data_opts, double c1, double c2,
               std::optional<double> joint_c, const std::string& ratio_mode) {
  const ivbd::Dataset dataset = ivbd::read_csv(data_opts.data_path);
  std::vector<std::string> dropped;
  const ivbd::CellTable table = data_opts.load(dataset, &dropped);

  ivbd::SensitivityParams params;
  params.c1 = c1;
  params.c2 = c2;
  params.ratio_mode = ratio_mode == "rectangle" ? ivbd::RatioMode::rectangle
                                                : ivbd::RatioMode::paired;
  if (joint_c) {
    params.mode = ivbd::RelaxationMode::joint;
    params.c = *joint_c;
  }
  params.validate();
  const ivbd::BoundVariant variant = joint_c ? ivbd::BoundVariant::joint
                                             : ivbd::BoundVariant::separate;
  const double fs_c = joint_c ? *joint_c : c1;
  const double rf_c = joint_c ? *joint_c : c2;

  const ivbd::AssumptionReport assumptions = ivbd::validate_assumptions(table, params);
  if (!data_opts.gate(assumptions)) return kExitAssumptions;

  json cells = json::array();
  for (const ivbd::Cell& cell : table.cells()) {
    const ivbd::LateBounds late =
        joint_c ? ivbd::late_bounds_joint_conditional(cell, *joint_c)
                : ivbd::late_bounds_conditional(cell, c1, c2, params.ratio_mode);
    cells.push_back(
        {{"label", cell.label},
         {"q", cell.q},
         {"p_z1", cell.p_z1},
         {"first_stage",
          interval_json(ivbd::first_stage_bounds_conditional(cell, fs_c, variant))},
         {"reduced_form",
          interval_json(ivbd::reduced_form_bounds_conditional(cell, rf_c, variant))},
         {"late", interval_json(late.interval)},
         {"late_weak_upper", late.weak_upper}});
  }

  const ivbd::LateBounds late_agg =
      joint_c ? ivbd::late_bounds_joint(table, *joint_c)
              : ivbd::late_bounds(table, c1, c2, params.ratio_mode);
  const json report = {
      {"command", "bounds"},
      {"config",
       {{"data", data_opts.data_path},
        {"c1", c1},
        {"c2", c2},
        {"joint", joint_c ? json(*joint_c) : json(nullptr)},
        {"ratio_mode", ratio_mode},
        {"drop_thin_cells", data_opts.drop_thin_cells},
        {"ignore_assumptions", data_opts.ignore_assumptions},
        {"threads", data_opts.threads}}},
      {"params",
       {{"c1", params.c1},
        {"c2", params.c2},
        {"c", params.c},
        {"mode", joint_c ? "joint" : "separate"},
        {"ratio_mode", ratio_mode}}},
      {"n", table.n()},
      {"dropped_cells", dropped},
      {"assumptions", assumptions_json(assumptions)},
      {"cells", std::move(cells)},
      {"aggregate",
       {{"first_stage", interval_json(ivbd::first_stage_bounds(table, fs_c, variant))},
        {"reduced_form",
         interval_json(ivbd::reduced_form_bounds(table, rf_c, variant))},
        {"late", interval_json(late_agg.interval)},
        {"late_weak_upper", late_agg.weak_upper}}}};
  emit(report.dump(2) + "\n", data_opts.output_path);
  return kExitOk;
}

int run_breakdown(const DataOptions& data_opts, const std::string& target,
                  double mu, const std::string& direction_name,
                  std::optional<int> bootstrap_b, double alpha,
                  std::uint64_t seed) {
  const ivbd::Dataset dataset = ivbd::read_csv(data_opts.data_path);
  std::vector<std::string> dropped;
  const ivbd::CellTable table = data_opts.load(dataset, &dropped);

  const ivbd::Direction direction = direction_name == "le"
                                        ? ivbd::Direction::at_most
                                        : ivbd::Direction::at_least;
  if (target == "fs" && direction == ivbd::Direction::at_most) {
    throw ivbd::InvalidParams(
        "the first-stage breakdown point is defined for direction 'ge' only");
  }
  ivbd::Conclusion conclusion;
  conclusion.target = target == "fs"   ? ivbd::Target::first_stage
                      : target == "rf" ? ivbd::Target::reduced_form
                                       : ivbd::Target::late;
  conclusion.direction = direction;
  conclusion.mu = mu;
  conclusion.validate();

  const ivbd::AssumptionReport assumptions =
      ivbd::validate_assumptions(table, ivbd::SensitivityParams{});
  if (!data_opts.gate(assumptions)) return kExitAssumptions;

  const auto statistic = [&](const ivbd::CellTable& t) {
    switch (conclusion.target) {
      case ivbd::Target::first_stage:
        return ivbd::breakdown_point_first_stage(t, mu, ivbd::BoundVariant::separate);
      case ivbd::Target::reduced_form:
        return ivbd::breakdown_point_reduced_form(t, mu, ivbd::BoundVariant::separate,
                                                  direction);
      case ivbd::Target::late:
        return ivbd::breakdown_point_joint(t, mu, direction);
    }
    throw ivbd::InvalidParams("unknown target");
  };
  ivbd::BreakdownResult estimate = statistic(table);

  json bootstrap_report = nullptr;
  if (bootstrap_b) {
    ivbd::BootstrapConfig bcfg;
    bcfg.replications = *bootstrap_b;
    bcfg.alpha = alpha;
    bcfg.seed = seed;
    bcfg.threads = data_opts.threads;
    const std::vector<double> draws = ivbd::bootstrap_distribution(
        dataset.records,
        [&](const ivbd::CellTable& t) { return statistic(t).value; }, bcfg);
    estimate.ci_lower = ivbd::one_sided_ci_breakdown(draws, alpha);
    bootstrap_report = {{"replications", *bootstrap_b},
                        {"alpha", alpha},
                        {"seed", seed},
                        {"ci_lower", *estimate.ci_lower}};
  }

  const json report = {
      {"command", "breakdown"},
      {"config",
       {{"data", data_opts.data_path},
        {"target", target},
        {"mu", mu},
        {"direction", direction_name},
        {"bootstrap", bootstrap_b ? json(*bootstrap_b) : json(nullptr)},
        {"alpha", alpha},
        {"seed", seed},
        {"drop_thin_cells", data_opts.drop_thin_cells},
        {"ignore_assumptions", data_opts.ignore_assumptions},
        {"threads", data_opts.threads}}},
      {"params",
       {{"c1", 0.0},
        {"c2", 0.0},
        {"c", 0.0},
        {"mode", target == "late-joint" ? "joint" : "separate"},
        {"ratio_mode", "paired"}}},
      {"n", table.n()},
      {"dropped_cells", dropped},
      {"assumptions", assumptions_json(assumptions)},
      {"estimate",
       {{"value", estimate.value},
        {"clipped", estimate.clipped},
        {"solver_iterations", estimate.solver_iterations},
        {"residual", estimate.residual}}},
      {"bootstrap_result", std::move(bootstrap_report)}};
  emit(report.dump(2) + "\n", data_opts.output_path);
  return kExitOk;
}

int run_frontier(const DataOptions& data_opts, double mu, int grid_points,
                 double c_max, bool band, int bootstrap_b, double alpha,
                 std::uint64_t seed) {
  const ivbd::Dataset dataset = ivbd::read_csv(data_opts.data_path);
  std::vector<std::string> dropped;
  const ivbd::CellTable table = data_opts.load(dataset, &dropped);

  const ivbd::AssumptionReport assumptions =
      ivbd::validate_assumptions(table, ivbd::SensitivityParams{});
  if (!data_opts.gate(assumptions)) return kExitAssumptions;

  const std::vector<double> grid = ivbd::uniform_grid(c_max, grid_points);
  const auto curve_fn = [&](const ivbd::CellTable& t) {
    return ivbd::breakdown_frontier(t, mu, grid, ivbd::BoundVariant::separate, c_max);
  };
  const ivbd::FrontierCurve curve = curve_fn(table);

  std::vector<double> band_lower;
  if (band) {
    ivbd::BootstrapConfig bcfg;
    bcfg.replications = bootstrap_b;
    bcfg.alpha = alpha;
    bcfg.seed = seed;
    bcfg.threads = data_opts.threads;
    const std::vector<ivbd::FrontierCurve> draws =
        ivbd::bootstrap_curves(dataset.records, curve_fn, bcfg);
    band_lower = ivbd::uniform_band_frontier(draws, curve, alpha);
  }

  std::string csv = band ? "c1,bf,band_lower\n" : "c1,bf\n";
  char line[96];
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    if (band) {
      std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g\n", curve.grid[i],
                    curve.values[i], band_lower[i]);
    } else {
      std::snprintf(line, sizeof(line), "%.10g,%.10g\n", curve.grid[i],
                    curve.values[i]);
    }
    csv += line;
  }
  emit(csv, data_opts.output_path);
  return kExitOk;
}

int run_simulate(const DataOptions& data_opts, const ivbd::MonteCarloConfig& config) {
  const ivbd::MonteCarloReport report = ivbd::monte_carlo(config);
  json rows = json::array();
  for (const ivbd::MonteCarloRow& row : report.rows) {
    rows.push_back({{"target", ivbd::to_string(row.target)},
                    {"mu", row.mu},
                    {"truth", row.truth},
                    {"avg_bias", row.avg_bias},
                    {"median_bias", row.median_bias},
                    {"coverage", row.coverage},
                    {"replications", row.replications}});
  }
  const json out = {
      {"command", "simulate"},
      {"config",
       {{"n", config.n},
        {"replications", config.replications},
        {"mus", config.mus},
        {"seed", config.seed},
        {"population_draws", config.population_draws},
        {"threads", config.threads},
        {"bootstrap",
         {{"replications", config.bootstrap.replications},
          {"alpha", config.bootstrap.alpha}}},
        {"dgp",
         {{"p_x", config.params.p_x},
          {"p_z_given_x", config.params.p_z_given_x},
          {"pi_z", config.params.pi_z},
          {"pi_x", config.params.pi_x},
          {"beta_d", config.params.beta_d},
          {"beta_x", config.params.beta_x},
          {"rho", config.params.rho},
          {"copula",
           config.params.copula == ivbd::CopulaKind::gaussian ? "gaussian"
                                                              : "mixture"}}}}},
      {"rows", std::move(rows)}};
  emit(out.dump(2) + "\n", data_opts.output_path);
  std::cerr << ivbd::format_table(report);
  return kExitOk;
}

int run_calibrate(const DataOptions& data_opts) {
  const ivbd::Dataset dataset = ivbd::read_csv(data_opts.data_path, /*keep_columns=*/true);
  if (dataset.covariate_columns.empty()) {
    throw ivbd::InvalidParams("calibration needs at least one covariate column");
  }
  const std::vector<ivbd::CbarResult> values =
      ivbd::cbar_all(dataset.labeled, dataset.covariate_columns.size());

  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a].value > values[b].value;
  });

  json columns = json::array();
  for (const std::size_t i : order) {
    if (values[i].support_incomplete) {
      std::cerr << "warning: column '" << dataset.covariate_columns[i]
                << "': not every covariate combination is observed; the "
                   "supremum runs over observed cells only\n";
    }
    columns.push_back({{"column", dataset.covariate_columns[i]},
                       {"cbar", values[i].value},
                       {"support_incomplete", values[i].support_incomplete}});
  }
  const json report = {{"command", "calibrate"},
                       {"config", {{"data", data_opts.data_path}}},
                       {"n", dataset.records.size()},
                       {"columns", std::move(columns)}};
  emit(report.dump(2) + "\n", data_opts.output_path);
  return kExitOk;
}

/// Expands --config FILE (a JSON object of flag name -> value) into tokens
/// inserted before the command-line flags, so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ivbd::InvalidParams("--config needs a file");
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (config_path.empty() || args.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw ivbd::InvalidParams("cannot open config file: " + config_path);
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw ivbd::InvalidParams(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!config.is_object()) throw ivbd::InvalidParams("config file must hold a JSON object");

  std::vector<std::string> tokens;
  for (const auto& [key, value] : config.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    const auto push_scalar = [&](const json& v) {
      tokens.push_back("--" + key);
      tokens.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    };
    if (value.is_array()) {
      for (const auto& v : value) push_scalar(v);
    } else {
      push_scalar(value);
    }
  }
  // args[0] is the subcommand; config tokens go right after it.
  std::vector<std::string> merged;
  merged.push_back(args[0]);
  merged.insert(merged.end(), tokens.begin(), tokens.end());
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identified sets and breakdown analysis for binary-outcome IV designs"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "print help for every command");

  // --config is handled by pre-expansion; declared so help documents it.
  std::string config_ignored;
  app.add_option("--config", config_ignored,
                 "JSON file of flag values; explicit flags override it");

  DataOptions bounds_opts, breakdown_opts, frontier_opts, simulate_opts,
      calibrate_opts;

  auto* bounds_cmd = app.add_subcommand(
      "bounds", "identified sets for the complier share, ITT, and LATE");
  double c1 = 0.0, c2 = 0.0;
  std::optional<double> joint_c;
  std::string ratio_mode = "paired";
  bounds_opts.attach(bounds_cmd);
  bounds_cmd->add_option("--c1", c1, "relaxation for potential treatments")
      ->check(CLI::Range(0.0, 1.0));
  bounds_cmd->add_option("--c2", c2, "relaxation for potential outcomes")
      ->check(CLI::Range(0.0, 1.0));
  bounds_cmd->add_option("--joint", joint_c,
                         "use the joint relaxation at this magnitude instead")
      ->check(CLI::Range(0.0, 1.0));
  bounds_cmd->add_option("--ratio-mode", ratio_mode, "LATE ratio pairing")
      ->check(CLI::IsMember({"paired", "rectangle"}));

  auto* breakdown_cmd =
      app.add_subcommand("breakdown", "breakdown point for a conclusion");
  std::string target = "rf", direction = "ge";
  double mu = 0.0;
  std::optional<int> bootstrap_b;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  breakdown_opts.attach(breakdown_cmd);
  breakdown_cmd->add_option("--target", target, "fs | rf | late-joint")
      ->check(CLI::IsMember({"fs", "rf", "late-joint"}))
      ->required();
  breakdown_cmd->add_option("--mu", mu, "conclusion threshold")->required();
  breakdown_cmd->add_option("--direction", direction, "ge (>= mu) or le (<= mu)")
      ->check(CLI::IsMember({"ge", "le"}));
  breakdown_cmd->add_option("--bootstrap", bootstrap_b,
                            "bootstrap replications for a one-sided CI")
      ->check(CLI::PositiveNumber);
  breakdown_cmd->add_option("--alpha", alpha, "one-sided level")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  breakdown_cmd->add_option("--seed", seed, "bootstrap seed");

  auto* frontier_cmd =
      app.add_subcommand("frontier", "breakdown frontier curve as CSV");
  double frontier_mu = 0.0, c_max = 1.0;
  int grid_points = 101, frontier_b = 500;
  double frontier_alpha = 0.05;
  std::uint64_t frontier_seed = 0;
  bool band = false;
  frontier_opts.attach(frontier_cmd);
  frontier_cmd->add_option("--mu", frontier_mu, "conclusion threshold")->required();
  frontier_cmd->add_option("--grid", grid_points, "number of c1 grid points")
      ->check(CLI::Range(2, 100000));
  frontier_cmd->add_option("--c-max", c_max, "search bound for the relaxations")
      ->check(CLI::Range(1e-6, 1.0));
  frontier_cmd->add_flag("--band", band, "add a uniform lower confidence band");
  frontier_cmd->add_option("--bootstrap", frontier_b, "band bootstrap replications")
      ->check(CLI::PositiveNumber);
  frontier_cmd->add_option("--alpha", frontier_alpha, "band level")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  frontier_cmd->add_option("--seed", frontier_seed, "band bootstrap seed");

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo coverage study on the threshold-crossing DGP");
  ivbd::MonteCarloConfig mc;
  std::string copula = "gaussian";
  std::vector<std::string> target_names;
  simulate_opts.attach(simulate_cmd, /*with_data=*/false);
  simulate_cmd->add_option("--n", mc.n, "sample size per replication")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--replications", mc.replications, "Monte Carlo replications")
      ->check(CLI::PositiveNumber);
  simulate_cmd
      ->add_option("--mu", mc.mus, "conclusion thresholds (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  simulate_cmd
      ->add_option("--target", target_names, "breakdown targets: fs rf late (repeatable)")
      ->check(CLI::IsMember({"fs", "rf", "late"}))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  simulate_cmd->add_option("--bootstrap", mc.bootstrap.replications,
                           "bootstrap replications per Monte Carlo replicate")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--alpha", mc.bootstrap.alpha, "one-sided CI level")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  simulate_cmd->add_option("--seed", mc.seed, "master seed");
  simulate_cmd->add_option("--population-draws", mc.population_draws,
                           "draws used for the population-analog table")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--p-x", mc.params.p_x, "P(X=1)")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--p-z0", mc.params.p_z_given_x[0], "P(Z=1|X=0)")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--p-z1", mc.params.p_z_given_x[1], "P(Z=1|X=1)")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--pi-z", mc.params.pi_z, "selection coefficient on Z")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--pi-x", mc.params.pi_x, "selection coefficient on X")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--beta-d", mc.params.beta_d, "outcome coefficient on D")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--beta-x", mc.params.beta_x, "outcome coefficient on X")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--rho", mc.params.rho, "latent dependence level")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--copula", copula, "latent coupling: gaussian | mixture")
      ->check(CLI::IsMember({"gaussian", "mixture"}));

  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "leave-one-covariate-out sensitivity benchmark per column");
  calibrate_opts.attach(calibrate_cmd);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    // CLI11 consumes tokens in reverse order.
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ivbd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (app.got_subcommand(bounds_cmd)) {
      return run_bounds(bounds_opts, c1, c2, joint_c, ratio_mode);
    }
    if (app.got_subcommand(breakdown_cmd)) {
      return run_breakdown(breakdown_opts, target, mu, direction, bootstrap_b,
                           alpha, seed);
    }
    if (app.got_subcommand(frontier_cmd)) {
      return run_frontier(frontier_opts, frontier_mu, grid_points, c_max, band,
                          frontier_b, frontier_alpha, frontier_seed);
    }
    if (app.got_subcommand(simulate_cmd)) {
      mc.params.copula = copula == "mixture" ? ivbd::CopulaKind::mixture
                                             : ivbd::CopulaKind::gaussian;
      if (!target_names.empty()) {
        mc.targets.clear();
        for (const std::string& t : target_names) {
          mc.targets.push_back(t == "fs"   ? ivbd::Target::first_stage
                               : t == "rf" ? ivbd::Target::reduced_form
                                           : ivbd::Target::late);
        }
      }
      mc.threads = simulate_opts.threads;
      return run_simulate(simulate_opts, mc);
    }
    if (app.got_subcommand(calibrate_cmd)) {
      return run_calibrate(calibrate_opts);
    }
  } catch (const ivbd::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ivbd::EmptyStratum& e) {
    std::cerr << "overlap failure: " << e.what()
              << "\n(use --drop-thin-cells to drop such cells)\n";
    return kExitAssumptions;
  } catch (const ivbd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
