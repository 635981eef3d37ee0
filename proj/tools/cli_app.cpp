#include "cli_app.hpp"

#include "dfpower/analysis.hpp"
#include "dfpower/error.hpp"
#include "dfpower/periodic.hpp"
#include "dfpower/plot.hpp"
#include "dfpower/program_io.hpp"
#include "dfpower/report.hpp"
#include "dfpower/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace dfpower::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const fs::path& source, const std::string& what) {
  throw Error(ErrorKind::ConfigError, source.string() + ": " + what);
}

void apply_tolerance_overrides(const Json& t, Tolerances& tol, const fs::path& source) {
  if (!t.is_object()) config_error(source, "'tolerances' must be an object");
  auto set = [&](const char* key, auto& field) {
    if (t.contains(key)) field = t.at(key).get<std::decay_t<decltype(field)>>();
  };
  set("row_sum", tol.row_sum);
  set("structural_zero", tol.structural_zero);
  set("eigenvector", tol.eigenvector);
  set("eigenvector_max_iters", tol.eigenvector_max_iters);
  set("damping", tol.damping);
  set("vertex_guard", tol.vertex_guard);
  set("near_vertex", tol.near_vertex);
  set("fixed_point", tol.fixed_point);
  set("max_issues", tol.max_issues);
  set("star", tol.star);
  set("opinion", tol.opinion);
  set("opinion_max_iters", tol.opinion_max_iters);
  set("zeta", tol.zeta);
  set("structure", tol.structure);
}

fs::path resolve_out_dir(const std::string& flag, const ExperimentConfig* config) {
  if (!flag.empty()) return flag;
  if (config != nullptr && config->output_dir) return *config->output_dir;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return fs::current_path();
}

TopologyProgram load_config_program(const ExperimentConfig& config) {
  TopologyProgram program = load_program(config.program_path);
  if (config.seed) {
    if (std::holds_alternative<RandomSignal>(program.signal())) {
      program = program.with_signal(RandomSignal{*config.seed});
    }
  }
  return program;
}

std::vector<std::pair<std::string, Trajectory>> run_all(const ExperimentConfig& config,
                                                         const TopologyProgram& program,
                                                         Index issues) {
  if (config.initial_conditions.empty()) {
    config_error(config.source, "'initial_conditions' is empty");
  }
  std::vector<std::pair<std::string, Trajectory>> runs;
  for (const auto& ic : config.initial_conditions) {
    runs.emplace_back(ic.name, simulate(program, ic.resolve(program.dimension()), issues,
                                        config.tolerances));
  }
  return runs;
}

Json program_signal_json(const TopologyProgram& program) {
  // Reuse the file serializer so reports and program files agree.
  return Json::parse(format_program(program)).at("signal");
}

void write_plots(const std::vector<std::pair<std::string, TrajectoryTable>>& tables,
                 const std::vector<Index>& individuals, const fs::path& out_dir,
                 std::ostream& out, std::ostream& err) {
  for (const auto& [name, table] : tables) {
    const fs::path path = out_dir / (name + ".svg");
    write_text_file(path, render_svg(trajectory_chart(
                              table, "Evolution of individual social power: " + name)));
    out << "wrote " << path.string() << "\n";
  }
  if (tables.size() < 2) {
    err << "notice: comparison chart skipped, it needs two runs\n";
    return;
  }
  std::vector<Index> pick;
  for (Index i : individuals) {
    if (i >= 1 && i <= tables[0].second.dimension()) pick.push_back(i);
  }
  if (pick.empty()) {
    for (Index i = 1; i <= tables[0].second.dimension(); ++i) pick.push_back(i);
  }
  const fs::path path = out_dir / "comparison.svg";
  write_text_file(path, render_svg(comparison_chart(tables[0].second, tables[0].first,
                                                    tables[1].second, tables[1].first, pick)));
  out << "wrote " << path.string() << "\n";
}

TrajectoryTable to_table(const Trajectory& traj) {
  return parse_trajectory_csv(format_trajectory_csv(traj));
}

// -- simulate ---------------------------------------------------------------

int cmd_simulate(const ExperimentConfig& config, const std::string& out_flag,
                 std::optional<Index> issues_flag, std::optional<double> tol_flag,
                 std::ostream& out, std::ostream& err) {
  const TopologyProgram program = load_config_program(config);
  const Index issues = issues_flag.value_or(config.issues);
  const double gap_threshold = tol_flag.value_or(config.gap_threshold);
  const fs::path out_dir = resolve_out_dir(out_flag, &config);
  const auto& tol = config.tolerances;

  const auto runs = run_all(config, program, issues);

  // Bounds from the max-gamma profile; entries at a star center carry none.
  const Vector profile = max_gamma_profile(program);
  Vector bound(profile.size());
  for (Index i = 0; i < profile.size(); ++i) {
    bound(i) = std::abs(profile(i) - 0.5) <= tol.star ? 1.0 : profile(i) / (1.0 - profile(i));
  }

  Json report;
  report["program"] = config.program_path.string();
  report["signal"] = program_signal_json(program);
  report["issues"] = issues;
  report["gamma_bar"] = to_json(profile);
  report["upper_bounds"] = to_json(bound);

  Json runs_json = Json::array();
  long violations = 0;
  double min_margin = 1.0;
  long certified_states = 0, uncertified_states = 0;
  for (const auto& [name, traj] : runs) {
    const fs::path csv = out_dir / (name + ".csv");
    write_trajectory_csv(traj, csv);
    out << "wrote " << csv.string() << "\n";

    long run_violations = 0;
    double run_margin = 1.0;
    for (Index s = 1; s <= traj.issues(); ++s) {
      const PowerVector& x = traj.states[s];
      if (x.is_vertex()) continue;
      if (s >= config.bound_check_from) {
        for (Index i = 0; i < x.size(); ++i) {
          if (x[i] > bound(i) + 1e-9) ++run_violations;
        }
      }
      try {
        const auto rep = transform_chain(x, tol);
        run_margin = std::min(run_margin, rep.margin);
        if (rep.certified) ++certified_states; else ++uncertified_states;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NearVertex) throw;
      }
    }
    violations += run_violations;
    min_margin = std::min(min_margin, run_margin);
    runs_json.push_back(Json{{"name", name},
                             {"csv", csv.string()},
                             {"initial", to_json(traj.states.front().values())},
                             {"final", to_json(traj.states.back().values())},
                             {"bound_violations", run_violations},
                             {"min_certificate_margin", run_margin}});
  }
  report["runs"] = runs_json;
  report["bound_check"] = Json{{"from_issue", config.bound_check_from},
                               {"slack", 1e-9},
                               {"violations", violations}};
  report["certificate"] = Json{{"min_margin", min_margin},
                               {"certified_states", certified_states},
                               {"uncertified_states", uncertified_states}};

  if (runs.size() >= 2) {
    std::ostringstream gap_csv;
    gap_csv << "s";
    for (std::size_t k = 1; k < runs.size(); ++k) gap_csv << ",gap_" << runs[k].first;
    gap_csv << "\n";
    std::vector<std::vector<double>> gaps;
    Json gap_json = Json::object();
    for (std::size_t k = 1; k < runs.size(); ++k) {
      gaps.push_back(limit_gap(runs[0].second, runs[k].second));
      Index merged = -1;
      for (Index s = static_cast<Index>(gaps.back().size()) - 1; s >= 0; --s) {
        if (gaps.back()[s] >= gap_threshold) break;
        merged = s;
      }
      gap_json[runs[k].first] =
          Json{{"final_gap", gaps.back().back()},
               {"below_threshold_from", merged >= 0 ? Json(merged) : Json(nullptr)}};
    }
    for (std::size_t s = 0; s < gaps.front().size(); ++s) {
      gap_csv << s;
      for (const auto& g : gaps) gap_csv << "," << format_decimal(g[s]);
      gap_csv << "\n";
    }
    const fs::path gap_path = out_dir / "limit_gap.csv";
    write_text_file(gap_path, gap_csv.str());
    out << "wrote " << gap_path.string() << "\n";
    report["limit_gap"] = Json{{"reference", runs[0].first},
                               {"threshold", gap_threshold},
                               {"csv", gap_path.string()},
                               {"series", gap_json}};
  }

  if (config.plot) {
    std::vector<std::pair<std::string, TrajectoryTable>> tables;
    for (const auto& [name, traj] : runs) tables.emplace_back(name, to_table(traj));
    write_plots(tables, config.compare_individuals, out_dir, out, err);
  }

  const fs::path report_path = out_dir / "simulate_report.json";
  write_text_file(report_path, report.dump(2) + "\n");
  out << "wrote " << report_path.string() << "\n";
  out << "bound violations: " << violations << ", min certificate margin: " << min_margin << "\n";
  return violations == 0 ? kOk : kDomainFailure;
}

// -- analyze ----------------------------------------------------------------

int cmd_analyze(const fs::path& program_path, const ExperimentConfig* config,
                const std::string& out_flag, std::optional<double> tol_flag, std::ostream& out) {
  Tolerances tol = config ? config->tolerances : Tolerances{};
  if (tol_flag) tol.eigenvector = *tol_flag;
  const TopologyProgram program = load_program(program_path);
  Json doc{{"program", program_path.string()}};
  doc.update(analyze_program(program, tol));
  const std::string text = doc.dump(2) + "\n";
  out << text;
  const fs::path path = resolve_out_dir(out_flag, config) / "analyze_report.json";
  write_text_file(path, text);
  return kOk;
}

// -- periodic ---------------------------------------------------------------

int cmd_periodic(const ExperimentConfig& config, const std::string& out_flag,
                 std::optional<Index> issues_flag, std::optional<double> tol_flag,
                 std::ostream& out) {
  const TopologyProgram program = load_config_program(config);
  const auto& tol = config.tolerances;
  const PeriodicProgram periodic = PeriodicProgram::from_program(program, tol);
  const double fp_tol = tol_flag.value_or(config.fixed_point_tol);
  const PeriodicLimit limit = periodic_fixed_points(periodic, fp_tol, tol);
  const Index issues = issues_flag.value_or(config.issues);
  const fs::path out_dir = resolve_out_dir(out_flag, &config);

  Json report;
  report["program"] = config.program_path.string();
  report["signal"] = program_signal_json(program);
  report["period"] = periodic.period();
  report["phase_convention"] =
      "sigma(0) = P, sigma(Pq + p) = p; x*(Pq + p - 1) = y*_p";
  report["fixed_point_tol"] = fp_tol;
  report["phases"] = to_json(limit);
  report["max_chain_residual"] =
      *std::max_element(limit.chain_residuals.begin(), limit.chain_residuals.end());

  bool ok = true;
  Json runs_json = Json::array();
  for (const auto& [name, traj] : run_all(config, program, issues)) {
    const fs::path csv = out_dir / (name + ".csv");
    write_trajectory_csv(traj, csv);
    const auto v = verify_periodic_limit(traj, periodic, limit, config.burn_in, config.limit_tol);
    ok = ok && v.within_tol;
    runs_json.push_back(Json{{"name", name},
                             {"csv", csv.string()},
                             {"burn_in", config.burn_in},
                             {"max_deviation", v.max_deviation},
                             {"within_tol", v.within_tol}});
    out << name << ": max deviation after s = " << config.burn_in << " is " << v.max_deviation
        << (v.within_tol ? " (ok)" : " (exceeds limit)") << "\n";
  }
  report["limit_tol"] = config.limit_tol;
  report["runs"] = runs_json;
  const fs::path path = out_dir / "periodic_report.json";
  write_text_file(path, report.dump(2) + "\n");
  out << "wrote " << path.string() << "\n";
  return ok ? kOk : kDomainFailure;
}

// -- verify -----------------------------------------------------------------

int cmd_verify(const fs::path& program_path, Index samples, std::uint64_t seed,
               std::optional<double> tol_flag, bool inject, const std::string& out_flag,
               bool write_report, std::ostream& out, std::ostream& err) {
  const TopologyProgram program = load_program(program_path);
  VerifyOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  opts.inject_near_vertex = inject;
  if (tol_flag) opts.equivalence_tol = *tol_flag;

  Json doc = Json::array();
  const PropertyCheck* failure = nullptr;
  std::vector<VerifyReport> reports;
  reports.reserve(static_cast<std::size_t>(program.size()));
  for (Index p = 0; p < program.size(); ++p) {
    reports.push_back(run_property_suite(program.matrix(p), opts));
    const auto& rep = reports.back();
    out << "matrix " << p + 1 << ":\n";
    for (const auto& c : rep.checks) {
      out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "  worst=" << c.worst
          << "  limit=" << c.limit;
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << "\n";
    }
    if (failure == nullptr) failure = rep.first_failure();
    Json item = to_json(rep);
    item["matrix"] = p + 1;
    doc.push_back(item);
  }
  if (write_report) {
    write_text_file(resolve_out_dir(out_flag, nullptr) / "verify_report.json", doc.dump(2) + "\n");
  }
  if (failure != nullptr) {
    err << "verify failed: " << failure->name << "\n";
    return kDomainFailure;
  }
  out << "all properties passed on " << samples << " samples per matrix\n";
  return kOk;
}

// -- plot -------------------------------------------------------------------

int cmd_plot(const std::vector<std::string>& csvs, const std::vector<Index>& individuals,
             const std::string& out_flag, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, TrajectoryTable>> tables;
  for (const auto& path : csvs) {
    tables.emplace_back(fs::path(path).stem().string(), read_trajectory_csv(path));
  }
  write_plots(tables, individuals, resolve_out_dir(out_flag, nullptr), out, err);
  return kOk;
}

}  // namespace

InitialCondition NamedInitial::resolve(Index n) const {
  if (vertex) return InitialCondition::vertex(n, *vertex - 1);
  if (values->size() != n) {
    throw Error(ErrorKind::ConfigError, "initial condition '" + name + "' has length " +
                                            std::to_string(values->size()) + ", need " +
                                            std::to_string(n));
  }
  return InitialCondition::values(*values);
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  const std::string text = read_text_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  ExperimentConfig cfg;
  cfg.source = path;
  const fs::path base = path.parent_path();
  try {
    if (!doc.contains("program")) config_error(path, "missing 'program'");
    cfg.program_path = (base / doc.at("program").get<std::string>()).lexically_normal();
    if (doc.contains("issues")) cfg.issues = doc.at("issues").get<Index>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("output_dir")) cfg.output_dir = base / doc.at("output_dir").get<std::string>();
    if (doc.contains("plot")) cfg.plot = doc.at("plot").get<bool>();
    if (doc.contains("compare_individuals")) {
      cfg.compare_individuals = doc.at("compare_individuals").get<std::vector<Index>>();
    }
    if (doc.contains("bound_check_from")) cfg.bound_check_from = doc.at("bound_check_from").get<Index>();
    if (doc.contains("gap_threshold")) cfg.gap_threshold = doc.at("gap_threshold").get<double>();
    if (doc.contains("burn_in")) cfg.burn_in = doc.at("burn_in").get<Index>();
    if (doc.contains("limit_tol")) cfg.limit_tol = doc.at("limit_tol").get<double>();
    if (doc.contains("fixed_point_tol")) cfg.fixed_point_tol = doc.at("fixed_point_tol").get<double>();
    if (doc.contains("tolerances")) apply_tolerance_overrides(doc.at("tolerances"), cfg.tolerances, path);
    if (doc.contains("initial_conditions")) {
      for (const auto& item : doc.at("initial_conditions")) {
        NamedInitial ic;
        ic.name = item.at("name").get<std::string>();
        if (item.contains("vertex")) {
          ic.vertex = item.at("vertex").get<Index>();
        } else {
          const auto xs = item.at("x").get<std::vector<double>>();
          ic.values = Vector::Map(xs.data(), static_cast<Index>(xs.size()));
        }
        cfg.initial_conditions.push_back(std::move(ic));
      }
    }
  } catch (const Json::exception& e) {
    config_error(path, e.what());
  }
  if (cfg.issues < 1) config_error(path, "'issues' must be >= 1");
  if (!fs::exists(cfg.program_path)) {
    throw Error(ErrorKind::IoError, path.string() + ": program file " +
                                        cfg.program_path.string() + " does not exist");
  }
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Social power evolution under constant, switching and periodic topologies",
               "dfpower"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<Index> issues;
  std::optional<double> tol;
  Index samples = 1000;
  bool inject = false;
  std::string program_path;
  std::vector<std::string> csvs;
  std::vector<Index> select{1, 3, 6};

  auto* sim = app.add_subcommand("simulate", "Run every initial condition under one signal");
  sim->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_option("--seed", seed, "Override the random signal seed");
  sim->add_option("--issues", issues, "Override the issue count");
  sim->add_option("--tol", tol, "Limit-gap threshold reported in the run report");

  auto* ana = app.add_subcommand("analyze", "Eigenvectors, bounds, radii, rates, vertex table");
  ana->add_option("program", program_path, "Program or matrix file");
  ana->add_option("--config", config_path, "Experiment config; its program is analysed");
  ana->add_option("--out", out_dir, "Output directory");
  ana->add_option("--tol", tol, "Eigenvector tolerance");

  auto* per = app.add_subcommand(
      "periodic", "Per-phase fixed points and periodic limit check (sigma(0) = P convention)");
  per->add_option("--config", config_path, "Experiment config with a periodic signal")->required();
  per->add_option("--out", out_dir, "Output directory");
  per->add_option("--issues", issues, "Override the issue count");
  per->add_option("--tol", tol, "Fixed-point step tolerance for each G_p");

  auto* ver = app.add_subcommand("verify", "Run the invariant suite on random interior states");
  ver->add_option("program", program_path, "Program or matrix file")->required();
  ver->add_option("--samples", samples, "Samples per matrix")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "Sampler seed");
  ver->add_option("--tol", tol, "DeGroot equivalence tolerance");
  ver->add_option("--out", out_dir, "Also write verify_report.json here");
  ver->add_flag("--inject-near-vertex", inject, "Add a near-vertex sample that must be rejected");

  auto* plt = app.add_subcommand("plot", "SVG charts from trajectory CSVs");
  plt->add_option("csv", csvs, "Trajectory CSV files")->required();
  plt->add_option("--select", select, "Individuals for the comparison chart (1-based)")
      ->delimiter(',');
  plt->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kIoFailure;
  }

  try {
    if (*sim) {
      auto cfg = load_experiment_config(config_path);
      if (seed) cfg.seed = seed;
      return cmd_simulate(cfg, out_dir, issues, tol, out, err);
    }
    if (*ana) {
      if (!config_path.empty()) {
        const auto cfg = load_experiment_config(config_path);
        return cmd_analyze(cfg.program_path, &cfg, out_dir, tol, out);
      }
      if (program_path.empty()) {
        err << "analyze: need a program file or --config\n";
        return kIoFailure;
      }
      return cmd_analyze(program_path, nullptr, out_dir, tol, out);
    }
    if (*per) return cmd_periodic(load_experiment_config(config_path), out_dir, issues, tol, out);
    if (*ver) {
      return cmd_verify(program_path, samples, seed.value_or(1), tol, inject, out_dir,
                        !out_dir.empty() || std::getenv(kOutDirEnv) != nullptr, out, err);
    }
    if (*plt) return cmd_plot(csvs, select, out_dir, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_io_error(e.kind()) ? kIoFailure : kDomainFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  }
  return kIoFailure;
}

}  // namespace dfpower::cli
