#include "puregauss/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "puregauss/catalog.hpp"
#include "puregauss/dynamics.hpp"
#include "puregauss/engineer.hpp"
#include "puregauss/error.hpp"
#include "puregauss/io.hpp"
#include "puregauss/steady.hpp"

namespace puregauss::cli {

namespace {

struct Source {
  std::string file;
  std::string catalog_name;
  std::vector<std::string> sets;
};

void add_source_options(CLI::App* cmd, Source& src, const std::string& what) {
  cmd->add_option("file", src.file, what + " JSON file");
  cmd->add_option("--catalog", src.catalog_name, "use a catalog entry instead of a file");
  cmd->add_option("--set", src.sets, "catalog parameter override name=value")
      ->type_name("NAME=VALUE");
}

catalog::ParameterValues parse_sets(const std::vector<std::string>& sets) {
  catalog::ParameterValues values;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidArgument, "--set expects name=value, got '" + s + "'");
    }
    const std::string name = s.substr(0, eq);
    const std::string text = s.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw Error(ErrorCode::InvalidArgument, "--set " + name + ": '" + text +
                                                  "' is not a number");
    }
    values[name] = value;
  }
  return values;
}

catalog::Payload load_source(const Source& src, catalog::EntryKind kind) {
  if (src.file.empty() == src.catalog_name.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of a file or --catalog");
  }
  if (!src.catalog_name.empty()) {
    const catalog::CatalogEntry& entry = catalog::find(src.catalog_name);
    if (entry.kind != kind) {
      throw Error(ErrorCode::InvalidArgument,
                  "catalog entry '" + entry.name + "' is a " +
                      (entry.kind == catalog::EntryKind::System ? "system" : "state spec"));
    }
    return entry.instantiate(parse_sets(src.sets));
  }
  if (!src.sets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--set only applies to --catalog");
  }
  const io::Json doc = io::read_file(src.file);
  if (kind == catalog::EntryKind::System) return io::system_from_json(doc);
  return io::spec_from_json(doc);
}

GaussianDynamics load_system(const Source& src) {
  return std::get<GaussianDynamics>(load_source(src, catalog::EntryKind::System));
}

PureStateSpec load_spec(const Source& src) {
  return std::get<PureStateSpec>(load_source(src, catalog::EntryKind::StateSpec));
}

std::string num(double x, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << (x == 0.0 ? 0.0 : x);  // no "-0"
  return os.str();
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << x;
  return os.str();
}

std::string complex_text(const Complex& z) {
  std::ostringstream os;
  os << std::setprecision(10) << (z.real() == 0.0 ? 0.0 : z.real());
  if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

void print_matrix(std::ostream& out, const std::string& label, const RealMatrix& m) {
  out << label << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << std::setw(16) << num(m(r, c)) << (c + 1 < m.cols() ? " " : "");
    }
    out << '\n';
  }
}

void print_matrix(std::ostream& out, const std::string& label, const ComplexMatrix& m) {
  out << label << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << std::setw(24) << complex_text(m(r, c)) << (c + 1 < m.cols() ? " " : "");
    }
    out << '\n';
  }
}

std::string mode_set(const std::set<std::size_t>& modes) {
  std::string s = "{";
  for (std::size_t i : modes) s += (s.size() > 1 ? "," : "") + std::to_string(i + 1);
  return s + "}";
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  Source src;
  bool json = false;
  std::vector<std::size_t> partition;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
  const GaussianDynamics sys = load_system(args.src);
  const Theorem1Report report = analyze(sys);

  std::optional<double> negativity;
  std::vector<std::size_t> partition;
  for (std::size_t mode : args.partition) {
    if (mode == 0) throw Error(ErrorCode::InvalidPartition, "mode labels start at 1");
    partition.push_back(mode - 1);
  }
  if (partition.empty() && sys.modes() >= 2) partition.push_back(0);
  if (report.vs && !partition.empty()) {
    negativity = log_negativity(report.vs->matrix(), partition);
  }

  const int code = !report.unique ? kNotUnique : (report.pure ? kOk : kNotPure);
  const char* verdict = code == kOk ? "pure-unique" : (code == kNotPure ? "not-pure" : "not-unique");

  if (args.json) {
    io::Json doc = io::to_json(report);
    doc["verdict"] = verdict;
    if (negativity) {
      io::Json modes = io::Json::array();
      for (std::size_t i : partition) modes.push_back(i + 1);
      doc["log_negativity"] = io::Json{{"partition", modes}, {"value", *negativity}};
    }
    out << io::canonical_dump(doc);
    return code;
  }

  out << "system: n=" << report.modes << " m=" << report.channels << '\n';
  out << "drift eigenvalues:";
  for (const Complex& l : report.drift_eigenvalues) out << "  " << complex_text(l);
  out << '\n';
  out << "unique steady state: " << (report.unique ? "yes" : "no") << '\n';
  out << "condition (iii): " << (report.cond_iii.holds ? "holds" : "fails")
      << " (||K Sigma C^T|| = " << sci(report.cond_iii.residual) << ", threshold "
      << sci(report.cond_iii.threshold) << ")\n";
  if (report.unique) {
    out << "purity: " << num(*report.purity, 12) << '\n';
    out << "pure: " << (report.pure ? "yes" : "no") << '\n';
    out << "condition (ii): " << (report.cond_ii->holds ? "holds" : "fails")
        << " (dark residual " << sci(report.cond_ii->dark_residual)
        << ", commutation residual " << sci(report.cond_ii->commutation_residual) << ")\n";
    print_matrix(out, "Vs", report.vs->matrix());
    if (report.vs_formula) {
      const double gap = (report.vs_formula->vs.matrix() - report.vs->matrix()).norm();
      out << "closed-form Vs: agrees with Lyapunov solution to " << sci(gap)
          << " (Gram condition " << sci(report.vs_formula->gram_condition) << ")\n";
    } else {
      out << "closed-form Vs: " << report.vs_formula_failure << '\n';
    }
    out << "conditions agree: " << (report.conditions_agree() ? "yes" : "no") << '\n';
    if (negativity) {
      std::set<std::size_t> modes(partition.begin(), partition.end());
      out << "log negativity " << mode_set(modes) << " | rest: " << num(*negativity)
          << '\n';
    }
  }
  out << "verdict: " << verdict << '\n';
  return code;
}

// ---------------------------------------------------------------------------
// engineer

struct EngineerArgs {
  Source src;
  std::string params_file;
  bool purely_dissipative = false;
  std::string output;
  bool json = false;
};

int cmd_engineer(const EngineerArgs& args, std::ostream& out, std::ostream& err) {
  if (args.params_file.empty() == !args.purely_dissipative) {
    throw Error(ErrorCode::InvalidArgument,
                "give exactly one of --params or --purely-dissipative");
  }
  const PureStateSpec spec = load_spec(args.src);
  const EngineeringParameters params =
      args.purely_dissipative ? purely_dissipative_parameters(spec.modes())
                              : io::parameters_from_json(io::read_file(args.params_file));
  if (params.modes() != spec.modes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "parameters are for " + std::to_string(params.modes()) +
                    " modes but the state has " + std::to_string(spec.modes()));
  }

  const GaussianDynamics sys = synthesize(spec, params);
  const RankCondition rank = rank_condition(params.P, q_matrix(spec, params));
  const bool unique_target = theorem2_check(spec, sys);
  const LocalityProfile locality = locality_profile(sys);
  const io::Json system_doc = io::to_json(sys);

  if (!args.output.empty()) io::write_file(args.output, io::canonical_dump(system_doc));

  if (args.json) {
    io::Json supports = io::Json::array();
    for (const auto& s : locality.channel_supports) {
      io::Json modes = io::Json::array();
      for (std::size_t i : s) modes.push_back(i + 1);
      supports.push_back(modes);
    }
    io::Json edges = io::Json::array();
    for (const auto& [a, b] : locality.hamiltonian_edges) {
      edges.push_back(io::Json::array({a + 1, b + 1}));
    }
    io::Json doc{{"rank_condition", {{"holds", rank.holds}, {"rank", rank.rank}}},
                 {"theorem2_check", unique_target},
                 {"channel_supports", supports},
                 {"hamiltonian_edges", edges},
                 {"system", system_doc}};
    out << io::canonical_dump(doc);
  } else {
    out << "state: n=" << spec.modes() << "\n";
    out << "channels: m=" << sys.channels() << "\n";
    out << "rank condition: " << (rank.holds ? "holds" : "fails") << " (rank "
        << rank.rank << " of " << spec.modes() << ")\n";
    out << "unique steady state is the target: " << (unique_target ? "yes" : "no")
        << "\n";
    out << "channel supports:";
    for (std::size_t k = 0; k < locality.channel_supports.size(); ++k) {
      out << " L" << k + 1 << "=" << mode_set(locality.channel_supports[k]);
    }
    out << "\nsupport sizes:";
    for (const auto& s : locality.channel_supports) out << ' ' << s.size();
    out << "\nhamiltonian edges:";
    if (locality.hamiltonian_edges.empty()) out << " none";
    for (const auto& [a, b] : locality.hamiltonian_edges) {
      out << ' ' << a + 1 << '-' << b + 1;
    }
    out << '\n';
    if (!args.output.empty()) {
      out << "wrote system to " << args.output << '\n';
    } else {
      out << io::canonical_dump(system_doc);
    }
  }

  if (!rank.holds) {
    err << "RankConditionFailed: rank " << rank.rank << " < " << spec.modes() << '\n';
    return kRankConditionFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  Source src;
  std::string init = "vacuum";
  std::optional<double> t_final;
  std::optional<double> dt;
  std::string output;
  bool force = false;
};

GaussianState initial_state(const std::string& init, const GaussianDynamics& sys,
                            bool hurwitz) {
  const std::size_t n = sys.modes();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  if (init == "vacuum") return GaussianState::zero_mean(CovarianceMatrix::vacuum(n));
  if (init == "steady") {
    if (!hurwitz) {
      throw Error(ErrorCode::NoUniqueSolution, "--init steady needs a unique steady state");
    }
    return GaussianState::zero_mean(CovarianceMatrix(
        numkit::lyapunov_solve(drift_matrix(sys), diffusion_matrix(sys))));
  }
  if (init.rfind("scaled:", 0) == 0) {
    const std::string text = init.substr(7);
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw Error(ErrorCode::InvalidArgument, "--init scaled:<c> needs a number");
    }
    return GaussianState::zero_mean(
        CovarianceMatrix(c * RealMatrix::Identity(dim, dim)));
  }
  GaussianState state = io::state_from_json(io::read_file(init));
  if (state.mean.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "initial state has the wrong number of modes");
  }
  return state;
}

void write_csv(std::ostream& os, const Trajectory& traj, std::size_t n) {
  os << "t,fidelity,purity";
  for (std::size_t i = 0; i < n; ++i) os << ",mean_q" << i + 1;
  for (std::size_t i = 0; i < n; ++i) os << ",mean_p" << i + 1;
  const std::size_t dim = 2 * n;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = r; c < dim; ++c) os << ",V_" << r + 1 << '_' << c + 1;
  }
  os << '\n';
  char buffer[40];
  auto put = [&](double x) {
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    os << buffer;
  };
  for (std::size_t k = 0; k < traj.size(); ++k) {
    put(traj.times[k]);
    os << ',';
    if (traj.fidelity.empty()) {
      os << "nan";
    } else {
      put(traj.fidelity[k]);
    }
    os << ',';
    put(traj.purity[k]);
    for (Eigen::Index i = 0; i < traj.means[k].size(); ++i) {
      os << ',';
      put(traj.means[k](i));
    }
    const RealMatrix& v = traj.covs[k];
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (Eigen::Index c = r; c < v.cols(); ++c) {
        os << ',';
        put(v(r, c));
      }
    }
    os << '\n';
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  const GaussianDynamics sys = load_system(args.src);
  const bool hurwitz = numkit::is_hurwitz(drift_matrix(sys));
  if (!hurwitz && !args.force) {
    err << "NotHurwitz: the drift matrix has an eigenvalue with non-negative real "
           "part; use --force to integrate anyway\n";
    return kNotUnique;
  }
  double t_final = 0.0;
  double dt = 0.0;
  if (hurwitz) {
    const DefaultHorizon horizon = default_horizon(sys);
    t_final = args.t_final.value_or(horizon.t_final);
    dt = args.dt.value_or(std::min(horizon.dt, t_final));
  } else {
    if (!args.t_final || !args.dt) {
      throw Error(ErrorCode::InvalidArgument,
                  "--t-final and --dt are required when the system is not Hurwitz");
    }
    t_final = *args.t_final;
    dt = *args.dt;
  }
  const GaussianState init = initial_state(args.init, sys, hurwitz);
  const Trajectory traj = evolve(sys, init, t_final, dt);

  if (args.output.empty()) {
    write_csv(out, traj, sys.modes());
  } else {
    std::ostringstream csv;
    write_csv(csv, traj, sys.modes());
    io::write_file(args.output, csv.str());
    out << "wrote " << traj.size() << " rows to " << args.output << '\n';
    if (!traj.fidelity.empty()) {
      out << "final fidelity: " << num(traj.fidelity.back(), 12) << '\n';
    }
    out << "final purity: " << num(traj.purity.back(), 12) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// catalog

struct CatalogArgs {
  std::string name;
  std::vector<std::string> sets;
  std::string output;
};

int cmd_catalog_list(std::ostream& out) {
  for (const catalog::CatalogEntry& e : catalog::entries()) {
    out << e.name << "  ["
        << (e.kind == catalog::EntryKind::System ? "system" : "state") << "]  "
        << e.summary << '\n';
    for (const catalog::ParameterInfo& p : e.parameters) {
      out << "    " << p.name << " = "
          << (std::isnan(p.default_value) ? std::string("(derived)") : num(p.default_value))
          << "  " << p.description << '\n';
    }
  }
  return kOk;
}

int cmd_catalog_show(const CatalogArgs& args, std::ostream& out) {
  const catalog::CatalogEntry& entry = catalog::find(args.name);
  const catalog::Payload payload = entry.instantiate(parse_sets(args.sets));
  out << entry.name << ": " << entry.summary << '\n';
  if (const auto* sys = std::get_if<GaussianDynamics>(&payload)) {
    out << "n=" << sys->modes() << " m=" << sys->channels() << '\n';
    print_matrix(out, "G", sys->G());
    print_matrix(out, "C", sys->C());
  } else {
    const auto& spec = std::get<PureStateSpec>(payload);
    out << "n=" << spec.modes() << '\n';
    print_matrix(out, "X", spec.X());
    print_matrix(out, "Y", spec.Y());
    print_matrix(out, "Z", spec.Z());
  }
  return kOk;
}

int cmd_catalog_export(const CatalogArgs& args, std::ostream& out) {
  const catalog::CatalogEntry& entry = catalog::find(args.name);
  const catalog::Payload payload = entry.instantiate(parse_sets(args.sets));
  const io::Json doc = std::visit([](const auto& p) { return io::to_json(p); }, payload);
  const std::string text = io::canonical_dump(doc);
  if (args.output.empty()) {
    out << text;
  } else {
    io::write_file(args.output, text);
    out << "wrote " << entry.name << " to " << args.output << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analyze and engineer Gaussian dissipative systems with pure steady states",
               "puregauss"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "steady-state and purity analysis");
  add_source_options(analyze_cmd, analyze_args.src, "system");
  analyze_cmd->add_flag("--json", analyze_args.json, "emit the report as JSON");
  analyze_cmd->add_option("--partition", analyze_args.partition,
                          "1-based modes of one side for the log negativity")
      ->delimiter(',');

  EngineerArgs engineer_args;
  auto* engineer_cmd = app.add_subcommand("engineer", "synthesize a system for a pure target");
  add_source_options(engineer_cmd, engineer_args.src, "state spec");
  engineer_cmd->add_option("--params", engineer_args.params_file, "P, R, Gamma JSON file");
  engineer_cmd->add_flag("--purely-dissipative", engineer_args.purely_dissipative,
                         "use P = I, R = Gamma = 0");
  engineer_cmd->add_option("-o,--output", engineer_args.output, "write the system file here");
  engineer_cmd->add_flag("--json", engineer_args.json, "emit the report as JSON");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate the moment equations");
  add_source_options(simulate_cmd, simulate_args.src, "system");
  simulate_cmd->add_option("--init", simulate_args.init,
                           "vacuum | steady | scaled:<c> | state JSON file");
  simulate_cmd->add_option("--t-final", simulate_args.t_final, "end time");
  simulate_cmd->add_option("--dt", simulate_args.dt, "maximum RK4 step");
  simulate_cmd->add_option("-o,--output", simulate_args.output, "CSV output path");
  simulate_cmd->add_flag("--force", simulate_args.force, "integrate non-Hurwitz systems");

  CatalogArgs catalog_args;
  auto* catalog_cmd = app.add_subcommand("catalog", "named systems and states");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list entries and parameters");
  auto* show_cmd = catalog_cmd->add_subcommand("show", "print an entry's matrices");
  auto* export_cmd = catalog_cmd->add_subcommand("export", "write an entry as JSON");
  for (auto* cmd : {show_cmd, export_cmd}) {
    cmd->add_option("name", catalog_args.name, "entry name")->required();
    cmd->add_option("--set", catalog_args.sets, "parameter override name=value")
        ->type_name("NAME=VALUE");
  }
  export_cmd->add_option("-o,--output", catalog_args.output, "output path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_args, out);
    if (engineer_cmd->parsed()) return cmd_engineer(engineer_args, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_args, out, err);
    if (list_cmd->parsed()) return cmd_catalog_list(out);
    if (show_cmd->parsed()) return cmd_catalog_show(catalog_args, out);
    if (export_cmd->parsed()) return cmd_catalog_export(catalog_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace puregauss::cli
