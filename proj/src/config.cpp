#include <mhd1d/config.hpp>

#include <mhd1d/io.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace mhd1d {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct RawConfig {
  // "section.key" -> (value, line number)
  std::map<std::string, std::pair<std::string, int>> entries;

  bool take(const std::string& key, std::string& out) {
    const auto it = entries.find(key);
    if (it == entries.end()) return false;
    out = it->second.first;
    entries.erase(it);
    return true;
  }
};

RawConfig read_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("parse error at line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty() || key.empty())
      throw ConfigError("parse error at line " + std::to_string(lineno));
    raw.entries[section + "." + key] = {val, lineno};
  }
  return raw;
}

Scalar parse_scalar(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const Scalar x = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": '" + val + "'");
  }
}

long parse_long(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(val, &pos);
    if (pos != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + val + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& val) {
  if (val == "true" || val == "1" || val == "yes") return true;
  if (val == "false" || val == "0" || val == "no") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + val + "'");
}

void load_tabulated(Profile& profile, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulated initial data: " + path);
  std::vector<std::array<Scalar, 8>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first && line.find_first_not_of("0123456789+-.,eE \t") != std::string::npos) {
      first = false;  // header row
      continue;
    }
    first = false;
    std::array<Scalar, 8> row{};
    std::stringstream ss(line);
    std::string tok;
    for (int c = 0; c < 8; ++c) {
      if (!std::getline(ss, tok, ','))
        throw ConfigError("tabulated data: expected 8 columns per row");
      row[c] = parse_scalar("init.path row", trim(tok));
    }
    rows.push_back(row);
  }
  if (rows.size() < 2) throw ConfigError("tabulated data: need at least 2 rows");
  profile.tab_x.resize(rows.size());
  profile.tab_fields.resize(static_cast<Eigen::Index>(rows.size()), 7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    profile.tab_x(static_cast<Eigen::Index>(i)) = rows[i][0];
    for (int c = 0; c < 7; ++c)
      profile.tab_fields(static_cast<Eigen::Index>(i), c) = rows[i][c + 1];
  }
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  RawConfig raw = read_raw(path);
  RunConfig cfg;
  std::string val;

  if (raw.take("grid.domain", val)) {
    if (val == "full-line") cfg.domain = DomainKind::FullLine;
    else if (val == "half-line") cfg.domain = DomainKind::HalfLine;
    else throw ConfigError("grid.domain: unknown value '" + val + "'");
  }
  if (!raw.take("grid.L", val)) throw ConfigError("grid.L is required");
  cfg.L = parse_scalar("grid.L", val);
  if (!(cfg.L > 0.0)) throw ConfigError("grid.L must be positive");
  if (!raw.take("grid.n_cells", val)) throw ConfigError("grid.n_cells is required");
  const long nc = parse_long("grid.n_cells", val);
  if (nc < 4) throw ConfigError("grid.n_cells must be at least 4");
  cfg.n_cells = nc;

  if (raw.take("problem.regime", val)) {
    if (val == "cauchy") cfg.problem = ProblemType::Cauchy;
    else if (val == "dirichlet-theta") cfg.problem = ProblemType::DirichletTheta;
    else if (val == "neumann-theta") cfg.problem = ProblemType::NeumannTheta;
    else throw ConfigError("problem.regime: unknown value '" + val + "'");
  }
  if (is_half_line(cfg.problem) != (cfg.domain == DomainKind::HalfLine))
    throw ConfigError("problem.regime does not match grid.domain");

  auto scalar_key = [&](const char* key, Scalar& target) {
    if (raw.take(key, val)) target = parse_scalar(key, val);
  };
  scalar_key("params.mu1", cfg.params.mu1);
  scalar_key("params.mu2", cfg.params.mu2);
  scalar_key("params.alpha", cfg.params.alpha);
  scalar_key("params.beta", cfg.params.beta);
  scalar_key("params.kappa0", cfg.params.kappa0);
  scalar_key("params.lambda", cfg.params.lambda);
  scalar_key("params.nu", cfg.params.nu);
  scalar_key("params.R", cfg.params.R);
  scalar_key("params.cv", cfg.params.cv);
  cfg.params.validate();

  scalar_key("scheme.dt_max", cfg.scheme.dt_max);
  scalar_key("scheme.cfl", cfg.scheme.cfl);
  if (!raw.take("scheme.t_end", val)) throw ConfigError("scheme.t_end is required");
  cfg.scheme.t_end = parse_scalar("scheme.t_end", val);
  if (raw.take("scheme.integrator", val)) {
    if (val == "semi-implicit") cfg.scheme.integrator = Integrator::SemiImplicit;
    else if (val == "explicit-oracle") cfg.scheme.integrator = Integrator::ExplicitOracle;
    else throw ConfigError("scheme.integrator: unknown value '" + val + "'");
  }
  scalar_key("scheme.positivity_floor", cfg.scheme.positivity_floor);
  if (raw.take("scheme.record_stride", val))
    cfg.scheme.record_stride = parse_long("scheme.record_stride", val);
  if (raw.take("scheme.include_magnetic", val))
    cfg.scheme.include_magnetic = parse_bool("scheme.include_magnetic", val);
  cfg.scheme.validate();

  if (raw.take("init.profile", val)) {
    if (val == "constant") cfg.profile.kind = Profile::Kind::Constant;
    else if (val == "gaussian") cfg.profile.kind = Profile::Kind::Gaussian;
    else if (val == "tabulated") cfg.profile.kind = Profile::Kind::Tabulated;
    else throw ConfigError("init.profile: unknown value '" + val + "'");
  }
  scalar_key("init.amp_v", cfg.profile.amp_v);
  scalar_key("init.amp_u", cfg.profile.amp_u);
  scalar_key("init.amp_theta", cfg.profile.amp_theta);
  scalar_key("init.amp_b1", cfg.profile.amp_b(0));
  scalar_key("init.amp_b2", cfg.profile.amp_b(1));
  scalar_key("init.amp_w1", cfg.profile.amp_w(0));
  scalar_key("init.amp_w2", cfg.profile.amp_w(1));
  scalar_key("init.width", cfg.profile.width);
  scalar_key("init.center", cfg.profile.center);
  if (!(cfg.profile.width > 0.0)) throw ConfigError("init.width must be positive");
  if (raw.take("init.path", val)) cfg.tabulated_path = val;
  if (cfg.profile.kind == Profile::Kind::Tabulated && cfg.tabulated_path.empty())
    throw ConfigError("init.path is required for tabulated profiles");

  if (raw.take("mms.case", val)) cfg.mms_case = val;

  if (raw.take("probes.coords", val)) {
    std::stringstream ss(val);
    std::string tok;
    while (std::getline(ss, tok, ','))
      cfg.probes.push_back(parse_scalar("probes.coords", trim(tok)));
  }

  auto bool_key = [&](const char* key, bool& target) {
    if (raw.take(key, val)) target = parse_bool(key, val);
  };
  bool_key("checks.entropy", cfg.checks.entropy);
  bool_key("checks.windows", cfg.checks.windows);
  bool_key("checks.measure", cfg.checks.measure);
  bool_key("checks.sobolev", cfg.checks.sobolev);
  bool_key("checks.reconstruct", cfg.checks.reconstruct);
  if (cfg.checks.reconstruct && cfg.probes.empty())
    throw ConfigError("probes required for the reconstruct check");

  if (raw.take("output.dir", val)) cfg.out_dir = val;

  if (!raw.entries.empty()) {
    const auto& [key, entry] = *raw.entries.begin();
    throw ConfigError("unknown config key '" + key + "' at line " +
                      std::to_string(entry.second));
  }
  return cfg;
}

namespace {

const char* kSeriesHeader =
    "t,E_total,G_entropy,W,V,V_tilde,M_v,min_v,min_theta,max_theta,"
    "measure_lo,measure_hi,B_cross,h1_v,h1_u,h1_theta,h1_b,h1_w,"
    "l2_dx_v,l2_dx_u,l2_dx_theta,l2_dx_b,l2_dx_w";

void write_series(const std::string& path, const std::vector<LyapunovReport>& rows) {
  std::ofstream out(path, std::ios::binary);
  out << kSeriesHeader << "\n";
  for (const LyapunovReport& r : rows) {
    const Scalar cols[] = {r.t, r.E_total, r.G_entropy, r.W, r.V, r.V_tilde,
                           r.M_v, r.min_v, r.min_theta, r.max_theta,
                           r.measure_lo, r.measure_hi, r.B_cross,
                           r.h1_v, r.h1_u, r.h1_theta, r.h1_b, r.h1_w,
                           r.l2_dx_v, r.l2_dx_u, r.l2_dx_theta, r.l2_dx_b, r.l2_dx_w};
    bool sep = false;
    for (const Scalar c : cols) {
      if (sep) out << ',';
      out << format_number(c);
      sep = true;
    }
    out << "\n";
  }
}

void write_snapshots(const std::string& path, const Grid& grid,
                     const std::vector<State>& states) {
  std::ofstream out(path, std::ios::binary);
  out << "t,x,v,u,w1,w2,b1,b2,theta\n";
  for (const State& s : states) {
    for (Eigen::Index i = 0; i < grid.n_cells; ++i) {
      // node fields interpolated to the cell center
      const Scalar u = 0.5 * (s.u(i) + s.u(i + 1));
      const Scalar w1 = 0.5 * (s.w(i, 0) + s.w(i + 1, 0));
      const Scalar w2 = 0.5 * (s.w(i, 1) + s.w(i + 1, 1));
      out << format_number(s.t) << ',' << format_number(grid.cell_centers(i)) << ','
          << format_number(s.v(i)) << ',' << format_number(u) << ','
          << format_number(w1) << ',' << format_number(w2) << ','
          << format_number(s.b(i, 0)) << ',' << format_number(s.b(i, 1)) << ','
          << format_number(s.theta(i)) << "\n";
    }
  }
}

}  // namespace

int cmd_run(const RunConfig& config, bool quiet) {
  const Grid grid = make_grid(config.domain, config.L, config.n_cells);
  Profile profile = config.profile;
  if (profile.kind == Profile::Kind::Tabulated)
    load_tabulated(profile, config.tabulated_path);
  const State initial = make_state(grid, profile, config.problem);

  Trajectory traj;
  try {
    traj = run(initial, grid, config.problem, config.params, config.scheme,
               config.probes);
  } catch (const PositivityBreach& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  } catch (const SolverBreakdown& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  }

  const Scalar e0_val = e0(initial, grid, config.problem, config.params);

  std::vector<LyapunovReport> series;
  series.reserve(traj.states.size());
  for (const State& s : traj.states)
    series.push_back(lyapunov_report(s, grid, config.problem, config.params));

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  write_series((fs::path(config.out_dir) / "series.csv").string(), series);
  write_snapshots((fs::path(config.out_dir) / "snapshots.csv").string(), grid,
                  traj.states);

  std::ofstream jout((fs::path(config.out_dir) / "reports.jsonl").string(),
                     std::ios::binary);
  for (const StepReport& r : traj.reports) {
    nlohmann::json j{{"t", r.t},
                     {"dt", r.dt},
                     {"flux_left", r.flux_left},
                     {"flux_right", r.flux_right},
                     {"energy_residual", r.energy_residual},
                     {"min_v", r.min_v},
                     {"min_theta", r.min_theta}};
    jout << j.dump() << "\n";
  }

  bool all_pass = true;
  auto emit_check = [&](const std::string& name, bool pass, nlohmann::json detail) {
    detail["check"] = name;
    detail["pass"] = pass;
    jout << detail.dump() << "\n";
    if (!quiet)
      std::cout << "check " << name << ": " << (pass ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && pass;
  };

  if (config.checks.entropy) {
    // G(t) + int_0^t W <= (1 + slack) e0, trapezoid over record times
    Scalar cumW = 0.0, worst = 0.0;
    bool pass = true;
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (k > 0)
        cumW += 0.5 * (series[k].W + series[k - 1].W) *
                (series[k].t - series[k - 1].t);
      const Scalar lhs = series[k].G_entropy + cumW;
      worst = std::max(worst, lhs);
      if (lhs > (1.0 + kEntropySlack) * e0_val + 1e-12) pass = false;
    }
    emit_check("entropy", pass, {{"e0", e0_val}, {"max_lhs", worst}});
  }
  if (config.checks.windows) {
    if (grid.extent() < 1.0) {
      emit_check("windows", true, {{"skipped", "domain shorter than one unit window"}});
    } else {
      bool pass = true;
      for (const State& s : traj.states)
        pass = pass && window_average_check(s, grid, e0_val).all_pass;
      emit_check("windows", pass, {{"e0", e0_val}});
    }
  }
  if (config.checks.measure) {
    bool pass = true;
    Scalar min_slack = std::numeric_limits<Scalar>::max();
    for (const LyapunovReport& r : series) {
      const MeasureCheck mc = measure_bound_check(r, e0_val);
      pass = pass && mc.pass;
      min_slack = std::min(min_slack, mc.slack);
    }
    emit_check("measure", pass, {{"min_slack", min_slack}});
  }
  if (config.checks.sobolev) {
    bool pass = true;
    for (const State& s : traj.states) {
      pass = pass && sobolev_check((s.v - 1.0).eval(), grid.dx).pass;
      pass = pass && sobolev_check((s.theta - 1.0).eval(), grid.dx).pass;
      pass = pass && sobolev_check(s.u, grid.dx).pass;
      pass = pass && sobolev_check(s.b.col(0).eval(), grid.dx).pass;
      pass = pass && sobolev_check(s.b.col(1).eval(), grid.dx).pass;
      pass = pass && sobolev_check(s.w.col(0).eval(), grid.dx).pass;
      pass = pass && sobolev_check(s.w.col(1).eval(), grid.dx).pass;
    }
    emit_check("sobolev", pass, {});
  }
  if (config.checks.reconstruct) {
    const ArrayX v_rec =
        reconstruct_v(traj, grid, config.params, 0, config.scheme.t_end);
    const ArrayX& v_num = traj.states.back().v;
    const Scalar rel =
        (v_rec - v_num).abs().maxCoeff() / v_num.abs().maxCoeff();
    emit_check("reconstruct", rel <= 0.05, {{"rel_error", rel}});
  }

  nlohmann::json summary{{"summary", true},
                         {"e0", e0_val},
                         {"steps", traj.reports.size()},
                         {"records", traj.states.size()},
                         {"truncation_warnings", traj.truncation_warning_times.size()},
                         {"all_pass", all_pass}};
  jout << summary.dump() << "\n";

  for (const Scalar t : traj.truncation_warning_times)
    std::cerr << "warning: perturbation within truncation buffer at t="
              << format_number(t) << "\n";
  if (!quiet)
    std::cout << "run finished: " << traj.reports.size() << " steps, e0="
              << format_number(e0_val) << (all_pass ? ", all checks passed" : "")
              << "\n";
  return all_pass ? 0 : 1;
}

int cmd_mms(const RunConfig& config, int levels, bool quiet) {
  const ManufacturedCase mcase = named_case(config.mms_case);
  const ConvergenceTable table =
      convergence_order(mcase, config.problem, config.domain, config.L,
                        config.n_cells, levels, config.scheme, config.params);

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  std::ofstream out((fs::path(config.out_dir) / "convergence.csv").string(),
                    std::ios::binary);
  out << "n,dx,dt";
  for (const char* f : kMmsFieldNames) out << ",err_" << f;
  out << "\n";
  for (const ConvergenceLevel& lev : table.levels) {
    out << lev.n << ',' << format_number(lev.dx) << ',' << format_number(lev.dt);
    for (const Scalar e : lev.errors) out << ',' << format_number(e);
    out << "\n";
  }

  if (table.all_exact) {
    if (!quiet) std::cout << "exact at all levels\n";
    return 0;
  }

  bool pass = true;
  const auto& finest = table.orders.back();
  if (!quiet) {
    std::cout << "level  n      dx        errors...\n";
    for (const ConvergenceLevel& lev : table.levels) {
      std::cout << "  n=" << lev.n << " dx=" << format_number(lev.dx) << " :";
      for (const Scalar e : lev.errors) std::cout << ' ' << format_number(e);
      std::cout << "\n";
    }
    std::cout << "finest-pair orders:";
  }
  for (int f = 0; f < 7; ++f) {
    if (!quiet) std::cout << ' ' << kMmsFieldNames[f] << '=' << finest[f];
    if (std::isnan(finest[f])) continue;  // field exact at this resolution
    if (finest[f] < 1.8) pass = false;
  }
  if (!quiet) std::cout << "\n" << (pass ? "orders ok" : "orders BELOW threshold") << "\n";
  return pass ? 0 : 1;
}

}  // namespace mhd1d
