#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "gbmt/metric.hpp"
#include "gbmt/variational.hpp"
#include "json.hpp"

namespace gbmt::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void header(std::ostream& os, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
}

class Row {
 public:
  explicit Row(std::ostream& os) : os_(os) {}
  Row& operator<<(double v) {
    os_ << (first_ ? "" : ",") << format_double(v);
    first_ = false;
    return *this;
  }
  void end() { os_ << '\n'; }

 private:
  std::ostream& os_;
  bool first_ = true;
};

std::vector<std::string> kinematic_columns() {
  std::vector<std::string> c = {"s"};
  for (int mu = 0; mu < 4; ++mu) c.push_back("x" + std::to_string(mu));
  for (int mu = 0; mu < 4; ++mu) c.push_back("u" + std::to_string(mu));
  for (const auto& [mu, nu] : metric::kPairs) {
    c.push_back("S" + std::to_string(mu) + std::to_string(nu));
  }
  return c;
}

void put_kinematics(Row& row, double s, const Vector4& x, const Vector4& u, const Matrix4& spin) {
  row << s;
  for (int mu = 0; mu < 4; ++mu) row << x[mu];
  for (int mu = 0; mu < 4; ++mu) row << u[mu];
  for (const auto& [mu, nu] : metric::kPairs) row << spin(mu, nu);
}

void require_potential(const RunConfig& cfg, const char* command) {
  if (cfg.field_kind == FieldKind::direct_tensor) {
    throw ConfigurationError(std::string("field.type: direct_tensor has no potential; ") + command +
                             " needs constant or polynomial");
  }
}

void print_warnings(const RunConfig& cfg, std::ostream& log) {
  for (const auto& w : cfg.warnings) log << "warning: " << w << '\n';
}

void summary(std::ostream& log, const std::string& key, double value) {
  log << "summary: " << key << " = " << format_double(value) << '\n';
}

double max_abs(const Vector4& v) { return v.cwiseAbs().maxCoeff(); }
double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

void write_bmt_header(std::ostream& os) {
  std::vector<std::string> c = kinematic_columns();
  c.insert(c.end(), {"uu", "uS_max", "SS"});
  header(os, c);
}

void write_bmt_row(std::ostream& os, const BMTState& st, const InvariantLog& inv) {
  Row row(os);
  put_kinematics(row, st.s, st.x, st.u, st.spin);
  row << inv.uu << inv.us_max << inv.ss;
  row.end();
}

int simulate_bmt(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
                 std::ostream& log) {
  require_potential(cfg, "simulate-bmt");
  print_warnings(cfg, log);
  BMTState st0;
  st0.x = cfg.x0;
  st0.u = cfg.u0;
  st0.spin = cfg.initial_spin();
  const BMTTrajectory traj = integrate_bmt(st0, cfg.field, cfg.params, cfg.integrator);
  write_bmt_header(out);
  const InvariantLog& first = traj.front().inv;
  double d_uu = 0.0;
  double d_us = 0.0;
  double d_ss = 0.0;
  for (const auto& sample : traj) {
    write_bmt_row(out, sample.state, sample.inv);
    if (!std::isfinite(sample.inv.uu) || !std::isfinite(sample.inv.ss)) {
      throw NumericalAbort(std::lround(sample.state.s / cfg.integrator.step),
                           "non-finite state in the reduced integrator");
    }
    d_uu = std::max(d_uu, std::abs(sample.inv.uu - first.uu));
    d_us = std::max(d_us, std::abs(sample.inv.us_max - first.us_max));
    d_ss = std::max(d_ss, std::abs(sample.inv.ss - first.ss));
  }
  const double threshold = opt.threshold.value_or(cfg.thresholds.drift);
  summary(log, "drift_uu", d_uu);
  summary(log, "drift_uS", d_us);
  summary(log, "drift_SS", d_ss);
  summary(log, "threshold", threshold);
  const bool pass = std::max({d_uu, d_us, d_ss}) <= threshold;
  log << "result: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kPass : kThresholdFail;
}

int simulate_super(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
                   std::ostream& log) {
  require_potential(cfg, "simulate-super");
  print_warnings(cfg, log);
  const SuperTrajectory traj =
      integrate_super(cfg.initial_super_state(), cfg.field, cfg.params, cfg.integrator, cfg.form);

  std::vector<std::string> columns = kinematic_columns();
  columns.insert(columns.end(), {"constraint_max", "lambda_max"});
  for (Mask m : cfg.output_monomials) {
    for (int mu = 0; mu < 4; ++mu) columns.push_back("xi" + std::to_string(mu) + "_" + monomial_name(m));
    columns.push_back("lambda_" + monomial_name(m));
  }
  header(out, columns);

  double constraint = 0.0;
  double lambda = 0.0;
  for (const auto& sample : traj) {
    const ReducedSample r = underline_state(sample.state);
    Row row(out);
    put_kinematics(row, r.s, r.x, r.u, r.spin);
    row << sample.constraint.max_abs() << sample.lambda.max_abs();
    for (Mask m : cfg.output_monomials) {
      for (int mu = 0; mu < 4; ++mu) row << sample.state.xi[mu].coeff(m);
      row << sample.lambda.coeff(m);
    }
    row.end();
    constraint = std::max(constraint, sample.constraint.max_abs());
    lambda = std::max(lambda, sample.lambda.max_abs());
  }
  const double threshold = opt.threshold.value_or(cfg.thresholds.constraint);
  summary(log, "constraint_max", constraint);
  summary(log, "lambda_max", lambda);
  summary(log, "threshold", threshold);
  const bool pass = constraint <= threshold;
  log << "result: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kPass : kThresholdFail;
}

int compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& log) {
  require_potential(cfg, "compare");
  if (cfg.xi_coefficients.size() != 2) {
    throw ConfigurationError("initial.spin.xi: compare derives S from xi; give two vectors");
  }
  print_warnings(cfg, log);
  const SuperTrajectory super =
      integrate_super(cfg.initial_super_state(), cfg.field, cfg.params, cfg.integrator, cfg.form);
  BMTState st0;
  st0.x = cfg.x0;
  st0.u = cfg.u0;
  st0.spin = cfg.initial_spin();
  const BMTTrajectory reduced = integrate_bmt(st0, cfg.field, cfg.params, cfg.integrator);
  header(out, {"s", "dev_x", "dev_u", "dev_S"});
  double dx = 0.0;
  double du = 0.0;
  double ds = 0.0;
  for (std::size_t i = 0; i < super.size(); ++i) {
    const ReducedSample r = underline_state(super[i].state);
    const BMTState& b = reduced[i].state;
    const double ex = max_abs(Vector4(r.x - b.x));
    const double eu = max_abs(Vector4(r.u - b.u));
    const double es = max_abs(Matrix4(r.spin - b.spin));
    Row row(out);
    row << r.s << ex << eu << es;
    row.end();
    dx = std::max(dx, ex);
    du = std::max(du, eu);
    ds = std::max(ds, es);
  }
  summary(log, "max_dev_x", dx);
  summary(log, "max_dev_u", du);
  summary(log, "max_dev_S", ds);
  std::optional<double> threshold = opt.threshold;
  if (!threshold) threshold = cfg.thresholds.deviation;
  if (!threshold && cfg.field.is_homogeneous()) threshold = 1e-6;
  if (!threshold) {
    log << "result: REPORT (inhomogeneous field, no threshold configured)\n";
    return kPass;
  }
  summary(log, "threshold", *threshold);
  const bool pass = std::max({dx, du, ds}) <= *threshold;
  log << "result: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kPass : kThresholdFail;
}

namespace {

EvenVector4 random_even_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> body(-1.0, 1.0);
  std::uniform_real_distribution<double> soul(-0.5, 0.5);
  EvenVector4 x = zero_vector(n);
  for (auto& c : x) {
    c.coeff(0) = body(rng);
    for (Mask m = 1; m < c.size(); ++m) {
      if (degree(m) % 2 == 0) c.coeff(m) = soul(rng);
    }
  }
  return x;
}

json maxwell_check(const RunConfig& cfg, std::mt19937_64& rng, double threshold) {
  double worst = 0.0;
  for (int i = 0; i < cfg.verify.maxwell_points; ++i) {
    const EvenVector4 x = random_even_point(rng, cfg.n_generators);
    const GrassmannVector4 r = cfg.direct_tensor ? maxwell_residual(*cfg.direct_tensor, x)
                                                 : maxwell_residual(cfg.field, x);
    for (const auto& c : r) worst = std::max(worst, c.max_abs());
  }
  const bool closed = worst < threshold;
  std::string status;
  if (cfg.verify.expect_maxwell_fail) {
    status = worst > 0.1 ? "expected-fail" : "unexpected-pass";
  } else {
    status = closed ? "pass" : "fail";
  }
  return {{"name", "maxwell"},          {"status", status},
          {"residual", worst},          {"threshold", threshold},
          {"points", cfg.verify.maxwell_points}};
}

json constraint_check(const SuperTrajectory& traj, double threshold) {
  double worst = 0.0;
  for (const auto& sample : traj) worst = std::max(worst, sample.constraint.max_abs());
  return {{"name", "constraint"},
          {"status", worst <= threshold ? "pass" : "fail"},
          {"max_abs", worst},
          {"threshold", threshold}};
}

struct Bump {
  double start;
  double width;
  std::array<double, 4> amp;
};

std::vector<std::array<double, 4>> sample_bump(const Bump& b, const DiscretePath& path) {
  std::vector<std::array<double, 4>> out(path.nodes(), {0, 0, 0, 0});
  for (std::size_t i = 0; i < path.nodes(); ++i) {
    const double t = static_cast<double>(i) * path.h;
    if (t <= b.start || t >= b.start + b.width) continue;
    const double w = std::pow(std::sin(std::numbers::pi * (t - b.start) / b.width), 4);
    for (int mu = 0; mu < 4; ++mu) out[i][mu] = b.amp[mu] * w;
  }
  return out;
}

struct StationarityScores {
  double full = 0.0;
  double lowest = 0.0;  // grades 0 and 1 of the derivative
};

StationarityScores score(const DiscretePath& path, const RunConfig& cfg,
                         const std::vector<Bump>& bumps, bool odd) {
  StationarityScores s;
  for (const Bump& b : bumps) {
    PathVariation v;
    (odd ? v.dxi : v.dx) = sample_bump(b, path);
    const DirectionalDerivative d = directional_derivative(path, cfg.field, cfg.params, v, 1e-3);
    const GrassmannNumber& part = odd ? d.odd : d.even;
    s.full = std::max(s.full, part.max_abs());
    s.lowest = std::max({s.lowest, part.grade(0).max_abs(), part.grade(1).max_abs()});
  }
  return s;
}

bool ratio_ok(double r) { return r >= 3.4 && r <= 4.6; }

}  // namespace

int verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& log) {
  print_warnings(cfg, log);
  std::mt19937_64 rng(opt.seed.value_or(cfg.seed));
  json checks = json::array();
  checks.push_back(maxwell_check(cfg, rng, opt.threshold.value_or(cfg.thresholds.maxwell)));

  if (cfg.field_kind == FieldKind::direct_tensor) {
    for (const char* name : {"constraint", "stationarity", "stationarity_lowest_degree"}) {
      checks.push_back({{"name", name}, {"status", "skipped"}, {"reason", "field has no potential"}});
    }
  } else {
    if (cfg.integrator.steps < 4) {
      throw ConfigurationError("integrator.steps: stationarity needs at least 4 steps");
    }
    IntegratorSettings coarse = cfg.integrator;
    coarse.record_every = 1;
    IntegratorSettings fine = coarse;
    fine.step *= 0.5;
    fine.steps *= 2;
    const SuperState st0 = cfg.initial_super_state();
    const SuperTrajectory traj_c = integrate_super(st0, cfg.field, cfg.params, coarse, cfg.form);
    const SuperTrajectory traj_f = integrate_super(st0, cfg.field, cfg.params, fine, cfg.form);
    checks.push_back(constraint_check(traj_c, cfg.thresholds.constraint));

    const DiscretePath path_c = path_from_trajectory(traj_c);
    const DiscretePath path_f = path_from_trajectory(traj_f);
    const double length = coarse.step * static_cast<double>(coarse.steps);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    auto make_bumps = [&] {
      std::vector<Bump> bumps;
      for (int i = 0; i < cfg.verify.variations; ++i) {
        Bump b;
        b.start = length * (0.05 + 0.45 * unit(rng));
        b.width = length * (0.2 + 0.25 * unit(rng));
        for (auto& a : b.amp) a = amp(rng);
        bumps.push_back(b);
      }
      return bumps;
    };
    const std::vector<Bump> even_bumps = make_bumps();
    const std::vector<Bump> odd_bumps = make_bumps();

    const StationarityScores even_c = score(path_c, cfg, even_bumps, false);
    const StationarityScores even_f = score(path_f, cfg, even_bumps, false);
    const StationarityScores odd_c = score(path_c, cfg, odd_bumps, true);
    const StationarityScores odd_f = score(path_f, cfg, odd_bumps, true);

    DiscretePath perturbed = path_c;
    const Bump push{0.2 * length, 0.6 * length, {0.0, 1e-2, 2e-2, 0.0}};
    const auto shift = sample_bump(push, perturbed);
    for (std::size_t i = 0; i < perturbed.nodes(); ++i) {
      for (int mu = 0; mu < 4; ++mu) perturbed.x[i][mu].coeff(0) += shift[i][mu];
    }
    const double off_shell = score(perturbed, cfg, even_bumps, false).full;
    const double contrast = off_shell / std::max(even_c.full, 1e-300);

    auto stationarity = [&](const char* name, double ec, double ef, double oc, double of) {
      const double re = ec / std::max(ef, 1e-300);
      const double ro = oc / std::max(of, 1e-300);
      const bool pass = ratio_ok(re) && ratio_ok(ro) && contrast > 10.0;
      return json{{"name", name},
                  {"status", pass ? "pass" : "fail"},
                  {"form", to_string(cfg.form)},
                  {"h", coarse.step},
                  {"even_residual", ec},
                  {"even_residual_half_step", ef},
                  {"even_ratio", re},
                  {"odd_residual", oc},
                  {"odd_residual_half_step", of},
                  {"odd_ratio", ro},
                  {"perturbed_contrast", contrast},
                  {"ratio_window", {3.4, 4.6}}};
    };
    checks.push_back(stationarity("stationarity", even_c.full, even_f.full, odd_c.full, odd_f.full));
    checks.push_back(stationarity("stationarity_lowest_degree", even_c.lowest, even_f.lowest,
                                  odd_c.lowest, odd_f.lowest));

    if (!opt.table_path.empty()) {
      std::ofstream table(opt.table_path);
      if (!table) throw ConfigurationError("--table: cannot write '" + opt.table_path + "'");
      header(table, {"node", "s", "residual"});
      const std::vector<double> r = euler_lagrange_residual(path_c, cfg.field, cfg.params, cfg.form);
      for (std::size_t i = 0; i < r.size(); ++i) {
        Row row(table);
        row << static_cast<double>(i + 1) << path_c.s0 + static_cast<double>(i + 1) * path_c.h
            << r[i];
        row.end();
      }
    }
  }

  bool pass = true;
  for (const auto& c : checks) {
    const std::string status = c["status"];
    log << "check: " << std::string(c["name"]) << " " << status << '\n';
    if (status == "fail" || status == "unexpected-pass") pass = false;
  }
  json report = {{"checks", checks}, {"result", pass ? "pass" : "fail"}};
  out << report.dump(2) << '\n';
  log << "result: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kPass : kThresholdFail;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grassmann-variable spinning particle and BMT spin dynamics", "spinsim"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  CommandOptions opt;
  double threshold = 0.0;
  std::uint64_t seed = 0;

  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, const CommandOptions&, std::ostream&, std::ostream&);
  };
  const Entry entries[] = {
      {"simulate-bmt", "Integrate the reduced spin equations", simulate_bmt},
      {"simulate-super", "Integrate the Grassmann-valued equations", simulate_super},
      {"compare", "Run both integrators and report deviations", compare},
      {"verify", "Maxwell, constraint and stationarity checks", verify},
  };
  std::vector<CLI::App*> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--threshold", threshold, "override the pass/fail threshold");
    sub->add_option("--seed", seed, "override the configured seed");
    if (std::string(e.name) == "verify") {
      sub->add_option("--table", opt.table_path, "write node residuals as CSV");
    }
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  const CLI::App* chosen = nullptr;
  std::size_t index = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) {
      chosen = subs[i];
      index = i;
    }
  }
  if (chosen->count("--threshold")) opt.threshold = threshold;
  if (chosen->count("--seed")) opt.seed = seed;

  try {
    const RunConfig cfg = load_config(config_path);
    if (out_path.empty()) return entries[index].fn(cfg, opt, out, err);
    std::ostringstream buffer;
    const int code = entries[index].fn(cfg, opt, buffer, err);
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw ConfigurationError("--out: cannot write '" + out_path + "'");
    file << buffer.str();
    return code;
  } catch (const ConfigurationError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kNumericalAbort;
  } catch (const DomainError& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kNumericalAbort;
  }
}

}  // namespace gbmt::cli
