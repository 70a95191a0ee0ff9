#include "run_config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gbmt/bmt.hpp"
#include "gbmt/metric.hpp"
#include "json.hpp"

namespace gbmt::cli {

using nlohmann::json;

namespace {

constexpr double kVelocityRescaleTolerance = 1e-6;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigurationError(key + ": " + what);
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!key.empty() && key[0] == '_') continue;  // annotation
    if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(key, "must be finite");
  return v;
}

long integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) fail(key, "expected an integer");
  return j.get<long>();
}

template <std::size_t N>
std::array<double, N> numbers(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != N) fail(key, "expected " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], key + "[" + std::to_string(i) + "]");
  return out;
}

Vector4 vector4(const json& j, const std::string& key) {
  const auto a = numbers<4>(j, key);
  return Vector4(a[0], a[1], a[2], a[3]);
}

Exponents exponents(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 4) fail(key, "expected 4 non-negative integers");
  Exponents e{};
  for (int i = 0; i < 4; ++i) {
    const long v = integer(j[i], key);
    if (v < 0) fail(key, "exponents must be non-negative");
    e[i] = static_cast<int>(v);
  }
  return e;
}

int component(const json& j, const std::string& key) {
  const long v = integer(j, key);
  if (v < 0 || v > 3) fail(key, "index must be 0..3");
  return static_cast<int>(v);
}

void parse_params(const json& j, RunConfig& c) {
  check_keys(j, "params", {"mass", "charge", "mu_prime"});
  if (j.contains("mass")) c.params.mass = number(j["mass"], "params.mass");
  if (j.contains("charge")) c.params.charge = number(j["charge"], "params.charge");
  if (j.contains("mu_prime")) c.params.mu_prime = number(j["mu_prime"], "params.mu_prime");
  if (!(c.params.mass > 0.0)) fail("params.mass", "must be positive");
}

void parse_field(const json& j, RunConfig& c) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    fail("field.type", "expected one of constant, polynomial, direct_tensor");
  }
  const std::string type = j["type"];
  if (type == "constant") {
    check_keys(j, "field", {"type", "E", "B"});
    const std::array<double, 3> zero{0, 0, 0};
    const auto e = j.contains("E") ? numbers<3>(j["E"], "field.E") : zero;
    const auto b = j.contains("B") ? numbers<3>(j["B"], "field.B") : zero;
    c.field_kind = FieldKind::constant;
    c.field = FieldConfig::constant(e, b);
    return;
  }
  if (!j.contains("terms") || !j["terms"].is_array()) fail("field.terms", "expected an array");
  if (type == "polynomial") {
    check_keys(j, "field", {"type", "terms", "max_degree"});
    int max_degree = FieldConfig::kDefaultMaxDegree;
    if (j.contains("max_degree")) {
      max_degree = static_cast<int>(integer(j["max_degree"], "field.max_degree"));
      if (max_degree < 0) fail("field.max_degree", "must be non-negative");
    }
    std::array<Polynomial4, 4> a;
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
      const std::string key = "field.terms[" + std::to_string(i) + "]";
      const json& t = j["terms"][i];
      check_keys(t, key, {"component", "exponents", "coeff"});
      if (!t.contains("component") || !t.contains("exponents") || !t.contains("coeff")) {
        fail(key, "needs component, exponents and coeff");
      }
      a[component(t["component"], key + ".component")].add_term(
          exponents(t["exponents"], key + ".exponents"), number(t["coeff"], key + ".coeff"));
    }
    try {
      c.field = FieldConfig::from_potential(a, max_degree);
    } catch (const ConfigurationError& e) {
      fail("field.terms", e.what());
    }
    c.field_kind = FieldKind::polynomial;
    return;
  }
  if (type == "direct_tensor") {
    check_keys(j, "field", {"type", "terms"});
    std::array<std::array<Polynomial4, 4>, 4> upper_triangle;
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
      const std::string key = "field.terms[" + std::to_string(i) + "]";
      const json& t = j["terms"][i];
      check_keys(t, key, {"indices", "exponents", "coeff"});
      if (!t.contains("indices") || !t.contains("exponents") || !t.contains("coeff")) {
        fail(key, "needs indices, exponents and coeff");
      }
      if (!t["indices"].is_array() || t["indices"].size() != 2) {
        fail(key + ".indices", "expected two indices");
      }
      int mu = component(t["indices"][0], key + ".indices");
      int nu = component(t["indices"][1], key + ".indices");
      if (mu == nu) fail(key + ".indices", "diagonal components of F vanish");
      double coeff = number(t["coeff"], key + ".coeff");
      if (mu > nu) {
        std::swap(mu, nu);
        coeff = -coeff;
      }
      upper_triangle[mu][nu].add_term(exponents(t["exponents"], key + ".exponents"), coeff);
    }
    FieldTensorPolynomial f;
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = mu + 1; nu < 4; ++nu) f.set(mu, nu, upper_triangle[mu][nu]);
    }
    c.field_kind = FieldKind::direct_tensor;
    c.direct_tensor = f;
    c.field = FieldConfig::zero();
    return;
  }
  fail("field.type", "unknown type '" + type + "'");
}

void parse_initial(const json& j, RunConfig& c) {
  check_keys(j, "initial", {"x0", "u0", "spin"});
  if (j.contains("x0")) c.x0 = vector4(j["x0"], "initial.x0");
  if (!j.contains("u0")) fail("initial.u0", "missing");
  c.u0 = vector4(j["u0"], "initial.u0");
  if (c.u0[0] <= 0.0) fail("initial.u0", "must be future-directed (u0[0] > 0)");
  const double uu = minkowski_dot(c.u0, c.u0);
  if (std::abs(uu - 1.0) >= kVelocityRescaleTolerance) {
    std::ostringstream os;
    os << "u.u = " << uu << ", must equal 1 (rescaling only below " << kVelocityRescaleTolerance
       << ")";
    fail("initial.u0", os.str());
  }
  if (uu != 1.0) {
    c.u0 /= std::sqrt(uu);
    // Decimal input of a unit vector rarely hits u.u = 1 exactly; stay quiet at roundoff level.
    if (std::abs(uu - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "initial.u0: rescaled from u.u = " << uu << " to 1";
      c.warnings.push_back(os.str());
    }
  }

  if (!j.contains("spin")) return;
  const json& s = j["spin"];
  check_keys(s, "initial.spin", {"tensor", "xi"});
  if (s.contains("tensor")) {
    const auto v = numbers<6>(s["tensor"], "initial.spin.tensor");
    Matrix4 m = Matrix4::Zero();
    for (std::size_t k = 0; k < metric::kPairs.size(); ++k) {
      const auto [mu, nu] = metric::kPairs[k];
      m(mu, nu) = v[k];
      m(nu, mu) = -v[k];
    }
    c.spin_tensor = m;
  }
  if (s.contains("xi")) {
    const json& xi = s["xi"];
    if (!xi.is_array() || xi.size() != 2) {
      fail("initial.spin.xi", "expected two coefficient vectors c_1, c_2");
    }
    for (std::size_t a = 0; a < 2; ++a) {
      c.xi_coefficients.push_back(vector4(xi[a], "initial.spin.xi[" + std::to_string(a) + "]"));
    }
    for (std::size_t a = 0; a < 2; ++a) {
      const double overlap = minkowski_dot(c.xi_coefficients[a], c.u0);
      if (std::abs(overlap) > 1e-12) {
        std::ostringstream os;
        os << "initial.spin.xi[" << a << "]: not orthogonal to u0 (c.u = " << overlap
           << "); the constraint starts violated";
        c.warnings.push_back(os.str());
      }
    }
  }
  if (c.spin_tensor && !c.xi_coefficients.empty()) {
    const Matrix4 derived =
        spin_from_xi_coefficients(c.xi_coefficients[0], c.xi_coefficients[1]);
    if ((derived - *c.spin_tensor).cwiseAbs().maxCoeff() > 1e-12) {
      fail("initial.spin", "tensor is inconsistent with the xi coefficients");
    }
  }
}

void parse_integrator(const json& j, RunConfig& c) {
  check_keys(j, "integrator", {"step", "steps", "record_every"});
  if (j.contains("step")) c.integrator.step = number(j["step"], "integrator.step");
  if (j.contains("steps")) c.integrator.steps = integer(j["steps"], "integrator.steps");
  if (j.contains("record_every")) {
    c.integrator.record_every = integer(j["record_every"], "integrator.record_every");
  }
  if (!(c.integrator.step > 0.0)) fail("integrator.step", "must be positive");
  if (c.integrator.steps < 0) fail("integrator.steps", "must be non-negative");
  if (c.integrator.record_every < 1) fail("integrator.record_every", "must be at least 1");
}

void parse_thresholds(const json& j, RunConfig& c) {
  check_keys(j, "thresholds", {"drift", "constraint", "deviation", "maxwell"});
  auto positive = [&](const char* key) {
    const double v = number(j[key], std::string("thresholds.") + key);
    if (!(v > 0.0)) fail(std::string("thresholds.") + key, "must be positive");
    return v;
  };
  if (j.contains("drift")) c.thresholds.drift = positive("drift");
  if (j.contains("constraint")) c.thresholds.constraint = positive("constraint");
  if (j.contains("deviation")) c.thresholds.deviation = positive("deviation");
  if (j.contains("maxwell")) c.thresholds.maxwell = positive("maxwell");
}

void parse_verify(const json& j, RunConfig& c) {
  check_keys(j, "verify", {"maxwell_points", "variations", "expect_maxwell_fail"});
  if (j.contains("maxwell_points")) {
    c.verify.maxwell_points = static_cast<int>(integer(j["maxwell_points"], "verify.maxwell_points"));
    if (c.verify.maxwell_points < 1) fail("verify.maxwell_points", "must be at least 1");
  }
  if (j.contains("variations")) {
    c.verify.variations = static_cast<int>(integer(j["variations"], "verify.variations"));
    if (c.verify.variations < 1) fail("verify.variations", "must be at least 1");
  }
  if (j.contains("expect_maxwell_fail")) {
    if (!j["expect_maxwell_fail"].is_boolean()) fail("verify.expect_maxwell_fail", "expected a boolean");
    c.verify.expect_maxwell_fail = j["expect_maxwell_fail"];
  }
}

}  // namespace

Mask parse_monomial(const std::string& s) {
  if (s == "1") return 0;
  Mask m = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != 't') throw ConfigurationError("bad monomial '" + s + "' (expected e.g. t1t2)");
    std::size_t j = i + 1;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i + 1) throw ConfigurationError("bad monomial '" + s + "'");
    const int g = std::stoi(s.substr(i + 1, j - i - 1));
    if (g < 1 || g > kMaxGenerators) throw ConfigurationError("bad generator in '" + s + "'");
    const Mask bit = Mask{1} << (g - 1);
    if (m & bit) throw ConfigurationError("repeated generator in '" + s + "'");
    m |= bit;
    i = j;
  }
  if (s.empty()) throw ConfigurationError("empty monomial");
  return m;
}

std::string monomial_name(Mask m) {
  if (m == 0) return "1";
  std::string out;
  for (int g = 0; g < kMaxGenerators; ++g) {
    if (m & (Mask{1} << g)) out += "t" + std::to_string(g + 1);
  }
  return out;
}

Matrix4 RunConfig::initial_spin() const {
  if (spin_tensor) return *spin_tensor;
  if (xi_coefficients.size() == 2) {
    return spin_from_xi_coefficients(xi_coefficients[0], xi_coefficients[1]);
  }
  return Matrix4::Zero();
}

SuperState RunConfig::initial_super_state() const {
  if (spin_tensor && xi_coefficients.empty() && !spin_tensor->isZero(0.0)) {
    throw ConfigurationError(
        "initial.spin: the Grassmann integrator needs xi coefficients, not a tensor");
  }
  SuperState st = make_super_state(n_generators, x0, u0, xi_coefficients);
  return st;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"params", "field", "initial", "integrator", "algebra", "dynamics", "seed",
                     "thresholds", "output", "verify"});
  RunConfig c;
  if (j.contains("params")) parse_params(j["params"], c);
  if (!j.contains("field")) fail("field", "missing");
  parse_field(j["field"], c);
  if (!j.contains("initial")) fail("initial", "missing");
  parse_initial(j["initial"], c);
  if (j.contains("integrator")) parse_integrator(j["integrator"], c);
  if (j.contains("algebra")) {
    check_keys(j["algebra"], "algebra", {"n_generators"});
    if (j["algebra"].contains("n_generators")) {
      const long n = integer(j["algebra"]["n_generators"], "algebra.n_generators");
      if (n < 2 || n > kMaxGenerators) fail("algebra.n_generators", "must be in 2..16");
      c.n_generators = static_cast<int>(n);
    }
  }
  if (j.contains("dynamics")) {
    check_keys(j["dynamics"], "dynamics", {"form"});
    if (j["dynamics"].contains("form")) {
      if (!j["dynamics"]["form"].is_string()) fail("dynamics.form", "expected a string");
      try {
        c.form = equation_form_from_string(j["dynamics"]["form"]);
      } catch (const ConfigurationError& e) {
        fail("dynamics.form", e.what());
      }
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("thresholds")) parse_thresholds(j["thresholds"], c);
  c.output_monomials = {0b01, 0b10};
  if (j.contains("output")) {
    check_keys(j["output"], "output", {"monomials"});
    if (j["output"].contains("monomials")) {
      const json& m = j["output"]["monomials"];
      if (!m.is_array()) fail("output.monomials", "expected an array of strings");
      c.output_monomials.clear();
      for (const auto& e : m) {
        if (!e.is_string()) fail("output.monomials", "expected strings like \"t1t2\"");
        try {
          c.output_monomials.push_back(parse_monomial(e));
        } catch (const ConfigurationError& err) {
          fail("output.monomials", err.what());
        }
      }
    }
  }
  for (Mask m : c.output_monomials) {
    if (m >> c.n_generators) fail("output.monomials", monomial_name(m) + " exceeds n_generators");
  }
  if (j.contains("verify")) parse_verify(j["verify"], c);
  if (c.xi_coefficients.size() > static_cast<std::size_t>(c.n_generators)) {
    fail("initial.spin.xi", "more coefficient vectors than generators");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gbmt::cli
