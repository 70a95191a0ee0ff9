#pragma once

// JSON run configuration for the spinsim front end.  configs/annotated.json
// documents every key.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbmt/fields.hpp"
#include "gbmt/super_dynamics.hpp"

namespace gbmt::cli {

enum class FieldKind { constant, polynomial, direct_tensor };

struct Thresholds {
  double drift = 1e-8;       // simulate-bmt invariant drift
  double constraint = 1e-9;  // simulate-super / verify constraint max-abs
  // compare deviation; unset means 1e-6 for homogeneous fields and
  // report-only otherwise
  std::optional<double> deviation;
  double maxwell = 1e-12;
};

struct VerifySettings {
  int maxwell_points = 100;
  int variations = 4;  // random even and odd bump variations each
  bool expect_maxwell_fail = false;
};

struct RunConfig {
  ModelParams params;
  FieldKind field_kind = FieldKind::constant;
  FieldConfig field;
  // Only for direct_tensor fields, which have no potential.
  std::optional<FieldTensorPolynomial> direct_tensor;

  Vector4 x0 = Vector4::Zero();
  Vector4 u0 = Vector4(1, 0, 0, 0);
  std::optional<Matrix4> spin_tensor;    // S^{mu nu}
  std::vector<Vector4> xi_coefficients;  // c_1, c_2

  IntegratorSettings integrator;
  int n_generators = kDefaultGenerators;
  EquationForm form = EquationForm::standard;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  std::vector<Mask> output_monomials;
  VerifySettings verify;

  std::vector<std::string> warnings;

  // S^{mu nu} from the tensor when given, else from the xi coefficients.
  Matrix4 initial_spin() const;
  SuperState initial_super_state() const;
};

// Throws ConfigurationError with the offending key in the message.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// "t1t3" -> 0b101; "1" -> scalar part.
Mask parse_monomial(const std::string& s);
std::string monomial_name(Mask m);

}  // namespace gbmt::cli
