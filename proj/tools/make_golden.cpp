// Writes the reference CSV for a constant-field simulate-bmt config from the
// matrix-exponential solution, in the same column layout.
//
//   make_golden CONFIG OUT

#include <fstream>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace gbmt;
  if (argc != 3) {
    std::cerr << "usage: make_golden CONFIG OUT\n";
    return cli::kConfigError;
  }
  try {
    const cli::RunConfig cfg = cli::load_config(argv[1]);
    if (!cfg.field.is_homogeneous() || cfg.field_kind == cli::FieldKind::direct_tensor) {
      throw ConfigurationError("field: the reference solution needs a constant field");
    }
    BMTState st0;
    st0.x = cfg.x0;
    st0.u = cfg.u0;
    st0.spin = cfg.initial_spin();
    std::vector<double> times;
    const IntegratorSettings& s = cfg.integrator;
    for (long i = 0; i <= s.steps; ++i) {
      if (i % s.record_every == 0 || i == s.steps) times.push_back(static_cast<double>(i) * s.step);
    }
    const Matrix4 f = field_tensor_real(cfg.field, Vector4::Zero());
    const std::vector<BMTState> ref = analytic_constant_field(st0, f, cfg.params, times);
    std::ofstream out(argv[2], std::ios::binary);
    if (!out) throw ConfigurationError(std::string("cannot write '") + argv[2] + "'");
    cli::write_bmt_header(out);
    for (const BMTState& st : ref) cli::write_bmt_row(out, st, invariants(st));
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kConfigError;
  }
  return cli::kPass;
}
