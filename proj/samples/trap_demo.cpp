// Exact analytics for the 8-bit weight function 000110000 at p = 0.2, then a
// finite-sample check of how a lookup table fares on it.
#include <cstdio>

#include "nrbl/nrbl.hpp"

int main() {
  const auto wf = nrbl::WeightFunction::from_string("000110000");
  const auto c = nrbl::evaluate_weight_function(wf, 0.2);
  std::printf("f     = %s  err %.6f  sens %.4f\n", c.s.c_str(), c.err_f, c.sens_f);
  std::printf("f_N*  = %s  err %.6f  sens %.4f\n", c.fnstar.c_str(), c.err_fnstar, c.sens_fnstar);

  const auto v = nrbl::finite_sample_vetting(c, 10000, 20000, 7);
  std::printf("lookup table: train acc %.4f, val acc %.4f (optimum %.4f)\n", v.lookup_train_acc,
              v.lookup_val_acc, v.optimal_acc);

  const nrbl::BooleanFunction f = nrbl::expand_weight_function(wf);
  const auto report = nrbl::analyze(f, nrbl::NoiseModel::iid(0.2));
  std::printf("H(Y|Z) = %.6f bits, Feder bounds [%.6f, %.6f]\n", report.cond_entropy_bits,
              report.feder_lower, report.feder_upper);
}
