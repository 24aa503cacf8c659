#pragma once

#include <vector>

#include "ymh/model.hpp"
#include "ymh/strings.hpp"

namespace ymh {

/**
 * W_l: trace of the ordered link product for a loop (N for the null-loop),
 * Phi_u* (prod Q) Phi_v for a line, Phi_x* Phi_x for the null-line.
 */
Complex eval_string(const FieldConfig& c, const LatticeString& l);

/** Product over components; empty product = 1. Null-loops in `raw` count as N. */
Complex eval_raw(const FieldConfig& c, const std::vector<LatticeString>& raw);

Complex eval_collection(const FieldConfig& c, const StringCollection& s);

/** Mean and componentwise standard error from batch means (about sqrt(n) batches). */
struct Estimate {
  Complex mean{0.0, 0.0};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::int64_t samples = 0;
  int batches = 0;
};

Estimate batch_estimate(const std::vector<Complex>& series);

/** phi(s) estimated over a sample set; requires at least 64 samples. */
Estimate estimate_phi(const std::vector<FieldConfig>& samples, const StringCollection& s);

struct GaugeCheckReport {
  double max_action_diff = 0.0;
  double max_observable_diff = 0.0;
  bool pass = false;
};

GaugeCheckReport gauge_invariance_check(const ModelParams& p, const FieldConfig& c,
                                        const StringCollection& s, const std::vector<Matrix>& g,
                                        double tol = 1e-9);

}  // namespace ymh
