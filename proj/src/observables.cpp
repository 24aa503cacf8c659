#include "ymh/observables.hpp"

#include <cmath>

#include "ymh/errors.hpp"

namespace ymh {

Complex eval_string(const FieldConfig& c, const LatticeString& l) {
  if (is_loop(l)) {
    const auto& lp = std::get<Loop>(l);
    if (lp.null()) return Complex(static_cast<double>(c.phi(0).size()), 0.0);
    return c.path_product(lp.edges()).trace();
  }
  const auto& ln = std::get<Line>(l);
  const Vector& u = c.phi(ln.begin_point());
  const Vector& v = c.phi(ln.end_point());
  if (ln.null()) return (u.adjoint() * u)(0);
  return (u.adjoint() * c.path_product(ln.edges()) * v)(0);
}

Complex eval_raw(const FieldConfig& c, const std::vector<LatticeString>& raw) {
  Complex acc = 1.0;
  for (const auto& l : raw) acc *= eval_string(c, l);
  return acc;
}

Complex eval_collection(const FieldConfig& c, const StringCollection& s) {
  return eval_raw(c, s.strings());
}

Estimate batch_estimate(const std::vector<Complex>& series) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (n == 0) throw UsageError("cannot estimate from an empty series");
  Estimate out;
  out.samples = n;
  Complex sum = 0.0;
  for (const auto& v : series) sum += v;
  out.mean = sum / static_cast<double>(n);

  int nb = static_cast<int>(std::sqrt(static_cast<double>(n)));
  nb = std::max(1, nb);
  const std::int64_t bsz = n / nb;
  if (bsz == 0 || nb < 2) {
    out.batches = 1;
    return out;
  }
  double var_re = 0.0, var_im = 0.0;
  for (int b = 0; b < nb; ++b) {
    Complex bsum = 0.0;
    for (std::int64_t i = b * bsz; i < (b + 1) * bsz; ++i) bsum += series[static_cast<std::size_t>(i)];
    Complex bmean = bsum / static_cast<double>(bsz);
    var_re += (bmean.real() - out.mean.real()) * (bmean.real() - out.mean.real());
    var_im += (bmean.imag() - out.mean.imag()) * (bmean.imag() - out.mean.imag());
  }
  var_re /= (nb - 1.0);
  var_im /= (nb - 1.0);
  out.batches = nb;
  out.stderr_re = std::sqrt(var_re / nb);
  out.stderr_im = std::sqrt(var_im / nb);
  return out;
}

Estimate estimate_phi(const std::vector<FieldConfig>& samples, const StringCollection& s) {
  if (samples.size() < 64) throw UsageError("estimate_phi needs at least 64 samples");
  std::vector<Complex> series;
  series.reserve(samples.size());
  for (const auto& c : samples) series.push_back(eval_collection(c, s));
  return batch_estimate(series);
}

GaugeCheckReport gauge_invariance_check(const ModelParams& p, const FieldConfig& c,
                                        const StringCollection& s, const std::vector<Matrix>& g,
                                        double tol) {
  GaugeCheckReport rep;
  FieldConfig ct = gauge_transform(p, c, g);
  rep.max_action_diff = std::abs(action(p, c) - action(p, ct));
  rep.max_observable_diff = std::abs(eval_collection(c, s) - eval_collection(ct, s));
  rep.pass = rep.max_action_diff < tol && rep.max_observable_diff < tol;
  return rep;
}

}  // namespace ymh
