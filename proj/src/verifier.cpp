#include "ymh/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ymh/errors.hpp"

namespace ymh {

const char* coeff_class_name(CoeffClass c) {
  switch (c) {
    case CoeffClass::Deformation: return "deformation";
    case CoeffClass::Breaking: return "breaking";
    case CoeffClass::ExpPlaquette: return "exp-plaquette";
    case CoeffClass::ExpEdgeAtEdge: return "exp-edge-at-e";
    case CoeffClass::Splitting: return "splitting";
    case CoeffClass::Twisting: return "twisting";
    case CoeffClass::MergerU: return "merger-U";
    case CoeffClass::MergerNotU: return "merger-notU";
    case CoeffClass::SwitchingU: return "switching-U";
    case CoeffClass::SwitchingNotU: return "switching-notU";
    case CoeffClass::Extension: return "extension";
    case CoeffClass::ExpEdgeAtSite: return "exp-edge-at-x";
    case CoeffClass::ExpNull: return "exp-null";
    case CoeffClass::Gluing: return "gluing";
    case CoeffClass::RGluing: return "R-gluing";
    case CoeffClass::LhsEdgeCg: return "lhs-edge-cg";
    case CoeffClass::LhsEdgeNu: return "lhs-edge-nu";
    case CoeffClass::LhsSite: return "lhs-site";
  }
  return "?";
}

std::vector<CoeffClass> all_coeff_classes() {
  return {CoeffClass::Deformation,  CoeffClass::Breaking,     CoeffClass::ExpPlaquette,
          CoeffClass::ExpEdgeAtEdge, CoeffClass::Splitting,    CoeffClass::Twisting,
          CoeffClass::MergerU,       CoeffClass::MergerNotU,   CoeffClass::SwitchingU,
          CoeffClass::SwitchingNotU, CoeffClass::Extension,    CoeffClass::ExpEdgeAtSite,
          CoeffClass::ExpNull,       CoeffClass::Gluing,       CoeffClass::RGluing,
          CoeffClass::LhsEdgeCg,     CoeffClass::LhsEdgeNu,    CoeffClass::LhsSite};
}

CoefficientTable::CoefficientTable(const GroupSpec& g, const HiggsSpec& h, double beta,
                                   double kappa)
    : group_(g), higgs_(h), beta_(beta), kappa_(kappa) {}

double CoefficientTable::value(CoeffClass c, int k) const {
  double v = 0.0;
  switch (c) {
    case CoeffClass::Deformation: v = beta_; break;
    case CoeffClass::Breaking: v = kappa_; break;
    case CoeffClass::ExpPlaquette: v = beta_ * group_.nu(); break;
    case CoeffClass::ExpEdgeAtEdge: v = kappa_ * group_.nu(); break;
    case CoeffClass::Splitting: v = 2.0 * group_.lambda(); break;
    case CoeffClass::Twisting: v = 2.0 * group_.mu(); break;
    case CoeffClass::MergerU: v = 2.0 * group_.lambda(); break;
    case CoeffClass::MergerNotU: v = 2.0 * group_.mu(); break;
    case CoeffClass::SwitchingU: v = 2.0 * group_.lambda(); break;
    case CoeffClass::SwitchingNotU: v = 2.0 * group_.mu(); break;
    case CoeffClass::Extension: v = kappa_; break;
    // The expansion-by-an-edge drift carries kappa/2 per entry with both edge
    // orientations enumerated (the identity behind Lemma-level bookkeeping).
    case CoeffClass::ExpEdgeAtSite: v = higgs_.sphere() ? -0.5 * kappa_ : 0.0; break;
    case CoeffClass::ExpNull: v = higgs_.sphere() ? 0.0 : higgs_.grad_coeff(k); break;
    case CoeffClass::Gluing: v = 2.0 * higgs_.q(); break;
    case CoeffClass::RGluing: v = 2.0 * (2.0 - higgs_.q()); break;
    case CoeffClass::LhsEdgeCg: v = -2.0 * group_.cg(); break;
    case CoeffClass::LhsEdgeNu: v = 2.0 * group_.nu(); break;
    case CoeffClass::LhsSite:
      v = higgs_.sphere() ? 1.0 : -higgs_.c0();
      break;
  }
  auto it = scale_.find(c);
  if (it != scale_.end()) v *= it->second;
  return v;
}

double CoefficientTable::entry_coefficient(const OperationEntry& e) const {
  CoeffClass c;
  switch (e.kind) {
    case OpKind::Deformation: c = CoeffClass::Deformation; break;
    case OpKind::Breaking: c = CoeffClass::Breaking; break;
    case OpKind::Splitting: c = CoeffClass::Splitting; break;
    case OpKind::Twisting: c = CoeffClass::Twisting; break;
    case OpKind::Merger:
      c = e.uclass == UClass::U ? CoeffClass::MergerU : CoeffClass::MergerNotU;
      break;
    case OpKind::Switching:
      c = e.uclass == UClass::U ? CoeffClass::SwitchingU : CoeffClass::SwitchingNotU;
      break;
    case OpKind::ExpansionPlaquette: c = CoeffClass::ExpPlaquette; break;
    case OpKind::ExpansionEdgeAtEdge: c = CoeffClass::ExpEdgeAtEdge; break;
    case OpKind::Extension: c = CoeffClass::Extension; break;
    case OpKind::ExpansionEdgeAtSite: c = CoeffClass::ExpEdgeAtSite; break;
    case OpKind::ExpansionNull: c = CoeffClass::ExpNull; break;
    case OpKind::Gluing: c = CoeffClass::Gluing; break;
    case OpKind::RGluing: c = CoeffClass::RGluing; break;
    default: throw UsageError("unknown operation kind");
  }
  double q = value(c, e.null_count);
  if (e.sign == OpSign::Positive) return -q;
  return q;  // negative and unsigned kinds enter with +q(O)
}

double CoefficientTable::lhs_edge_constant(int r, int t) const {
  return value(CoeffClass::LhsEdgeCg) * r +
         value(CoeffClass::LhsEdgeNu) * (r - static_cast<double>(t) * t);
}

double CoefficientTable::lhs_site_constant(int r_x) const {
  if (!higgs_.sphere()) return value(CoeffClass::LhsSite) * r_x;
  // [(qN-2) r_x + r_x^2], scaled through the LhsSite hook
  double q = higgs_.q();
  return value(CoeffClass::LhsSite) *
         ((q * higgs_.N - 2.0) * r_x + static_cast<double>(r_x) * r_x);
}

PreparedEquation prepare_edge_equation(const ModelParams& p, const CoefficientTable& tbl,
                                       const StringCollection& s, const OrientedEdge& e) {
  PreparedEquation eq;
  eq.edge_form = true;
  eq.s = s;
  eq.e = e;
  auto counts = edge_counts(s, e);
  eq.r = counts.r;
  eq.t = counts.t;
  eq.lhs_constant = tbl.lhs_edge_constant(eq.r, eq.t);
  if (eq.r == 0) return eq;  // degenerate 0 = 0
  eq.entries = enumerate_edge_ops(s, e, p.geometry, all_edge_families());
  eq.coefficients.reserve(eq.entries.size());
  for (const auto& en : eq.entries) eq.coefficients.push_back(tbl.entry_coefficient(en));
  return eq;
}

PreparedEquation prepare_site_equation(const ModelParams& p, const CoefficientTable& tbl,
                                       const StringCollection& s, std::int32_t x) {
  PreparedEquation eq;
  eq.edge_form = false;
  eq.s = s;
  eq.x = x;
  eq.r = site_count(s, x);
  eq.lhs_constant = tbl.lhs_site_constant(eq.r);
  if (eq.r == 0) return eq;
  const int max_null = p.higgs.sphere() ? 0 : p.higgs.grad_terms() - 1;
  eq.entries = enumerate_site_ops(s, x, p.geometry, all_site_families(), max_null);
  eq.coefficients.reserve(eq.entries.size());
  for (const auto& en : eq.entries) eq.coefficients.push_back(tbl.entry_coefficient(en));
  return eq;
}

std::pair<Complex, Complex> evaluate_equation(const PreparedEquation& eq, const FieldConfig& c) {
  Complex lhs = eq.lhs_constant * eval_collection(c, eq.s);
  Complex rhs = 0.0;
  for (std::size_t i = 0; i < eq.entries.size(); ++i) {
    if (eq.coefficients[i] == 0.0) continue;
    rhs += eq.coefficients[i] * eval_raw(c, eq.entries[i].result);
  }
  return {lhs, rhs};
}

std::vector<std::pair<OperationEntry, double>> assemble_rhs(const ModelParams& p,
                                                            const CoefficientTable& tbl,
                                                            const StringCollection& s,
                                                            const OrientedEdge& e) {
  auto eq = prepare_edge_equation(p, tbl, s, e);
  std::vector<std::pair<OperationEntry, double>> out;
  out.reserve(eq.entries.size());
  for (std::size_t i = 0; i < eq.entries.size(); ++i)
    out.emplace_back(eq.entries[i], eq.coefficients[i]);
  return out;
}

std::vector<std::pair<OperationEntry, double>> assemble_rhs_site(const ModelParams& p,
                                                                 const CoefficientTable& tbl,
                                                                 const StringCollection& s,
                                                                 std::int32_t x) {
  auto eq = prepare_site_equation(p, tbl, s, x);
  std::vector<std::pair<OperationEntry, double>> out;
  out.reserve(eq.entries.size());
  for (std::size_t i = 0; i < eq.entries.size(); ++i)
    out.emplace_back(eq.entries[i], eq.coefficients[i]);
  return out;
}

namespace {

std::string anchor_label(const PreparedEquation& eq, const ModelParams& p) {
  if (eq.edge_form) return "edge " + render_edge(eq.e, p.geometry);
  return "site " + render_vertex(eq.x, p.geometry);
}

}  // namespace

EquationReport finalize_report(const PreparedEquation& eq, const ModelParams& p,
                               const std::vector<Complex>& lhs_series,
                               const std::vector<Complex>& rhs_series, double z_threshold) {
  EquationReport rep;
  rep.anchor = anchor_label(eq, p);
  rep.lhs_constant = eq.lhs_constant;
  rep.r = eq.r;
  rep.t = eq.t;
  if (eq.r == 0) {
    rep.degenerate = true;
    rep.pass = true;
    return rep;
  }
  rep.lhs = batch_estimate(lhs_series);
  rep.rhs = batch_estimate(rhs_series);
  std::vector<Complex> diff(lhs_series.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lhs_series[i] - rhs_series[i];
  rep.diff = batch_estimate(diff);
  // identities that hold configuration-wise leave only rounding dust in the
  // difference series; score those as exact instead of dust-mean / dust-stderr
  const double scale = std::max({1.0, std::abs(rep.lhs.mean), std::abs(rep.rhs.mean)});
  auto zscore = [scale](double mean, double se) {
    if (std::abs(mean) <= 1e-12 * scale) return 0.0;
    if (se <= 0.0) return 1e18;
    return mean / se;
  };
  rep.z_re = zscore(rep.diff.mean.real(), rep.diff.stderr_re);
  rep.z_im = zscore(rep.diff.mean.imag(), rep.diff.stderr_im);
  rep.pass = rep.max_abs_z() < z_threshold;

  // per-class breakdown on the last sample is omitted; report entry counts only
  std::map<std::string, TermBreakdown> by_label;
  for (std::size_t i = 0; i < eq.entries.size(); ++i) {
    const auto& en = eq.entries[i];
    std::string label = op_kind_name(en.kind);
    if (en.uclass != UClass::None) label += en.uclass == UClass::U ? "-U" : "-notU";
    if (en.sign != OpSign::Unsigned)
      label += en.sign == OpSign::Positive ? "(+)" : "(-)";
    auto& tb = by_label[label];
    tb.label = label;
    tb.coefficient = eq.coefficients[i];
    tb.entries += 1;
  }
  for (auto& [k, v] : by_label) rep.terms.push_back(v);
  return rep;
}

namespace {

EquationReport verify_prepared(const ModelParams& p, const std::vector<FieldConfig>& samples,
                               const PreparedEquation& eq, double z_threshold) {
  if (eq.r == 0) return finalize_report(eq, p, {}, {}, z_threshold);
  if (samples.empty()) throw UsageError("verification needs a nonempty sample set");
  std::vector<Complex> lhs_series, rhs_series;
  lhs_series.reserve(samples.size());
  rhs_series.reserve(samples.size());
  for (const auto& c : samples) {
    auto [l, r] = evaluate_equation(eq, c);
    lhs_series.push_back(l);
    rhs_series.push_back(r);
  }
  return finalize_report(eq, p, lhs_series, rhs_series, z_threshold);
}

}  // namespace

EquationReport verify_edge(const ModelParams& p, const std::vector<FieldConfig>& samples,
                           const StringCollection& s, const OrientedEdge& e,
                           const CoefficientTable& tbl, double z_threshold) {
  return verify_prepared(p, samples, prepare_edge_equation(p, tbl, s, e), z_threshold);
}

EquationReport verify_site(const ModelParams& p, const std::vector<FieldConfig>& samples,
                           const StringCollection& s, std::int32_t x,
                           const CoefficientTable& tbl, double z_threshold) {
  return verify_prepared(p, samples, prepare_site_equation(p, tbl, s, x), z_threshold);
}

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
  std::vector<CatalogEntry> out;
  std::istringstream iss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind, ref;
    if (!(ls >> kind)) continue;  // blank
    if (kind != "edge" && kind != "site")
      throw ParseError("catalog entry must start with 'edge' or 'site'", lineno);
    if (!(ls >> ref) || ref.size() < 2 || ref[0] != 's')
      throw ParseError("expected collection reference s<k>", lineno);
    CatalogEntry e;
    e.edge_form = kind == "edge";
    try {
      e.collection_index = std::stoi(ref.substr(1)) - 1;
    } catch (...) {
      throw ParseError("bad collection reference '" + ref + "'", lineno);
    }
    if (e.collection_index < 0) throw ParseError("collection indices are 1-based", lineno);
    std::getline(ls, e.anchor_text);
    if (e.anchor_text.find_first_not_of(" \t\r") == std::string::npos)
      throw ParseError("missing anchor", lineno);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EquationReport> batch_verify(const ModelParams& p, const SamplerPlan& plan,
                                         const std::vector<StringCollection>& collections,
                                         const std::vector<CatalogEntry>& catalog,
                                         const CoefficientTable& tbl, const BatchOptions& opt) {
  std::vector<PreparedEquation> eqs;
  eqs.reserve(catalog.size());
  for (const auto& ce : catalog) {
    if (ce.collection_index >= static_cast<int>(collections.size()))
      throw ParameterError("catalog references collection s" +
                           std::to_string(ce.collection_index + 1) + " but only " +
                           std::to_string(collections.size()) + " are defined");
    const auto& s = collections[static_cast<std::size_t>(ce.collection_index)];
    if (ce.edge_form)
      eqs.push_back(prepare_edge_equation(p, tbl, s, parse_edge(ce.anchor_text, p.geometry)));
    else
      eqs.push_back(prepare_site_equation(p, tbl, s, parse_vertex(ce.anchor_text, p.geometry)));
  }

  const bool iid = p.beta == 0.0 && p.kappa == 0.0;
  const int nstreams = iid ? kIidBlocks : plan.chains;

  // per-stream buffers: lock-free under concurrent sinks, merged chain-major
  std::vector<std::vector<std::vector<Complex>>> lhs_b(eqs.size()), rhs_b(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    lhs_b[i].resize(static_cast<std::size_t>(nstreams));
    rhs_b[i].resize(static_cast<std::size_t>(nstreams));
  }
  auto sink = [&](int stream, std::int64_t, const FieldConfig& c) {
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (eqs[i].r == 0) continue;
      auto [l, r] = evaluate_equation(eqs[i], c);
      lhs_b[i][static_cast<std::size_t>(stream)].push_back(l);
      rhs_b[i][static_cast<std::size_t>(stream)].push_back(r);
    }
  };

  if (iid)
    iid_product_sample(p, opt.seed, opt.iid_samples, sink, opt.threads);
  else
    run_chain(p, plan, opt.seed, sink, opt.threads);

  std::vector<EquationReport> reports;
  reports.reserve(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    std::vector<Complex> lhs, rhs;
    for (int b = 0; b < nstreams; ++b) {
      lhs.insert(lhs.end(), lhs_b[i][static_cast<std::size_t>(b)].begin(),
                 lhs_b[i][static_cast<std::size_t>(b)].end());
      rhs.insert(rhs.end(), rhs_b[i][static_cast<std::size_t>(b)].begin(),
                 rhs_b[i][static_cast<std::size_t>(b)].end());
    }
    reports.push_back(finalize_report(eqs[i], p, lhs, rhs, opt.z_threshold));
  }
  return reports;
}

std::string report_table(const std::vector<EquationReport>& reports) {
  std::ostringstream os;
  os << "anchor                      r   LHS mean        RHS mean        z_re     z_im     result\n";
  for (const auto& r : reports) {
    char buf[256];
    if (r.degenerate) {
      std::snprintf(buf, sizeof buf, "%-26s %3d %-15s %-15s %-8s %-8s PASS (0=0)\n",
                    r.anchor.c_str(), r.r, "0", "0", "-", "-");
    } else {
      std::snprintf(buf, sizeof buf, "%-26s %3d %+.6e  %+.6e  %+7.2f  %+7.2f  %s\n",
                    r.anchor.c_str(), r.r, r.lhs.mean.real(), r.rhs.mean.real(), r.z_re, r.z_im,
                    r.pass ? "PASS" : "FAIL");
    }
    os << buf;
  }
  return os.str();
}

}  // namespace ymh
