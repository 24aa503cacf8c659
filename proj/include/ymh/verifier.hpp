#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ymh/model.hpp"
#include "ymh/observables.hpp"
#include "ymh/sampler.hpp"
#include "ymh/stringops.hpp"

namespace ymh {

/** Coefficient class q(O) per operation kind, with a mutation hook for tests. */
enum class CoeffClass {
  Deformation,     // beta
  Breaking,        // kappa
  ExpPlaquette,    // beta nu
  ExpEdgeAtEdge,   // kappa nu
  Splitting,       // 2 lambda
  Twisting,        // 2 mu
  MergerU,         // 2 lambda
  MergerNotU,      // 2 mu
  SwitchingU,      // 2 lambda
  SwitchingNotU,   // 2 mu
  Extension,       // kappa
  ExpEdgeAtSite,   // -kappa/2 on spheres (0 flat)
  ExpNull,         // grad_coeff(k) on flat targets (0 on spheres)
  Gluing,          // 2 q
  RGluing,         // 2 (2-q)
  LhsEdgeCg,       // -2 r c_g part of the edge LHS constant
  LhsEdgeNu,       // 2 nu (r - t^2) part
  LhsSite,         // site LHS constant
};

const char* coeff_class_name(CoeffClass c);
std::vector<CoeffClass> all_coeff_classes();

class CoefficientTable {
 public:
  CoefficientTable(const GroupSpec& g, const HiggsSpec& h, double beta, double kappa);

  /** Base value of a class; ExpNull uses `k` = number of null-lines. */
  double value(CoeffClass c, int k = 0) const;

  /** Signed coefficient of an enumerated entry: -q(O) positive, +q(O) negative, +q(O) unsigned. */
  double entry_coefficient(const OperationEntry& e) const;

  double lhs_edge_constant(int r, int t) const;
  double lhs_site_constant(int r_x) const;

  /** Test hook: scales one class by `factor` (mutation-sensitivity checks). */
  void mutate(CoeffClass c, double factor) { scale_[c] = factor; }

 private:
  GroupSpec group_;
  HiggsSpec higgs_;
  double beta_;
  double kappa_;
  std::map<CoeffClass, double> scale_;
};

struct TermBreakdown {
  std::string label;
  double coefficient = 0.0;  // signed, per entry
  int entries = 0;
  Complex mean{0.0, 0.0};  // Monte Carlo mean of the term sum
};

struct EquationReport {
  std::string anchor;
  double lhs_constant = 0.0;
  int r = 0;
  int t = 0;  // edge form only
  Estimate lhs;
  Estimate rhs;
  Estimate diff;  // per-sample LHS - RHS, common random numbers
  double z_re = 0.0;
  double z_im = 0.0;
  bool degenerate = false;  // anchor absent: exact 0 = 0
  bool pass = false;
  std::vector<TermBreakdown> terms;

  double max_abs_z() const { return std::max(std::abs(z_re), std::abs(z_im)); }
};

/** A prepared equation: all entries enumerated, coefficients fixed. */
struct PreparedEquation {
  bool edge_form = true;
  StringCollection s;
  OrientedEdge e{};
  std::int32_t x = -1;
  double lhs_constant = 0.0;
  int r = 0, t = 0;
  std::vector<OperationEntry> entries;
  std::vector<double> coefficients;  // parallel to entries
};

PreparedEquation prepare_edge_equation(const ModelParams& p, const CoefficientTable& tbl,
                                       const StringCollection& s, const OrientedEdge& e);
PreparedEquation prepare_site_equation(const ModelParams& p, const CoefficientTable& tbl,
                                       const StringCollection& s, std::int32_t x);

/** Per-sample LHS and RHS values of a prepared equation. */
std::pair<Complex, Complex> evaluate_equation(const PreparedEquation& eq, const FieldConfig& c);

/** Enumerated entries with signed coefficients, for symbolic inspection. */
std::vector<std::pair<OperationEntry, double>> assemble_rhs(const ModelParams& p,
                                                            const CoefficientTable& tbl,
                                                            const StringCollection& s,
                                                            const OrientedEdge& e);
std::vector<std::pair<OperationEntry, double>> assemble_rhs_site(const ModelParams& p,
                                                                 const CoefficientTable& tbl,
                                                                 const StringCollection& s,
                                                                 std::int32_t x);

EquationReport finalize_report(const PreparedEquation& eq, const ModelParams& p,
                               const std::vector<Complex>& lhs_series,
                               const std::vector<Complex>& rhs_series, double z_threshold);

/** Verifies one equation against an explicit sample set. */
EquationReport verify_edge(const ModelParams& p, const std::vector<FieldConfig>& samples,
                           const StringCollection& s, const OrientedEdge& e,
                           const CoefficientTable& tbl, double z_threshold = 4.0);
EquationReport verify_site(const ModelParams& p, const std::vector<FieldConfig>& samples,
                           const StringCollection& s, std::int32_t x,
                           const CoefficientTable& tbl, double z_threshold = 4.0);

// --- catalogs ----------------------------------------------------------------

struct CatalogEntry {
  bool edge_form = true;
  int collection_index = 0;  // into the strings file
  std::string anchor_text;
};

/** `edge s<k> <edge>` / `site s<k> <vertex>`, one per line, '#' comments. */
std::vector<CatalogEntry> parse_catalog(const std::string& text);

struct BatchOptions {
  double z_threshold = 4.0;
  int threads = 1;
  std::int64_t iid_samples = 1000000;  // used when beta = kappa = 0
  std::uint64_t seed = 1;
};

/**
 * Shares one sample stream (iid when beta = kappa = 0, MCMC otherwise) across
 * all catalog entries. Reports keep catalog order.
 */
std::vector<EquationReport> batch_verify(const ModelParams& p, const SamplerPlan& plan,
                                         const std::vector<StringCollection>& collections,
                                         const std::vector<CatalogEntry>& catalog,
                                         const CoefficientTable& tbl, const BatchOptions& opt);

std::string report_table(const std::vector<EquationReport>& reports);

}  // namespace ymh
