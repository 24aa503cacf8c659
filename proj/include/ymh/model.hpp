#pragma once

#include <vector>

#include "ymh/geometry.hpp"
#include "ymh/groups.hpp"

namespace ymh {

struct ModelParams {
  GroupSpec group;
  HiggsSpec higgs;
  LatticeGeometry geometry;
  double beta = 0.0;
  double kappa = 0.0;

  ModelParams(GroupSpec g, HiggsSpec h, LatticeGeometry geo, double b, double k);
};

/**
 * One YMH configuration: Q on positive links, Phi on sites. Access through an
 * oriented edge transparently returns Q or Q^{-1}. Scalars are stored complex;
 * SO(N) configurations keep exactly zero imaginary parts.
 */
class FieldConfig {
 public:
  FieldConfig(const LatticeGeometry& g, int N);

  /** Unit links, first-basis-vector sites. */
  static FieldConfig identity(const ModelParams& p);

  Matrix Q(const OrientedEdge& e) const;
  const Matrix& link(std::int64_t idx) const { return links_[static_cast<std::size_t>(idx)]; }
  Matrix& link(std::int64_t idx) { return links_[static_cast<std::size_t>(idx)]; }

  const Vector& phi(std::int32_t x) const { return phis_[static_cast<std::size_t>(x)]; }
  Vector& phi(std::int32_t x) { return phis_[static_cast<std::size_t>(x)]; }

  std::int64_t num_links() const { return static_cast<std::int64_t>(links_.size()); }
  std::int64_t num_sites() const { return static_cast<std::int64_t>(phis_.size()); }

  /** Ordered product over a composable edge sequence. */
  Matrix path_product(const std::vector<OrientedEdge>& edges) const;

 private:
  const LatticeGeometry* geom_;
  std::vector<Matrix> links_;
  std::vector<Vector> phis_;
};

double action(const ModelParams& p, const FieldConfig& c);

/** The plaquette part of the action restricted to plaquettes through e or e^{-1}. */
double local_action_edge(const ModelParams& p, const FieldConfig& c, const OrientedEdge& e);
/** Site terms of the action involving Phi_x. */
double local_action_site(const ModelParams& p, const FieldConfig& c, std::int32_t x);

/** Riemannian gradient of the action at Q_e, an element of T_Q (xi Q form). */
Matrix grad_edge(const ModelParams& p, const FieldConfig& c, const OrientedEdge& e);

/** Gradient at Phi_x: ambient for flat targets, tangential for spheres. */
Vector grad_site(const ModelParams& p, const FieldConfig& c, std::int32_t x);

FieldConfig gauge_transform(const ModelParams& p, const FieldConfig& c,
                            const std::vector<Matrix>& g);

/** Random gauge field g: Lambda -> G. */
std::vector<Matrix> random_gauge(const ModelParams& p, Rng& rng);

/** Worst constraint violation over all links and sites. */
double config_defect(const ModelParams& p, const FieldConfig& c);

}  // namespace ymh
