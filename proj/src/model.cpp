#include "ymh/model.hpp"

#include "ymh/errors.hpp"

namespace ymh {

ModelParams::ModelParams(GroupSpec g, HiggsSpec h, LatticeGeometry geo, double b, double k)
    : group(g), higgs(h), geometry(geo), beta(b), kappa(k) {
  if (h.N != g.N) throw ParameterError("Higgs target dimension must match the group rank");
  if (h.complex_scalars == g.real())
    throw ParameterError("real groups act on real targets, complex groups on complex targets");
  if (!std::isfinite(b) || !std::isfinite(k)) throw ParameterError("couplings must be finite");
  if (!h.sphere() && h.vcoeff.size() == 2 && -h.vcoeff[1] <= std::abs(k))
    throw ParameterError("quadratic flat potential requires m > |kappa|");
}

FieldConfig::FieldConfig(const LatticeGeometry& g, int N)
    : geom_(&g),
      links_(static_cast<std::size_t>(g.num_positive_edges()), Matrix::Identity(N, N)),
      phis_(static_cast<std::size_t>(g.num_vertices()), Vector::Zero(N)) {
  for (auto& p : phis_) p(0) = 1.0;
}

FieldConfig FieldConfig::identity(const ModelParams& p) {
  return FieldConfig(p.geometry, p.group.N);
}

Matrix FieldConfig::Q(const OrientedEdge& e) const {
  const auto idx = geom_->link_index(e);
  const Matrix& m = links_[static_cast<std::size_t>(idx)];
  return e.dir > 0 ? m : m.adjoint();
}

Matrix FieldConfig::path_product(const std::vector<OrientedEdge>& edges) const {
  const int N = links_.empty() ? 0 : static_cast<int>(links_[0].rows());
  Matrix acc = Matrix::Identity(N, N);
  for (const auto& e : edges) acc *= Q(e);
  return acc;
}

double action(const ModelParams& p, const FieldConfig& c) {
  const auto& g = p.geometry;
  double s = 0.0;
  if (p.beta != 0.0) {
    double plaq = 0.0;
    for (const auto& pl : g.positive_plaquettes())
      plaq += c.path_product({pl.edges.begin(), pl.edges.end()}).trace().real();
    s += p.beta * plaq;
  }
  if (p.kappa != 0.0) {
    double hop = 0.0;
    for (std::int64_t l = 0; l < g.num_positive_edges(); ++l) {
      OrientedEdge e = g.link_edge(l);
      hop += (c.phi(e.from).adjoint() * c.Q(e) * c.phi(e.to))(0).real();
    }
    s += p.kappa * hop;
  }
  for (std::int32_t x = 0; x < g.num_vertices(); ++x)
    s += p.higgs.V(c.phi(x).squaredNorm());
  return s;
}

double local_action_edge(const ModelParams& p, const FieldConfig& c, const OrientedEdge& e) {
  const auto& g = p.geometry;
  double s = 0.0;
  if (p.beta != 0.0) {
    for (const auto& pl : g.plaquettes_through(e))
      s += p.beta * c.path_product({pl.edges.begin(), pl.edges.end()}).trace().real();
  }
  if (p.kappa != 0.0)
    s += p.kappa * (c.phi(e.from).adjoint() * c.Q(e) * c.phi(e.to))(0).real();
  return s;
}

double local_action_site(const ModelParams& p, const FieldConfig& c, std::int32_t x) {
  const auto& g = p.geometry;
  double s = 0.0;
  if (p.kappa != 0.0) {
    for (const auto& e : g.edges_at_site(x))
      s += p.kappa * (c.phi(x).adjoint() * c.Q(e) * c.phi(e.to))(0).real();
  }
  if (!p.higgs.sphere()) s += p.higgs.V(c.phi(x).squaredNorm());
  return s;
}

Matrix grad_edge(const ModelParams& p, const FieldConfig& c, const OrientedEdge& e) {
  const int N = p.group.N;
  Matrix acc = Matrix::Zero(N, N);
  const Matrix Qe = c.Q(e);

  if (p.beta != 0.0) {
    // -(beta/2) sum_{p > e} (Q_p - Q_p^*) Q_e, plaquettes rooted at e
    Matrix plaq = Matrix::Zero(N, N);
    for (const auto& pl : p.geometry.plaquettes_through(e))
      plaq += c.path_product({pl.edges.begin(), pl.edges.end()});
    Matrix diff = plaq - plaq.adjoint();
    if (p.group.family == GroupFamily::SU)
      diff -= (diff.trace() / static_cast<double>(N)) * Matrix::Identity(N, N);
    acc -= 0.5 * p.beta * diff * Qe;
  }

  if (p.kappa != 0.0) {
    const Vector& px = c.phi(e.from);
    const Vector& py = c.phi(e.to);
    if (p.group.family == GroupFamily::SU) {
      Matrix m = px * py.adjoint() * Qe.adjoint() - Qe * py * px.adjoint();
      m -= (m.trace() / static_cast<double>(N)) * Matrix::Identity(N, N);
      acc += 0.5 * p.kappa * m * Qe;
    } else {
      acc += 0.5 * p.kappa * (px * py.adjoint() - Qe * py * px.adjoint() * Qe);
    }
  }
  return acc;
}

Vector grad_site(const ModelParams& p, const FieldConfig& c, std::int32_t x) {
  const int N = p.group.N;
  Vector acc = Vector::Zero(N);
  const Vector& phi = c.phi(x);

  if (p.kappa != 0.0) {
    Vector hop = Vector::Zero(N);
    for (const auto& e : p.geometry.edges_at_site(x)) hop += c.Q(e) * c.phi(e.to);
    if (p.higgs.sphere()) hop = sphere_project(phi, hop);
    acc += p.kappa * hop;
  }
  if (!p.higgs.sphere()) {
    const double r = phi.squaredNorm();
    double coef = 0.0;
    for (int k = p.higgs.grad_terms() - 1; k >= 0; --k)
      coef = coef * r + p.higgs.grad_coeff(k);
    acc += coef * phi;
  }
  return acc;
}

FieldConfig gauge_transform(const ModelParams& p, const FieldConfig& c,
                            const std::vector<Matrix>& g) {
  if (static_cast<std::int64_t>(g.size()) != p.geometry.num_vertices())
    throw ParameterError("gauge field must assign one group element per vertex");
  FieldConfig out = c;
  for (std::int64_t l = 0; l < c.num_links(); ++l) {
    OrientedEdge e = p.geometry.link_edge(l);
    out.link(l) = g[static_cast<std::size_t>(e.from)] * c.link(l) *
                  g[static_cast<std::size_t>(e.to)].adjoint();
  }
  for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x)
    out.phi(x) = g[static_cast<std::size_t>(x)] * c.phi(x);
  return out;
}

std::vector<Matrix> random_gauge(const ModelParams& p, Rng& rng) {
  std::vector<Matrix> g;
  g.reserve(static_cast<std::size_t>(p.geometry.num_vertices()));
  for (std::int64_t i = 0; i < p.geometry.num_vertices(); ++i)
    g.push_back(haar_sample(p.group, rng));
  return g;
}

double config_defect(const ModelParams& p, const FieldConfig& c) {
  double d = 0.0;
  for (std::int64_t l = 0; l < c.num_links(); ++l)
    d = std::max(d, group_defect(p.group, c.link(l)));
  if (p.higgs.sphere())
    for (std::int32_t x = 0; x < c.num_sites(); ++x)
      d = std::max(d, std::abs(c.phi(x).norm() - 1.0));
  return d;
}

}  // namespace ymh
