#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <string>
#include <vector>

namespace ymh {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

enum class GroupFamily { SO, U, SU };

/**
 * Matrix group G in {SO(N), U(N), SU(N)} together with the constants entering
 * the master loop equations. The Lie algebra inner product is Re Tr(X Y*).
 */
struct GroupSpec {
  GroupFamily family;
  int N;

  GroupSpec(GroupFamily f, int n);

  bool real() const { return family == GroupFamily::SO; }
  int q() const { return real() ? 1 : 2; }
  int dim_g() const;

  // magic-formula constants
  double lambda() const;
  double mu() const;
  double nu() const;
  // sum_a v_a^2 = c_g I
  double cg() const;

  std::string name() const;
};

enum class HiggsTarget { Flat, Sphere };

/**
 * Higgs target M: R^N / C^N (flat, with polynomial potential V in r = |Phi|^2)
 * or the unit sphere (V constant on it). `vcoeff[j]` is the coefficient of r^j.
 */
struct HiggsSpec {
  HiggsTarget target;
  bool complex_scalars;  // matches the group family
  int N;
  std::vector<double> vcoeff;

  HiggsSpec(HiggsTarget t, const GroupSpec& g, std::vector<double> v = {});

  bool sphere() const { return target == HiggsTarget::Sphere; }
  int q() const { return complex_scalars ? 2 : 1; }
  /** Ito constant of the sphere Brownian motion: qN - 1; 0 for flat targets. */
  double c_M() const { return sphere() ? q() * N - 1.0 : 0.0; }

  /** grad of V: sum_k grad_coeff(k) Phi |Phi|^{2k}; grad_coeff(k) = 2(k+1) a_{k+1}. */
  int grad_terms() const { return sphere() ? 0 : std::max(0, static_cast<int>(vcoeff.size()) - 1); }
  double grad_coeff(int k) const;
  double c0() const { return grad_terms() > 0 ? grad_coeff(0) : 0.0; }

  double V(double r) const;

  std::string name() const;
};

/** Orthonormal basis of the Lie algebra under Re Tr(X Y*). */
std::vector<Matrix> lie_basis(const GroupSpec& spec);

/** Orthogonal projection of an arbitrary matrix onto the Lie algebra. */
Matrix project_lie(const GroupSpec& spec, const Matrix& A);

// --- deterministic contraction identities ------------------------------------

/** Closed form of sum_a v_a M v_a = nu M + mu M^t - lambda Tr(M) I. */
Matrix contract_single(const GroupSpec& spec, const Matrix& M);
/** The same sum evaluated by explicit basis summation. */
Matrix contract_single_basis(const GroupSpec& spec, const Matrix& M);

/** Closed form of sum_a Tr(v_a M) Tr(v_a N). */
Complex contract_double(const GroupSpec& spec, const Matrix& M, const Matrix& N);
Complex contract_double_basis(const GroupSpec& spec, const Matrix& M, const Matrix& N);

/**
 * The four quadratic covariations of the edge noise, per unit time:
 *   trtr=false: Tr(dM_{e} P dM_{e'} R)   trtr=true: Tr(dM_{e} P) Tr(dM_{e'} R)
 * with e' = e for same_edge, e' = e^{-1} otherwise. `closed` gives the
 * right-hand sides; `basis` the noise-basis summation of the left-hand sides.
 */
Complex martingale_contraction_closed(const GroupSpec& spec, const Matrix& Q, const Matrix& P,
                                      const Matrix& R, bool same_edge, bool trtr);
Complex martingale_contraction_basis(const GroupSpec& spec, const Matrix& Q, const Matrix& P,
                                     const Matrix& R, bool same_edge, bool trtr,
                                     bool edge_negative);

/** Higgs noise covariations per unit time. */
Complex higgs_contraction_scalar_closed(const HiggsSpec& h, const Vector& phi, const Matrix& P);
Complex higgs_contraction_scalar_basis(const HiggsSpec& h, const Vector& phi, const Matrix& P);
/** dM R* dM (a vector identity), closed and basis forms. */
Vector higgs_contraction_vector_closed(const HiggsSpec& h, const Vector& phi, const Vector& R);
Vector higgs_contraction_vector_basis(const HiggsSpec& h, const Vector& phi, const Vector& R);

// --- sampling and manifold moves ---------------------------------------------

/** Haar-distributed group element (QR with phase correction). */
Matrix haar_sample(const GroupSpec& spec, Rng& rng);

/** Uniform point on the unit sphere of R^N or C^N. */
Vector sphere_sample(const HiggsSpec& h, Rng& rng);

/**
 * Exact sampler for the density prop. to exp(V(|Phi|^2)) on R^N / C^N, by
 * rejection from a Gaussian envelope exp(b - m |Phi|^2) computed once.
 */
class FlatSiteSampler {
 public:
  explicit FlatSiteSampler(const HiggsSpec& h, int max_attempts = 1000000);
  Vector operator()(Rng& rng) const;
  double envelope_rate() const { return m_; }

 private:
  HiggsSpec h_;
  double m_;
  double b_;
  int max_attempts_;
};

/** One-off convenience wrapper around FlatSiteSampler. */
Vector flat_site_sample(const HiggsSpec& h, Rng& rng, int max_attempts = 1000000);

/** Gaussian element of the Lie algebra: sum_a g_a v_a, g_a ~ N(0,1). */
Matrix gaussian_lie(const GroupSpec& spec, Rng& rng);

/** exp(X Q^{-1}) Q for a tangent X = xi Q at Q. */
Matrix exp_map(const GroupSpec& spec, const Matrix& Q, const Matrix& X);

Vector sphere_retract(const Vector& phi, const Vector& v);
/** v - Phi Re(Phi* v): tangential projection at a sphere point. */
Vector sphere_project(const Vector& phi, const Vector& v);

/** Re-unitarize (polar factor); restores det for SO/SU. */
Matrix reproject(const GroupSpec& spec, const Matrix& Q);

/** Max violation of the group constraints (unitarity, det, realness). */
double group_defect(const GroupSpec& spec, const Matrix& Q);

}  // namespace ymh
