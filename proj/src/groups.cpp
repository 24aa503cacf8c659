#include "ymh/groups.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "ymh/errors.hpp"

namespace ymh {

namespace {
constexpr Complex kI{0.0, 1.0};
}

GroupSpec::GroupSpec(GroupFamily f, int n) : family(f), N(n) {
  if (n < 2) throw ParameterError("group rank N must be >= 2");
}

int GroupSpec::dim_g() const {
  switch (family) {
    case GroupFamily::SO: return N * (N - 1) / 2;
    case GroupFamily::U: return N * N;
    case GroupFamily::SU: return N * N - 1;
  }
  return 0;
}

double GroupSpec::lambda() const { return family == GroupFamily::SO ? 0.5 : 1.0; }
double GroupSpec::mu() const { return family == GroupFamily::SO ? 0.5 : 0.0; }
double GroupSpec::nu() const { return family == GroupFamily::SU ? 1.0 / N : 0.0; }

double GroupSpec::cg() const {
  switch (family) {
    case GroupFamily::SO: return -0.5 * (N - 1);
    case GroupFamily::U: return -static_cast<double>(N);
    case GroupFamily::SU: return -(static_cast<double>(N) * N - 1) / N;
  }
  return 0;
}

std::string GroupSpec::name() const {
  switch (family) {
    case GroupFamily::SO: return "SO(" + std::to_string(N) + ")";
    case GroupFamily::U: return "U(" + std::to_string(N) + ")";
    case GroupFamily::SU: return "SU(" + std::to_string(N) + ")";
  }
  return "?";
}

HiggsSpec::HiggsSpec(HiggsTarget t, const GroupSpec& g, std::vector<double> v)
    : target(t), complex_scalars(!g.real()), N(g.N), vcoeff(std::move(v)) {
  if (target == HiggsTarget::Flat) {
    while (!vcoeff.empty() && vcoeff.back() == 0.0) vcoeff.pop_back();
    if (vcoeff.size() < 2)
      throw ParameterError("flat target needs a potential with degree >= 1 in r");
    if (vcoeff.back() >= 0.0)
      throw ParameterError("flat potential must have negative leading coefficient");
  }
}

double HiggsSpec::grad_coeff(int k) const {
  if (k < 0 || k >= grad_terms()) return 0.0;
  return 2.0 * (k + 1) * vcoeff[static_cast<std::size_t>(k + 1)];
}

double HiggsSpec::V(double r) const {
  double acc = 0.0;
  for (auto it = vcoeff.rbegin(); it != vcoeff.rend(); ++it) acc = acc * r + *it;
  return acc;
}

std::string HiggsSpec::name() const {
  if (sphere()) return complex_scalars ? "S^{2N-1}" : "S^{N-1}";
  return complex_scalars ? "C^N" : "R^N";
}

std::vector<Matrix> lie_basis(const GroupSpec& spec) {
  const int N = spec.N;
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(spec.dim_g()));
  const double rsqrt2 = 1.0 / std::sqrt(2.0);

  // antisymmetric pairs, common to all three algebras
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) {
      Matrix m = Matrix::Zero(N, N);
      m(j, k) = rsqrt2;
      m(k, j) = -rsqrt2;
      basis.push_back(m);
    }
  if (spec.family == GroupFamily::SO) return basis;

  // symmetric imaginary pairs
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) {
      Matrix m = Matrix::Zero(N, N);
      m(j, k) = kI * rsqrt2;
      m(k, j) = kI * rsqrt2;
      basis.push_back(m);
    }

  if (spec.family == GroupFamily::U) {
    for (int j = 0; j < N; ++j) {
      Matrix m = Matrix::Zero(N, N);
      m(j, j) = kI;
      basis.push_back(m);
    }
  } else {
    // traceless imaginary diagonals: i diag(1,..,1,-m,0,..)/sqrt(m(m+1))
    for (int m = 1; m < N; ++m) {
      Matrix d = Matrix::Zero(N, N);
      const double norm = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
      for (int j = 0; j < m; ++j) d(j, j) = kI * norm;
      d(m, m) = -kI * (norm * m);
      basis.push_back(d);
    }
  }
  return basis;
}

Matrix project_lie(const GroupSpec& spec, const Matrix& A) {
  Matrix skew = 0.5 * (A - A.adjoint());
  if (spec.family == GroupFamily::SO) return 0.5 * (skew + skew.conjugate());
  if (spec.family == GroupFamily::SU) {
    Complex tr = skew.trace() / static_cast<double>(spec.N);
    skew -= tr * Matrix::Identity(spec.N, spec.N);
  }
  return skew;
}

Matrix contract_single(const GroupSpec& spec, const Matrix& M) {
  return spec.nu() * M + spec.mu() * M.transpose() -
         spec.lambda() * M.trace() * Matrix::Identity(spec.N, spec.N);
}

Matrix contract_single_basis(const GroupSpec& spec, const Matrix& M) {
  Matrix acc = Matrix::Zero(spec.N, spec.N);
  for (const auto& v : lie_basis(spec)) acc += v * M * v;
  return acc;
}

Complex contract_double(const GroupSpec& spec, const Matrix& M, const Matrix& N) {
  return spec.nu() * M.trace() * N.trace() + spec.mu() * (M * N.transpose()).trace() -
         spec.lambda() * (M * N).trace();
}

Complex contract_double_basis(const GroupSpec& spec, const Matrix& M, const Matrix& N) {
  Complex acc = 0.0;
  for (const auto& v : lie_basis(spec)) acc += (v * M).trace() * (v * N).trace();
  return acc;
}

Complex martingale_contraction_closed(const GroupSpec& spec, const Matrix& Q, const Matrix& P,
                                      const Matrix& R, bool same_edge, bool trtr) {
  const double la = spec.lambda(), mu = spec.mu(), nu = spec.nu();
  if (!trtr) {
    if (same_edge)
      return 2.0 * (nu * (Q * P * Q * R).trace() + mu * (P.transpose() * R).trace() -
                    la * (Q * P).trace() * (Q * R).trace());
    return -2.0 * (nu * (Q * P * Q.adjoint() * R).trace() +
                   mu * (Q * P.transpose() * Q.transpose() * R).trace() -
                   la * P.trace() * R.trace());
  }
  if (same_edge)
    return 2.0 * (nu * (Q * P).trace() * (Q * R).trace() + mu * (P * R.transpose()).trace() -
                  la * (Q * P * Q * R).trace());
  return -2.0 * (nu * (Q * P).trace() * (R * Q.adjoint()).trace() +
                 mu * (Q * P * Q * R.transpose()).trace() - la * (P * R).trace());
}

Complex martingale_contraction_basis(const GroupSpec& spec, const Matrix& Q, const Matrix& P,
                                     const Matrix& R, bool same_edge, bool trtr,
                                     bool edge_negative) {
  // dM_e = sqrt(2) dB Q for e in E+, dM_e = -sqrt(2) Q dB' for e in E-;
  // dM_{e^{-1}} is the matching opposite form driven by the same dB.
  auto basis = lie_basis(spec);
  Complex acc = 0.0;
  for (const auto& v : basis) {
    Matrix m1 = edge_negative ? Matrix(-Q * v) : Matrix(v * Q);
    Matrix m2;
    if (same_edge)
      m2 = m1;
    else
      m2 = edge_negative ? Matrix(v * Q.adjoint()) : Matrix(-Q.adjoint() * v);
    if (!trtr)
      acc += (m1 * P * m2 * R).trace();
    else
      acc += (m1 * P).trace() * (m2 * R).trace();
  }
  return 2.0 * acc;
}

namespace {

// real orthonormal noise directions of R^{qN}
std::vector<Vector> noise_directions(const HiggsSpec& h) {
  std::vector<Vector> dirs;
  dirs.reserve(static_cast<std::size_t>(h.q() * h.N));
  for (int i = 0; i < h.N; ++i) {
    Vector v = Vector::Zero(h.N);
    v(i) = 1.0;
    dirs.push_back(v);
    if (h.complex_scalars) {
      Vector w = Vector::Zero(h.N);
      w(i) = kI;
      dirs.push_back(w);
    }
  }
  return dirs;
}

}  // namespace

Vector sphere_project(const Vector& phi, const Vector& v) {
  return v - phi * (phi.dot(v)).real();
}

Complex higgs_contraction_scalar_closed(const HiggsSpec& h, const Vector& phi, const Matrix& P) {
  Complex out = 2.0 * h.q() * P.trace();
  if (h.sphere()) out -= 2.0 * (phi.adjoint() * P * phi)(0);
  return out;
}

Complex higgs_contraction_scalar_basis(const HiggsSpec& h, const Vector& phi, const Matrix& P) {
  Complex acc = 0.0;
  for (const auto& b : noise_directions(h)) {
    Vector m = h.sphere() ? sphere_project(phi, b) : b;
    acc += (m.adjoint() * P * m)(0);
  }
  return 2.0 * acc;
}

Vector higgs_contraction_vector_closed(const HiggsSpec& h, const Vector& phi, const Vector& R) {
  Vector out = 2.0 * (2.0 - h.q()) * R;
  if (h.sphere()) out -= 2.0 * phi * (R.adjoint() * phi)(0);
  return out;
}

Vector higgs_contraction_vector_basis(const HiggsSpec& h, const Vector& phi, const Vector& R) {
  Vector acc = Vector::Zero(h.N);
  for (const auto& b : noise_directions(h)) {
    Vector m = h.sphere() ? sphere_project(phi, b) : b;
    acc += m * (R.adjoint() * m)(0);
  }
  return 2.0 * acc;
}

Matrix haar_sample(const GroupSpec& spec, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int N = spec.N;
  if (spec.family == GroupFamily::SO) {
    Eigen::MatrixXd A(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) A(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd Rm = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < N; ++j)
      if (Rm(j, j) < 0) Q.col(j) = -Q.col(j);
    if (Q.determinant() < 0) Q.col(N - 1) = -Q.col(N - 1);
    return Q.cast<Complex>();
  }
  Matrix A(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(A);
  Matrix Q = qr.householderQ();
  Matrix Rm = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < N; ++j) {
    Complex r = Rm(j, j);
    double a = std::abs(r);
    if (a > 0) Q.col(j) *= r / a;
  }
  if (spec.family == GroupFamily::SU) {
    Complex det = Q.determinant();
    Q *= std::polar(1.0, -std::arg(det) / N);
  }
  return Q;
}

Vector sphere_sample(const HiggsSpec& h, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(h.N);
  for (int i = 0; i < h.N; ++i)
    v(i) = h.complex_scalars ? Complex(gauss(rng), gauss(rng)) : Complex(gauss(rng), 0.0);
  double n = v.norm();
  while (n < 1e-12) {
    for (int i = 0; i < h.N; ++i)
      v(i) = h.complex_scalars ? Complex(gauss(rng), gauss(rng)) : Complex(gauss(rng), 0.0);
    n = v.norm();
  }
  return v / n;
}

FlatSiteSampler::FlatSiteSampler(const HiggsSpec& h, int max_attempts)
    : h_(h), max_attempts_(max_attempts) {
  if (h.sphere()) throw UsageError("FlatSiteSampler requires a flat target");
  if (h.vcoeff.size() == 2) {
    m_ = -h.vcoeff[1];  // exactly Gaussian, accept always
    b_ = h.vcoeff[0];
    return;
  }
  m_ = std::max(1.0, -2.0 * h.vcoeff[1]);
  // b = sup_{r>=0} V(r) + m r; the extremum radius is bounded by the Cauchy
  // bound of the derivative polynomial
  std::vector<double> dcoef(h.vcoeff.size() - 1);
  for (std::size_t k = 0; k + 1 < h.vcoeff.size(); ++k)
    dcoef[k] = (k + 1) * h.vcoeff[k + 1];
  dcoef[0] += m_;
  double lead = std::abs(dcoef.back());
  double rmax = 1.0;
  for (double c : dcoef) rmax = std::max(rmax, 1.0 + std::abs(c) / lead);
  b_ = -1e300;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    double r = rmax * i / n;
    b_ = std::max(b_, h.V(r) + m_ * r);
  }
  b_ += 1e-9 * (1.0 + std::abs(b_));  // grid slack
}

Vector FlatSiteSampler::operator()(Rng& rng) const {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / m_));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts_; ++attempt) {
    Vector v(h_.N);
    for (int i = 0; i < h_.N; ++i)
      v(i) = h_.complex_scalars ? Complex(gauss(rng), gauss(rng)) : Complex(gauss(rng), 0.0);
    double r = v.squaredNorm();
    double log_accept = h_.V(r) + m_ * r - b_;
    if (log_accept >= 0.0 || std::log(unif(rng) + 1e-300) < log_accept) return v;
  }
  throw DomainError("flat site rejection sampler exceeded attempt cap; check V");
}

Vector flat_site_sample(const HiggsSpec& h, Rng& rng, int max_attempts) {
  return FlatSiteSampler(h, max_attempts)(rng);
}

Matrix gaussian_lie(const GroupSpec& spec, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix acc = Matrix::Zero(spec.N, spec.N);
  for (const auto& v : lie_basis(spec)) acc += gauss(rng) * v;
  return acc;
}

Matrix exp_map(const GroupSpec& spec, const Matrix& Q, const Matrix& X) {
  Matrix xi = X * Q.adjoint();
  return xi.exp() * Q;
}

Vector sphere_retract(const Vector& phi, const Vector& v) {
  Vector w = phi + v;
  return w / w.norm();
}

Matrix reproject(const GroupSpec& spec, const Matrix& Q) {
  Eigen::JacobiSVD<Matrix> svd(Q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix P = svd.matrixU() * svd.matrixV().adjoint();
  if (spec.family == GroupFamily::SO) {
    P = 0.5 * (P + P.conjugate());  // strip numerical imaginary dust
    Eigen::JacobiSVD<Matrix> svd2(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
    P = svd2.matrixU() * svd2.matrixV().adjoint();
    if (P.determinant().real() < 0) P.col(spec.N - 1) = -P.col(spec.N - 1);
  } else if (spec.family == GroupFamily::SU) {
    Complex det = P.determinant();
    P *= std::polar(1.0, -std::arg(det) / spec.N);
  }
  return P;
}

double group_defect(const GroupSpec& spec, const Matrix& Q) {
  const int N = spec.N;
  double d = (Q.adjoint() * Q - Matrix::Identity(N, N)).cwiseAbs().maxCoeff();
  if (spec.family == GroupFamily::SO)
    d = std::max(d, Q.imag().cwiseAbs().maxCoeff());
  if (spec.family != GroupFamily::U)
    d = std::max(d, std::abs(Q.determinant() - Complex(1.0, 0.0)));
  return d;
}

}  // namespace ymh
