#include "qfilab/linalg.hpp"
#include "qfilab/kernels.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qfl {

double kernel_threshold(double lambda_max) { return 1e-12 * std::max(1.0, lambda_max); }

int Spectral::rank() const {
  int r = 0;
  for (int i = 0; i < values.size(); ++i)
    if (values[i] >= zero_threshold) ++r;
  return r;
}

Mat Spectral::support_projector() const {
  const int d = static_cast<int>(values.size());
  Mat P = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    if (values[i] >= zero_threshold) P += vectors.col(i) * vectors.col(i).adjoint();
  return P;
}

Mat Spectral::kernel_projector() const {
  return identity(static_cast<int>(values.size())) - support_projector();
}

double op_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

double trace_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues().sum();
}

double max_abs(const Mat& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

Mat dagger(const Mat& A) { return A.adjoint(); }

Mat hermitian_part(const Mat& A) { return 0.5 * (A + A.adjoint()); }

bool is_hermitian(const Mat& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  return op_norm(A - A.adjoint()) <= rel_tol * std::max(1.0, op_norm(A));
}

Spectral eig_hermitian(const Mat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eig_hermitian: matrix not square");
  const int d = static_cast<int>(A.rows());
  Spectral s;
  if (d == 0) return s;
  Eigen::MatrixXcd H = hermitian_part(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eig_hermitian: eigensolver did not converge (d=" << d << ", |A|=" << max_abs(A) << ")";
    throw NumericalError(os.str());
  }
  s.values.resize(d);
  s.vectors.resize(d, d);
  for (int i = 0; i < d; ++i) {
    s.values[i] = es.eigenvalues()[d - 1 - i];
    s.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  s.zero_threshold = kernel_threshold(s.values[0]);
  return s;
}

Mat partial_trace(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep) {
  return kernels::partial_trace_parallel(A, dims, keep);
}

Vec vectorize(const Mat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("vectorize: matrix not square");
  const Eigen::Index d = A.rows();
  Vec v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v[i * d + j] = A(i, j);
  return v;
}

Mat devectorize(const Vec& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("devectorize: length is not a square");
  Mat A(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) A(i, j) = v[i * d + j];
  return A;
}

BlockCheck psd_block_check(const Mat& A, const Mat& W, const Mat& B, double tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || W.rows() != A.rows() || W.cols() != B.rows())
    throw std::invalid_argument("psd_block_check: shape mismatch");
  const Eigen::Index a = A.rows(), b = B.rows();
  Mat M(a + b, a + b);
  M << A, W, W.adjoint(), B;
  BlockCheck out;
  out.min_eig = eig_hermitian(M).values[a + b - 1];

  // Schur route: B >= 0, W P_B^perp = 0, A - W B^+ W^dag >= 0.
  const double scale = std::max(1.0, max_abs(M));
  Spectral sb = eig_hermitian(B);
  const double b_min = b > 0 ? sb.values[b - 1] : 0.0;
  const double resid = b > 0 ? op_norm(W * sb.kernel_projector()) : 0.0;
  out.range_ok = resid <= std::sqrt(tol) * scale;
  Mat schur = A - W * pinv_psd(B) * W.adjoint();
  out.schur_min_eig = a > 0 ? eig_hermitian(schur).values[a - 1] : 0.0;
  out.psd = b_min >= -tol * scale && out.range_ok && out.schur_min_eig >= -tol * scale;
  return out;
}

Mat expm(const Mat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("expm: matrix not square");
  const double nrm = max_abs(A) * static_cast<double>(A.rows());
  if (!std::isfinite(nrm) || nrm > 700.0) {
    std::ostringstream os;
    os << "expm: norm " << nrm << " too large for double range";
    throw NumericalError(os.str());
  }
  Eigen::MatrixXcd C = A;
  Eigen::MatrixXcd E = C.exp();
  if (!E.allFinite()) throw NumericalError("expm: non-finite result");
  return E;
}

namespace {
Mat spectral_map(const Mat& A, double (*f)(double, double)) {
  Spectral s = eig_hermitian(A);
  const int d = static_cast<int>(s.values.size());
  if (d > 0 && s.values[d - 1] < -1e-10 * std::max(1.0, s.values[0]))
    throw std::invalid_argument("psd input has negative eigenvalue");
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double w = f(s.values[i], s.zero_threshold);
    if (w != 0.0) out += w * s.vectors.col(i) * s.vectors.col(i).adjoint();
  }
  return out;
}
}  // namespace

Mat pinv_psd(const Mat& A) {
  return spectral_map(A, [](double l, double thr) { return l >= thr ? 1.0 / l : 0.0; });
}

Mat sqrt_psd(const Mat& A) {
  return spectral_map(A, [](double l, double thr) { return l >= thr ? std::sqrt(l) : 0.0; });
}

Mat sqrt_pinv_psd(const Mat& A) {
  return spectral_map(A, [](double l, double thr) { return l >= thr ? 1.0 / std::sqrt(l) : 0.0; });
}

Mat kron(const Mat& A, const Mat& B) {
  Mat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Mat kron_all(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& op : ops) out = kron(out, op);
  return out;
}

Mat projector(const Vec& v) { return v * v.adjoint(); }
Mat outer(const Vec& a, const Vec& b) { return a * b.adjoint(); }
Mat identity(int d) { return Mat::Identity(d, d); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Mat pauli_y() {
  Mat m(2, 2);
  m << 0, -I1, I1, 0;
  return m;
}
Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

namespace {
Mat gaussian_matrix(int r, int c, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(nd(g), nd(g));
  return m;
}
}  // namespace

Mat random_hermitian(int d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  return hermitian_part(gaussian_matrix(d, d, g));
}

Vec random_unit_vector(int d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  Vec v = gaussian_matrix(d, 1, g).col(0);
  return v / v.norm();
}

Mat random_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  Eigen::MatrixXcd Z = gaussian_matrix(d, d, g);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const cplx r = R(j, j);
    if (std::abs(r) > 0) Q.col(j) *= r / std::abs(r);
  }
  return Q;
}

Mat random_density(int d, int rank, std::uint64_t seed, double tr) {
  std::mt19937_64 g(seed);
  Mat G = gaussian_matrix(d, rank, g);
  Mat rho = G * G.adjoint();
  return rho * (tr / rho.trace().real());
}

}  // namespace qfl
