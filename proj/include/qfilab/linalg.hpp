#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfl {

using cplx = std::complex<double>;
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RVec = Eigen::VectorXd;

constexpr cplx I1{0.0, 1.0};

// Thrown for any numerical breakdown (non-convergence, overflow, infeasible
// candidates). The CLI maps it to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Spectral {
  RVec values;   // descending
  Mat vectors;   // columns
  double zero_threshold = 0.0;

  int rank() const;
  Mat support_projector() const;
  Mat kernel_projector() const;
};

// Relative kernel cutoff: lambda counts as zero iff lambda < 1e-12 * max(1, lambda_max).
double kernel_threshold(double lambda_max);

double op_norm(const Mat& A);
double trace_norm(const Mat& A);
double max_abs(const Mat& A);
Mat dagger(const Mat& A);
Mat hermitian_part(const Mat& A);
bool is_hermitian(const Mat& A, double rel_tol = 1e-12);

Spectral eig_hermitian(const Mat& A);

Mat partial_trace(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep);

Vec vectorize(const Mat& A);
Mat devectorize(const Vec& v);

struct BlockCheck {
  bool psd = false;
  bool range_ok = false;    // W P_B^perp = 0
  double min_eig = 0.0;     // of the full block matrix, for diagnostics
  double schur_min_eig = 0.0;
};
BlockCheck psd_block_check(const Mat& A, const Mat& W, const Mat& B, double tol = 1e-10);

Mat expm(const Mat& A);
Mat pinv_psd(const Mat& A);
Mat sqrt_psd(const Mat& A);
Mat sqrt_pinv_psd(const Mat& A);
Mat kron(const Mat& A, const Mat& B);
Mat kron_all(const std::vector<Mat>& ops);
Mat projector(const Vec& v);
Mat outer(const Vec& a, const Vec& b);
Mat identity(int d);
Mat random_hermitian(int d, std::uint64_t seed);

// Named Paulis.
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

}  // namespace qfl

namespace qfl {

// Seeded random instances for property suites. All draw from std::mt19937_64.
Vec random_unit_vector(int d, std::uint64_t seed);
Mat random_unitary(int d, std::uint64_t seed);
// Rank-r density operator with trace `tr`.
Mat random_density(int d, int rank, std::uint64_t seed, double tr = 1.0);

}  // namespace qfl
