#pragma once

// Hot loops with an OpenMP version and a plain serial reference. The serial
// versions are the oracles for the parallel ones in tests and in the
// benchmark target.

#include "qfilab/linalg.hpp"

#include <vector>

namespace qfl::kernels {

Mat partial_trace_serial(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep);
Mat partial_trace_parallel(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep);

Mat kraus_apply_serial(const std::vector<Mat>& kraus, const Mat& X);
Mat kraus_apply_parallel(const std::vector<Mat>& kraus, const Mat& X);

// op acting on one site of an n-site register with local dimension d;
// site 0 is the most significant digit of the index.
Vec apply_site_op(const Vec& v, int n, int d, int site, const Mat& op);

// Sum over strings x of [2 Re<hpsi|Q_x|psi>]^2 / <psi|Q_x|psi>, where
// Q_x = tensor_i Q[x_i]. Terms with denominator < 1e-14 are skipped.
struct PinchTerms {
  double sum = 0.0;
  int used = 0;
  int skipped = 0;
};
PinchTerms pinch_sum_serial(const Vec& psi, const Vec& hpsi, int n, const std::vector<Mat>& Q,
                            const std::vector<std::vector<int>>& strings);
PinchTerms pinch_sum_parallel(const Vec& psi, const Vec& hpsi, int n, const std::vector<Mat>& Q,
                              const std::vector<std::vector<int>>& strings);

// Thread count used by the parallel kernels (QFILAB_THREADS or OpenMP default).
void set_threads(int n);
int threads();

}  // namespace qfl::kernels
