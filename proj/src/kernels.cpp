#include "qfilab/kernels.hpp"

#include <omp.h>

#include <numeric>
#include <stdexcept>

namespace qfl::kernels {

namespace {

struct TraceLayout {
  std::vector<int> keep_dims, drop_dims;
  std::vector<long> stride;  // per-site stride in the full index
  std::vector<int> keep, drop;
  long dk = 1, dd = 1;
};

TraceLayout layout(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep) {
  long total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("partial_trace: nonpositive dimension");
    total *= d;
  }
  if (A.rows() != total || A.cols() != total)
    throw std::invalid_argument("partial_trace: product of dims does not match matrix size");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::out_of_range("partial_trace: keep index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: repeated keep index");
    kept[k] = true;
  }
  TraceLayout L;
  L.stride.assign(n, 1);
  for (int i = n - 2; i >= 0; --i) L.stride[i] = L.stride[i + 1] * dims[i + 1];
  for (int i = 0; i < n; ++i) {
    if (kept[i]) {
      L.keep.push_back(i);
      L.keep_dims.push_back(dims[i]);
      L.dk *= dims[i];
    } else {
      L.drop.push_back(i);
      L.drop_dims.push_back(dims[i]);
      L.dd *= dims[i];
    }
  }
  return L;
}

long offset(long idx, const std::vector<int>& sites, const std::vector<int>& sdims,
            const std::vector<long>& stride) {
  long off = 0;
  for (int s = static_cast<int>(sites.size()) - 1; s >= 0; --s) {
    off += (idx % sdims[s]) * stride[sites[s]];
    idx /= sdims[s];
  }
  return off;
}

}  // namespace

Mat partial_trace_serial(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep) {
  TraceLayout L = layout(A, dims, keep);
  std::vector<long> koff(L.dk), doff(L.dd);
  for (long i = 0; i < L.dk; ++i) koff[i] = offset(i, L.keep, L.keep_dims, L.stride);
  for (long e = 0; e < L.dd; ++e) doff[e] = offset(e, L.drop, L.drop_dims, L.stride);
  Mat out = Mat::Zero(L.dk, L.dk);
  for (long i = 0; i < L.dk; ++i)
    for (long j = 0; j < L.dk; ++j) {
      cplx s = 0;
      for (long e = 0; e < L.dd; ++e) s += A(koff[i] + doff[e], koff[j] + doff[e]);
      out(i, j) = s;
    }
  return out;
}

Mat partial_trace_parallel(const Mat& A, const std::vector<int>& dims, const std::vector<int>& keep) {
  TraceLayout L = layout(A, dims, keep);
  std::vector<long> koff(L.dk), doff(L.dd);
  for (long i = 0; i < L.dk; ++i) koff[i] = offset(i, L.keep, L.keep_dims, L.stride);
  for (long e = 0; e < L.dd; ++e) doff[e] = offset(e, L.drop, L.drop_dims, L.stride);
  Mat out = Mat::Zero(L.dk, L.dk);
  const long dk = L.dk, dd = L.dd;
#pragma omp parallel for collapse(2) schedule(static) num_threads(threads())
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      cplx s = 0;
      for (long e = 0; e < dd; ++e) s += A(koff[i] + doff[e], koff[j] + doff[e]);
      out(i, j) = s;
    }
  return out;
}

Mat kraus_apply_serial(const std::vector<Mat>& kraus, const Mat& X) {
  if (kraus.empty()) throw std::invalid_argument("kraus_apply: empty Kraus set");
  Mat out = Mat::Zero(kraus[0].rows(), kraus[0].rows());
  for (const auto& E : kraus) out += E * X * E.adjoint();
  return out;
}

Mat kraus_apply_parallel(const std::vector<Mat>& kraus, const Mat& X) {
  if (kraus.empty()) throw std::invalid_argument("kraus_apply: empty Kraus set");
  const long K = static_cast<long>(kraus.size());
  const Eigen::Index d = kraus[0].rows();
  if (K < 4 || d < 16) return kraus_apply_serial(kraus, X);
  Mat out = Mat::Zero(d, d);
#pragma omp parallel num_threads(threads())
  {
    Mat local = Mat::Zero(d, d);
#pragma omp for schedule(static)
    for (long k = 0; k < K; ++k) local.noalias() += kraus[k] * X * kraus[k].adjoint();
#pragma omp critical
    out += local;
  }
  return out;
}

Vec apply_site_op(const Vec& v, int n, int d, int site, const Mat& op) {
  long stride = 1;
  for (int i = site + 1; i < n; ++i) stride *= d;
  const long block = stride * d;
  Vec out = Vec::Zero(v.size());
  for (long base = 0; base < v.size(); base += block)
    for (long r = 0; r < stride; ++r)
      for (int a = 0; a < d; ++a) {
        cplx s = 0;
        for (int b = 0; b < d; ++b) s += op(a, b) * v[base + b * stride + r];
        out[base + a * stride + r] = s;
      }
  return out;
}

namespace {
void pinch_term(const Vec& psi, const Vec& hpsi, int n, const std::vector<Mat>& Q,
                const std::vector<int>& x, double& num2_over_den, bool& used) {
  const int d = static_cast<int>(Q[0].rows());
  Vec phi = psi;
  for (int s = 0; s < n; ++s) {
    const Mat& q = Q[x[s]];
    if (!q.isIdentity(0.0)) phi = apply_site_op(phi, n, d, s, q);
  }
  const double den = psi.dot(phi).real();
  used = den >= 1e-14;
  if (!used) {
    num2_over_den = 0.0;
    return;
  }
  const double num = 2.0 * hpsi.dot(phi).real();
  num2_over_den = num * num / den;
}
}  // namespace

PinchTerms pinch_sum_serial(const Vec& psi, const Vec& hpsi, int n, const std::vector<Mat>& Q,
                            const std::vector<std::vector<int>>& strings) {
  PinchTerms t;
  for (const auto& x : strings) {
    double v;
    bool used;
    pinch_term(psi, hpsi, n, Q, x, v, used);
    t.sum += v;
    (used ? t.used : t.skipped)++;
  }
  return t;
}

PinchTerms pinch_sum_parallel(const Vec& psi, const Vec& hpsi, int n, const std::vector<Mat>& Q,
                              const std::vector<std::vector<int>>& strings) {
  const long m = static_cast<long>(strings.size());
  std::vector<double> vals(m);
  std::vector<char> flags(m);
#pragma omp parallel for schedule(dynamic) num_threads(threads())
  for (long i = 0; i < m; ++i) {
    bool used;
    pinch_term(psi, hpsi, n, Q, strings[i], vals[i], used);
    flags[i] = used;
  }
  // Fixed-order reduction keeps results bitwise identical to the serial path.
  PinchTerms t;
  for (long i = 0; i < m; ++i) {
    t.sum += vals[i];
    (flags[i] ? t.used : t.skipped)++;
  }
  return t;
}

namespace {
int g_threads = 0;
}

void set_threads(int n) { g_threads = n > 0 ? n : 0; }

int threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

}  // namespace qfl::kernels
