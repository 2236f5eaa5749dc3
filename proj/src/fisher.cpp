#include "qfilab/fisher.hpp"

#include <cmath>
#include <sstream>

namespace qfl {

namespace {

// D expressed in the eigenbasis of rho.
Mat in_eigenbasis(const Spectral& s, const Mat& D) { return s.vectors.adjoint() * D * s.vectors; }

double kernel_block_norm(const Spectral& s, const Mat& Dk) {
  double worst = 0.0;
  const int d = static_cast<int>(s.values.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (s.values[i] < s.zero_threshold && s.values[j] < s.zero_threshold)
        worst = std::max(worst, std::abs(Dk(i, j)));
  return worst;
}

// Relative to D, with an absolute floor so a numerically vanishing D is accepted.
double kernel_tolerance(const Spectral& s, const Mat& D) {
  const double top = s.values.size() ? std::abs(s.values[0]) : 0.0;
  return std::max(1e-9 * max_abs(D), 1e-13 * top);
}

}  // namespace

bool fisher_pair_valid(const Mat& rho, const Mat& D, double* violation) {
  Spectral s = eig_hermitian(rho);
  const double v = kernel_block_norm(s, in_eigenbasis(s, D));
  if (violation) *violation = v;
  return v <= kernel_tolerance(s, D) || v == 0.0;
}

FisherPair::FisherPair(const Mat& rho, const Mat& D) {
  if (rho.rows() != rho.cols() || D.rows() != rho.rows() || D.cols() != rho.cols())
    throw std::invalid_argument("FisherPair: shape mismatch");
  if (!rho.allFinite() || !D.allFinite()) throw NumericalError("FisherPair: non-finite entries");
  rho_ = hermitian_part(rho);
  D_ = hermitian_part(D);
  spec_ = eig_hermitian(rho_);
  const int d = static_cast<int>(spec_.values.size());
  if (d > 0 && spec_.values[d - 1] < -1e-10 * std::max(1.0, spec_.values[0])) {
    std::ostringstream os;
    os << "FisherPair: rho has eigenvalue " << spec_.values[d - 1] << " < -1e-10";
    throw std::invalid_argument(os.str());
  }
  const double tr = rho_.trace().real();
  if (tr > 1.0 + 1e-10) {
    std::ostringstream os;
    os << "FisherPair: trace " << tr << " exceeds 1";
    throw std::invalid_argument(os.str());
  }
  // Clamp eigenvalues under the kernel threshold to exactly zero.
  bool clamped = false;
  for (int i = 0; i < d; ++i)
    if (spec_.values[i] < spec_.zero_threshold && spec_.values[i] != 0.0) {
      spec_.values[i] = 0.0;
      clamped = true;
    }
  if (clamped) rho_ = spec_.vectors * spec_.values.cast<cplx>().asDiagonal() * spec_.vectors.adjoint();

  Mat Dk = in_eigenbasis(spec_, D_);
  kernel_violation_ = kernel_block_norm(spec_, Dk);
  if (kernel_violation_ > kernel_tolerance(spec_, D_)) {
    std::ostringstream os;
    os << "FisherPair: P_perp D P_perp has entry " << kernel_violation_
       << "; no SLD exists (optimal variance zero)";
    throw std::invalid_argument(os.str());
  }
  if (kernel_violation_ > 0.0) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (spec_.values[i] == 0.0 && spec_.values[j] == 0.0) Dk(i, j) = 0;
    D_ = spec_.vectors * Dk * spec_.vectors.adjoint();
  }
}

SLDSolution sld(const FisherPair& pair) {
  const Spectral& s = pair.spectrum();
  const int d = static_cast<int>(s.values.size());
  Mat Dk = in_eigenbasis(s, pair.D());
  Mat Rk = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double den = s.values[i] + s.values[j];
      if (den > 0.0) Rk(i, j) = 2.0 * Dk(i, j) / den;
    }
  SLDSolution out;
  out.R = hermitian_part(s.vectors * Rk * s.vectors.adjoint());
  out.gauge_note = "canonical gauge: kernel block of R set to zero";
  return out;
}

double qfi(const FisherPair& pair) {
  const Spectral& s = pair.spectrum();
  const int d = static_cast<int>(s.values.size());
  Mat Dk = in_eigenbasis(s, pair.D());
  double f = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double den = s.values[i] + s.values[j];
      if (den > 0.0) f += 2.0 * std::norm(Dk(i, j)) / den;
    }
  return f;
}

double qfi(const Mat& rho, const Mat& D) { return qfi(FisherPair(rho, D)); }

double qfi_pure(const Vec& psi, const Mat& D) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) return 0.0;
  // Eigenvalue n2 on psi/|psi|; the kernel block of D is assumed zero.
  Vec Dpsi = D * psi;
  const double a = Dpsi.squaredNorm();
  const double b = psi.dot(Dpsi).real();
  return 4.0 * a / (n2 * n2) - 3.0 * b * b / (n2 * n2 * n2);
}

double qfi_lower_candidate(const FisherPair& pair, const Mat& S) {
  const Mat& rho = pair.rho();
  return 4.0 * ((pair.D() * S).trace().real() - (rho * S * S).trace().real());
}

double qfi_upper_candidate(const FisherPair& pair, const Mat& L) {
  Mat sq = sqrt_psd(pair.rho());
  const double resid = op_norm(sq * L + L.adjoint() * sq - pair.D());
  if (resid > 1e-8) {
    std::ostringstream os;
    os << "qfi_upper_candidate: infeasible L, residual " << resid;
    throw NumericalError(os.str());
  }
  return 4.0 * (L.adjoint() * L).trace().real();
}

std::pair<double, double> simple_bounds(const FisherPair& pair) {
  const double lo = std::pow(op_norm(pair.D()), 2);
  Mat P = pair.spectrum().support_projector();
  Mat Dp = 2.0 * pair.D() - P * pair.D() * P;
  const double hi = (pinv_psd(pair.rho()) * Dp * Dp).trace().real();
  return {lo, hi};
}

double rld_bound(const FisherPair& pair, const Mat& G) {
  const Mat& rho = pair.rho();
  const double resid = op_norm(0.5 * (rho * G + G.adjoint() * rho) - pair.D());
  if (resid > 1e-8) {
    std::ostringstream os;
    os << "rld_bound: infeasible G, residual " << resid;
    throw NumericalError(os.str());
  }
  return (rho * G * G.adjoint()).trace().real();
}

FisherPair embed_normalized(const FisherPair& pair) {
  const double trD = std::abs(pair.D().trace());
  if (trD > 1e-10) {
    std::ostringstream os;
    os << "embed_normalized: tr(D) = " << trD << " is not zero";
    throw std::invalid_argument(os.str());
  }
  const Eigen::Index d = pair.rho().rows();
  Mat rho = Mat::Zero(d + 1, d + 1), D = Mat::Zero(d + 1, d + 1);
  rho.topLeftCorner(d, d) = pair.rho();
  rho(d, d) = std::max(0.0, 1.0 - pair.rho().trace().real());
  D.topLeftCorner(d, d) = pair.D();
  return FisherPair(rho, D);
}

TraceDecreasingBound trace_decreasing_bound(const KrausChannel& ch, const Vec& psi, const Vec& xi, double alpha) {
  const double top = eig_hermitian(ch.adjoint_identity()).values[0];
  if (alpha < top - 1e-10) {
    std::ostringstream os;
    os << "trace_decreasing_bound: alpha " << alpha << " below ||N^dag(I)|| = " << top;
    throw std::invalid_argument(os.str());
  }
  Mat rho = ch.apply(projector(psi));
  Mat Nxp = ch.apply(outer(psi, xi));
  Mat D = Nxp + Nxp.adjoint();
  FisherPair pair(rho, D);
  TraceDecreasingBound out;
  out.bound = 4.0 * alpha * xi.squaredNorm();
  Mat L = sqrt_pinv_psd(pair.rho()) * Nxp;
  out.candidate = 4.0 * (L.adjoint() * L).trace().real();
  out.fisher = qfi(pair);
  return out;
}

double root_fidelity(const Mat& a, const Mat& b) { return trace_norm(sqrt_psd(a) * sqrt_psd(b)); }

}  // namespace qfl
