#pragma once

#include "qfilab/channels.hpp"
#include "qfilab/linalg.hpp"

#include <string>
#include <utility>

namespace qfl {

// A state together with a derivative direction. Construction diagonalizes rho
// once; the kernel block of D must vanish (it is clamped to zero when below
// 1e-9 ||D||, rejected otherwise).
class FisherPair {
 public:
  FisherPair(const Mat& rho, const Mat& D);

  const Mat& rho() const { return rho_; }
  const Mat& D() const { return D_; }
  const Spectral& spectrum() const { return spec_; }
  double kernel_violation() const { return kernel_violation_; }

 private:
  Mat rho_, D_;
  Spectral spec_;
  double kernel_violation_ = 0.0;
};

// Same check as the FisherPair constructor, without throwing.
bool fisher_pair_valid(const Mat& rho, const Mat& D, double* violation = nullptr);

struct SLDSolution {
  Mat R;
  std::string gauge_note;
};

SLDSolution sld(const FisherPair& pair);
double qfi(const FisherPair& pair);
double qfi(const Mat& rho, const Mat& D);
// Rank-one state psi psi^dag (possibly sub-normalized) without a full
// diagonalization. Assumes the kernel block of D vanishes.
double qfi_pure(const Vec& psi, const Mat& D);

double qfi_lower_candidate(const FisherPair& pair, const Mat& S);
double qfi_upper_candidate(const FisherPair& pair, const Mat& L);
std::pair<double, double> simple_bounds(const FisherPair& pair);
double rld_bound(const FisherPair& pair, const Mat& G);
FisherPair embed_normalized(const FisherPair& pair);

// Bound for N(psi), N(xi psi^dag + psi xi^dag) with N^dag(I) <= alpha I.
// alpha is supplied by the caller; it is checked against ||N^dag(I)||.
struct TraceDecreasingBound {
  double bound = 0.0;      // 4 alpha <xi|xi>
  double candidate = 0.0;  // 4 tr(L^dag L) for L = rho^{+1/2} N(|psi><xi|)
  double fisher = 0.0;     // exact value
};
TraceDecreasingBound trace_decreasing_bound(const KrausChannel& ch, const Vec& psi, const Vec& xi, double alpha);

// Root fidelity tr|sqrt(a) sqrt(b)|.
double root_fidelity(const Mat& a, const Mat& b);

}  // namespace qfl
