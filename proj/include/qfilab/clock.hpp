#pragma once

#include "qfilab/channels.hpp"
#include "qfilab/fisher.hpp"

#include <optional>
#include <string>
#include <utility>

namespace qfl {

struct MetrologyScenario {
  Vec psi;  // probe at t0, normalized
  Mat H;    // generator
  KrausChannel channel;
  double t0 = 0.0;
  std::string label;

  MetrologyScenario(Vec psi, Mat H, KrausChannel channel, double t0 = 0.0, std::string label = {});
  double mean_H() const;
  double variance_H() const;
};

// (H - <H>) psi. Throws when the probe is stationary.
Vec xi_vector(const Vec& psi, const Mat& H);

struct VirtualQubit {
  Vec plus;   // psi
  Vec minus;  // xi / sigma_H
  double sigma_H = 0.0;
};
VirtualQubit virtual_qubit(const Vec& psi, const Mat& H);

// t0 - i[H,psi]/(2 sigma_H^2) + P_perp M P_perp.
Mat optimal_time_observable(const MetrologyScenario& sc, const std::optional<Mat>& M_gauge = std::nullopt);
// {H - <H>, psi} / (2 sigma_H^2)
Mat eta_direction(const MetrologyScenario& sc);
Mat time_direction(const MetrologyScenario& sc);

struct EqualityDiagnostics {
  bool holds = false;
  bool marginal = false;
  double residual = 0.0;   // ||(P_B^perp (x) P_E^perp) V xi||
  double threshold = 0.0;  // 1e-8 ||xi||
  double nullspace_residual = 0.0;  // max ||P_B^perp E xi|| over E = sum c_k E_k with E psi = 0, |c| = 1
  int rank_B = 0, rank_E = 0;
};
EqualityDiagnostics equality_conditions(const MetrologyScenario& sc);
// Same test for an arbitrary (psi, xi) pair and channel.
EqualityDiagnostics equality_conditions(const Vec& psi, const Vec& xi, const KrausChannel& ch);

struct FisherReport {
  double f_alice_t = 0, f_alice_eta = 0, f_bob_t = 0, f_eve_eta = 0, delta_f = 0;
  double delta_f_eve = 0;  // F(N^(psi), N^({Hbar, psi}))
  double sum_ratio = 0;
  bool equality_holds = false;
  std::string rank_diag;
  EqualityDiagnostics equality;
};
FisherReport fisher_report(const MetrologyScenario& sc);

// Both sides of the logical-qubit relation for a (psi, xi) pair and a
// trace-non-increasing channel: F(N psi, N D^Y) + F(N^ psi, N^ D^Z) vs
// 4 <xi|N^dag(I)|xi>.
struct LogicalQubitRelation {
  double f_y = 0, f_z = 0, rhs = 0;
  EqualityDiagnostics equality;
};
LogicalQubitRelation logical_qubit_relation(const Vec& psi, const Vec& xi, const KrausChannel& ch);

struct TwoParameterBound {
  double lhs = 0, rhs = 0;
};
TwoParameterBound two_parameter_bound(const Vec& psi, const Mat& A, const Mat& B, const KrausChannel& ch);

struct SignalGenerator {
  Mat K;
  double residual = 0.0;  // norm of the last retained series term
};
SignalGenerator signal_generator(const Mat& H0, const Mat& G, double f0, double T, int series_order);

// Explicit SLD on Bob's side, valid when the zero-loss conditions hold.
Mat explicit_bob_sld(const MetrologyScenario& sc);

// max_{k,k'} |<psi|E_k'^dag E_k|xi> + <xi|E_k'^dag E_k|psi>| and the arg max.
struct ZeroLossResidual {
  double worst = 0.0;
  int k = -1, kp = -1;
};
ZeroLossResidual zero_loss_residual(const Vec& psi, const Vec& xi, const std::vector<Mat>& errors);

}  // namespace qfl
