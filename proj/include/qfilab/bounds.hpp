#pragma once

#include "qfilab/channels.hpp"
#include "qfilab/clock.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qfl {

struct IIDNoiseSpec {
  KrausChannel single_site;  // index 0 is the no-jump operator
  int n = 1;
  double p = 0.0;
  double e0_identity_gap = 0.0;  // ||E_0 - sqrt(tr(E_0^dag E_0)/d) I||, recorded at construction
  IIDNoiseSpec(KrausChannel single_site, int n, double p);
};

enum class BoundKind { upper_on_F_Bob, lower_on_F_Bob };

struct BoundResult {
  double value = 0.0;    // bound on F_Bob
  double delta_f = 0.0;  // matching bound on the loss 4 sigma^2 - F_Bob
  BoundKind kind = BoundKind::upper_on_F_Bob;
  int k_used = 0;
  std::string certificate;
};

// Strings over {0..m-1}^n with at most k non-zero entries, in lexicographic order.
std::vector<std::vector<int>> strings_up_to_weight(int n, int m, int k);

// F_Bob <= 4 sigma^2 - sum_{|x|<=k} [2 Re<psi|Hbar Q_x|psi>]^2 / <psi|Q_x|psi>,
// Q_x = tensor E_{x_i}^dag E_{x_i}. hbar_psi = (H - <H>) psi.
BoundResult pinched_iid_upper(const Vec& psi, const Vec& hbar_psi, const IIDNoiseSpec& spec, int k);
BoundResult pinched_iid_upper(const Vec& psi, const Mat& H, const IIDNoiseSpec& spec, int k);

// F_Bob >= 4 sigma^2 - F(N0^(psi), N0^({Hbar, psi})) for any N0^ with
// N^ = N' o N0^. The factorization is the caller's responsibility.
BoundResult preprocessing_lower(const Vec& psi, const Mat& H, const KrausChannel& nhat0);
// Same with N0^ = single^{tensor n}, applied site by site.
BoundResult preprocessing_lower_product(const Vec& psi, const Vec& hbar_psi, const KrausChannel& single, int n);

// Complement of amplitude damping with excitation transfer p0 >= p: the
// single-site N0^ for which the i.i.d. damping complement factors through.
KrausChannel damping_preprocessor(double p0);

// Delta F <= ||A||^2 F(tau, A^{-1} N^({Hbar,psi}) A^{-dag}) with rho_E = A tau A^dag.
BoundResult near_diagonal_upper(const Vec& psi, const Mat& H, const KrausChannel& nhat);

struct LDLT {
  Mat A;      // unit lower triangular
  RVec tau;   // nonnegative pivots
};
LDLT ldlt_floor(const Mat& rho, double pivot_floor = 1e-12);

struct EnergyAccess {
  double lower_floor = 0.0;  // candidate objective 4 <(N^dag(S) - Hbar)^2>, not certified
  double upper_cap = 0.0;    // 12 delta ||Hbar||^2, certified
  double dev1 = 0.0, dev2 = 0.0;  // measured ||N^dag(S) - Hbar||, ||N^dag(S^2) - Hbar^2||
};
EnergyAccess energy_access_bounds(const MetrologyScenario& sc, const Mat& S, double delta);

struct OrderFit {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0;
  int used = 0, excluded = 0;
};
OrderFit weak_noise_order_fit(const std::vector<std::pair<double, double>>& sweep);

}  // namespace qfl

namespace qfl {
// Env-side damping taking the p0 complement to the p complement (p <= p0).
KrausChannel damping_postprocessor(double p, double p0);
}  // namespace qfl
