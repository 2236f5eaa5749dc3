#include "qfilab/clock.hpp"

#include <cmath>
#include <sstream>

namespace qfl {

MetrologyScenario::MetrologyScenario(Vec psi_, Mat H_, KrausChannel channel_, double t0_, std::string label_)
    : psi(std::move(psi_)), H(std::move(H_)), channel(std::move(channel_)), t0(t0_), label(std::move(label_)) {
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-12) throw std::invalid_argument("MetrologyScenario: psi not normalized");
  if (H.rows() != psi.size() || H.cols() != psi.size()) throw std::invalid_argument("MetrologyScenario: H shape");
  if (!is_hermitian(H)) throw std::invalid_argument("MetrologyScenario: H not Hermitian");
  if (channel.in_dim() != psi.size()) throw std::invalid_argument("MetrologyScenario: channel dimension mismatch");
}

double MetrologyScenario::mean_H() const { return psi.dot(H * psi).real(); }

double MetrologyScenario::variance_H() const {
  Vec hp = H * psi;
  const double m = psi.dot(hp).real();
  return std::max(0.0, hp.squaredNorm() - m * m);
}

Vec xi_vector(const Vec& psi, const Mat& H) {
  Vec hp = H * psi;
  Vec xi = hp - psi.dot(hp) * psi;
  if (xi.norm() <= 1e-12 * std::max(1.0, max_abs(H)))
    throw std::invalid_argument("xi_vector: stationary probe; all Fisher quantities trivially zero");
  return xi;
}

VirtualQubit virtual_qubit(const Vec& psi, const Mat& H) {
  VirtualQubit q;
  Vec xi = xi_vector(psi, H);
  q.sigma_H = xi.norm();
  q.plus = psi;
  q.minus = xi / q.sigma_H;
  return q;
}

Mat time_direction(const MetrologyScenario& sc) {
  Vec xi = xi_vector(sc.psi, sc.H);
  return -I1 * (outer(xi, sc.psi) - outer(sc.psi, xi));
}

Mat optimal_time_observable(const MetrologyScenario& sc, const std::optional<Mat>& M_gauge) {
  const double s2 = sc.variance_H();
  if (s2 <= 0.0) throw std::invalid_argument("optimal_time_observable: sigma_H = 0");
  const int d = static_cast<int>(sc.psi.size());
  Mat T = sc.t0 * identity(d) + time_direction(sc) / (2.0 * s2);
  if (M_gauge) {
    Mat Pp = identity(d) - projector(sc.psi);
    T += Pp * (*M_gauge) * Pp;
  }
  return T;
}

Mat eta_direction(const MetrologyScenario& sc) {
  Vec xi = xi_vector(sc.psi, sc.H);
  return (outer(xi, sc.psi) + outer(sc.psi, xi)) / (2.0 * xi.squaredNorm());
}

EqualityDiagnostics equality_conditions(const Vec& psi, const Vec& xi, const KrausChannel& ch) {
  EqualityDiagnostics out;
  const int K = ch.env_dim(), dB = ch.out_dim();
  // Columns E_k psi and E_k xi.
  Mat A(dB, K), B(dB, K);
  for (int k = 0; k < K; ++k) {
    A.col(k) = ch.kraus()[k] * psi;
    B.col(k) = ch.kraus()[k] * xi;
  }
  Mat rhoB = A * A.adjoint();
  Mat rhoE = (A.adjoint() * A).transpose();  // <k|rho_E|k'> = <psi|E_k'^dag E_k|psi>
  Spectral sB = eig_hermitian(rhoB), sE = eig_hermitian(rhoE);
  out.rank_B = sB.rank();
  out.rank_E = sE.rank();
  Mat PB = sB.kernel_projector(), PE = sE.kernel_projector();
  // (P_B (x) P_E) V xi with V xi reshaped to the dB x K matrix B.
  out.residual = (PB * B * PE.transpose()).norm();
  out.threshold = 1e-8 * xi.norm();
  out.holds = out.residual <= out.threshold;
  out.marginal = out.residual >= 0.1 * out.threshold && out.residual <= 10.0 * out.threshold;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(A), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  for (int c = 0; c < K; ++c) {
    const bool null = c >= sv.size() || sv(c) < cut;
    if (!null) continue;
    Vec coeff = svd.matrixV().col(c);
    out.nullspace_residual = std::max(out.nullspace_residual, (PB * (B * coeff)).norm());
  }
  return out;
}

EqualityDiagnostics equality_conditions(const MetrologyScenario& sc) {
  return equality_conditions(sc.psi, xi_vector(sc.psi, sc.H), sc.channel);
}

namespace {
// Images of |psi> and |xi> under every Kraus operator. For pure-state inputs
// rho_B, D_B live on the span of these columns and rho_E has entries
// <E_l a|E_k b>, so neither the full output nor the complement is formed.
struct PureImage {
  Mat A, B;  // columns E_k psi, E_k xi
  PureImage(const KrausChannel& ch, const Vec& psi, const Vec& xi) : A(ch.out_dim(), ch.env_dim()), B(A.rows(), A.cols()) {
    for (int k = 0; k < ch.env_dim(); ++k) {
      A.col(k) = ch.kraus()[k] * psi;
      B.col(k) = ch.kraus()[k] * xi;
    }
    if (A.rows() > 2 * A.cols()) {
      Mat M(A.rows(), 2 * A.cols());
      M << A, B;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
      qr.setThreshold(1e-14);
      const Eigen::Index r = std::max<Eigen::Index>(1, qr.rank());
      Mat Q = Eigen::MatrixXcd(qr.householderQ()).leftCols(r);
      A = Q.adjoint() * A;
      B = Q.adjoint() * B;
    }
  }
  double bob_y() const { return qfi(A * A.adjoint(), -I1 * (B * A.adjoint() - A * B.adjoint())); }
  double eve_z(double scale) const {
    Mat AA = A.adjoint() * A, AB = A.adjoint() * B;
    return qfi(AA.transpose(), scale * (AB + AB.adjoint()).transpose());
  }
};
}  // namespace

FisherReport fisher_report(const MetrologyScenario& sc) {
  FisherReport r;
  Vec xi = xi_vector(sc.psi, sc.H);
  const double s2 = xi.squaredNorm();
  r.f_alice_t = 4.0 * s2;
  r.f_alice_eta = 1.0 / s2;
  PureImage img(sc.channel, sc.psi, xi);
  r.f_bob_t = img.bob_y();
  r.delta_f_eve = img.eve_z(1.0);
  r.f_eve_eta = img.eve_z(1.0 / (2.0 * s2));
  r.delta_f = r.f_alice_t - r.f_bob_t;
  r.sum_ratio = r.f_bob_t / r.f_alice_t + r.f_eve_eta / r.f_alice_eta;
  r.equality = equality_conditions(sc.psi, xi, sc.channel);
  r.equality_holds = r.equality.holds;
  std::ostringstream os;
  os << "rank(rho_B)=" << r.equality.rank_B << "/" << sc.channel.out_dim() << " rank(rho_E)=" << r.equality.rank_E
     << "/" << sc.channel.env_dim();
  if (r.equality.marginal) os << " marginal";
  r.rank_diag = os.str();
  return r;
}

LogicalQubitRelation logical_qubit_relation(const Vec& psi, const Vec& xi, const KrausChannel& ch) {
  LogicalQubitRelation out;
  PureImage img(ch, psi, xi);
  out.f_y = img.bob_y();
  out.f_z = img.eve_z(1.0);
  out.rhs = 4.0 * xi.dot(ch.adjoint_identity() * xi).real();
  out.equality = equality_conditions(psi, xi, ch);
  return out;
}

TwoParameterBound two_parameter_bound(const Vec& psi, const Mat& A, const Mat& B, const KrausChannel& ch) {
  auto var = [&](const Mat& X) {
    Vec xp = X * psi;
    const double m = psi.dot(xp).real();
    return xp.squaredNorm() - m * m;
  };
  const double va = var(A), vb = var(B);
  if (va <= 1e-14 || vb <= 1e-14) throw std::invalid_argument("two_parameter_bound: degenerate variance");
  Mat P = projector(psi);
  Mat DA = -I1 * (A * P - P * A);
  Mat DB = -I1 * (B * P - P * B);
  KrausChannel comp = complementary(ch);
  TwoParameterBound out;
  out.lhs = qfi(ch.apply(P), ch.apply(DA)) / (4.0 * va) + qfi(comp.apply(P), comp.apply(DB)) / (4.0 * vb);
  const double comm = psi.dot((I1 * (A * B - B * A)) * psi).real();
  out.rhs = 1.0 + 2.0 * std::sqrt(std::max(0.0, 1.0 - comm * comm / (4.0 * va * vb)));
  return out;
}

SignalGenerator signal_generator(const Mat& H0, const Mat& G, double f0, double T, int series_order) {
  if (series_order < 1) throw std::invalid_argument("signal_generator: series_order must be >= 1");
  Mat Hf = H0 + f0 * G;
  Mat ad = G;  // (-i ad_Hf)^k (G), Hermitian at every k
  Mat term = T * G;
  Mat K = term;
  double coeff = T;  // T^{k+1} / (k+1)!
  for (int k = 1; k <= series_order; ++k) {
    ad = -I1 * (Hf * ad - ad * Hf);
    coeff *= T / static_cast<double>(k + 1);
    term = coeff * ad;
    K += term;
  }
  const double asym = op_norm(K - K.adjoint());
  if (asym > 1e-9 * std::max(1.0, op_norm(K))) {
    std::ostringstream os;
    os << "signal_generator: non-Hermitian part " << asym;
    throw NumericalError(os.str());
  }
  return {hermitian_part(K), op_norm(term)};
}

ZeroLossResidual zero_loss_residual(const Vec& psi, const Vec& xi, const std::vector<Mat>& errors) {
  const int K = static_cast<int>(errors.size());
  Mat A(errors.empty() ? 0 : errors[0].rows(), K), B(A.rows(), K);
  for (int k = 0; k < K; ++k) {
    A.col(k) = errors[k] * psi;
    B.col(k) = errors[k] * xi;
  }
  // entry (k', k) = <psi|E_k'^dag E_k|xi> + <xi|E_k'^dag E_k|psi>
  Mat C = A.adjoint() * B + B.adjoint() * A;
  ZeroLossResidual out;
  for (int kp = 0; kp < K; ++kp)
    for (int k = 0; k < K; ++k)
      if (std::abs(C(kp, k)) > out.worst) {
        out.worst = std::abs(C(kp, k));
        out.k = k;
        out.kp = kp;
      }
  return out;
}

Mat explicit_bob_sld(const MetrologyScenario& sc) {
  Vec xi = xi_vector(sc.psi, sc.H);
  ZeroLossResidual z = zero_loss_residual(sc.psi, xi, sc.channel.kraus());
  if (z.worst > 1e-9 * xi.norm()) {
    std::ostringstream os;
    os << "explicit_bob_sld: zero-loss conditions fail (residual " << z.worst << " at Kraus pair (" << z.kp << ","
       << z.k << ")); see zero_loss_check";
    throw std::invalid_argument(os.str());
  }
  Mat rho = sc.channel.apply(projector(sc.psi));
  Spectral s = eig_hermitian(rho);
  Mat rinv = pinv_psd(rho);
  Mat Pp = s.kernel_projector();
  Mat Nxp = sc.channel.apply(outer(xi, sc.psi));
  return -2.0 * I1 * Nxp * rinv + 2.0 * I1 * rinv * Nxp.adjoint() * Pp;
}

}  // namespace qfl
