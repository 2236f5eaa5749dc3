#include "qfilab/lindblad.hpp"
#include "qfilab/fisher.hpp"

#include <cmath>
#include <sstream>

namespace qfl {

LindbladSpec::LindbladSpec(Mat H_, std::vector<Mat> jumps_) : H(std::move(H_)), jumps(std::move(jumps_)) {
  dim = static_cast<int>(H.rows());
  if (H.rows() != H.cols() || !is_hermitian(H)) throw std::invalid_argument("LindbladSpec: H must be Hermitian");
  for (const auto& L : jumps)
    if (L.rows() != dim || L.cols() != dim) throw std::invalid_argument("LindbladSpec: jump operator shape");
}

Mat hamiltonian_superop(const LindbladSpec& spec) {
  Mat I = identity(spec.dim);
  return -I1 * (kron(spec.H, I) - kron(I, spec.H.transpose()));
}

Mat dissipator_superop(const LindbladSpec& spec) {
  const int d = spec.dim;
  Mat I = identity(d);
  Mat S = Mat::Zero(d * d, d * d);
  for (const auto& L : spec.jumps) {
    Mat LdL = L.adjoint() * L;
    S += kron(L, L.conjugate()) - 0.5 * (kron(LdL, I) + kron(I, LdL.transpose()));
  }
  return S;
}

Mat superop(const LindbladSpec& spec) { return hamiltonian_superop(spec) + dissipator_superop(spec); }

Mat apply_superop(const Mat& S, const Mat& X) { return devectorize(S * vectorize(X)); }

Mat evolve(const LindbladSpec& spec, const Mat& rho0, double t) {
  if (t < 0) throw std::invalid_argument("evolve: t must be >= 0");
  return apply_superop(expm(t * superop(spec)), rho0);
}

ChoiKraus kraus_from_superop(const Mat& S, int d) {
  // C_{(i,a),(j,b)} = N(|i><j|)_{ab}
  Mat C = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat Eij = Mat::Zero(d, d);
      Eij(i, j) = 1;
      Mat out = apply_superop(S, Eij);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) C(i * d + a, j * d + b) = out(a, b);
    }
  Spectral s = eig_hermitian(C);
  ChoiKraus out;
  out.min_eig = s.values[d * d - 1];
  if (out.min_eig < -1e-8) {
    std::ostringstream os;
    os << "kraus_from_superop: Choi eigenvalue " << out.min_eig << " < -1e-8; map is not CP";
    throw NumericalError(os.str());
  }
  if (out.min_eig < -1e-12) {
    std::ostringstream os;
    os << "clamped Choi eigenvalue " << out.min_eig;
    out.warnings.push_back(os.str());
  }
  for (int k = 0; k < d * d; ++k) {
    if (s.values[k] < 1e-12) continue;
    Mat K(d, d);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a) K(a, i) = std::sqrt(s.values[k]) * s.vectors(i * d + a, k);
    out.kraus.push_back(std::move(K));
  }
  return out;
}

namespace {
// Strip O(1e-15) excess so the trace-non-increasing check accepts the set.
std::vector<Mat> normalize_kraus(std::vector<Mat> ks, int d) {
  Mat Q = Mat::Zero(d, d);
  for (const auto& K : ks) Q += K.adjoint() * K;
  const double top = eig_hermitian(Q).values[0];
  if (top > 1.0) {
    const double s = 1.0 / std::sqrt(top);
    for (auto& K : ks) K *= s;
  }
  return ks;
}
}  // namespace

DecomposedEvolution decompose(const LindbladSpec& spec, double t) {
  if (t < 0) throw std::invalid_argument("decompose: t must be >= 0");
  const int d = spec.dim;
  DecomposedEvolution out;
  out.t = t;
  Mat L0 = hamiltonian_superop(spec), L1 = dissipator_superop(spec);
  out.E_t = expm(t * (L0 + L1));
  out.U_t = expm(-I1 * t * spec.H);
  out.commutator_norm = op_norm(L0 * L1 - L1 * L0);
  out.commuting = out.commutator_norm < 1e-12;
  Mat Nsup = out.E_t * expm(-t * L0);
  if (out.commuting) {
    Mat direct = expm(t * L1);
    const double diff = max_abs(direct - Nsup);
    if (diff > 1e-8) {
      std::ostringstream os;
      os << "decompose: commuting shortcut disagrees with product by " << diff;
      throw NumericalError(os.str());
    }
    Nsup = direct;
  }
  ChoiKraus ck = kraus_from_superop(Nsup, d);
  out.warnings = ck.warnings;
  out.N_t = KrausChannel(d, d, normalize_kraus(std::move(ck.kraus), d));
  return out;
}

ClockFisher clock_fisher(const LindbladSpec& spec, const Vec& psi0, double t0) {
  DecomposedEvolution dec = decompose(spec, t0);
  Mat L = superop(spec);
  Mat psi_init = projector(psi0);
  Mat rho = apply_superop(dec.E_t, psi_init);
  Mat drho = apply_superop(L, rho);
  Vec psit = dec.U_t * psi0;
  Mat P = projector(psit);
  Mat D = dec.N_t.apply(-I1 * (spec.H * P - P * spec.H));
  Mat Delta = drho - D;  // (d/dt N)(psi)
  FisherPair pr(rho, drho);
  ClockFisher out;
  out.f_exact = qfi(pr);
  out.f_unitary = qfi(FisherPair(rho, D));
  out.delta = out.f_exact - out.f_unitary;
  const double fd = qfi(FisherPair(rho, Delta));
  out.delta_bound = fd + 2.0 * std::sqrt(fd * out.f_unitary);
  return out;
}

LindbladSpec z_dephasing_spec(double omega, double gamma) {
  Mat up = Mat::Zero(2, 2), dn = Mat::Zero(2, 2);
  up(0, 0) = std::sqrt(gamma);
  dn(1, 1) = std::sqrt(gamma);
  return LindbladSpec(0.5 * omega * pauli_z(), {up, dn});
}

LindbladSpec x_dephasing_spec(double omega, double gamma) {
  Vec plus(2), minus(2);
  plus << 1, 1;
  minus << 1, -1;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  return LindbladSpec(0.5 * omega * pauli_z(), {std::sqrt(gamma) * projector(plus), std::sqrt(gamma) * projector(minus)});
}

}  // namespace qfl
