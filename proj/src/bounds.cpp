#include "qfilab/bounds.hpp"
#include "qfilab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qfl {

IIDNoiseSpec::IIDNoiseSpec(KrausChannel single, int n_, double p_) : single_site(std::move(single)), n(n_), p(p_) {
  if (n < 1) throw std::invalid_argument("IIDNoiseSpec: n must be >= 1");
  if (single_site.in_dim() != single_site.out_dim())
    throw std::invalid_argument("IIDNoiseSpec: single-site channel must preserve dimension");
  const Mat& E0 = single_site.kraus()[0];
  const int d = single_site.in_dim();
  const double s = std::sqrt((E0.adjoint() * E0).trace().real() / d);
  e0_identity_gap = op_norm(E0 - s * identity(d));
}

std::vector<std::vector<int>> strings_up_to_weight(int n, int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(n, 0);
  auto rec = [&](auto&& self, int site, int w) -> void {
    if (site == n) {
      out.push_back(x);
      return;
    }
    for (int v = 0; v < m; ++v) {
      if (v != 0 && w == k) break;
      x[site] = v;
      self(self, site + 1, w + (v != 0));
    }
    x[site] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

BoundResult pinched_iid_upper(const Vec& psi, const Vec& hbar_psi, const IIDNoiseSpec& spec, int k) {
  if (spec.single_site.in_dim() != 2) throw std::invalid_argument("pinched_iid_upper: qubit sites only");
  if (psi.size() != (1L << spec.n) || hbar_psi.size() != psi.size())
    throw std::invalid_argument("pinched_iid_upper: representation unsupported (dense length must be 2^n)");
  std::vector<Mat> Q;
  for (const auto& E : spec.single_site.kraus()) Q.push_back(E.adjoint() * E);
  auto strings = strings_up_to_weight(spec.n, static_cast<int>(Q.size()), k);
  kernels::PinchTerms t = kernels::pinch_sum_parallel(psi, hbar_psi, spec.n, Q, strings);
  BoundResult r;
  r.kind = BoundKind::upper_on_F_Bob;
  r.k_used = k;
  r.delta_f = t.sum;
  r.value = 4.0 * hbar_psi.squaredNorm() - t.sum;
  std::ostringstream os;
  os << "pinched over " << t.used << " strings of weight <= " << k << ", " << t.skipped << " zero-probability skipped";
  r.certificate = os.str();
  return r;
}

BoundResult pinched_iid_upper(const Vec& psi, const Mat& H, const IIDNoiseSpec& spec, int k) {
  return pinched_iid_upper(psi, xi_vector(psi, H), spec, k);
}

namespace {
BoundResult lower_from_loss(double s2, double loss, const std::string& what) {
  BoundResult r;
  r.kind = BoundKind::lower_on_F_Bob;
  r.delta_f = loss;
  r.value = 4.0 * s2 - loss;
  r.certificate = what;
  return r;
}
}  // namespace

BoundResult preprocessing_lower(const Vec& psi, const Mat& H, const KrausChannel& nhat0) {
  if (nhat0.in_dim() != psi.size()) throw std::invalid_argument("preprocessing_lower: dimension mismatch");
  Vec xi = xi_vector(psi, H);
  const double loss = qfi(nhat0.apply(projector(psi)), nhat0.apply(outer(xi, psi) + outer(psi, xi)));
  return lower_from_loss(xi.squaredNorm(), loss, "loss bounded through the supplied N0^");
}

BoundResult preprocessing_lower_product(const Vec& psi, const Vec& hbar_psi, const KrausChannel& single, int n) {
  const double loss =
      qfi(apply_product(single, n, projector(psi)), apply_product(single, n, outer(hbar_psi, psi) + outer(psi, hbar_psi)));
  return lower_from_loss(hbar_psi.squaredNorm(), loss, "loss bounded through site-wise N0^");
}

KrausChannel damping_preprocessor(double p0) { return complementary(amplitude_damping(p0)); }

KrausChannel damping_postprocessor(double p, double p0) {
  if (!(p >= 0 && p <= p0 && p0 <= 1 && p0 > 0)) throw std::invalid_argument("damping_postprocessor: need 0 <= p <= p0 <= 1");
  // Environment level |1> records a jump; it survives with probability p/p0.
  const double keep = p / p0;
  Mat A = Mat::Zero(2, 2), B = Mat::Zero(2, 2);
  A(0, 0) = 1;
  A(1, 1) = std::sqrt(keep);
  B(0, 1) = std::sqrt(1 - keep);
  return KrausChannel(2, 2, {A, B});
}

LDLT ldlt_floor(const Mat& rho, double pivot_floor) {
  const int d = static_cast<int>(rho.rows());
  LDLT f;
  f.A = Mat::Identity(d, d);
  f.tau = RVec::Zero(d);
  const double scale = std::max(1.0, rho.diagonal().real().maxCoeff());
  for (int j = 0; j < d; ++j) {
    cplx s = rho(j, j);
    for (int k = 0; k < j; ++k) s -= f.A(j, k) * std::conj(f.A(j, k)) * f.tau[k];
    double tj = s.real();
    if (tj < pivot_floor * scale) tj = 0.0;
    f.tau[j] = tj;
    for (int i = j + 1; i < d; ++i) {
      cplx r = rho(i, j);
      for (int k = 0; k < j; ++k) r -= f.A(i, k) * std::conj(f.A(j, k)) * f.tau[k];
      if (tj == 0.0) {
        if (std::abs(r) > std::sqrt(pivot_floor) * scale) {
          std::ostringstream os;
          os << "ldlt_floor: breakdown at pivot " << j << " (off-diagonal residual " << std::abs(r) << ")";
          throw NumericalError(os.str());
        }
        f.A(i, j) = 0;
      } else {
        f.A(i, j) = r / tj;
      }
    }
  }
  return f;
}

BoundResult near_diagonal_upper(const Vec& psi, const Mat& H, const KrausChannel& nhat) {
  if (nhat.in_dim() != psi.size()) throw std::invalid_argument("near_diagonal_upper: dimension mismatch");
  Vec xi = xi_vector(psi, H);
  Mat rhoE = nhat.apply(projector(psi));
  Mat DE = nhat.apply(outer(xi, psi) + outer(psi, xi));
  LDLT f = ldlt_floor(hermitian_part(rhoE));
  Eigen::MatrixXcd A = f.A;
  Eigen::MatrixXcd Ainv = A.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(A.rows(), A.cols()));
  Mat Dp = Ainv * DE * Ainv.adjoint();
  const int d = static_cast<int>(f.tau.size());
  double F = 0.0;
  const double dn = max_abs(Dp);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double den = f.tau[i] + f.tau[j];
      if (den > 0.0) {
        F += 2.0 * std::norm(Dp(i, j)) / den;
      } else if (std::abs(Dp(i, j)) > 1e-9 * std::max(dn, 1e-300)) {
        F = std::numeric_limits<double>::infinity();
      }
    }
  const double an = op_norm(f.A);
  std::ostringstream os;
  os << "LDLT with ||A||^2 = " << an * an;
  return lower_from_loss(xi.squaredNorm(), an * an * F, os.str());
}

EnergyAccess energy_access_bounds(const MetrologyScenario& sc, const Mat& S, double delta) {
  KrausChannel comp = complementary(sc.channel);
  if (S.rows() != comp.out_dim() || S.cols() != comp.out_dim())
    throw std::invalid_argument("energy_access_bounds: S must act on the environment");
  AdjointMap adj = adjoint(comp);
  const int d = static_cast<int>(sc.psi.size());
  Mat Hbar = sc.H - sc.mean_H() * identity(d);
  Mat NS = adj.apply(S);
  Mat NS2 = adj.apply(S * S);
  EnergyAccess out;
  out.dev1 = op_norm(NS - Hbar);
  out.dev2 = op_norm(NS2 - Hbar * Hbar);
  const double hn = op_norm(Hbar);
  if (out.dev1 > hn * delta + 1e-12 || out.dev2 > hn * hn * delta + 1e-12) {
    std::ostringstream os;
    os << "energy_access_bounds: precondition fails: ||N^dag(S)-Hbar|| = " << out.dev1 << " (allowed " << hn * delta
       << "), ||N^dag(S^2)-Hbar^2|| = " << out.dev2 << " (allowed " << hn * hn * delta << ")";
    throw std::invalid_argument(os.str());
  }
  Vec r = (NS - Hbar) * sc.psi;
  out.lower_floor = 4.0 * r.squaredNorm();
  out.upper_cap = 12.0 * delta * hn * hn;
  return out;
}

OrderFit weak_noise_order_fit(const std::vector<std::pair<double, double>>& sweep) {
  std::vector<double> xs, ys;
  OrderFit f;
  for (const auto& [p, df] : sweep) {
    if (p > 0 && df > 0) {
      xs.push_back(std::log(p));
      ys.push_back(std::log(df));
    } else {
      ++f.excluded;
    }
  }
  f.used = static_cast<int>(xs.size());
  if (f.used < 4) throw std::invalid_argument("weak_noise_order_fit: need at least 4 positive points");
  const double lo = *std::min_element(xs.begin(), xs.end()), hi = *std::max_element(xs.begin(), xs.end());
  if (hi - lo < std::log(10.0) - 1e-12) throw std::invalid_argument("weak_noise_order_fit: p must span a decade");
  double mx = 0, my = 0;
  for (int i = 0; i < f.used; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= f.used;
  my /= f.used;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < f.used; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (int i = 0; i < f.used; ++i) {
    const double e = ys[i] - f.intercept - f.slope * xs[i];
    ssr += e * e;
  }
  f.stderr_slope = f.used > 2 ? std::sqrt(ssr / (f.used - 2) / sxx) : 0.0;
  return f;
}

}  // namespace qfl
