#include "doctest.h"

#include "qfilab/bounds.hpp"
#include "qfilab/fisher.hpp"
#include "qfilab/manybody.hpp"
#include "qfilab/scenarios.hpp"

#include <cmath>

using namespace qfl;

namespace {
struct Probe3 {
  Vec psi, hpsi;
  int n;
};

Probe3 dense_probe(const std::string& name, int n) {
  Probe p = probe_library(name, n);
  Vec h = hbar_symmetric(p.sym, 1.0);
  return {p.sym.dense(), SymmetricState(n, h).dense() * h.norm(), n};
}

double exact_f_bob(const Probe3& p, const KrausChannel& single) {
  Mat DY = -I1 * (outer(p.hpsi, p.psi) - outer(p.psi, p.hpsi));
  return qfi(apply_product(single, p.n, projector(p.psi)), apply_product(single, p.n, DY));
}
}  // namespace

TEST_CASE("damping complement factors through the preprocessor on every matrix unit") {
  for (double p : {0.05, 0.2, 0.5}) {
    const double p0 = std::min(1.0, 2 * p);
    KrausChannel target = complementary(amplitude_damping(p));
    KrausChannel pre = damping_preprocessor(p0), post = damping_postprocessor(p, p0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Mat E = Mat::Zero(2, 2);
        E(i, j) = 1;
        CHECK(max_abs(post.apply(pre.apply(E)) - target.apply(E)) < 1e-14);
      }
    CHECK(max_abs(pre.apply(identity(2)) - complementary(amplitude_damping(p0)).apply(identity(2))) < 1e-14);
  }
}

TEST_CASE("pinched upper bound matches a dense evaluation") {
  Probe3 pr = dense_probe("ghz", 4);
  KrausChannel ad = amplitude_damping(0.15);
  IIDNoiseSpec spec(ad, 4, 0.15);
  BoundResult b = pinched_iid_upper(pr.psi, pr.hpsi, spec, 4);
  double s = 0;
  for (const auto& x : strings_up_to_weight(4, 2, 4)) {
    std::vector<Mat> f;
    for (int i : x) f.push_back(ad.kraus()[i].adjoint() * ad.kraus()[i]);
    Mat Q = kron_all(f);
    const double den = pr.psi.dot(Q * pr.psi).real();
    if (den < 1e-14) continue;
    const double num = 2 * pr.hpsi.dot(Q * pr.psi).real();
    s += num * num / den;
  }
  CHECK(b.kind == BoundKind::upper_on_F_Bob);
  CHECK(b.value == doctest::Approx(4 * pr.hpsi.squaredNorm() - s).epsilon(1e-12));
  CHECK(b.delta_f == doctest::Approx(s).epsilon(1e-12));
  CHECK(b.k_used == 4);
}

TEST_CASE("bracketing and k-monotonicity for symmetric probes") {
  for (const char* name : {"ghz", "plus_product", "uniform_dicke", "half_gauss"}) {
    Probe3 pr = dense_probe(name, 5);
    for (double p : {0.03, 0.2}) {
      KrausChannel ad = amplitude_damping(p);
      const double exact = exact_f_bob(pr, ad);
      double prev = 1e300;
      for (int k = 0; k <= 5; ++k) {
        const double up = pinched_iid_upper(pr.psi, pr.hpsi, IIDNoiseSpec(ad, 5, p), k).value;
        CHECK(up >= exact - 1e-8);
        CHECK(up <= prev + 1e-10);
        prev = up;
      }
      const double lo = preprocessing_lower_product(pr.psi, pr.hpsi, damping_preprocessor(std::min(1.0, 2 * p)), 5).value;
      CHECK(lo <= exact + 1e-8);
      CHECK(lo >= 0.0);
    }
  }
}

TEST_CASE("preprocessing lower bound with the identity complement recovers the channel loss") {
  // N0^ = complement itself: the bound is exact
  MetrologyScenario sc = qubit_partial_dephasing(0.3, 1.0);
  BoundResult b = preprocessing_lower(sc.psi, sc.H, complementary(sc.channel));
  CHECK(b.kind == BoundKind::lower_on_F_Bob);
  CHECK(b.value == doctest::Approx(fisher_report(sc).f_bob_t).epsilon(1e-10));
}

TEST_CASE("near-diagonal environment bound") {
  for (double p : {0.01, 0.1}) {
    MetrologyScenario sc = repetition_code(3, partial_dephasing_z(p));
    FisherReport r = fisher_report(sc);
    BoundResult b = near_diagonal_upper(sc.psi, sc.H, complementary(sc.channel));
    CHECK(b.delta_f >= r.delta_f_eve - 1e-10);
    CHECK(b.value <= r.f_bob_t + 1e-10);
  }
}

TEST_CASE("LDLT with a pivot floor") {
  Mat rho = random_density(4, 4, 3);
  LDLT f = ldlt_floor(rho);
  Mat back = f.A * f.tau.cast<cplx>().asDiagonal() * f.A.adjoint();
  CHECK(max_abs(back - rho) < 1e-13);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(f.A(i, i) - cplx(1)) < 1e-15);
  Mat low = Mat::Zero(3, 3);
  low(0, 0) = 1;
  low(2, 2) = 0.5;
  f = ldlt_floor(low);
  CHECK(f.tau[1] == 0.0);
  Mat broken = low;
  broken(1, 2) = broken(2, 1) = 0.3;
  CHECK_THROWS_AS(ldlt_floor(broken), NumericalError);
}

TEST_CASE("energy access precondition") {
  // complete Z dephasing: the environment records the energy eigenbasis
  Mat H = Mat::Zero(2, 2);
  H.diagonal() << 0.5, -0.5;
  Vec plus(2);
  plus << 1, 1;
  plus /= std::sqrt(2.0);
  KrausChannel ch(2, 2, {projector(Vec::Unit(2, 0)), projector(Vec::Unit(2, 1))});
  MetrologyScenario sc(plus, H, ch);
  EnergyAccess e = energy_access_bounds(sc, H, 0.1);
  CHECK(e.dev1 < 1e-14);
  CHECK(e.dev2 < 1e-14);
  CHECK(e.upper_cap == doctest::Approx(12 * 0.1 * 0.25));
  CHECK_THROWS_AS(energy_access_bounds(sc, 2.0 * H, 0.1), std::invalid_argument);
}

TEST_CASE("order fit") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 6; ++i) {
    const double p = std::pow(10.0, -3 + 0.3 * i);
    pts.emplace_back(p, 5 * p * p * p);
  }
  pts.emplace_back(0.5, 0.0);  // dropped
  OrderFit f = weak_noise_order_fit(pts);
  CHECK(f.slope == doctest::Approx(3.0));
  CHECK(f.intercept == doctest::Approx(std::log(5.0)));
  CHECK(f.used == 6);
  CHECK(f.excluded == 1);
  CHECK_THROWS(weak_noise_order_fit({{0.1, 1}, {0.11, 2}, {0.12, 3}, {0.13, 4}}));
}

TEST_CASE("i.i.d. noise spec records the no-jump gap") {
  CHECK(IIDNoiseSpec(partial_dephasing_z(0.2), 3, 0.2).e0_identity_gap < 1e-14);
  CHECK(IIDNoiseSpec(amplitude_damping(0.2), 3, 0.2).e0_identity_gap > 1e-3);
}
