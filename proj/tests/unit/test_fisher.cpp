#include "doctest.h"

#include "qfilab/channels.hpp"
#include "qfilab/fisher.hpp"

#include <cmath>

using namespace qfl;

namespace {
Mat tangent_op(int d, std::uint64_t seed) { return random_hermitian(d, seed) + I1 * random_hermitian(d, seed + 1); }

// Central difference of the Bures distance along rho(e) = (1 + eA) rho (1 + eA)^dag,
// whose derivative at 0 is A rho + rho A^dag. F = 4 d_B^2 / (2e)^2 in the limit.
double bures_fd(const Mat& rho, const Mat& A, double e) {
  const int d = static_cast<int>(rho.rows());
  Mat Kp = identity(d) + e * A, Km = identity(d) - e * A;
  Mat rp = Kp * rho * Kp.adjoint(), rm = Km * rho * Km.adjoint();
  rp = 0.5 * (rp + rp.adjoint());
  rm = 0.5 * (rm + rm.adjoint());
  const double db2 = rp.trace().real() + rm.trace().real() - 2 * root_fidelity(rp, rm);
  return db2 / (e * e);
}
}  // namespace

TEST_CASE("SLD solves the Lyapunov equation and reproduces F") {
  for (int s = 0; s < 10; ++s) {
    const int d = 2 + s % 4, r = 1 + s % d;
    Mat rho = random_density(d, r, 40 + s);
    Mat A = tangent_op(d, 60 + s);
    Mat D = A * rho + rho * A.adjoint();
    FisherPair fp(rho, D);
    Mat R = sld(fp).R;
    CHECK(is_hermitian(R, 1e-10));
    CHECK(max_abs(0.5 * (rho * R + R * rho) - D) < 1e-9 * std::max(1.0, max_abs(D)));
    CHECK(qfi(fp) == doctest::Approx((rho * R * R).trace().real()).epsilon(1e-10));
  }
}

TEST_CASE("qfi agrees with a Bures finite-difference oracle") {
  for (int s = 0; s < 12; ++s) {
    const int d = 2 + s % 4, r = 1 + (s / 2) % d;
    Mat rho = random_density(d, r, 80 + s);
    Mat A = tangent_op(d, 90 + s);
    const double F = qfi(rho, A * rho + rho * A.adjoint());
    CHECK(bures_fd(rho, A, 1e-4) == doctest::Approx(F).epsilon(1e-4));
  }
}

TEST_CASE("pure states: F = 4 Var(G) for a unitary direction") {
  for (int s = 0; s < 5; ++s) {
    Vec psi = random_unit_vector(5, s);
    Mat G = random_hermitian(5, 10 + s);
    Mat P = projector(psi);
    Mat D = -I1 * (G * P - P * G);
    const double m = psi.dot(G * psi).real();
    const double var = psi.dot(G * G * psi).real() - m * m;
    CHECK(qfi(P, D) == doctest::Approx(4 * var).epsilon(1e-10));
    CHECK(qfi_pure(psi, D) == doctest::Approx(4 * var).epsilon(1e-10));
  }
}

TEST_CASE("classical limit: commuting rho and D give the Fisher information of the distribution") {
  Mat rho = Mat::Zero(3, 3), D = Mat::Zero(3, 3);
  rho.diagonal() << 0.5, 0.3, 0.2;
  D.diagonal() << 0.1, -0.4, 0.3;
  CHECK(qfi(rho, D) == doctest::Approx(0.01 / 0.5 + 0.16 / 0.3 + 0.09 / 0.2));
}

TEST_CASE("kernel block of D must vanish") {
  Mat rho = projector(Vec::Unit(2, 0));
  Mat bad = projector(Vec::Unit(2, 1));
  CHECK_FALSE(fisher_pair_valid(rho, bad));
  CHECK_THROWS(FisherPair(rho, bad));
  double v = 1;
  CHECK(fisher_pair_valid(rho, pauli_x(), &v));
  CHECK(v < 1e-12);
}

TEST_CASE("variational candidates bracket F") {
  Mat rho = random_density(4, 3, 5);
  Mat A = tangent_op(4, 6);
  FisherPair fp(rho, A * rho + rho * A.adjoint());
  const double F = qfi(fp);
  Mat R = sld(fp).R;
  CHECK(qfi_lower_candidate(fp, 0.5 * R) == doctest::Approx(F).epsilon(1e-9));
  for (int s = 0; s < 5; ++s) CHECK(qfi_lower_candidate(fp, random_hermitian(4, 20 + s)) <= F + 1e-10);
  // L = rho^{1/2} A^dag is feasible and gives 4 tr(A rho A^dag) >= F
  Mat L = sqrt_psd(rho) * A.adjoint();
  CHECK(qfi_upper_candidate(fp, L) >= F - 1e-10);
  CHECK(qfi_upper_candidate(fp, sqrt_psd(rho) * (0.5 * R)) == doctest::Approx(F).epsilon(1e-9));
  CHECK_THROWS_AS(qfi_upper_candidate(fp, identity(4)), NumericalError);
  auto [lo, hi] = simple_bounds(fp);
  CHECK(lo <= F + 1e-10);
  CHECK(F <= hi + 1e-10);
  CHECK(rld_bound(fp, R) == doctest::Approx(F).epsilon(1e-9));
}

TEST_CASE("embedding a sub-normalized pair keeps F") {
  Mat rho = 0.6 * random_density(3, 2, 7);
  Mat A = tangent_op(3, 8);
  Mat D = A * rho + rho * A.adjoint();
  D -= (D.trace() / rho.trace()) * rho;
  FisherPair fp(rho, D);
  FisherPair e = embed_normalized(fp);
  CHECK(std::abs(e.rho().trace().real() - 1) < 1e-13);
  CHECK(qfi(e) == doctest::Approx(qfi(fp)).epsilon(1e-10));
  CHECK_THROWS(embed_normalized(FisherPair(rho, rho)));
}

TEST_CASE("trace-decreasing channel bound") {
  for (int s = 0; s < 8; ++s) {
    KrausChannel ch = random_channel(4, 3, 3, 300 + s, 0.8);
    Vec psi = random_unit_vector(4, 400 + s);
    Vec xi = random_unit_vector(4, 500 + s);
    xi -= psi.dot(xi) * psi;
    const double alpha = eig_hermitian(ch.adjoint_identity()).values[0];
    TraceDecreasingBound b = trace_decreasing_bound(ch, psi, xi, alpha);
    CHECK(b.fisher <= b.candidate + 1e-9);
    CHECK(b.candidate <= b.bound + 1e-9);
    CHECK_THROWS_AS(trace_decreasing_bound(ch, psi, xi, 0.5 * alpha), std::invalid_argument);
  }
}

TEST_CASE("root fidelity") {
  Mat r = random_density(3, 3, 1);
  CHECK(root_fidelity(r, r) == doctest::Approx(1.0));
  CHECK(root_fidelity(projector(Vec::Unit(2, 0)), projector(Vec::Unit(2, 1))) < 1e-12);
  Vec a = random_unit_vector(3, 2), b = random_unit_vector(3, 3);
  CHECK(root_fidelity(projector(a), projector(b)) == doctest::Approx(std::abs(a.dot(b))).epsilon(1e-7));
}
