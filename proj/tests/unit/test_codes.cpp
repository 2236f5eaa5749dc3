#include "doctest.h"

#include "qfilab/clock.hpp"
#include "qfilab/codes.hpp"
#include "qfilab/scenarios.hpp"

#include <cmath>
#include <numbers>

using namespace qfl;

TEST_CASE("Pauli strings: parsing, products and commutation") {
  PauliString a = PauliString::parse("+XYZI"), b = PauliString::parse("-iZZXI");
  CHECK(a.str() == "+XYZI");
  CHECK(a.weight() == 3);
  CHECK(a.support() == std::vector<int>{0, 1, 2});
  CHECK(b.phase() == 3);
  CHECK(max_abs(multiply(a, b).to_matrix() - a.to_matrix() * b.to_matrix()) < 1e-14);
  // XZ anticommute, YZ anticommute, ZX anticommute: odd count
  CHECK_FALSE(commutes(a, b));
  CHECK(commutes(a, PauliString::parse("XXII")) == false);
  CHECK(commutes(PauliString::parse("XX"), PauliString::parse("ZZ")));
  CHECK(max_abs(PauliString::single(3, 1, 'Y').to_matrix() - kron_all({identity(2), pauli_y(), identity(2)})) == 0.0);
  Vec v = random_unit_vector(16, 3);
  CHECK((a.apply(v) - a.to_matrix() * v).norm() < 1e-14);
  CHECK_THROWS(PauliString::parse("+XQ"));
}

TEST_CASE("site 0 is the most significant qubit") {
  // X on qubit 0 of |00> gives |10> = index 2
  Vec v = Vec::Unit(4, 0);
  CHECK(std::abs(PauliString::parse("XI").apply(v)(2) - cplx(1)) < 1e-15);
}

TEST_CASE("stabilizer groups reject inconsistent generators") {
  CHECK_THROWS(StabilizerGroup::parse("XX\nZI"));
  CHECK_THROWS(StabilizerGroup::parse("XX\nXX"));
  CHECK_THROWS(StabilizerGroup::parse("iXX"));
  StabilizerGroup g = StabilizerGroup::parse("XX ZZ");
  Vec bell = stabilizer_state(g);
  CHECK(std::abs(bell(0)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(bell(3)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(g.element({0, 1}).str() == "-YY");
}

TEST_CASE("anti-group flip yields the H-rotated state") {
  for (const auto& c : {steane_construction(), aux422_construction()}) {
    for (const auto& g : c.group.generators()) CHECK_FALSE(commutes(g, c.H[0]));
    Vec psi = stabilizer_state(c.group);
    Vec xi = c.H[0].apply(psi);
    Vec flipped = stabilizer_state(anti_group_flip(c.group));
    CHECK(std::abs(flipped.dot(xi)) == doctest::Approx(1.0));
    CHECK(std::abs(psi.dot(xi)) < 1e-12);
  }
}

TEST_CASE("aux qubit expectation flips sign between psi and xi") {
  CodeConstruction c = aux422_construction();
  Vec psi = stabilizer_state(c.group);
  Vec xi = c.H[0].apply(psi);
  PauliString x5 = PauliString::parse("IIIIX");
  CHECK(psi.dot(x5.apply(psi)).real() == doctest::Approx(1.0));
  CHECK(xi.dot(x5.apply(xi)).real() == doctest::Approx(-1.0));
}

TEST_CASE("certification agrees with the dense metrological distance") {
  for (const auto& c : {steane_construction(), aux422_construction()}) {
    Certification cert = stabilizer_certify(c.group, c.H, c.error_weight);
    CHECK(cert.certified());
    Vec psi = stabilizer_state(c.group);
    CHECK(metrological_distance(MetrologicalCodePair(psi, c.H[0].apply(psi))) == 3);
    // one weight too many must be refuted: distance 3 means a weight-3 operator sees the signal
    Certification over = stabilizer_certify(c.group, c.H, 3);
    CHECK(over.verdict == Verdict::refuted);
    CHECK(over.failed_support.size() == 3);
  }
}

TEST_CASE("toric code L = 4") {
  CodeConstruction c = toric_construction(4);
  CHECK(c.group.n() == 32);
  CHECK(c.group.generators().size() == 32);
  CHECK(c.error_weight == 3);
  // stars and plaquettes anticommute with H; the two logical Z strings only fix the state
  const auto& gens = c.group.generators();
  for (std::size_t i = 0; i + 2 < gens.size(); ++i) CHECK_FALSE(commutes(gens[i], c.H[0]));
  CHECK(commutes(gens[30], c.H[0]));
  CHECK(commutes(gens[31], c.H[0]));
  CHECK(stabilizer_certify(c.group, c.H, 3).certified());
  CHECK_THROWS(toric_construction(3));
}

TEST_CASE("repetition code distance and zero-loss checks") {
  for (int n = 2; n <= 4; ++n) {
    MetrologyScenario sc = repetition_code(n, identity_channel(2));
    MetrologicalCodePair pair(sc.psi, xi_vector(sc.psi, sc.H));
    CHECK(metrological_distance(pair) == n);
  }
  MetrologyScenario sc = repetition_code(3, identity_channel(2));
  MetrologicalCodePair pair(sc.psi, xi_vector(sc.psi, sc.H));
  // single Z errors on |+++>: Z_i Z_j maps |+++> toward |-+-> etc., never to |--->
  std::vector<Mat> errs = {identity(8)};
  for (int q = 0; q < 3; ++q) errs.push_back(PauliString::single(3, q, 'Z').to_matrix());
  CHECK(zero_loss_check(pair, errs).holds);
  errs.push_back(PauliString::parse("ZZZ").to_matrix());
  ZeroLossCheck z = zero_loss_check(pair, errs);
  CHECK_FALSE(z.holds);
  CHECK(z.worst_residual == doctest::Approx(2.0));
}

TEST_CASE("[[4,2,2]] clock state tolerates every single located erasure") {
  IsingScenario is = code422_ising(2.0, 0.0, 0.0);
  MetrologicalCodePair pair(is.psi, is.hbar_psi);
  for (int s = 0; s < 4; ++s) {
    ZeroLossCheck z = zero_loss_check(pair, located_erasure(s, 0.5, 4));
    CHECK(z.holds);
    CHECK(z.env_norm < 1e-12);
  }
  CHECK(metrological_distance(pair) == 2);
}

TEST_CASE("equality restoration without zero-loss preservation") {
  // complete transverse dephasing at a turning point violates the equality conditions
  MetrologyScenario sc = complete_x_dephasing(1.0, std::numbers::pi);
  Vec xi = xi_vector(sc.psi, sc.H);
  MetrologicalCodePair pair(sc.psi, xi);
  CHECK_FALSE(equality_conditions(sc.psi, xi, sc.channel).holds);
  for (double eps : {1e-3, 0.1, 0.5}) {
    PerturbedIsometry p = restore_equality_perturbation(stinespring(sc.channel), pair, eps);
    CHECK(p.distance <= eps + 1e-12);
    CHECK(max_abs(p.iso.V.adjoint() * p.iso.V - identity(2)) < 1e-12);
    CHECK(equality_conditions(sc.psi, xi, channel_from_stinespring(p.iso)).holds);
  }
}

TEST_CASE("equality restoration preserving zero loss") {
  IsingScenario is = code422_ising(2.0, 0.0, 0.0);
  MetrologicalCodePair pair(is.psi, is.hbar_psi);
  KrausChannel ch = located_erasure(1, 0.4, 4);
  for (double eps : {1e-2, 0.3}) {
    PerturbedIsometry p = restore_equality_perturbation(stinespring(ch), pair, eps, true);
    CHECK(p.flag_added);
    CHECK(p.distance <= eps + 1e-12);
    KrausChannel out = channel_from_stinespring(p.iso);
    CHECK(out.trace_preserving());
    CHECK(zero_loss_check(pair, out).holds);
    CHECK(equality_conditions(pair.psi, pair.xi, out).holds);
  }
  CHECK_THROWS(restore_equality_perturbation(stinespring(ch), pair, 1.5, true));
  // zero loss fails under Z dephasing of the repetition code
  MetrologyScenario rep = repetition_code(2, partial_dephasing_z(0.2));
  MetrologicalCodePair rp(rep.psi, xi_vector(rep.psi, rep.H));
  CHECK_THROWS_AS(restore_equality_perturbation(stinespring(rep.channel), rp, 0.1, true), std::invalid_argument);
}
