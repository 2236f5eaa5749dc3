#include "doctest.h"

#include "qfilab/channels.hpp"
#include "qfilab/kernels.hpp"

#include <array>
#include <cmath>

using namespace qfl;

namespace {
// Choi matrix sum_ij |i><j| (x) N(|i><j|): equal Choi matrices mean equal maps.
Mat choi(const KrausChannel& ch) {
  const int d = ch.in_dim(), m = ch.out_dim();
  Mat C = Mat::Zero(d * m, d * m);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat Eij = Mat::Zero(d, d);
      Eij(i, j) = 1;
      C.block(i * m, j * m, m, m) = ch.apply(Eij);
    }
  return C;
}
}  // namespace

TEST_CASE("standard channels are trace preserving") {
  for (const auto& ch : {partial_dephasing_z(0.3), complete_dephasing_x(), amplitude_damping(0.4), bit_flip(0.2),
                         depolarizing(0.5), located_erasure(1, 0.3, 3), identity_channel(3)}) {
    CHECK(ch.trace_preserving());
    CHECK(max_abs(ch.adjoint_identity() - identity(ch.in_dim())) < 1e-13);
  }
  CHECK_FALSE(random_channel(3, 2, 2, 1, 0.7).trace_preserving());
}

TEST_CASE("Bloch-vector action of the qubit channels") {
  Mat rho = 0.5 * (identity(2) + 0.3 * pauli_x() + 0.4 * pauli_y() + 0.5 * pauli_z());
  auto bloch = [](const Mat& r) {
    return std::array<double, 3>{(r * pauli_x()).trace().real(), (r * pauli_y()).trace().real(),
                                 (r * pauli_z()).trace().real()};
  };
  const double p = 0.3;
  auto b = bloch(partial_dephasing_z(p).apply(rho));
  CHECK(b[0] == doctest::Approx(0.3 * (1 - p)));
  CHECK(b[1] == doctest::Approx(0.4 * (1 - p)));
  CHECK(b[2] == doctest::Approx(0.5));
  b = bloch(bit_flip(p).apply(rho));
  CHECK(b[0] == doctest::Approx(0.3));
  CHECK(b[1] == doctest::Approx(0.4 * (1 - p)));
  CHECK(b[2] == doctest::Approx(0.5 * (1 - p)));
  b = bloch(depolarizing(p).apply(rho));
  CHECK(b[2] == doctest::Approx(0.5 * (1 - p)));
  b = bloch(complete_dephasing_x().apply(rho));
  CHECK(b[0] == doctest::Approx(0.3));
  CHECK(std::abs(b[1]) < 1e-14);
  CHECK(std::abs(b[2]) < 1e-14);
  // level 0 decays into level 1
  b = bloch(amplitude_damping(p).apply(rho));
  CHECK(b[2] == doctest::Approx((1 + 0.5) * (1 - p) - 1));
  CHECK(b[0] == doctest::Approx(0.3 * std::sqrt(1 - p)));
}

TEST_CASE("complementary channel matches the Stinespring partial trace") {
  for (int s = 0; s < 5; ++s) {
    KrausChannel ch = random_channel(3, 2, 4, 100 + s);
    Stinespring st = stinespring(ch);
    CHECK(max_abs(st.V.adjoint() * st.V - identity(3)) < 1e-12);
    Mat rho = random_density(3, 2, 200 + s);
    Mat joint = st.V * rho * st.V.adjoint();
    CHECK(max_abs(partial_trace(joint, {st.out_dim, st.env_dim}, {0}) - ch.apply(rho)) < 1e-12);
    CHECK(max_abs(partial_trace(joint, {st.out_dim, st.env_dim}, {1}) - complementary(ch).apply(rho)) < 1e-12);
    // complementing twice gives back a channel with the same action
    CHECK(max_abs(choi(complementary(complementary(ch))) - choi(ch)) < 1e-12);
  }
}

TEST_CASE("adjoint map satisfies tr(W N(X)) = tr(N^dag(W) X)") {
  KrausChannel ch = random_channel(3, 4, 3, 5);
  Mat X = random_hermitian(3, 6) + I1 * random_hermitian(3, 7), W = random_hermitian(4, 8);
  CHECK(std::abs((W * ch.apply(X)).trace() - (adjoint(ch).apply(W) * X).trace()) < 1e-12);
}

TEST_CASE("tensor power equals the site-by-site product") {
  KrausChannel ad = amplitude_damping(0.2);
  TensorPower tp = tensor_power(ad, 3);
  CHECK(tp.channel.env_dim() == 8);
  CHECK(tp.strings.size() == 8);
  Mat rho = random_density(8, 3, 9);
  CHECK(max_abs(tp.channel.apply(rho) - apply_product(ad, 3, rho)) < 1e-13);
  Mat by_hand = kron_all({ad.kraus()[1], ad.kraus()[0], ad.kraus()[1]});
  bool found = false;
  for (std::size_t i = 0; i < tp.strings.size(); ++i)
    if (tp.strings[i] == std::vector<int>{1, 0, 1}) {
      found = true;
      CHECK(max_abs(tp.channel.kraus()[i] - by_hand) < 1e-15);
      CHECK(tp.weight[i] == 2);
    }
  CHECK(found);
  CHECK_THROWS(tensor_power(depolarizing(0.1), 7, 4096));
}

TEST_CASE("compose and embed_local") {
  KrausChannel a = amplitude_damping(0.3), b = partial_dephasing_z(0.2);
  Mat rho = random_density(2, 2, 3);
  CHECK(max_abs(compose(b, a).apply(rho) - b.apply(a.apply(rho))) < 1e-14);
  KrausChannel e = embed_local(a, 2, 3);
  Mat r3 = kron_all({random_density(2, 1, 4), random_density(2, 2, 5), random_density(2, 2, 6)});
  Mat want = kron(kron(partial_trace(r3, {2, 2, 2}, {0}), partial_trace(r3, {2, 2, 2}, {1})),
                  a.apply(partial_trace(r3, {2, 2, 2}, {2})));
  CHECK(max_abs(e.apply(r3) - want) < 1e-13);
}

TEST_CASE("located erasure flags the erased site") {
  KrausChannel er = located_erasure(0, 1.0, 2);
  CHECK(er.out_dim() == 6);
  Mat rho = random_density(4, 4, 11);
  Mat out = er.apply(rho);
  // with p = 1 everything sits in the erasure level of site 0
  CHECK(std::abs(out.block(4, 4, 2, 2).trace() - 1.0) < 1e-13);
  CHECK(max_abs(out.block(4, 4, 2, 2) - partial_trace(rho, {2, 2}, {1})) < 1e-13);
}

TEST_CASE("redundant Kraus lists are kept and reported") {
  KrausChannel dup(2, 2, {std::sqrt(0.5) * identity(2), std::sqrt(0.5) * identity(2)});
  CHECK(dup.env_dim() == 2);
  CHECK(dup.kraus_rank() == 1);
  CHECK(channel_to_json(dup).value("redundant_kraus", 0) == 1);
  CHECK(amplitude_damping(0.3).kraus_rank() == 2);
}

TEST_CASE("JSON round trip") {
  KrausChannel ch = random_channel(2, 3, 2, 44);
  KrausChannel back = channel_from_json(channel_to_json(ch));
  REQUIRE(back.env_dim() == ch.env_dim());
  for (int k = 0; k < ch.env_dim(); ++k) CHECK(max_abs(back.kraus()[k] - ch.kraus()[k]) < 1e-15);
  CHECK(max_abs(choi(standard_channel("amplitude_damping", {{"p", 0.25}})) - choi(amplitude_damping(0.25))) == 0.0);
  CHECK_THROWS_AS(standard_channel("no_such_channel"), std::invalid_argument);
}

TEST_CASE("invalid input is rejected") {
  CHECK_THROWS(amplitude_damping(1.5));
  CHECK_THROWS(located_erasure(3, 0.1, 3));
  CHECK_THROWS(KrausChannel(2, 2, {identity(2), identity(2)}));  // not trace non-increasing
}
