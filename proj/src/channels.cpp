#include "qfilab/channels.hpp"
#include "qfilab/kernels.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qfl {

namespace {
void require_prob(const char* who, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << who << ": parameter p=" << p << " outside [0,1]";
    throw std::invalid_argument(os.str());
  }
}
}  // namespace

KrausChannel::KrausChannel(int in_dim, int out_dim, std::vector<Mat> kraus)
    : in_(in_dim), out_(out_dim), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("KrausChannel: empty Kraus set");
  for (const auto& E : kraus_)
    if (E.rows() != out_ || E.cols() != in_)
      throw std::invalid_argument("KrausChannel: Kraus operator has wrong shape");
  Mat Q = adjoint_identity();
  const double top = eig_hermitian(Q).values[0];
  if (top > 1.0 + 1e-10) {
    std::ostringstream os;
    os << "KrausChannel: sum E^dag E has eigenvalue " << top << " > 1";
    throw std::invalid_argument(os.str());
  }
  tp_ = max_abs(Q - identity(in_)) <= 1e-10;
}

int KrausChannel::kraus_rank() const {
  Eigen::MatrixXcd M(static_cast<Eigen::Index>(in_) * out_, env_dim());
  for (int k = 0; k < env_dim(); ++k)
    M.col(k) = Eigen::Map<const Eigen::VectorXcd>(kraus_[k].data(), kraus_[k].size());
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

Mat KrausChannel::apply(const Mat& X) const {
  if (X.rows() != in_ || X.cols() != in_) throw std::invalid_argument("apply: dimension mismatch");
  return kernels::kraus_apply_parallel(kraus_, X);
}

Mat KrausChannel::adjoint_identity() const {
  Mat Q = Mat::Zero(in_, in_);
  for (const auto& E : kraus_) Q += E.adjoint() * E;
  return Q;
}

Mat apply(const KrausChannel& ch, const Mat& X) { return ch.apply(X); }

KrausChannel complementary(const KrausChannel& ch) {
  const int K = ch.env_dim();
  std::vector<Mat> F(ch.out_dim(), Mat::Zero(K, ch.in_dim()));
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < ch.out_dim(); ++j) F[j].row(k) = ch.kraus()[k].row(j);
  return KrausChannel(ch.in_dim(), K, std::move(F));
}

Mat AdjointMap::apply(const Mat& W) const {
  Mat out = Mat::Zero(kraus[0].rows(), kraus[0].rows());
  for (const auto& Ed : kraus) out += Ed * W * Ed.adjoint();
  return out;
}

AdjointMap adjoint(const KrausChannel& ch) {
  AdjointMap m;
  for (const auto& E : ch.kraus()) m.kraus.push_back(E.adjoint());
  return m;
}

TensorPower tensor_power(const KrausChannel& ch, int n, long cap) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  const int K = ch.env_dim();
  double count = std::pow(static_cast<double>(K), n);
  if (count > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "tensor_power: " << K << "^" << n << " Kraus operators exceeds cap " << cap
       << "; use the bounds/manybody combinatorial path";
    throw std::length_error(os.str());
  }
  TensorPower tp;
  const long total = static_cast<long>(count);
  std::vector<Mat> ops;
  ops.reserve(total);
  for (long idx = 0; idx < total; ++idx) {
    std::vector<int> x(n);
    long r = idx;
    for (int s = n - 1; s >= 0; --s) {
      x[s] = static_cast<int>(r % K);
      r /= K;
    }
    Mat E = Mat::Identity(1, 1);
    int w = 0;
    for (int s = 0; s < n; ++s) {
      E = kron(E, ch.kraus()[x[s]]);
      w += x[s] != 0;
    }
    ops.push_back(std::move(E));
    tp.strings.push_back(std::move(x));
    tp.weight.push_back(w);
  }
  int din = 1, dout = 1;
  for (int s = 0; s < n; ++s) {
    din *= ch.in_dim();
    dout *= ch.out_dim();
  }
  tp.channel = KrausChannel(din, dout, std::move(ops));
  return tp;
}

KrausChannel identity_channel(int d) { return KrausChannel(d, d, {identity(d)}); }

KrausChannel partial_dephasing_z(double p) {
  require_prob("partial_dephasing_Z", p);
  return KrausChannel(2, 2, {std::sqrt(1 - p / 2) * identity(2), std::sqrt(p / 2) * pauli_z()});
}

KrausChannel complete_dephasing_x() {
  Vec plus(2), minus(2);
  plus << 1, 1;
  minus << 1, -1;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  return KrausChannel(2, 2, {projector(plus), projector(minus)});
}

KrausChannel amplitude_damping(double p) {
  require_prob("amplitude_damping", p);
  // |up> = index 0 is the excited level.
  Mat E0 = Mat::Zero(2, 2), E1 = Mat::Zero(2, 2);
  E0(0, 0) = std::sqrt(1 - p);
  E0(1, 1) = 1;
  E1(1, 0) = std::sqrt(p);
  return KrausChannel(2, 2, {E0, E1});
}

KrausChannel bit_flip(double p) {
  require_prob("bit_flip", p);
  return KrausChannel(2, 2, {std::sqrt(1 - p / 2) * identity(2), std::sqrt(p / 2) * pauli_x()});
}

KrausChannel depolarizing(double p) {
  require_prob("depolarizing", p);
  return KrausChannel(2, 2,
                      {std::sqrt(1 - 3 * p / 4) * identity(2), std::sqrt(p / 4) * pauli_x(),
                       std::sqrt(p / 4) * pauli_y(), std::sqrt(p / 4) * pauli_z()});
}

KrausChannel located_erasure(int site, double p, int n) {
  require_prob("located_erasure", p);
  if (n < 1 || site < 0 || site >= n) throw std::invalid_argument("located_erasure: site out of range");
  Mat keep = Mat::Zero(3, 2);
  keep(0, 0) = keep(1, 1) = 1;
  Mat e0 = Mat::Zero(3, 2), e1 = Mat::Zero(3, 2);
  e0(2, 0) = 1;
  e1(2, 1) = 1;
  KrausChannel single(2, 3, {std::sqrt(1 - p) * keep, std::sqrt(p) * e0, std::sqrt(p) * e1});
  return embed_local(single, site, n);
}

KrausChannel embed_local(const KrausChannel& single, int site, int n) {
  if (single.in_dim() != 2) throw std::invalid_argument("embed_local: single-site channel must act on a qubit");
  if (site < 0 || site >= n) throw std::invalid_argument("embed_local: site out of range");
  const long left = 1L << site, right = 1L << (n - 1 - site);
  std::vector<Mat> ops;
  for (const auto& E : single.kraus())
    ops.push_back(kron(kron(identity(static_cast<int>(left)), E), identity(static_cast<int>(right))));
  return KrausChannel(static_cast<int>(left * right * 2), static_cast<int>(left * right * single.out_dim()),
                      std::move(ops));
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.in_dim() != first.out_dim()) throw std::invalid_argument("compose: dimension mismatch");
  std::vector<Mat> ops;
  for (const auto& A : second.kraus())
    for (const auto& B : first.kraus()) ops.push_back(A * B);
  return KrausChannel(first.in_dim(), second.out_dim(), std::move(ops));
}

Mat apply_product(const KrausChannel& single, int n, const Mat& X) {
  const int din = single.in_dim(), dout = single.out_dim();
  long total = 1;
  for (int s = 0; s < n; ++s) total *= din;
  if (X.rows() != total || X.cols() != total) throw std::invalid_argument("apply_product: dimension mismatch");
  Mat cur = X;
  // Sites before s already carry dout, sites after s still carry din.
  for (int s = 0; s < n; ++s) {
    long left = 1, right = 1;
    for (int i = 0; i < s; ++i) left *= dout;
    for (int i = s + 1; i < n; ++i) right *= din;
    Mat next = Mat::Zero(left * dout * right, left * dout * right);
    for (const auto& E : single.kraus()) {
      // (I_left (x) E (x) I_right) cur (...)^dag via block indexing.
      Mat tmp = Mat::Zero(left * dout * right, left * din * right);
      for (long l = 0; l < left; ++l)
        for (int a = 0; a < dout; ++a)
          for (int b = 0; b < din; ++b) {
            const cplx e = E(a, b);
            if (e == cplx(0)) continue;
            tmp.middleRows((l * dout + a) * right, right) += e * cur.middleRows((l * din + b) * right, right);
          }
      Mat tmp2 = Mat::Zero(left * dout * right, left * dout * right);
      for (long l = 0; l < left; ++l)
        for (int a = 0; a < dout; ++a)
          for (int b = 0; b < din; ++b) {
            const cplx e = std::conj(E(a, b));
            if (e == cplx(0)) continue;
            tmp2.middleCols((l * dout + a) * right, right) += e * tmp.middleCols((l * din + b) * right, right);
          }
      next += tmp2;
    }
    cur = std::move(next);
  }
  return cur;
}

KrausChannel standard_channel(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double def) {
    auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };
  if (name == "identity") return identity_channel(static_cast<int>(get("d", 2)));
  if (name == "partial_dephasing_Z") return partial_dephasing_z(get("p", 0));
  if (name == "complete_dephasing_X") return complete_dephasing_x();
  if (name == "amplitude_damping") return amplitude_damping(get("p", 0));
  if (name == "bit_flip") return bit_flip(get("p", 0));
  if (name == "depolarizing") return depolarizing(get("p", 0));
  if (name == "located_erasure")
    return located_erasure(static_cast<int>(get("site", 0)), get("p", 0), static_cast<int>(get("n", 1)));
  throw std::invalid_argument("standard_channel: unknown channel '" + name + "'");
}

Stinespring stinespring(const KrausChannel& ch) {
  const int K = ch.env_dim();
  Stinespring s;
  s.out_dim = ch.out_dim();
  s.env_dim = K;
  s.V = Mat::Zero(static_cast<Eigen::Index>(ch.out_dim()) * K, ch.in_dim());
  for (int k = 0; k < K; ++k)
    for (int b = 0; b < ch.out_dim(); ++b) s.V.row(b * K + k) = ch.kraus()[k].row(b);
  return s;
}

namespace {
nlohmann::json mat_json(const Mat& M, bool imag) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(imag ? M(i, j).imag() : M(i, j).real());
    rows.push_back(r);
  }
  return rows;
}
}  // namespace

nlohmann::json channel_to_json(const KrausChannel& ch) {
  nlohmann::json j;
  j["in_dim"] = ch.in_dim();
  j["out_dim"] = ch.out_dim();
  j["kraus"] = nlohmann::json::array();
  for (const auto& E : ch.kraus()) j["kraus"].push_back({mat_json(E, false), mat_json(E, true)});
  if (ch.kraus_rank() < ch.env_dim()) j["redundant_kraus"] = ch.env_dim() - ch.kraus_rank();
  return j;
}

KrausChannel channel_from_json(const nlohmann::json& j) {
  const int in = j.at("in_dim"), out = j.at("out_dim");
  std::vector<Mat> ops;
  for (const auto& pair : j.at("kraus")) {
    Mat E(out, in);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) E(r, c) = cplx(pair.at(0).at(r).at(c), pair.at(1).at(r).at(c));
    ops.push_back(std::move(E));
  }
  return KrausChannel(in, out, std::move(ops));
}

KrausChannel random_channel(int in_dim, int out_dim, int K, std::uint64_t seed, double contraction) {
  // Stack K random blocks into an isometry via QR, then slice.
  Mat U = random_unitary(out_dim * K > in_dim ? out_dim * K : in_dim, seed);
  Mat V = U.leftCols(in_dim).topRows(static_cast<Eigen::Index>(out_dim) * K);
  // Renormalize so V^dag V = I exactly.
  Mat G = V.adjoint() * V;
  V = V * sqrt_pinv_psd(G);
  std::vector<Mat> ops;
  for (int k = 0; k < K; ++k) ops.push_back(std::sqrt(contraction) * V.middleRows(static_cast<Eigen::Index>(k) * out_dim, out_dim));
  return KrausChannel(in_dim, out_dim, std::move(ops));
}

}  // namespace qfl
