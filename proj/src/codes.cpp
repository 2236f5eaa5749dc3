#include "qfilab/codes.hpp"
#include "qfilab/clock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qfl {

namespace {

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// Exponent of i in sigma(x1,z1) sigma(x2,z2) = i^g sigma(x1^x2, z1^z2).
int g_phase(int x1, int z1, int x2, int z2) {
  if (!x1 && !z1) return 0;
  if (x1 && z1) return z2 - x2;
  if (x1 && !z1) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}

int qubits_of(const Vec& v) {
  int n = 0;
  while ((1L << n) < v.size()) ++n;
  if ((1L << n) != v.size()) throw std::invalid_argument("state length is not a power of two");
  return n;
}

}  // namespace

PauliString::PauliString(int n) : n_(n), xw_((n + 63) / 64, 0), zw_((n + 63) / 64, 0) {
  if (n < 1) throw std::invalid_argument("PauliString: n must be >= 1");
}

bool PauliString::x(int q) const { return (xw_[q / 64] >> (q % 64)) & 1u; }
bool PauliString::z(int q) const { return (zw_[q / 64] >> (q % 64)) & 1u; }

char PauliString::letter(int q) const {
  const bool a = x(q), b = z(q);
  return a ? (b ? 'Y' : 'X') : (b ? 'Z' : 'I');
}

void PauliString::set(int q, char c) {
  if (q < 0 || q >= n_) throw std::out_of_range("PauliString: qubit out of range");
  const std::uint64_t bit = std::uint64_t{1} << (q % 64);
  xw_[q / 64] &= ~bit;
  zw_[q / 64] &= ~bit;
  switch (c) {
    case 'I': break;
    case 'X': xw_[q / 64] |= bit; break;
    case 'Z': zw_[q / 64] |= bit; break;
    case 'Y':
      xw_[q / 64] |= bit;
      zw_[q / 64] |= bit;
      break;
    default: throw std::invalid_argument(std::string("PauliString: bad letter '") + c + "'");
  }
}

PauliString PauliString::single(int n, int qubit, char letter) {
  PauliString p(n);
  p.set(qubit, letter);
  return p;
}

PauliString PauliString::parse(const std::string& text) {
  std::size_t pos = 0;
  int phase = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  const std::string letters = text.substr(pos);
  if (letters.empty()) throw std::invalid_argument("PauliString::parse: no letters in '" + text + "'");
  PauliString p(static_cast<int>(letters.size()));
  for (std::size_t q = 0; q < letters.size(); ++q) p.set(static_cast<int>(q), letters[q]);
  p.set_phase(phase);
  return p;
}

int PauliString::weight() const {
  int w = 0;
  for (std::size_t i = 0; i < xw_.size(); ++i) w += std::popcount(xw_[i] | zw_[i]);
  return w;
}

std::vector<int> PauliString::support() const {
  std::vector<int> s;
  for (int q = 0; q < n_; ++q)
    if (x(q) || z(q)) s.push_back(q);
  return s;
}

std::uint64_t PauliString::support_mask() const {
  if (n_ > 64) throw std::length_error("PauliString::support_mask: n > 64");
  return xw_[0] | zw_[0];
}

std::string PauliString::str() const {
  static const char* prefix[] = {"+", "+i", "-", "-i"};
  std::string s = prefix[phase_];
  for (int q = 0; q < n_; ++q) s += letter(q);
  return s;
}

Mat PauliString::to_matrix() const {
  std::vector<Mat> ops;
  for (int q = 0; q < n_; ++q) {
    switch (letter(q)) {
      case 'X': ops.push_back(pauli_x()); break;
      case 'Y': ops.push_back(pauli_y()); break;
      case 'Z': ops.push_back(pauli_z()); break;
      default: ops.push_back(identity(2));
    }
  }
  return ipow(phase_) * kron_all(ops);
}

Vec PauliString::apply(const Vec& v) const {
  if (n_ > 62) throw std::length_error("PauliString::apply: n > 62");
  if (v.size() != (1L << n_)) throw std::invalid_argument("PauliString::apply: dimension mismatch");
  std::uint64_t xm = 0, zm = 0;
  for (int q = 0; q < n_; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n_ - 1 - q);
    if (x(q)) xm |= bit;
    if (z(q)) zm |= bit;
  }
  const cplx base = ipow(phase_ + std::popcount(xm & zm));
  Vec out(v.size());
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(v.size()); ++b) {
    const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    out[b ^ xm] = base * sign * v[b];
  }
  return out;
}

bool PauliString::operator==(const PauliString& o) const {
  return n_ == o.n_ && phase_ == o.phase_ && xw_ == o.xw_ && zw_ == o.zw_;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("multiply: size mismatch");
  PauliString r(a.n_);
  int ph = a.phase_ + b.phase_;
  for (int q = 0; q < a.n_; ++q) ph += g_phase(a.x(q), a.z(q), b.x(q), b.z(q));
  for (std::size_t i = 0; i < r.xw_.size(); ++i) {
    r.xw_[i] = a.xw_[i] ^ b.xw_[i];
    r.zw_[i] = a.zw_[i] ^ b.zw_[i];
  }
  r.set_phase(ph);
  return r;
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("commutes: size mismatch");
  int parity = 0;
  for (std::size_t i = 0; i < a.xw_.size(); ++i)
    parity += std::popcount((a.xw_[i] & b.zw_[i]) ^ (a.zw_[i] & b.xw_[i]));
  return parity % 2 == 0;
}

StabilizerGroup::StabilizerGroup(std::vector<PauliString> generators) : gens_(std::move(generators)) {
  if (gens_.empty()) throw std::invalid_argument("StabilizerGroup: no generators");
  n_ = gens_[0].n();
  for (const auto& g : gens_) {
    if (g.n() != n_) throw std::invalid_argument("StabilizerGroup: inconsistent generators (size)");
    if (!g.hermitian()) throw std::invalid_argument("StabilizerGroup: inconsistent generators (phase " + g.str() + ")");
  }
  for (std::size_t i = 0; i < gens_.size(); ++i)
    for (std::size_t j = i + 1; j < gens_.size(); ++j)
      if (!commutes(gens_[i], gens_[j]))
        throw std::invalid_argument("StabilizerGroup: inconsistent generators (" + gens_[i].str() + " and " +
                                    gens_[j].str() + " anticommute)");
  // Independence over GF(2) on the 2n-bit symplectic vectors.
  std::vector<std::vector<bool>> rows;
  for (const auto& g : gens_) {
    std::vector<bool> r(2 * n_);
    for (int q = 0; q < n_; ++q) {
      r[q] = g.x(q);
      r[n_ + q] = g.z(q);
    }
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (int c = 0; c < 2 * n_ && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && !rows[piv][c]) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c])
        for (int k = 0; k < 2 * n_; ++k) rows[r][k] = rows[r][k] ^ rows[rank][k];
    ++rank;
  }
  if (rank != gens_.size()) throw std::invalid_argument("StabilizerGroup: inconsistent generators (dependent)");
}

StabilizerGroup StabilizerGroup::parse(const std::string& lines) {
  std::istringstream is(lines);
  std::vector<PauliString> gens;
  std::string tok;
  while (is >> tok) gens.push_back(PauliString::parse(tok));
  return StabilizerGroup(std::move(gens));
}

PauliString StabilizerGroup::element(const std::vector<int>& subset) const {
  PauliString p(n_);
  for (int i : subset) p = multiply(p, gens_.at(i));
  return p;
}

MetrologicalCodePair::MetrologicalCodePair(Vec psi_, Vec xi_) : psi(std::move(psi_)), xi(std::move(xi_)) {
  if (psi.size() != xi.size()) throw std::invalid_argument("MetrologicalCodePair: size mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("MetrologicalCodePair: psi not normalized");
  const double nx = xi.norm();
  if (nx <= 0.0) throw std::invalid_argument("MetrologicalCodePair: xi is zero");
  xi /= nx;
  if (std::abs(psi.dot(xi)) > 1e-10) throw std::invalid_argument("MetrologicalCodePair: psi and xi not orthogonal");
}

ZeroLossCheck zero_loss_check(const MetrologicalCodePair& pair, const std::vector<Mat>& errors) {
  ZeroLossResidual z = zero_loss_residual(pair.psi, pair.xi, errors);
  ZeroLossCheck out;
  out.worst_residual = z.worst;
  out.k = z.k;
  out.kp = z.kp;
  out.holds = z.worst <= 1e-9 * pair.xi.norm();
  const int K = static_cast<int>(errors.size());
  Mat C(K, K);
  std::vector<Vec> a, b;
  for (const auto& E : errors) {
    a.push_back(E * pair.psi);
    b.push_back(E * pair.xi);
  }
  for (int k = 0; k < K; ++k)
    for (int kp = 0; kp < K; ++kp) C(k, kp) = a[kp].dot(b[k]) + b[kp].dot(a[k]);
  out.env_norm = op_norm(C);
  return out;
}

ZeroLossCheck zero_loss_check(const MetrologicalCodePair& pair, const KrausChannel& ch) {
  if (ch.in_dim() != pair.psi.size()) throw std::invalid_argument("zero_loss_check: dimension mismatch");
  return zero_loss_check(pair, ch.kraus());
}

int metrological_distance(const MetrologicalCodePair& pair, int max_qubits) {
  const int n = qubits_of(pair.psi);
  if (n > max_qubits) {
    std::ostringstream os;
    os << "metrological_distance: n=" << n << " exceeds enumeration cap " << max_qubits
       << "; use stabilizer_certify for stabilizer constructions";
    throw std::length_error(os.str());
  }
  static const char letters[3] = {'X', 'Y', 'Z'};
  for (int w = 1; w <= n; ++w) {
    std::vector<int> sel(n, 0);
    std::fill(sel.begin(), sel.begin() + w, 1);
    do {
      std::vector<int> sites;
      for (int q = 0; q < n; ++q)
        if (sel[q]) sites.push_back(q);
      long combos = 1;
      for (int i = 0; i < w; ++i) combos *= 3;
      for (long c = 0; c < combos; ++c) {
        PauliString O(n);
        long r = c;
        for (int i = 0; i < w; ++i) {
          O.set(sites[i], letters[r % 3]);
          r /= 3;
        }
        const double val = 2.0 * pair.psi.dot(O.apply(pair.xi)).real();
        if (std::abs(val) > 1e-9) return w;
      }
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
  return n + 1;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    default: return "search_exhausted";
  }
}

namespace {

struct Candidate {
  std::uint64_t support;
  std::uint64_t subset;
};

}  // namespace

Certification stabilizer_certify(const StabilizerGroup& group, const std::vector<PauliString>& H, int error_weight,
                                 SearchStrategy strategy) {
  const int n = group.n();
  const int l = static_cast<int>(group.generators().size());
  if (n > 64) throw std::length_error("stabilizer_certify: n > 64");
  if (l > 63) throw std::length_error("stabilizer_certify: more than 63 generators");
  if (H.empty() || H.size() > 64) throw std::invalid_argument("stabilizer_certify: H needs 1..64 Pauli terms");
  for (const auto& h : H)
    if (h.n() != n) throw std::invalid_argument("stabilizer_certify: H size mismatch");

  // anti[i] has bit t set when generator i anticommutes with term t of H.
  std::vector<std::uint64_t> anti(l, 0), xs(l), zs(l);
  bool any = false;
  const std::uint64_t all_terms = H.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << H.size()) - 1;
  for (int i = 0; i < l; ++i) {
    const auto& g = group.generators()[i];
    for (std::size_t t = 0; t < H.size(); ++t)
      if (!commutes(g, H[t])) anti[i] |= std::uint64_t{1} << t;
    any = any || anti[i] != 0;
    std::uint64_t xm = 0, zm = 0;
    for (int q = 0; q < n; ++q) {
      if (g.x(q)) xm |= std::uint64_t{1} << q;
      if (g.z(q)) zm |= std::uint64_t{1} << q;
    }
    xs[i] = xm;
    zs[i] = zm;
  }
  if (!any) throw std::invalid_argument("stabilizer_certify: H commutes with every generator");

  std::vector<Candidate> cands;
  const bool exhaustive = l <= strategy.exhaustive_limit;
  auto consider = [&](std::uint64_t subset, std::uint64_t x, std::uint64_t z, std::uint64_t a) {
    if (a == all_terms) cands.push_back({x | z, subset});
  };
  if (exhaustive) {
    // Gray-code walk over all 2^l subsets.
    std::uint64_t x = 0, z = 0, a = 0, subset = 0;
    const std::uint64_t total = std::uint64_t{1} << l;
    for (std::uint64_t k = 1; k < total; ++k) {
      const int i = std::countr_zero(k);
      subset ^= std::uint64_t{1} << i;
      x ^= xs[i];
      z ^= zs[i];
      a ^= anti[i];
      consider(subset, x, z, a);
    }
  } else {
    std::vector<int> idx;
    auto rec = [&](auto&& self, int start, std::uint64_t subset, std::uint64_t x, std::uint64_t z, std::uint64_t a,
                   int depth) -> void {
      for (int i = start; i < l; ++i) {
        const std::uint64_t s2 = subset | (std::uint64_t{1} << i);
        consider(s2, x ^ xs[i], z ^ zs[i], a ^ anti[i]);
        if (depth + 1 < strategy.depth) self(self, i + 1, s2, x ^ xs[i], z ^ zs[i], a ^ anti[i], depth + 1);
      }
    };
    rec(rec, 0, 0, 0, 0, 0, 0);
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& p, const Candidate& q) {
    const int wp = std::popcount(p.support), wq = std::popcount(q.support);
    if (wp != wq) return wp < wq;
    const int gp = std::popcount(p.subset), gq = std::popcount(q.subset);
    if (gp != gq) return gp < gq;
    return p.subset < q.subset;
  });

  Certification out;
  out.error_weight = error_weight;
  out.candidates = static_cast<long>(cands.size());
  auto to_list = [](std::uint64_t m) {
    std::vector<int> v;
    for (int i = 0; i < 64; ++i)
      if ((m >> i) & 1u) v.push_back(i);
    return v;
  };
  for (int w = 0; w <= std::min(error_weight, n); ++w) {
    std::vector<int> sel(n, 0);
    std::fill(sel.begin(), sel.begin() + w, 1);
    do {
      std::uint64_t mask = 0;
      for (int q = 0; q < n; ++q)
        if (sel[q]) mask |= std::uint64_t{1} << q;
      auto it = std::find_if(cands.begin(), cands.end(), [&](const Candidate& c) { return (c.support & mask) == 0; });
      if (it == cands.end()) {
        out.verdict = exhaustive ? Verdict::refuted : Verdict::search_exhausted;
        out.failed_support = to_list(mask);
        return out;
      }
      out.witnesses[to_list(mask)] = to_list(it->subset);
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
  out.verdict = Verdict::certified;
  return out;
}

Vec stabilizer_state(const StabilizerGroup& group) {
  const int n = group.n();
  if (n > 12) throw std::length_error("stabilizer_state: dense construction limited to n <= 12");
  const long d = 1L << n;
  for (long b = 0; b < d; ++b) {
    Vec v = Vec::Zero(d);
    v[b] = 1;
    for (const auto& g : group.generators()) v = 0.5 * (v + g.apply(v));
    const double nv = v.norm();
    if (nv > 1e-8) return v / nv;
  }
  throw NumericalError("stabilizer_state: projector annihilates every basis vector");
}

StabilizerGroup anti_group_flip(const StabilizerGroup& group) {
  std::vector<PauliString> gens = group.generators();
  for (auto& g : gens) g.set_phase(g.phase() + 2);
  return StabilizerGroup(std::move(gens));
}

namespace {

// Reshape V v into the dB x K matrix with entry (b, e).
Mat split(const Stinespring& V, const Vec& v) {
  Vec w = V.V * v;
  Mat Y(V.out_dim, V.env_dim);
  for (int b = 0; b < V.out_dim; ++b)
    for (int e = 0; e < V.env_dim; ++e) Y(b, e) = w[b * V.env_dim + e];
  return Y;
}

std::vector<Vec> kernel_basis(const Mat& rho) {
  Spectral s = eig_hermitian(rho);
  std::vector<Vec> out;
  for (int i = 0; i < s.values.size(); ++i)
    if (s.values[i] < s.zero_threshold) out.push_back(s.vectors.col(i));
  return out;
}

Mat support_proj(const Mat& rho) { return eig_hermitian(rho).support_projector(); }

}  // namespace

KrausChannel channel_from_stinespring(const Stinespring& V) {
  std::vector<Mat> ops;
  for (int k = 0; k < V.env_dim; ++k) {
    Mat E(V.out_dim, V.V.cols());
    for (int b = 0; b < V.out_dim; ++b) E.row(b) = V.V.row(b * V.env_dim + k);
    ops.push_back(std::move(E));
  }
  return KrausChannel(static_cast<int>(V.V.cols()), V.out_dim, std::move(ops));
}

PerturbedIsometry restore_equality_perturbation(const Stinespring& V, const MetrologicalCodePair& pair,
                                                double epsilon, bool preserve_zero_loss, const std::optional<Mat>& G_B) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("restore_equality_perturbation: epsilon must be > 0");
  PerturbedIsometry out;
  out.iso = V;
  KrausChannel ch = channel_from_stinespring(V);
  const Vec& psi = pair.psi;
  const Vec& xi = pair.xi;

  if (!preserve_zero_loss) {
    if (epsilon > 2.0) throw std::invalid_argument("restore_equality_perturbation: epsilon must be <= 2");
    if (equality_conditions(psi, xi, ch).holds) return out;
    Mat Y = split(V, psi);
    std::vector<Vec> kb = kernel_basis(Y * Y.adjoint());
    std::vector<Vec> ke = kernel_basis((Y.adjoint() * Y).transpose());
    const int K = static_cast<int>(std::min(kb.size(), ke.size()));
    if (K == 0) return out;
    Vec chi = Vec::Zero(V.V.rows());
    for (int k = 0; k < K; ++k)
      for (int b = 0; b < V.out_dim; ++b)
        for (int e = 0; e < V.env_dim; ++e) chi[b * V.env_dim + e] += kb[k][b] * ke[k][e];
    chi /= std::sqrt(static_cast<double>(K));
    Vec mu1 = V.V * psi;
    mu1 /= mu1.norm();
    // Rotation by alpha in span{mu1, chi}; ||W - I|| = 2 sin(alpha/2) = epsilon.
    const double alpha = 2.0 * std::asin(epsilon / 2.0);
    Mat M1 = mu1.adjoint() * V.V, M2 = chi.adjoint() * V.V;
    out.iso.V = V.V + (std::cos(alpha) - 1.0) * (mu1 * M1 + chi * M2) + std::sin(alpha) * (chi * M1 - mu1 * M2);
    out.alpha = alpha;
    out.distance = op_norm(out.iso.V - V.V);
    return out;
  }

  if (epsilon > 1.0) throw std::invalid_argument("restore_equality_perturbation: epsilon must be <= 1");
  ZeroLossCheck z = zero_loss_check(pair, ch);
  if (!z.holds) {
    std::ostringstream os;
    os << "restore_equality_perturbation: zero-loss condition fails (residual " << z.worst_residual << ")";
    throw std::invalid_argument(os.str());
  }
  const int dA = static_cast<int>(psi.size());
  Mat Zt = identity(dA) - 2.0 * projector(xi);  // flips psi <-> xi sign, identity elsewhere
  const double alpha = epsilon / 2.0;
  out.alpha = alpha;
  const int K = V.env_dim;
  if (G_B) {
    const Mat& G = *G_B;
    if (G.rows() != V.out_dim || G.cols() != V.out_dim) throw std::invalid_argument("G_B: shape mismatch");
    if (max_abs(G.adjoint() * G - identity(V.out_dim)) > 1e-9) throw std::invalid_argument("G_B: not unitary");
    Mat Pr = support_proj(ch.apply(projector(psi)));
    Mat Pz = support_proj(ch.apply(projector(xi)));
    const double c1 = op_norm(Pr * G * Pr), c2 = op_norm(Pz * G * Pz), c3 = op_norm(Pr * G * Pz),
                 c4 = op_norm(Pz * G * Pr);
    if (std::max({c1, c2, c3, c4}) > 1e-9) {
      std::ostringstream os;
      os << "G_B violates its projector conditions: |P_rho G P_rho|=" << c1 << " |P_zeta G P_zeta|=" << c2
         << " |P_rho G P_zeta|=" << c3 << " |P_zeta G P_rho|=" << c4;
      throw std::invalid_argument(os.str());
    }
    Mat VZ = V.V * Zt;
    Mat GVZ(VZ.rows(), VZ.cols());
    for (int b = 0; b < V.out_dim; ++b) {
      GVZ.middleRows(static_cast<Eigen::Index>(b) * K, K).setZero();
      for (int c = 0; c < V.out_dim; ++c)
        if (G(b, c) != cplx(0)) GVZ.middleRows(static_cast<Eigen::Index>(b) * K, K) += G(b, c) * VZ.middleRows(static_cast<Eigen::Index>(c) * K, K);
    }
    out.iso.V = std::cos(alpha) * V.V + std::sin(alpha) * GVZ;
    out.distance = op_norm(out.iso.V - V.V);
    return out;
  }
  // Flag qubit appended to B: b' = 2 b + f, G_B = I (x) X_F.
  Stinespring flagged;
  flagged.out_dim = 2 * V.out_dim;
  flagged.env_dim = K;
  Mat Vpad = Mat::Zero(static_cast<Eigen::Index>(flagged.out_dim) * K, dA);
  Mat Vnew = Mat::Zero(Vpad.rows(), dA);
  Mat VZ = V.V * Zt;
  for (int b = 0; b < V.out_dim; ++b) {
    Vpad.middleRows(static_cast<Eigen::Index>(2 * b) * K, K) = V.V.middleRows(static_cast<Eigen::Index>(b) * K, K);
    Vnew.middleRows(static_cast<Eigen::Index>(2 * b) * K, K) = std::cos(alpha) * V.V.middleRows(static_cast<Eigen::Index>(b) * K, K);
    Vnew.middleRows(static_cast<Eigen::Index>(2 * b + 1) * K, K) = std::sin(alpha) * VZ.middleRows(static_cast<Eigen::Index>(b) * K, K);
  }
  flagged.V = Vnew;
  out.iso = flagged;
  out.flag_added = true;
  out.distance = op_norm(Vnew - Vpad);
  return out;
}

}  // namespace qfl

namespace qfl {

CodeConstruction steane_construction() {
  CodeConstruction c;
  c.name = "steane";
  c.group = StabilizerGroup::parse(
      "+XXXIIII\n+XIIXXII\n+IXIXIXI\n+XXXYYYY\n+XYYXXYY\n+YXYXYXY\n+XXXXXXX");
  c.H = {PauliString::parse("+ZZZIIII")};
  c.error_weight = 2;
  return c;
}

CodeConstruction aux422_construction() {
  CodeConstruction c;
  c.name = "aux422";
  c.group = StabilizerGroup::parse("+XXIII\n+IIXXI\n+XIXII\n+IIIIX\n+ZZZZI");
  c.H = {PauliString::parse("+YIIZY")};
  c.error_weight = 2;
  return c;
}

CodeConstruction toric_construction(int L) {
  if (L < 2 || L % 2 != 0) throw std::invalid_argument("toric_construction: L must be even and >= 2");
  const int n = 2 * L * L;
  auto h = [L](int x, int y) { return ((y + L) % L) * L + (x + L) % L; };
  auto v = [L](int x, int y) { return L * L + ((y + L) % L) * L + (x + L) % L; };
  std::vector<PauliString> gens;
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      if (x == L - 1 && y == L - 1) continue;  // product of all stars is the identity
      PauliString A(n);
      for (int q : {h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)}) A.set(q, 'X');
      gens.push_back(A);
    }
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      if (x == L - 1 && y == L - 1) continue;
      PauliString B(n);
      for (int q : {h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)}) B.set(q, 'Z');
      gens.push_back(B);
    }
  PauliString z1(n), z2(n);
  for (int x = 0; x < L; ++x) z1.set(h(x, 0), 'Z');
  for (int y = 0; y < L; ++y) z2.set(v(0, y), 'Z');
  gens.push_back(z1);
  gens.push_back(z2);

  PauliString H(n);
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; x += 2) {
      H.set(h(x, y), 'Z');
      H.set(v(x, y), 'X');
    }
  CodeConstruction c;
  c.name = "toric";
  c.group = StabilizerGroup(gens);
  c.H = {H};
  c.error_weight = L * L / 4 - 1;
  return c;
}

}  // namespace qfl
