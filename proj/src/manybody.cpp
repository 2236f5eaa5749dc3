#include "qfilab/manybody.hpp"

#include "qfilab/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qfl {

namespace {
int popcount64(std::uint64_t v) { return __builtin_popcountll(v); }

std::uint64_t site_bit(int n, int j) { return std::uint64_t{1} << (n - 1 - j); }

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }
}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  const double v = std::exp(log_binomial(n, k));
  return v < 9e15 ? std::round(v) : v;
}

SymmetricState::SymmetricState(int n_, Vec a) : n(n_), amps(std::move(a)) {
  if (n < 1) throw std::invalid_argument("SymmetricState: n >= 1 required");
  if (amps.size() != n + 1) throw std::invalid_argument("SymmetricState: need n+1 amplitudes");
  const double nr = amps.norm();
  if (!(nr > 0)) throw std::invalid_argument("SymmetricState: zero vector");
  amps /= nr;
}

Vec SymmetricState::dense() const {
  if (n > 20) throw std::length_error("SymmetricState::dense: n > 20");
  const std::size_t dim = std::size_t{1} << n;
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    const int q = popcount64(b);
    v(static_cast<Eigen::Index>(b)) = amps(q) / std::sqrt(binomial(n, q));
  }
  return v;
}

SparseProbe::SparseProbe(int n_, std::vector<std::pair<std::uint64_t, cplx>> t, bool normalize) : n(n_), terms(std::move(t)) {
  if (n < 1 || n > 64) throw std::invalid_argument("SparseProbe: 1 <= n <= 64");
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i].first == terms[i - 1].first) throw std::invalid_argument("SparseProbe: repeated basis string");
  if (n < 64)
    for (const auto& [b, a] : terms)
      if (b >> n) throw std::invalid_argument("SparseProbe: basis string exceeds n bits");
  if (normalize) {
    const double nr = norm();
    if (!(nr > 0)) throw std::invalid_argument("SparseProbe: zero vector");
    for (auto& t2 : terms) t2.second /= nr;
  }
}

double SparseProbe::norm() const {
  double s = 0;
  for (const auto& t : terms) s += std::norm(t.second);
  return std::sqrt(s);
}

Vec SparseProbe::dense() const {
  if (n > 20) throw std::length_error("SparseProbe::dense: n > 20");
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  for (const auto& [b, a] : terms) v(static_cast<Eigen::Index>(b)) = a;
  return v;
}

Vec Probe::dense() const { return symmetric ? sym.dense() : sparse.dense(); }

SymmetricState dicke(int n, int q) {
  if (q < 0 || q > n) throw std::invalid_argument("dicke: need 0 <= q <= n");
  Vec a = Vec::Zero(n + 1);
  a(q) = 1;
  return SymmetricState(n, a);
}

double dicke_energy(int n, int q, double omega) { return 0.5 * omega * (n - 2 * q); }

Vec hbar_symmetric(const SymmetricState& s, double omega) {
  double mean = 0;
  for (int q = 0; q <= s.n; ++q) mean += std::norm(s.amps(q)) * dicke_energy(s.n, q, omega);
  Vec h(s.n + 1);
  for (int q = 0; q <= s.n; ++q) h(q) = (dicke_energy(s.n, q, omega) - mean) * s.amps(q);
  return h;
}

Mat reduce_symmetric(int n, int k, const Vec& a, const Vec& b) {
  if (k < 0 || k > n) throw std::invalid_argument("reduce_symmetric: need 0 <= k <= n");
  if (a.size() != n + 1 || b.size() != n + 1) throw std::invalid_argument("reduce_symmetric: need n+1 amplitudes");
  // |h_q^n> = sum_j c(q,j) |h_j^k>|h_{q-j}^{n-k}>
  auto c = [&](int q, int j) {
    if (j < 0 || j > k || q - j < 0 || q - j > n - k) return 0.0;
    return std::exp(0.5 * (log_binomial(k, j) + log_binomial(n - k, q - j) - log_binomial(n, q)));
  };
  Mat M = Mat::Zero(k + 1, k + 1);
  for (int j = 0; j <= k; ++j)
    for (int jp = 0; jp <= k; ++jp) {
      cplx s = 0;
      for (int m = 0; m <= n - k; ++m) s += a(j + m) * std::conj(b(jp + m)) * c(j + m, j) * c(jp + m, jp);
      M(j, jp) = s;
    }
  return M;
}

namespace {
double kept_qfi(const SymmetricState& s, const Vec& h, int kept) {
  if (kept == 0) return 0.0;
  Mat rho = reduce_symmetric(s.n, kept, s.amps, s.amps);
  Mat D = reduce_symmetric(s.n, kept, h, s.amps);
  D = D + D.adjoint().eval();
  return qfi(rho, D);
}
}  // namespace

double erasure_loss_symmetric(const SymmetricState& s, double omega, int k) {
  if (k < 0 || k > s.n) throw std::invalid_argument("erasure_loss_symmetric: need 0 <= k <= n");
  return kept_qfi(s, hbar_symmetric(s, omega), k);
}

ErasureIID erasure_iid_symmetric(const SymmetricState& s, double omega, double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("erasure_iid_symmetric: p outside [0,1]");
  Vec h = hbar_symmetric(s, omega);
  ErasureIID r;
  r.f_alice = 4.0 * h.squaredNorm();
  for (int k = 0; k <= s.n; ++k) {
    double w = binomial(s.n, k) * std::pow(p, k) * std::pow(1 - p, s.n - k);
    if (w == 0.0) continue;
    r.delta_f_eve += w * kept_qfi(s, h, k);
  }
  // erasure patterns are flagged, so each branch is a pure global state
  r.f_bob = r.f_alice - r.delta_f_eve;
  return r;
}

namespace {
// Coefficients of prod_j (a_j + b_j t)^{c_j}.
std::vector<double> class_polynomial(const std::vector<double>& a, const std::vector<double>& b, const std::vector<int>& c) {
  std::vector<double> poly{1.0};
  for (std::size_t j = 0; j < c.size(); ++j)
    for (int r = 0; r < c[j]; ++r) {
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] += poly[i] * a[j];
        next[i + 1] += poly[i] * b[j];
      }
      poly.swap(next);
    }
  return poly;
}

void count_vectors(int m, int n, int k, std::vector<int>& cur, int j, int used, std::vector<std::vector<int>>& out) {
  if (j == m) {
    std::vector<int> c(m);
    c[0] = n - used;
    for (int i = 1; i < m; ++i) c[i] = cur[i];
    out.push_back(c);
    return;
  }
  for (int v = 0; used + v <= std::min(n, k); ++v) {
    cur[j] = v;
    count_vectors(m, n, k, cur, j + 1, used + v, out);
  }
}
}  // namespace

BoundResult iid_pinched_symmetric(const SymmetricState& s, double omega, const KrausChannel& single, int k) {
  if (single.in_dim() != 2) throw std::invalid_argument("iid_pinched_symmetric: qubit sites only");
  const int m = static_cast<int>(single.kraus().size());
  std::vector<double> a(m), b(m);
  for (int j = 0; j < m; ++j) {
    const Mat Q = single.kraus()[j].adjoint() * single.kraus()[j];
    if (std::abs(Q(0, 1)) > 1e-12 || std::abs(Q(1, 0)) > 1e-12)
      throw std::invalid_argument(
          "iid_pinched_symmetric: representation unsupported (E_j^dag E_j not diagonal); use the sparse or dense path");
    a[j] = Q(0, 0).real();
    b[j] = Q(1, 1).real();
  }
  const int n = s.n;
  Vec h = hbar_symmetric(s, omega);
  std::vector<std::vector<int>> classes;
  std::vector<int> cur(m, 0);
  count_vectors(m, n, k, cur, 1, 0, classes);
  double sum = 0.0;
  long used = 0, skipped = 0;
  for (const auto& c : classes) {
    auto poly = class_polynomial(a, b, c);
    double T = 0.0, N = 0.0;
    for (int q = 0; q <= n; ++q) {
      const double f = poly[q] / binomial(n, q);
      T += std::norm(s.amps(q)) * f;
      N += 2.0 * (std::conj(h(q)) * s.amps(q)).real() * f;
    }
    double lmult = std::lgamma(n + 1.0);
    for (int v : c) lmult -= std::lgamma(v + 1.0);
    if (T < 1e-14) {
      ++skipped;
      continue;
    }
    ++used;
    sum += std::exp(lmult) * N * N / T;
  }
  BoundResult r;
  r.kind = BoundKind::upper_on_F_Bob;
  r.k_used = k;
  r.delta_f = sum;
  r.value = 4.0 * h.squaredNorm() - sum;
  std::ostringstream os;
  os << "symmetric pinching over " << used << " weight classes (|x| <= " << k << "), " << skipped << " skipped";
  r.certificate = os.str();
  return r;
}

SparseProbe hbar_sparse_diagonal(const SparseProbe& psi, const std::function<double(std::uint64_t)>& energy) {
  double mean = 0;
  for (const auto& [b, a] : psi.terms) mean += std::norm(a) * energy(b);
  std::vector<std::pair<std::uint64_t, cplx>> t;
  for (const auto& [b, a] : psi.terms) t.emplace_back(b, (energy(b) - mean) * a);
  return SparseProbe(psi.n, t, false);
}

BoundResult iid_pinched_sparse(const SparseProbe& psi, const SparseProbe& hpsi, const KrausChannel& single, int k) {
  if (single.in_dim() != 2) throw std::invalid_argument("iid_pinched_sparse: qubit sites only");
  if (psi.n != hpsi.n) throw std::invalid_argument("iid_pinched_sparse: size mismatch");
  const int n = psi.n;
  std::vector<Mat> Q;
  for (const auto& E : single.kraus()) Q.push_back(E.adjoint() * E);
  const auto strings = strings_up_to_weight(n, static_cast<int>(Q.size()), k);
  std::vector<double> term(strings.size(), 0.0);
  std::vector<char> skip(strings.size(), 0);

  auto overlap = [&](const SparseProbe& bra, const std::vector<int>& x) {
    cplx s = 0;
    for (const auto& [bb, ab] : bra.terms)
      for (const auto& [bk, ak] : psi.terms) {
        cplx f = std::conj(ab) * ak;
        for (int i = 0; i < n && f != 0.0; ++i) {
          const std::uint64_t bit = site_bit(n, i);
          f *= Q[x[i]]((bb & bit) ? 1 : 0, (bk & bit) ? 1 : 0);
        }
        s += f;
      }
    return s;
  };

#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < static_cast<long>(strings.size()); ++i) {
    const double T = overlap(psi, strings[i]).real();
    if (T < 1e-14) {
      skip[i] = 1;
      continue;
    }
    const double N = 2.0 * overlap(hpsi, strings[i]).real();
    term[i] = N * N / T;
  }
  double sum = 0.0;
  long skipped = 0;
  for (std::size_t i = 0; i < term.size(); ++i) {
    sum += term[i];
    skipped += skip[i];
  }
  const double s2 = hpsi.norm() * hpsi.norm();
  BoundResult r;
  r.kind = BoundKind::upper_on_F_Bob;
  r.k_used = k;
  r.delta_f = sum;
  r.value = 4.0 * s2 - sum;
  std::ostringstream os;
  os << "sparse pinching over " << strings.size() - skipped << " strings of weight <= " << k << ", " << skipped << " skipped";
  r.certificate = os.str();
  return r;
}

Graph chain_graph(int n) {
  Graph g;
  for (int i = 0; i + 1 < n; ++i) g.emplace_back(i, i + 1);
  return g;
}

Graph square_cycle_4() { return {{0, 1}, {1, 3}, {3, 2}, {2, 0}}; }

SparseProbe graph_code_state(int n, std::uint64_t x, bool transversal) {
  if (n < 1 || n > 63) throw std::invalid_argument("graph_code_state: 1 <= n <= 63");
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  x &= all;
  const int w = popcount64(x);
  const int need = transversal ? 5 : 4;
  if (std::min(w, n - w) < need) {
    std::ostringstream os;
    os << "graph_code_state: codewords too close (min Hamming distance " << std::min(w, n - w) << " < " << need << ")";
    throw std::invalid_argument(os.str());
  }
  return SparseProbe(n, {{0, 1.0}, {all, 1.0}, {x, 1.0}, {all ^ x, 1.0}});
}

Probe probe_library(const std::string& name, int n, const std::map<std::string, double>& params, const Graph&) {
  auto get = [&](const std::string& key, double def) {
    auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };
  Probe p;
  if (n < 1) throw std::invalid_argument("probe_library: n >= 1 required");
  Vec a = Vec::Zero(n + 1);
  if (name == "ghz") {
    a(0) = a(n) = 1;
  } else if (name == "plus_product") {
    for (int q = 0; q <= n; ++q) a(q) = std::exp(0.5 * (log_binomial(n, q) - n * std::log(2.0)));
  } else if (name == "dicke_pair") {
    const int q1 = static_cast<int>(get("q1", 0)), q2 = static_cast<int>(get("q2", n));
    if (q1 == q2 || q1 < 0 || q2 < 0 || q1 > n || q2 > n)
      throw std::invalid_argument("probe_library: dicke_pair needs distinct q1, q2 in [0, n]");
    a(q1) = a(q2) = 1;
  } else if (name == "uniform_dicke") {
    a.setOnes();
  } else if (name == "half_gauss") {
    const double w = get("w", 0.4);
    for (int q = 0; q <= n; ++q) {
      const double u = static_cast<double>(q) / n;
      a(q) = std::exp(-u * u / (2 * w * w));
    }
  } else {
    p.symmetric = false;
    const std::uint64_t all = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::uint64_t alt = 0;  // down on even sites
    for (int j = 0; j < n; j += 2) alt |= site_bit(n, j);
    if (name == "f_af") {
      p.sparse = SparseProbe(n, {{all, 1.0}, {alt, 1.0}});
    } else if (name == "code_f_af") {
      p.sparse = SparseProbe(n, {{all, 1.0}, {0, 1.0}, {alt, 1.0}, {all ^ alt, 1.0}});
    } else if (name == "graph_code") {
      const bool transversal = get("sx", 0) != 0 || get("sy", 0) != 0;
      p.sparse = graph_code_state(n, static_cast<std::uint64_t>(get("x", 0)), transversal);
    } else {
      throw std::invalid_argument("probe_library: unknown probe '" + name +
                                  "' (ghz, plus_product, dicke_pair, uniform_dicke, half_gauss, f_af, code_f_af, graph_code)");
    }
    return p;
  }
  p.sym = SymmetricState(n, a);
  return p;
}

Vec IsingScenario::apply_H(const Vec& v) const {
  Vec out = Vec::Zero(v.size());
  for (const auto& [c, P] : terms) out += c * P.apply(v);
  return out;
}

Mat IsingScenario::dense_H() const {
  if (n > 12) throw std::length_error("IsingScenario::dense_H: n > 12");
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat H = Mat::Zero(d, d);
  for (const auto& [c, P] : terms) H += c * P.to_matrix();
  return H;
}

IsingScenario ising_scenario(const Graph& graph, double s_x, double s_y, double J, const SparseProbe& state) {
  IsingScenario sc;
  sc.n = state.n;
  if (sc.n > 20) throw std::length_error("ising_scenario: dense probe limited to n <= 20");
  for (const auto& [i, j] : graph) {
    if (i < 0 || j < 0 || i >= sc.n || j >= sc.n || i == j) throw std::invalid_argument("ising_scenario: bad edge");
    const char letters[3] = {'Z', 'X', 'Y'};
    const double coef[3] = {1.0, s_x, s_y};
    for (int l = 0; l < 3; ++l) {
      if (coef[l] == 0.0) continue;
      PauliString P(sc.n);
      P.set(i, letters[l]);
      P.set(j, letters[l]);
      sc.terms.emplace_back(0.5 * J * coef[l], P);
    }
  }
  sc.psi = state.dense();
  Vec hp = sc.apply_H(sc.psi);
  sc.mean = sc.psi.dot(hp).real();
  sc.hbar_psi = hp - sc.mean * sc.psi;
  sc.variance = sc.hbar_psi.squaredNorm();
  sc.edges = static_cast<int>(graph.size());
  for (const auto& [b, a] : state.terms) {
    int viol = 0;
    for (const auto& [i, j] : graph) viol += ((b >> (sc.n - 1 - i)) & 1) != ((b >> (sc.n - 1 - j)) & 1);
    sc.violated = std::max(sc.violated, viol);
  }
  // ZZ-only closed forms for the four-term code states.
  sc.mean_closed = 0.5 * J * (sc.edges - sc.violated);
  sc.variance_closed = 0.25 * J * J * sc.violated * sc.violated;
  return sc;
}

double pauli_condition_residual(const Vec& psi, const Vec& xi, const std::vector<PauliString>& ops) {
  double worst = 0.0;
  for (const auto& P : ops) {
    if (!P.hermitian()) throw std::invalid_argument("pauli_condition_residual: non-Hermitian Pauli");
    worst = std::max(worst, std::abs(2.0 * psi.dot(P.apply(xi)).real()));
  }
  return worst;
}

std::vector<PauliString> single_site_paulis(int n, int site) {
  std::vector<PauliString> out{PauliString(n)};
  for (char c : {'X', 'Y', 'Z'}) out.push_back(PauliString::single(n, site, c));
  return out;
}

}  // namespace qfl
