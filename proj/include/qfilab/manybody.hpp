#pragma once

#include "qfilab/bounds.hpp"
#include "qfilab/channels.hpp"
#include "qfilab/codes.hpp"
#include "qfilab/linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qfl {

// Amplitudes over Dicke states |h_q^n>, q = number of sites in |1> (down).
struct SymmetricState {
  int n = 0;
  Vec amps;
  SymmetricState() = default;
  SymmetricState(int n, Vec amps);
  Vec dense() const;  // n <= 20
};

// Superposition of computational basis strings; bit (n-1-j) of `bits` is site j.
struct SparseProbe {
  int n = 0;
  std::vector<std::pair<std::uint64_t, cplx>> terms;
  SparseProbe() = default;
  SparseProbe(int n, std::vector<std::pair<std::uint64_t, cplx>> terms, bool normalize = true);
  Vec dense() const;  // n <= 20
  double norm() const;
};

double binomial(int n, int k);

SymmetricState dicke(int n, int q);
// Energy (omega/2)(n - 2q) of H = sum (omega/2) Z_i on |h_q^n>.
double dicke_energy(int n, int q, double omega);
// (H - <H>) psi for H = sum (omega/2) Z_i, as unnormalized symmetric amplitudes.
Vec hbar_symmetric(const SymmetricState& s, double omega);

// (k+1) x (k+1) reduced operator tr_{rest}(|a><b|) of two symmetric vectors,
// expressed in the Dicke basis of the k kept sites.
Mat reduce_symmetric(int n, int k, const Vec& a, const Vec& b);

// Loss when k sites are handed to the environment, for H = sum (omega/2) Z_i.
double erasure_loss_symmetric(const SymmetricState& s, double omega, int k);

// Each site independently erased with probability p. Exact Bob and Eve sides
// from weight-class sums of symmetric reductions.
struct ErasureIID {
  double f_bob = 0.0, delta_f_eve = 0.0, f_alice = 0.0;
};
ErasureIID erasure_iid_symmetric(const SymmetricState& s, double omega, double p);

// Pinched upper bound for i.i.d. single-site noise. Symmetric path needs
// diagonal E_j^dag E_j; the sparse path takes any Kraus set.
BoundResult iid_pinched_symmetric(const SymmetricState& s, double omega, const KrausChannel& single, int k);
BoundResult iid_pinched_sparse(const SparseProbe& psi, const SparseProbe& hbar_psi, const KrausChannel& single, int k);

// (H - <H>) psi for a Hamiltonian diagonal in the computational basis.
SparseProbe hbar_sparse_diagonal(const SparseProbe& psi, const std::function<double(std::uint64_t)>& energy);

struct Probe {
  bool symmetric = true;
  SymmetricState sym;
  SparseProbe sparse;
  Vec dense() const;
  int n() const { return symmetric ? sym.n : sparse.n; }
};

using Graph = std::vector<std::pair<int, int>>;
Graph chain_graph(int n);
Graph square_cycle_4();  // 1-2-4-3 in one-based labels

// ghz, plus_product, dicke_pair(q1,q2), uniform_dicke, half_gauss(w), f_af,
// code_f_af, graph_code(x as a bit mask; needs "x", and "sx"/"sy" for the
// stricter distance check).
Probe probe_library(const std::string& name, int n, const std::map<std::string, double>& params = {},
                    const Graph& graph = {});
SparseProbe graph_code_state(int n, std::uint64_t x, bool transversal);

struct IsingScenario {
  int n = 0;
  std::vector<std::pair<double, PauliString>> terms;  // H = sum c P
  Vec psi, hbar_psi;
  double mean = 0.0, variance = 0.0;
  int edges = 0, violated = 0;  // m and c for graph-code states
  double mean_closed = 0.0, variance_closed = 0.0;
  Mat dense_H() const;  // n <= 12
  Vec apply_H(const Vec& v) const;
};
// H = (J/2) sum_{<i,j>} (Z_i Z_j + s_x X_i X_j + s_y Y_i Y_j).
IsingScenario ising_scenario(const Graph& graph, double s_x, double s_y, double J, const SparseProbe& state);

// max |2 Re <psi|O|xi>| over the supplied Hermitian Paulis.
double pauli_condition_residual(const Vec& psi, const Vec& xi, const std::vector<PauliString>& ops);
// All Paulis supported on `site` (including identity) for an n-qubit register.
std::vector<PauliString> single_site_paulis(int n, int site);

}  // namespace qfl
