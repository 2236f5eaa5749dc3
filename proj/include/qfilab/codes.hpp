#pragma once

#include "qfilab/channels.hpp"
#include "qfilab/linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qfl {

// n-qubit Pauli operator i^phase * prod_j P_j, where (x_j, z_j) = (1,1) is Y
// itself. Qubit j is bit (n-1-j) of a computational-basis index.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n);
  static PauliString parse(const std::string& text);  // "+XIZZY", "-iZZ", ...
  static PauliString single(int n, int qubit, char letter);

  int n() const { return n_; }
  int phase() const { return phase_; }  // exponent of i, 0..3
  bool x(int q) const;
  bool z(int q) const;
  char letter(int q) const;
  void set(int q, char letter);
  void set_phase(int k) { phase_ = ((k % 4) + 4) % 4; }
  int weight() const;
  std::vector<int> support() const;
  std::uint64_t support_mask() const;  // requires n <= 64
  bool hermitian() const { return phase_ % 2 == 0; }

  std::string str() const;
  Mat to_matrix() const;
  Vec apply(const Vec& v) const;  // requires n <= 62
  bool operator==(const PauliString& o) const;

  friend PauliString multiply(const PauliString& a, const PauliString& b);
  friend bool commutes(const PauliString& a, const PauliString& b);

 private:
  int n_ = 0;
  int phase_ = 0;
  std::vector<std::uint64_t> xw_, zw_;
};

PauliString multiply(const PauliString& a, const PauliString& b);
bool commutes(const PauliString& a, const PauliString& b);
inline int weight(const PauliString& p) { return p.weight(); }
inline Mat to_matrix(const PauliString& p) { return p.to_matrix(); }

class StabilizerGroup {
 public:
  StabilizerGroup() = default;
  explicit StabilizerGroup(std::vector<PauliString> generators);
  static StabilizerGroup parse(const std::string& lines);

  int n() const { return n_; }
  const std::vector<PauliString>& generators() const { return gens_; }
  // Product of the generators selected by `subset` (indices, ascending).
  PauliString element(const std::vector<int>& subset) const;

 private:
  int n_ = 0;
  std::vector<PauliString> gens_;
};

struct MetrologicalCodePair {
  Vec psi;
  Vec xi;  // normalized direction, orthogonal to psi
  MetrologicalCodePair(Vec psi, Vec xi);
};

struct ZeroLossCheck {
  bool holds = false;
  double worst_residual = 0.0;
  int k = -1, kp = -1;
  double env_norm = 0.0;  // ||N^(|xi><psi| + |psi><xi|)||
};
ZeroLossCheck zero_loss_check(const MetrologicalCodePair& pair, const KrausChannel& ch);
ZeroLossCheck zero_loss_check(const MetrologicalCodePair& pair, const std::vector<Mat>& errors);

// Largest d such that |<psi|O|xi> + <xi|O|psi>| <= 1e-9 for every Pauli O of
// weight < d. Returns n + 1 when no Pauli fails. Pauli enumeration is complete:
// any weight-w operator is a linear combination of Paulis of weight <= w.
int metrological_distance(const MetrologicalCodePair& pair, int max_qubits = 10);

enum class Verdict { certified, refuted, search_exhausted };
std::string to_string(Verdict v);

struct SearchStrategy {
  int exhaustive_limit = 20;  // enumerate the full group when #generators <= this
  int depth = 3;              // otherwise products of up to `depth` generators
};

struct Certification {
  Verdict verdict = Verdict::refuted;
  int error_weight = 0;
  // support (sorted qubit list) -> generator subset of the witness S
  std::map<std::vector<int>, std::vector<int>> witnesses;
  std::vector<int> failed_support;
  long candidates = 0;
  bool certified() const { return verdict == Verdict::certified; }
};

// For every support set of size <= error_weight, look for S in the group with
// {H_term, S} = 0 for every term of H and S acting trivially on the set.
Certification stabilizer_certify(const StabilizerGroup& group, const std::vector<PauliString>& H, int error_weight,
                                 SearchStrategy strategy = {});

Vec stabilizer_state(const StabilizerGroup& group);
StabilizerGroup anti_group_flip(const StabilizerGroup& group);

// Stinespring data with explicit dimensions, as produced by stinespring().
struct PerturbedIsometry {
  Stinespring iso;
  double distance = 0.0;  // ||V' - V|| (V padded with the flag when one was added)
  bool flag_added = false;
  double alpha = 0.0;
};
// Without zero-loss preservation: rotate V psi towards a maximally entangled
// vector on the two kernels. With preservation: mix in G_B V Z~_L, where G_B
// defaults to a flag qubit appended to B.
PerturbedIsometry restore_equality_perturbation(const Stinespring& V, const MetrologicalCodePair& pair,
                                                double epsilon, bool preserve_zero_loss = false,
                                                const std::optional<Mat>& G_B = std::nullopt);
KrausChannel channel_from_stinespring(const Stinespring& V);

// Stabilizer constructions with a Hamiltonian anticommuting with every generator.
struct CodeConstruction {
  std::string name;
  StabilizerGroup group;
  std::vector<PauliString> H;
  int error_weight = 0;  // certify all supports up to this size
};
// Steane code generators multiplied by the logical X, H = Z1 Z2 Z3.
CodeConstruction steane_construction();
// [[4,2,2]] logical |++> with an auxiliary |+>, H = Y1 Z4 Y5.
CodeConstruction aux422_construction();
// Toric code on an L x L torus (L even), |00> logical state, H = Z on a
// perfect matching of horizontal edges times X on a dual matching of vertical
// edges. Horizontal edge (x,y) is qubit y L + x, vertical edge is L^2 + y L + x.
CodeConstruction toric_construction(int L);

}  // namespace qfl
