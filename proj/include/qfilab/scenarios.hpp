#pragma once

#include "qfilab/bounds.hpp"
#include "qfilab/channels.hpp"
#include "qfilab/clock.hpp"
#include "qfilab/manybody.hpp"

#include "json.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qfl {

// Builders shared by the CLI, the verify suites and the tests.

// |+>, H = omega Z / 2, partial Z dephasing with coherence factor 1 - p.
MetrologyScenario qubit_partial_dephasing(double p, double omega);
// exp(-i H t0)|+>, H = omega Z / 2, complete dephasing in the X basis.
MetrologyScenario complete_x_dephasing(double omega, double t0);
// GHZ on n qubits, H = sum (omega/2) Z_i, site 0 erased with probability p.
MetrologyScenario ghz_erasure(int n, double p, double omega);
// (|0000> + |1111> + |0110> + |1001>)/2 on the 4-cycle 1-2-4-3.
SparseProbe code422_state();
IsingScenario code422_ising(double J, double s_x, double s_y);
// psi = |+>^n, H = |-^n><+^n| + h.c. (so xi = |-^n>), i.i.d. single-site noise.
MetrologyScenario repetition_code(int n, const KrausChannel& single);
// Loss for the repetition code under i.i.d. p/2 Z flips from the diagonal
// environment: 8 c^{2n} sum_x 1 / (lambda_x + lambda_~x).
double repetition_z_loss_closed(int n, double p);
// Ising chain energy (J/2) sum s_i s_{i+1}, s = (-1)^bit.
double chain_energy(int n, double J, std::uint64_t bits);

struct IIDDampingBracket {
  double four_sigma2 = 0, exact = 0, upper = 0, lower = 0;
  int k = 0;
};
// Exact F_Bob (dense), pinched upper bound at weight k and the site-wise
// preprocessing lower bound with p0 = min(1, 2p).
IIDDampingBracket iid_damping_bracket(const Vec& psi, const Vec& hbar_psi, int n, double p, int k);

namespace scenarios {

struct ParamSpec {
  std::string name;
  double def = 0.0;
  double lo = 0.0, hi = 0.0;
  bool integer = false;
  std::string doc;
};
using Params = std::map<std::string, double>;

struct Golden {
  std::string what;
  double value = 0.0, expected = 0.0, tol = 0.0;
  bool pass = false;
};

struct Result {
  nlohmann::ordered_json report;                    // fisher_report / bounds / equality_diag / extra
  std::vector<std::pair<std::string, double>> row;  // fixed CSV columns
  std::vector<Golden> golden;
};

struct Scenario {
  std::string name;
  std::string description;
  std::string reference;  // where the worked example comes from, in words
  std::vector<ParamSpec> schema;
  std::function<Result(const Params&)> run;
};

const std::vector<Scenario>& registry();
const Scenario* find(const std::string& name);
std::vector<std::string> names();
// Defaults overlaid with `overrides`; throws std::invalid_argument for an
// unknown key, a non-numeric value, or a value outside the schema range.
Params resolve(const Scenario& sc, const std::map<std::string, std::string>& overrides);

}  // namespace scenarios
}  // namespace qfl
