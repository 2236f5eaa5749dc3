#pragma once

#include "qfilab/channels.hpp"
#include "qfilab/linalg.hpp"

#include <string>
#include <vector>

namespace qfl {

// Constant Hamiltonian plus jump operators. Time-dependent H is not accepted.
struct LindbladSpec {
  Mat H;
  std::vector<Mat> jumps;
  int dim = 0;
  LindbladSpec(Mat H, std::vector<Mat> jumps);
};

// Row-major vectorization: vec(A X B) = (A (x) B^T) vec(X).
Mat superop(const LindbladSpec& spec);
Mat hamiltonian_superop(const LindbladSpec& spec);
Mat dissipator_superop(const LindbladSpec& spec);
Mat apply_superop(const Mat& S, const Mat& X);

Mat evolve(const LindbladSpec& spec, const Mat& rho0, double t);

// Kraus operators of a CP superoperator from its Choi matrix.
struct ChoiKraus {
  std::vector<Mat> kraus;
  double min_eig = 0.0;
  std::vector<std::string> warnings;
};
ChoiKraus kraus_from_superop(const Mat& S, int d);

struct DecomposedEvolution {
  double t = 0.0;
  Mat E_t;           // full evolution superoperator
  KrausChannel N_t;  // effective noise after the unitary
  Mat U_t;           // exp(-i H t)
  bool commuting = false;
  double commutator_norm = 0.0;
  std::vector<std::string> warnings;
};
DecomposedEvolution decompose(const LindbladSpec& spec, double t);

struct ClockFisher {
  double f_exact = 0, f_unitary = 0, delta = 0, delta_bound = 0;
};
ClockFisher clock_fisher(const LindbladSpec& spec, const Vec& psi0, double t0);

// Qubit specs used throughout: H = omega Z/2 with dephasing along Z or X.
LindbladSpec z_dephasing_spec(double omega, double gamma);
LindbladSpec x_dephasing_spec(double omega, double gamma);

}  // namespace qfl
