#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qfl::suites {

inline constexpr std::uint64_t kDefaultSeed = 0xF15E4;

struct PropertyCheck {
  std::string name;
  int instances = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation seen (<= 0 when every instance passed with margin)
  double tol = 0.0;
  std::string detail;
  bool pass() const { return instances > 0 && failures == 0; }
};

// Fisher-information inequalities on seeded random instances of dimension <= 6.
std::vector<PropertyCheck> fisher_properties(std::uint64_t seed, int instances = 100);
// Logical-qubit relation on random (psi, xi, trace-non-increasing channel), d <= 5.
std::vector<PropertyCheck> logical_relation(std::uint64_t seed, int instances = 200);
std::vector<PropertyCheck> codes_checks(std::uint64_t seed);
std::vector<PropertyCheck> bounds_checks(std::uint64_t seed);
std::vector<PropertyCheck> lindblad_checks(std::uint64_t seed);

// suite in {core, codes, bounds, lindblad, all}; throws on an unknown name.
std::vector<PropertyCheck> run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace qfl::suites
