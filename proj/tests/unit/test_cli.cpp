#include "doctest.h"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout when `merge` is set.
Run qfilab(const std::string& args, bool merge = false) {
  const char* bin = std::getenv("QFILAB_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "QFILAB_BIN not set");
  std::string cmd = std::string(bin) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  Run r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, got);
  const int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double fit_slope(const std::string& sweep) {
  Run r = qfilab("sweep --threads 1 " + sweep);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.contains("fit"));
  return j["fit"]["slope"].get<double>();
}

// Ordinary least squares of log y on log x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= x.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("list names every scenario") {
  Run r = qfilab("list");
  CHECK(r.code == 0);
  for (const char* name : {"qubit-partial-dephasing", "ghz-erasure", "code-422", "lindblad-z-dephasing",
                           "ad-repetition-bitflip", "ising-code", "dicke-erasure", "toric-certify"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  Run r = qfilab("run --scenario nope", true);
  CHECK(r.code == 2);
  CHECK(r.out.find("ghz-erasure") != std::string::npos);
  CHECK(qfilab("run --scenario ghz-erasure --param n=99").code == 2);
  CHECK(qfilab("run --scenario ghz-erasure --param bogus=1").code == 2);
  CHECK(qfilab("run --scenario ghz-erasure --param n").code == 2);
  CHECK(qfilab("sweep --scenario ghz-erasure --sweep p:0:1").code == 2);
  CHECK(qfilab("sweep --scenario ghz-erasure --param p=0.1 --sweep p:0:1:3").code == 2);
  CHECK(qfilab("run --scenario ghz-erasure --format xml").code == 2);
}

TEST_CASE("numerical failures exit with 3") {
  Run r = qfilab("run --scenario lindblad-x-dephasing --param gamma=1000 --param t0=1000", true);
  CHECK(r.code == 3);
  CHECK(r.out.find("numerical failure") != std::string::npos);
}

TEST_CASE("run emits schema 1 JSON with passing goldens") {
  for (const char* s : {"qubit-partial-dephasing", "ghz-erasure", "code-422", "lindblad-z-dephasing"}) {
    Run r = qfilab(std::string("run --scenario ") + s);
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["scenario"] == s);
    CHECK(j["golden_pass"] == true);
  }
}

TEST_CASE("CSV output is byte-identical across runs") {
  const std::string args = "sweep --scenario ghz-erasure --sweep p:0.1:0.9:5 --format csv";
  Run a = qfilab(args), b = qfilab(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,p,", 0) == 0);
}

TEST_CASE("partial dephasing sweep follows omega^2 (1-p)^2") {
  Run r = qfilab("sweep --scenario qubit-partial-dephasing --sweep p:0:1:101");
  REQUIRE(r.code == 0);
  auto rows = nlohmann::json::parse(r.out)["rows"];
  REQUIRE(rows.size() == 101);
  for (const auto& row : rows) {
    const double p = row["p"].get<double>();
    CHECK(std::abs(row["f_bob_t"].get<double>() - (1 - p) * (1 - p)) < 1e-9);
  }
}

TEST_CASE("sweep fits reproduce the weak-noise orders") {
  CHECK(std::abs(fit_slope("--scenario ad-repetition-bitflip --sweep p:1e-3:1e-2:10:log") - 1.0) <= 0.05);
  // wider range: the fit sees curvature of 4 - 4(1-p)^12, compare with OLS on the closed form
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    const double p = std::exp(std::log(1e-3) + i / 19.0 * (std::log(1e-1) - std::log(1e-3)));
    x.push_back(p);
    y.push_back(4 - 4 * std::pow(1 - p, 12));
  }
  CHECK(fit_slope("--scenario ad-repetition-bitflip --param n=6 --sweep p:1e-3:1e-1:20:log") ==
        doctest::Approx(ols_slope(x, y)).epsilon(1e-6));
  CHECK(std::abs(fit_slope("--scenario ising-code --param n=8 --sweep p:1e-3:1e-2:10:log") - 2.0) <= 0.1);
}

TEST_CASE("verify core passes") {
  Run r = qfilab("verify core");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["failed"] == 0);
}
