// qfilab: run, sweep and verify the built-in metrology scenarios.
#include "qfilab/bounds.hpp"
#include "qfilab/kernels.hpp"
#include "qfilab/linalg.hpp"
#include "qfilab/scenarios.hpp"
#include "qfilab/suites.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
namespace sc = qfl::scenarios;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, std::string> out;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

const sc::Scenario& lookup(const std::string& name) {
  const sc::Scenario* s = sc::find(name);
  if (!s) {
    std::ostringstream os;
    os << "unknown scenario '" << name << "'; available:";
    for (const auto& n : sc::names()) os << "\n  " << n;
    throw UsageError(os.str());
  }
  return *s;
}

ordered_json golden_json(const std::vector<sc::Golden>& g) {
  ordered_json arr = ordered_json::array();
  for (const auto& x : g)
    arr.push_back({{"assertion", x.what}, {"value", x.value}, {"expected", x.expected}, {"tol", x.tol}, {"pass", x.pass}});
  return arr;
}

bool all_pass(const std::vector<sc::Golden>& g) {
  for (const auto& x : g)
    if (!x.pass) return false;
  return true;
}

ordered_json params_json(const sc::Params& p) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + out_path);
  f << text;
}

std::string csv(const std::vector<sc::Result>& rows) {
  std::ostringstream os;
  if (rows.empty()) return {};
  for (std::size_t i = 0; i < rows[0].row.size(); ++i) os << (i ? "," : "") << rows[0].row[i].first;
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.row.size(); ++i) os << (i ? "," : "") << num(r.row[i].second);
    os << '\n';
  }
  return os.str();
}

struct SweepSpec {
  std::string key;
  double lo = 0, hi = 0;
  int steps = 0;
  bool log = false;
  std::vector<double> grid() const {
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i) {
      const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
      g[i] = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    return g;
  }
};

SweepSpec parse_sweep(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 4 || parts.size() > 5 || (parts.size() == 5 && parts[4] != "log"))
    throw UsageError("--sweep expects key:lo:hi:steps[:log], got '" + s + "'");
  SweepSpec sp;
  sp.key = parts[0];
  try {
    sp.lo = std::stod(parts[1]);
    sp.hi = std::stod(parts[2]);
    sp.steps = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw UsageError("--sweep: non-numeric bound or step count in '" + s + "'");
  }
  sp.log = parts.size() == 5;
  if (sp.steps < 1) throw UsageError("--sweep: steps must be >= 1");
  if (sp.log && (sp.lo <= 0 || sp.hi <= 0)) throw UsageError("--sweep: log grid needs positive bounds");
  return sp;
}

void configure_threads(int flag) {
  int n = flag;
  if (n <= 0) {
    if (const char* env = std::getenv("QFILAB_THREADS")) n = std::atoi(env);
  }
  if (n > 0) qfl::kernels::set_threads(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfilab: Fisher-information bookkeeping for noisy clocks"};
  app.require_subcommand(1);

  std::string scenario, format = "json", out_path, sweep_arg, suite = "all";
  std::vector<std::string> param_args;
  std::uint64_t seed = qfl::suites::kDefaultSeed;
  int threads = 0;

  auto common = [&](CLI::App* sub, bool needs_scenario) {
    if (needs_scenario) sub->add_option("--scenario", scenario, "scenario name (see `qfilab list`)")->required();
    sub->add_option("--param", param_args, "parameter override key=value (repeatable)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "write to PATH instead of stdout");
    sub->add_option("--seed", seed, "seed for random instances");
    sub->add_option("--threads", threads, "worker threads (default: QFILAB_THREADS or all cores)");
  };

  CLI::App* list = app.add_subcommand("list", "list scenarios and their parameters");
  CLI::App* run = app.add_subcommand("run", "run one scenario");
  common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one numeric parameter");
  common(sweep, true);
  sweep->add_option("--sweep", sweep_arg, "key:lo:hi:steps[:log]")->required();
  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("suite", suite, "core, codes, bounds, lindblad or all");
  verify->add_option("--seed", seed, "seed for random instances");
  verify->add_option("--threads", threads, "worker threads");
  verify->add_option("--out", out_path, "write to PATH instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version are successes; every other parse error is a usage error
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  configure_threads(threads);

  try {
    if (*list) {
      std::ostringstream os;
      for (const auto& s : sc::registry()) {
        os << s.name << "\n  " << s.description << '\n';
        for (const auto& p : s.schema)
          os << "    " << p.name << " = " << num(p.def) << "  [" << num(p.lo) << ", " << num(p.hi) << "]"
             << (p.integer ? " integer" : "") << "  " << p.doc << '\n';
      }
      std::cout << os.str();
      return 0;
    }

    if (*verify) {
      auto checks = qfl::suites::run_suite(suite, seed);
      ordered_json j = {{"schema", 1}, {"suite", suite}, {"seed", seed}};
      ordered_json arr = ordered_json::array();
      int failed = 0;
      for (const auto& c : checks) {
        failed += !c.pass();
        arr.push_back({{"check", c.name},
                       {"instances", c.instances},
                       {"failures", c.failures},
                       {"worst", c.worst},
                       {"tol", c.tol},
                       {"pass", c.pass()},
                       {"detail", c.detail}});
      }
      j["checks"] = arr;
      j["passed"] = static_cast<int>(checks.size()) - failed;
      j["failed"] = failed;
      emit(j.dump(2) + "\n", out_path);
      for (const auto& c : checks)
        std::cerr << (c.pass() ? "PASS " : "FAIL ") << c.name << " (" << c.instances << " instances)\n";
      return failed == 0 ? 0 : 1;
    }

    const sc::Scenario& s = lookup(scenario);
    auto overrides = parse_params(param_args);

    if (*run) {
      sc::Params p;
      try {
        p = sc::resolve(s, overrides);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      sc::Result r = s.run(p);
      if (format == "csv") {
        emit(csv({r}), out_path);
      } else {
        ordered_json j = {{"schema", 1}, {"scenario", s.name}, {"params", params_json(p)}};
        for (const char* key : {"fisher_report", "bounds", "equality_diag"})
          j[key] = r.report.contains(key) ? r.report[key] : ordered_json(nullptr);
        j["reference"] = s.reference;
        j["golden"] = golden_json(r.golden);
        j["golden_pass"] = all_pass(r.golden);
        emit(j.dump(2) + "\n", out_path);
      }
      return 0;
    }

    // sweep
    SweepSpec sp = parse_sweep(sweep_arg);
    if (overrides.count(sp.key)) throw UsageError("--sweep key " + sp.key + " also given with --param");
    const std::vector<double> grid = sp.grid();
    std::vector<sc::Params> points;
    for (double x : grid) {
      auto o = overrides;
      o[sp.key] = num(x);
      try {
        points.push_back(sc::resolve(s, o));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    std::vector<sc::Result> rows(points.size());
    std::vector<std::string> errors(points.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(qfl::kernels::threads())
    for (long i = 0; i < static_cast<long>(points.size()); ++i) {
      try {
        rows[i] = s.run(points[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
      if (!errors[i].empty()) throw qfl::NumericalError("grid point " + std::to_string(i) + ": " + errors[i]);

    std::optional<qfl::OrderFit> fit;
    std::string fit_column;
    if (sp.log && rows.size() >= 4) {
      for (const char* col : {"delta_f_eve", "delta_f"}) {
        bool has = false;
        for (const auto& [k, v] : rows[0].row) has |= (k == col);
        if (!has) continue;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (const auto& [k, v] : rows[i].row)
            if (k == col) pts.emplace_back(grid[i], v);
        try {
          fit = qfl::weak_noise_order_fit(pts);
          fit_column = col;
        } catch (const std::invalid_argument&) {
        }
        break;
      }
    }

    if (format == "csv") {
      emit(csv(rows), out_path);
      if (fit)
        std::cerr << "# fit log(" << fit_column << ") vs log(" << sp.key << "): slope " << num(fit->slope) << " stderr "
                  << num(fit->stderr_slope) << '\n';
    } else {
      ordered_json j = {{"schema", 1},
                        {"scenario", s.name},
                        {"params", params_json(points[0])},
                        {"sweep", {{"key", sp.key}, {"lo", sp.lo}, {"hi", sp.hi}, {"steps", sp.steps}, {"log", sp.log}}},
                        {"reference", s.reference}};
      ordered_json arr = ordered_json::array();
      bool pass = true;
      for (const auto& r : rows) {
        ordered_json row = ordered_json::object();
        for (const auto& [k, v] : r.row) row[k] = v;
        arr.push_back(row);
        pass = pass && all_pass(r.golden);
      }
      j["rows"] = arr;
      if (fit)
        j["fit"] = {{"column", fit_column}, {"slope", fit->slope}, {"stderr", fit->stderr_slope}, {"points", fit->used}};
      j["golden_pass"] = pass;
      emit(j.dump(2) + "\n", out_path);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
