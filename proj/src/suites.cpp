#include "qfilab/suites.hpp"

#include "qfilab/bounds.hpp"
#include "qfilab/clock.hpp"
#include "qfilab/codes.hpp"
#include "qfilab/fisher.hpp"
#include "qfilab/lindblad.hpp"
#include "qfilab/manybody.hpp"
#include "qfilab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qfl::suites {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t i, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (i + 1) + salt * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Tally {
  PropertyCheck c;
  Tally(std::string name, double tol) {
    c.name = std::move(name);
    c.tol = tol;
    c.worst = -std::numeric_limits<double>::infinity();
  }
  // violation > tol counts as a failure
  void add(double violation) {
    ++c.instances;
    c.worst = std::max(c.worst, violation);
    if (!(violation <= c.tol)) ++c.failures;
  }
  PropertyCheck done(std::string detail = {}) {
    c.detail = std::move(detail);
    if (c.instances == 0) c.worst = 0;
    return c;
  }
};

// Random derivative direction supported like rho: A rho + rho A^dag.
Mat tangent(const Mat& rho, std::uint64_t seed) {
  const int d = static_cast<int>(rho.rows());
  Mat A = random_hermitian(d, seed) + I1 * random_hermitian(d, seed ^ 0x5A5A);
  return A * rho + rho * A.adjoint();
}

int pick(std::mt19937_64& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
double unif(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

}  // namespace

std::vector<PropertyCheck> fisher_properties(std::uint64_t seed, int N) {
  Tally dpi("data processing", 1e-9), conv("joint convexity", 1e-9), add("additivity (relative)", 1e-8),
      scal("scaling F(a rho, b D) = b^2/a F (relative)", 1e-9), two("two-direction relation", 1e-8),
      cont("continuity of D", 1e-8), near_id("near-identity channel continuity", 1e-8), simple("simple bounds", 1e-9),
      rld("RLD bound", 1e-9), cand("lower/upper candidates", 1e-9);
  for (int i = 0; i < N; ++i) {
    std::mt19937_64 g(mix(seed, i, 1));
    const int d = pick(g, 2, 6), r = pick(g, 1, d);
    const std::uint64_t s = mix(seed, i, 2);
    Mat rho = random_density(d, r, s);
    Mat D = tangent(rho, s + 1);
    const double F = qfi(rho, D);

    KrausChannel ch = random_channel(d, pick(g, 2, 6), pick(g, 1, 4), s + 2);
    dpi.add(qfi(ch.apply(rho), ch.apply(D)) - F);

    {
      const int m = 3;
      std::vector<double> w(m);
      double tot = 0;
      for (auto& x : w) tot += (x = unif(g, 0.1, 1.0));
      Mat rs = Mat::Zero(d, d), Ds = Mat::Zero(d, d);
      double rhs = 0;
      for (int k = 0; k < m; ++k) {
        Mat rk = random_density(d, pick(g, 1, d), s + 10 + k);
        Mat Dk = tangent(rk, s + 20 + k);
        rs += w[k] / tot * rk;
        Ds += w[k] / tot * Dk;
        rhs += w[k] / tot * qfi(rk, Dk);
      }
      conv.add(qfi(rs, Ds) - rhs);
    }
    {
      const int d2 = pick(g, 1, 3);
      Mat r2 = random_density(d2 + 1, pick(g, 1, d2 + 1), s + 30);
      // additivity needs trace-free tangents, otherwise 2 tr(D) tr(D2) appears
      Mat D2 = tangent(r2, s + 31);
      D2 -= D2.trace() * r2;
      Mat D1 = D - D.trace() * rho;
      const double F1 = qfi(rho, D1), F2 = qfi(r2, D2);
      const double joint = qfi(kron(rho, r2), kron(D1, r2) + kron(rho, D2));
      add.add(std::abs(joint - F1 - F2) / std::max(1.0, F1 + F2));
    }
    {
      const double a = unif(g, 0.1, 1.0), b = unif(g, -3.0, 3.0);
      scal.add(std::abs(qfi(a * rho, b * D) - b * b / a * F) / std::max(1.0, b * b / a * F));
    }
    {
      Mat D2 = tangent(rho, s + 40);
      two.add(F - qfi(rho, D2) - std::sqrt(qfi(rho, D + D2) * qfi(rho, D - D2)));
      const double Fd = qfi(rho, D2);
      cont.add(std::abs(qfi(rho, D + D2) - F - Fd) - 2 * std::sqrt(F * Fd));
    }
    {
      Vec psi = random_unit_vector(d, s + 50);
      Mat P = projector(psi);
      Mat Dp = -I1 * (random_hermitian(d, s + 51) * P - P * random_hermitian(d, s + 51));
      const double delta = std::pow(10.0, unif(g, -4, -1));
      Mat W = random_unitary(d, s + 52);
      KrausChannel nid(d, d, {std::sqrt(1 - delta) * identity(d), std::sqrt(delta) * W});
      const double eps = (1 - std::sqrt(1 - delta)) + std::sqrt(delta);
      const double lhs = qfi(P, Dp) - qfi(nid.apply(P), nid.apply(Dp));
      near_id.add(lhs - 8 * eps * trace_norm(Dp) * op_norm(Dp));
    }
    {
      FisherPair fp(rho, D);
      auto [lo, hi] = simple_bounds(fp);
      simple.add(std::max(lo - F, F - hi));
      Mat R = sld(fp).R;
      double viol = std::abs(rld_bound(fp, R) - F);
      if (r == d) {
        Mat Aa = random_hermitian(d, s + 60) * I1;  // anti-Hermitian
        Mat G = R + pinv_psd(rho) * Aa;
        viol = std::max(viol, F - rld_bound(fp, G));
      }
      rld.add(viol);
      Mat S = random_hermitian(d, s + 61);
      double cv = qfi_lower_candidate(fp, S) - F;
      cv = std::max(cv, std::abs(qfi_lower_candidate(fp, 0.5 * R) - F));
      Mat L = sqrt_psd(rho) * (0.5 * R);
      cv = std::max(cv, F - qfi_upper_candidate(fp, L));
      cand.add(cv);
    }
  }
  return {dpi.done(), conv.done(), add.done(), scal.done(), two.done(), cont.done(),
          near_id.done(), simple.done(), rld.done(), cand.done()};
}

std::vector<PropertyCheck> logical_relation(std::uint64_t seed, int N) {
  Tally ineq("logical-qubit inequality", 1e-8), eq("equality under the rank condition", 1e-8);
  for (int i = 0; i < N; ++i) {
    std::mt19937_64 g(mix(seed, i, 3));
    const int d = pick(g, 2, 5);
    const std::uint64_t s = mix(seed, i, 4);
    Vec psi = random_unit_vector(d, s);
    Vec xi = random_unit_vector(d, s + 1);
    xi -= psi.dot(xi) * psi;
    xi *= unif(g, 0.2, 2.0) / xi.norm();
    KrausChannel ch = random_channel(d, pick(g, 1, 5), pick(g, 1, 4), s + 2, unif(g, 0.5, 1.0));
    LogicalQubitRelation lq = logical_qubit_relation(psi, xi, ch);
    const double lhs = lq.f_y + lq.f_z;
    ineq.add(lhs - lq.rhs);
    if (lq.equality.holds) eq.add(std::abs(lhs - lq.rhs));
  }
  std::ostringstream os;
  os << eq.c.instances << " of " << N << " instances satisfy the rank condition";
  return {ineq.done(), eq.done(os.str())};
}

std::vector<PropertyCheck> codes_checks(std::uint64_t seed) {
  std::vector<PropertyCheck> out;
  {
    Tally t("Pauli product matches dense product", 1e-12);
    for (int i = 0; i < 100; ++i) {
      std::mt19937_64 g(mix(seed, i, 5));
      const int n = pick(g, 1, 4);
      PauliString a(n), b(n);
      const char L[4] = {'I', 'X', 'Y', 'Z'};
      for (int q = 0; q < n; ++q) {
        a.set(q, L[pick(g, 0, 3)]);
        b.set(q, L[pick(g, 0, 3)]);
      }
      a.set_phase(pick(g, 0, 3));
      t.add(max_abs(a.to_matrix() * b.to_matrix() - multiply(a, b).to_matrix()));
    }
    out.push_back(t.done());
  }
  for (const auto& c : {steane_construction(), aux422_construction(), toric_construction(4)}) {
    Certification cert = stabilizer_certify(c.group, c.H, c.error_weight);
    Tally t(c.name + " certification", 0.0);
    t.add(cert.certified() ? 0.0 : 1.0);
    out.push_back(t.done(to_string(cert.verdict)));
    if (c.group.n() <= 10) {
      Vec psi = stabilizer_state(c.group);
      Vec xi = c.H[0].apply(psi);
      const int dm = metrological_distance(MetrologicalCodePair(psi, xi));
      Tally u(c.name + " dense distance >= certified", 0.0);
      u.add(dm >= c.error_weight + 1 ? 0.0 : 1.0);
      out.push_back(u.done("d_m = " + std::to_string(dm)));
    }
  }
  {
    Tally t("repetition |+>^n, |->^n distance = n", 0.0);
    for (int n = 2; n <= 5; ++n) {
      MetrologyScenario sc = repetition_code(n, identity_channel(2));
      t.add(metrological_distance(MetrologicalCodePair(sc.psi, xi_vector(sc.psi, sc.H))) == n ? 0.0 : 1.0);
    }
    out.push_back(t.done());
  }
  {
    Tally t("[[4,2,2]] zero loss for single located erasures", 1e-9);
    IsingScenario is = code422_ising(2.0, 0.0, 0.0);
    MetrologicalCodePair pair(is.psi, is.hbar_psi);
    for (int s = 0; s < 4; ++s) t.add(zero_loss_check(pair, located_erasure(s, 0.5, 4)).worst_residual);
    out.push_back(t.done());
  }
  return out;
}

std::vector<PropertyCheck> bounds_checks(std::uint64_t) {
  std::vector<PropertyCheck> out;
  Tally br("bracketing pinched >= exact >= preprocessing", 1e-8), mono("pinched bound non-increasing in k", 1e-10);
  const int n = 6;
  for (const char* name : {"ghz", "plus_product", "uniform_dicke"}) {
    Probe pr = probe_library(name, n);
    Vec psi = pr.sym.dense();
    Vec h = hbar_symmetric(pr.sym, 1.0);
    Vec hd = SymmetricState(n, h).dense() * h.norm();
    for (double p : {0.02, 0.1}) {
      IIDDampingBracket b = iid_damping_bracket(psi, hd, n, p, n);
      br.add(std::max(b.exact - b.upper, b.lower - b.exact));
      double prev = std::numeric_limits<double>::infinity();
      for (int k : {1, 2, 3, 6}) {
        const double v = pinched_iid_upper(psi, hd, IIDNoiseSpec(amplitude_damping(p), n, p), k).value;
        mono.add(v - prev);
        prev = v;
      }
    }
  }
  out.push_back(br.done());
  out.push_back(mono.done());
  {
    Tally t("repetition bit-flip loss 4 - 4(1-p)^{2n}", 1e-9);
    for (int m : {4, 6})
      for (double p : {1e-3, 1e-2, 0.1}) {
        FisherReport r = fisher_report(repetition_code(m, bit_flip(p)));
        t.add(std::abs(r.delta_f - (4 - 4 * std::pow(1 - p, 2 * m))));
      }
    out.push_back(t.done());
  }
  {
    Tally t("repetition Z-dephasing order >= n/2 - 0.2", 0.0);
    std::ostringstream os;
    for (int m : {4, 6}) {
      std::vector<std::pair<double, double>> pts;
      for (int i = 0; i < 6; ++i) {
        const double p = std::pow(10.0, -3.0 + i / 5.0);
        pts.emplace_back(p, fisher_report(repetition_code(m, partial_dephasing_z(p))).delta_f_eve);
      }
      OrderFit f = weak_noise_order_fit(pts);
      t.add(m / 2.0 - 0.2 - f.slope);
      os << "n=" << m << " slope " << f.slope << "; ";
    }
    out.push_back(t.done(os.str()));
  }
  {
    Tally t("order fit on exact quadratic data", 1e-6);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 8; ++i) {
      const double p = std::pow(10.0, -3 + i / 3.5);
      pts.emplace_back(p, 3 * p * p);
    }
    t.add(std::abs(weak_noise_order_fit(pts).slope - 2));
    out.push_back(t.done());
  }
  return out;
}

std::vector<PropertyCheck> lindblad_checks(std::uint64_t) {
  std::vector<PropertyCheck> out;
  Vec plus(2);
  plus << 1, 1;
  plus /= std::sqrt(2.0);
  Tally bound("|delta| <= continuity bound", 1e-12), fu("commuting case f_unitary = instantaneous F_Bob", 1e-8),
      choi("Choi round trip reproduces the evolution", 1e-9);
  for (bool z : {true, false})
    for (double g : {0.01, 0.1, 0.5})
      for (double t : {0.5, 1.0, 2.0}) {
        LindbladSpec spec = z ? z_dephasing_spec(1.0, g) : x_dephasing_spec(1.0, g);
        ClockFisher cf = clock_fisher(spec, plus, t);
        bound.add(std::abs(cf.delta) - cf.delta_bound);
        DecomposedEvolution de = decompose(spec, t);
        Mat rho = projector(plus);
        choi.add(max_abs(de.N_t.apply(de.U_t * rho * de.U_t.adjoint()) - evolve(spec, rho, t)));
        if (z) {
          Vec psi_t = de.U_t * plus;
          MetrologyScenario sc(psi_t, spec.H, de.N_t, t);
          fu.add(std::abs(cf.f_unitary - fisher_report(sc).f_bob_t) / std::max(1.0, cf.f_unitary));
        }
      }
  out.push_back(bound.done());
  out.push_back(fu.done());
  out.push_back(choi.done());
  return out;
}

std::vector<PropertyCheck> run_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<PropertyCheck> out;
  auto append = [&](std::vector<PropertyCheck> v) { out.insert(out.end(), v.begin(), v.end()); };
  const bool all = suite == "all";
  if (!all && suite != "core" && suite != "codes" && suite != "bounds" && suite != "lindblad")
    throw std::invalid_argument("unknown suite '" + suite + "' (core, codes, bounds, lindblad, all)");
  if (all || suite == "core") {
    append(fisher_properties(seed));
    append(logical_relation(seed));
  }
  if (all || suite == "codes") append(codes_checks(seed));
  if (all || suite == "bounds") append(bounds_checks(seed));
  if (all || suite == "lindblad") append(lindblad_checks(seed));
  return out;
}

}  // namespace qfl::suites
