// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-kashin-binary>

#include <sys/wait.h>

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kashin/builder.hpp"
#include "kashin/expander.hpp"
#include "kashin/gf2.hpp"
#include "kashin/kwise.hpp"
#include "kashin/linalg.hpp"
#include "kashin/random.hpp"
#include "kashin/verify.hpp"
#include "oracles.hpp"

using namespace kashin;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

const SeedBytes kMaster{0xac, 0xce, 0x97};

Outcome exact_kwise() {
  const auto t0 = Clock::now();
  const KwiseGenerator gen(4, 3, 7);
  const auto report = verify_kwise_exhaustive(gen, 4);
  // second route: Horner evaluation of every seed, all 35 subsets of size 4
  std::vector<std::vector<int>> outputs;
  for (std::uint64_t s = 0; s < 4096; ++s) outputs.push_back(kwise_expand(gen, s));
  std::uint64_t worst = 0, subsets = 0;
  for (unsigned mask = 0; mask < 128; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    ++subsets;
    std::array<std::uint64_t, 16> counts{};
    for (const auto& out : outputs) {
      unsigned pattern = 0, l = 0;
      for (unsigned i = 0; i < 7; ++i) {
        if ((mask >> i) & 1u) pattern |= (out[i] < 0 ? 1u : 0u) << l++;
      }
      ++counts[pattern];
    }
    for (const auto c : counts) worst = std::max<std::uint64_t>(worst, c > 256 ? c - 256 : 256 - c);
  }
  const double secs = seconds_since(t0);
  return {report.exact() && report.subsets_checked == 35 && worst == 0 && subsets == 35 && secs < 10,
          fmt("35 subsets x 16 patterns, max |count-256| = %llu (library %llu), %.2fs",
              (unsigned long long)worst, (unsigned long long)report.max_count_deviation, secs)};
}

Outcome field_axioms() {
  std::uint64_t violations = 0, checks = 0, mismatches = 0;
  bool irreducible = true;
  for (unsigned r = 1; r <= 8; ++r) {
    const auto rep = verify_field_axioms(r);
    violations += rep.violations;
    checks += rep.checks;
    const GaloisField f(r);
    irreducible = irreducible && oracle::irreducible(f.modulus());
    for (std::uint32_t a = 0; a < f.order(); ++a) {
      for (std::uint32_t b = 0; b < f.order(); ++b) {
        mismatches += f.mul(FieldElement{a}, FieldElement{b}).value !=
                      oracle::gf_mul(a, b, f.modulus(), r);
      }
    }
  }
  return {violations == 0 && mismatches == 0 && irreducible,
          fmt("r = 1..8: %llu axiom checks, %llu violations, %llu products differ from "
              "shift-and-add, moduli irreducible: %s",
              (unsigned long long)checks, (unsigned long long)violations,
              (unsigned long long)mismatches, irreducible ? "yes" : "no")};
}

Outcome spectral_gap() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const std::uint64_t m : {8u, 16u, 32u}) {
    const ExpanderGraph g(m);
    const double eig = oracle::second_eigenvalue(oracle::walk_matrix(g));
    const double dense = dense_lambda(g);
    const auto power = estimate_lambda(g);
    const bool good = power.converged && std::abs(power.value - eig) <= 1e-6 &&
                      std::abs(dense - eig) <= 1e-6 && eig < 0.95;
    ok = ok && good;
    detail += fmt("m=%llu: dense %.8f, power %.8f; ", (unsigned long long)m, eig, power.value);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60, detail + fmt("%.1fs", secs)};
}

Outcome walk_hitting() {
  Rng rng(derive_seed(kMaster, "walk-hitting", 0));
  std::uint64_t violations = 0, oracle_mismatch = 0;
  double min_gap = INFINITY;
  std::array<double, 5> lambdas{};
  for (unsigned e = 1; e <= 4; ++e) lambdas[e] = dense_lambda(ExpanderGraph(1u << e));
  for (int inst = 0; inst < 500; ++inst) {
    const unsigned e = 1 + static_cast<unsigned>(rng.below(4));  // side 2..16, |V| <= 256
    const ExpanderGraph g(std::uint64_t{1} << e);
    const std::size_t n = g.vertex_count();
    const auto steps = static_cast<std::size_t>(1 + rng.below(6));
    std::vector<VertexSet> sets(steps, VertexSet(n));
    std::vector<std::uint64_t> sizes(steps, 0);
    for (std::size_t i = 0; i < steps; ++i) {
      const double density = rng.uniform();
      for (std::size_t v = 0; v < n; ++v) {
        sets[i][v] = rng.uniform() < density;
        sizes[i] += sets[i][v];
      }
    }
    const double exact = hitting_probability_exact(g, sets);
    const double check = oracle::hitting(g, sets);
    if (std::abs(exact - check) > 1e-12) ++oracle_mismatch;
    const double bound = chl_bound(std::min(1.0, lambdas[e]), sizes, n);
    min_gap = std::min(min_gap, bound - exact);
    if (exact > bound * (1 + 1e-12)) ++violations;
  }
  return {violations == 0 && oracle_mismatch == 0,
          fmt("500 instances, %llu violations, min(bound - exact) = %.3g, %llu disagreements "
              "with direct propagation",
              (unsigned long long)violations, min_gap, (unsigned long long)oracle_mismatch)};
}

Outcome paley_zygmund() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(kMaster, "paley-zygmund", 0));
  const KwiseGenerator gen(4, 3, 7);
  std::vector<std::vector<int>> psi;
  for (std::uint64_t s = 0; s < 4096; ++s) psi.push_back(kwise_expand(gen, s));
  double worst = 1.0;
  bool ok = true;
  for (int v = 0; v < 100; ++v) {
    const auto x = random_unit_vector(rng, 7);
    const auto rep = paley_zygmund_check(x);
    std::uint64_t hits = 0;
    for (const auto& p : psi) {
      double s = 0;
      for (int i = 0; i < 7; ++i) s += p[i] * x[i];
      hits += s * s >= 0.5;
    }
    const double frac = hits / 4096.0;
    ok = ok && rep.exhaustive && rep.samples == 4096 && rep.hits == hits && frac >= 1.0 / 12;
    worst = std::min(worst, frac);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 120,
          fmt("100 vectors, exhaustive over 4096 seeds, min fraction %.4f >= 1/12, %.2fs", worst,
              secs)};
}

Outcome bit_budget_sweep() {
  bool ok = true;
  std::uint64_t builds = 0;
  double worst_ratio = 0;
  for (unsigned e = 8; e <= 14; ++e) {
    const std::size_t cols = std::size_t{1} << e;
    for (const double eta : {0.25, 0.5, 0.75}) {
      const std::size_t n = rows_for(cols, eta);
      const unsigned k = default_independence(cols);
      BitSource bits = BitSource::deterministic(derive_seed(kMaster, "budget", builds));
      const auto predicted = bit_budget(n, cols, k);
      const auto built = build_construction(n, cols, k, bits);
      const std::uint64_t formula = std::uint64_t{k} * std::bit_width(std::uint64_t{n} * cols) +
                                    4 * std::bit_width(std::uint64_t{cols}) + 3 * (n - 1);
      ok = ok && bits.consumed() == predicted.bits_total && formula == predicted.bits_total &&
           predicted.bits_total <= 4 * cols && built.product.rows() == n;
      worst_ratio = std::max(worst_ratio, double(predicted.bits_total) / cols);
      ++builds;
    }
  }
  return {ok, fmt("%llu builds N = 2^8..2^14, counter == prediction, max bits_total / N = %.3f",
                  (unsigned long long)builds, worst_ratio)};
}

Outcome opnorm_tail() {
  const auto t0 = Clock::now();
  TailConfig cfg;
  cfg.rows = 64;
  cfg.cols = 128;
  cfg.k = 8;
  cfg.trials = 500;
  cfg.t_grid = default_t_grid(0.5);
  cfg.seed = derive_seed(kMaster, "tail", 0);
  const auto rep = check_opnorm_tail(cfg);
  // spot-check the norms against an SVD
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    BitSource bits = BitSource::deterministic(derive_seed(kMaster, "tail-svd", i));
    const auto c = build_construction(64, 128, 8, bits);
    const double est = operator_norm(c.product).value;
    worst = std::max(worst, std::abs(est - oracle::largest_singular_value(oracle::dense(c.product))) / est);
  }
  const double secs = seconds_since(t0);
  std::uint64_t flagged = 0;
  for (const bool f : rep.flagged) flagged += f;
  return {flagged == 0 && rep.three_root_n_frequency <= 0.05 && worst < 1e-6 && secs < 600,
          fmt("500 trials, %llu of %zu grid points above bound + 3 SE, ||A|| > 3 sqrt(N) in "
              "%.3f of trials, norm vs SVD rel. diff %.1e, %.1fs",
              (unsigned long long)flagged, rep.t_grid.size(), rep.three_root_n_frequency, worst, secs)};
}

Outcome kernel_correctness() {
  bool ok = true;
  double worst_res = 0, worst_orth = 0;
  std::uint64_t svd_checks = 0;
  const std::array<std::size_t, 6> sizes{16, 32, 64, 128, 256, 512};
  const std::array<double, 3> etas{0.25, 0.5, 0.75};
  for (int b = 0; b < 50; ++b) {
    const std::size_t cols = sizes[b % sizes.size()];
    const double eta = etas[(b / sizes.size()) % etas.size()];
    const std::size_t n = rows_for(cols, eta);
    BitSource bits = BitSource::deterministic(derive_seed(kMaster, "kernel", b));
    const auto c = build_construction(n, cols, default_independence(cols), bits);
    const auto basis = kernel_basis(c.product);
    double res = 0, orth = 0;
    for (std::size_t q = 0; q < basis.dim(); ++q) {
      const auto v = basis.vectors.row(q);
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += c.product.at(i, j) * v[j];
        res = std::max(res, std::abs(s));
      }
      for (std::size_t p = 0; p < basis.dim(); ++p) {
        double s = 0;
        const auto u = basis.vectors.row(p);
        for (std::size_t j = 0; j < cols; ++j) s += u[j] * v[j];
        orth = std::max(orth, std::abs(s - (p == q ? 1.0 : 0.0)));
      }
    }
    bool rank_ok = basis.dim() == cols - basis.rank;
    if (n <= 64) {
      rank_ok = rank_ok && oracle::svd_rank(oracle::dense(c.product)) == basis.rank;
      ++svd_checks;
    }
    ok = ok && rank_ok && res <= 1e-8 * std::sqrt(double(cols)) && orth <= 1e-10;
    worst_res = std::max(worst_res, res / std::sqrt(double(cols)));
    worst_orth = std::max(worst_orth, orth);
  }
  return {ok, fmt("50 builds N <= 512: max ||Ab||_inf / sqrt(N) = %.2e, orthonormality %.2e, "
                  "%llu ranks matched by SVD",
                  worst_res, worst_orth, (unsigned long long)svd_checks)};
}

Outcome distortion_shape() {
  const auto t0 = Clock::now();
  std::vector<double> logn, logd, logc;
  double factor256 = 0;
  std::uint64_t violations = 0, sampled = 0;
  std::string detail;
  for (const std::size_t cols : {64u, 128u, 256u, 512u}) {
    BitSource bits = BitSource::deterministic(derive_seed(kMaster, "distortion-build", cols));
    const auto c = build_construction(rows_for(cols, 0.5), cols, default_independence(cols), bits);
    const auto basis = kernel_basis(c.product);
    DistortionConfig cfg;
    cfg.seed = derive_seed(kMaster, "distortion", cols);
    const auto rep = estimate_distortion(basis, cfg);
    const auto ctl = estimate_distortion(coordinate_subspace(cols, basis.dim()), cfg);
    violations += rep.upper_bound_violations + ctl.upper_bound_violations;
    // independent samples: random combinations of the basis
    Rng rng(derive_seed(kMaster, "distortion-upper", cols));
    for (int s = 0; s < 200; ++s) {
      std::vector<double> x(cols, 0.0);
      for (std::size_t q = 0; q < basis.dim(); ++q) {
        const double g = rng.normal();
        const auto v = basis.vectors.row(q);
        for (std::size_t j = 0; j < cols; ++j) x[j] += g * v[j];
      }
      double l1 = 0, l2 = 0;
      for (const double v : x) l1 += std::abs(v), l2 += v * v;
      violations += l1 / (std::sqrt(double(cols)) * std::sqrt(l2)) > 1 + 1e-12;
      ++sampled;
    }
    logn.push_back(std::log(double(cols)));
    logd.push_back(std::log(rep.delta));
    logc.push_back(std::log(ctl.delta));
    if (cols == 256) factor256 = rep.delta / ctl.delta;
    detail += fmt("N=%zu %.4f/%.4f; ", cols, rep.delta, ctl.delta);
  }
  const double s = oracle::slope(logn, logd);
  const double sc = oracle::slope(logn, logc);
  const double secs = seconds_since(t0);
  return {violations == 0 && s >= -0.15 && std::abs(sc + 0.5) <= 0.05 && factor256 >= 5 && secs < 1200,
          detail + fmt("slope %.3f (>= -0.15), control slope %.3f (~ -0.5), factor at 256 = %.2f "
                       "(>= 5), %llu ratio > 1 among %llu extra samples, %.1fs",
                       s, sc, factor256, (unsigned long long)violations,
                       (unsigned long long)sampled, secs)};
}

std::pair<int, std::string> run_capture(const std::string& cmd) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (const std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), got);
  const int status = pclose(pipe.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome reproducibility(const std::string& binary) {
  if (binary.empty()) return {false, "path to the kashin binary not given"};
  const std::string cmd = "'" + binary + "' verify --seed 5eed --n-dim 128";
  const auto first = run_capture(cmd);
  const auto second = run_capture(cmd);
  const bool same = first.second == second.second;
  return {first.first == 0 && second.first == 0 && same && !first.second.empty(),
          fmt("two verify runs, exit %d/%d, %zu bytes, identical: %s", first.first, second.first,
              first.second.size(), same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact k-wise independence (k=4, r=3, N=7)", exact_kwise},
      {"GF(2^r) field axioms, r <= 8", field_axioms},
      {"expander spectral gap below 0.95", spectral_gap},
      {"expander Chernoff domination", walk_hitting},
      {"Paley-Zygmund fraction >= 1/12", paley_zygmund},
      {"bit budget exact and <= 4N", bit_budget_sweep},
      {"operator-norm tail", opnorm_tail},
      {"kernel correctness", kernel_correctness},
      {"distortion shape", distortion_shape},
      {"reproducible verify report", [&] { return reproducibility(binary); }},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
  return failed ? 1 : 0;
}
