// Acceptance checks at the reference device. One PASS/FAIL line per criterion;
// exit status is nonzero if any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "optoepr/adiabatic.hpp"
#include "optoepr/config.hpp"
#include "optoepr/langevin.hpp"
#include "optoepr/sweep.hpp"

using namespace optoepr;

namespace {

// Tolerances.
constexpr double kDoOverGamma = 0.073, kDoTol = 0.003;
constexpr double kSqueezeMin = 16.0, kSqueezeRef = 16.8, kSqueezeTol = 0.2;
constexpr double kEofMin = 5.0 - 0.05, kEofRef = 5.01, kEofTol = 0.05;
constexpr double kTempSpread = 0.01;
constexpr double kQSpread = 0.03;
constexpr double kCommutatorClosed = 1e-12;
constexpr double kCommutatorExact = 1e-10;
constexpr double kOracleBand = 0.1;  // |omega| <= 0.1 delta
constexpr double kAdiabaticVsRwa = 0.05;
constexpr double kRwaVsFull = 0.10;
constexpr double kClosedFormEntries = 1e-10;
constexpr double kNumericOptimum = 0.05;
constexpr double kOccupationLo = 1e2, kOccupationHi = 1e4, kOccupationFrac = 1e-2;
constexpr double kLogNegTol = 1e-9;

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  fmt::print("{} {}: {}\n", pass ? "PASS" : "FAIL", id, detail);
}

double spread(const SweepResult& r) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : r.rows) {
    lo = std::min(lo, row.stats.peak_eof);
    hi = std::max(hi, row.stats.peak_eof);
  }
  return (hi - lo) / hi;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Each criterion runs inside guard so an exception becomes a FAIL line.
template <class F>
void guard(const std::string& id, F f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const PhysicalParams params = reference_device_params();
  const DerivedParams ref = solve_steady_state(params);
  const double gamma = ref.gamma;
  const OptimumDetuning opt = optimum_d(ref);
  const PhysicalParams at_opt = at_optimum_detuning(params);

  guard("1 optimum detuning", [&] {
    const double x = opt.d_o / gamma;
    report("1 optimum detuning", std::abs(x - kDoOverGamma) <= kDoTol,
           fmt::format("d_o/gamma = {:.5f} (target {} +- {})", x, kDoOverGamma, kDoTol));
  });

  guard("2 peak squeezing", [&] {
    const double chain = squeezing_db(4.0 * (opt.d_o / gamma) * (opt.d_o / gamma));
    const bool pass = opt.S_o >= kSqueezeMin && std::abs(opt.S_o - kSqueezeRef) <= kSqueezeTol &&
                      std::abs(chain - opt.S_o) < 1e-9;
    report("2 peak squeezing", pass,
           fmt::format("S_o = {:.4f} dB, -10log10(4(d_o/gamma)^2) = {:.4f} dB (>= {}, {} +- {})",
                       opt.S_o, chain, kSqueezeMin, kSqueezeRef, kSqueezeTol));
  });

  guard("3 peak EOF", [&] {
    const bool pass = opt.eof_o >= kEofMin && std::abs(opt.eof_o - kEofRef) <= kEofTol;
    report("3 peak EOF", pass,
           fmt::format("eof_o = {:.5f} ebits (>= {}, {} +- {})", opt.eof_o, kEofMin, kEofRef, kEofTol));
  });

  guard("4 temperature insensitivity", [&] {
    SweepSpec s{SweepAxis::Temperature, {4.0, 77.0, 300.0}, at_opt, default_omega_grid(gamma),
                ModelKind::Adiabatic};
    const SweepResult r = run_sweep(s);
    const double sp = spread(r);
    const auto w = [&](int i) { return r.rows[i].stats.fwhm / gamma; };
    const bool ordered = w(2) < w(1) && w(1) < w(0);
    report("4 temperature insensitivity", sp < kTempSpread && ordered,
           fmt::format("peak EOF spread {:.2e} (< {}), FWHM/gamma 4K {:.4f} > 77K {:.4f} > 300K {:.4f}",
                       sp, kTempSpread, w(0), w(1), w(2)));
  });

  guard("5 Q insensitivity", [&] {
    SweepSpec s{SweepAxis::Q, {300.0, 30000.0}, at_opt, default_omega_grid(gamma), ModelKind::Adiabatic};
    const SweepResult r = run_sweep(s);
    const double sp = spread(r);
    report("5 Q insensitivity", sp < kQSpread,
           fmt::format("peak EOF {:.5f} (Q=300), {:.5f} (Q=30000), spread {:.2e} (< {})",
                       r.rows[0].stats.peak_eof, r.rows[1].stats.peak_eof, sp, kQSpread));
  });

  guard("6 peak splitting", [&] {
    SweepSpec s{SweepAxis::Alpha, {2000.0, 3000.0, 4000.0}, params, default_omega_grid(gamma),
                ModelKind::Adiabatic};
    const SweepResult r = run_sweep(s);
    const double step = 4.0 * gamma / 2000.0;
    bool pass = true;
    double prev = 0.0;
    std::string detail;
    for (const auto& row : r.rows) {
      const auto& pk = row.stats.peak_omegas;
      if (pk.size() != 2) {
        pass = false;
        detail += fmt::format("alpha={}: {} maxima; ", row.value, pk.size());
        continue;
      }
      const double split = pk[1] - pk[0];
      pass = pass && std::abs(pk[0] + pk[1]) <= step && split > prev;
      prev = split;
      detail += fmt::format("alpha={}: +-{:.4f} gamma; ", row.value, 0.5 * split / gamma);
    }
    report("6 peak splitting", pass, detail + "two symmetric maxima, growing split");
  });

  guard("7 commutators", [&] {
    DerivedParams quiet = with_detuning(ref, opt.d_o);
    quiet.gamma_m_tilde = 0.0;
    double closed = 0.0;
    for (double w : linear_grid(-gamma, gamma, 101)) {
      const TransferPoint tp = transfer_functions(quiet, w);
      closed = std::max(closed, std::abs(std::norm(tp.G) - std::norm(tp.H) - 1.0));
    }
    double exact = 0.0;
    for (double T : {0.0, 4.0, 300.0}) {
      for (double alpha : {500.0, 1000.0, 3000.0}) {
        for (double d_over : {0.0, 0.07, 0.3}) {
          PhysicalParams p = params;
          p.T = T;
          p = params_for_operating_point(p, {alpha, hz_to_rads(10e6), d_over * gamma});
          const DerivedParams d = solve_steady_state(p);
          for (double w : linear_grid(-gamma, gamma, 101)) {
            for (const auto& resp : {rwa3_solve(d, w), full6_solve(d, w)}) {
              const auto [c1, c2] = output_commutators(resp);
              exact = std::max({exact, std::abs(c1 - 1.0), std::abs(c2 - 1.0)});
            }
          }
        }
      }
    }
    report("7 commutators", closed <= kCommutatorClosed && exact <= kCommutatorExact,
           fmt::format("closed form max ||G|^2-|H|^2-1| = {:.2e} (<= {}), rwa3/full6 max |[b,b^dag]-1| "
                       "= {:.2e} (<= {})",
                       closed, kCommutatorClosed, exact, kCommutatorExact));
  });

  const auto band = linear_grid(-kOracleBand * ref.delta, kOracleBand * ref.delta, 201);

  guard("8a adiabatic vs rwa3", [&] {
    const ComparisonReport c = compare_models(ref, band, {ModelKind::Rwa3, ModelKind::Adiabatic});
    const double dev = c.max_rel_dev[1];
    report("8a adiabatic vs rwa3", dev <= kAdiabaticVsRwa,
           fmt::format("max relative deviation of n-k_x on |omega| <= {} delta: {:.4g} (<= {})", kOracleBand,
                       dev, kAdiabaticVsRwa));
  });

  guard("8b rwa3 vs full6", [&] {
    const ComparisonReport c = compare_models(ref, band, {ModelKind::Rwa3, ModelKind::Full6});
    const double dev = c.max_rel_dev[1];
    report("8b rwa3 vs full6", dev <= kRwaVsFull,
           fmt::format("max relative deviation of n-k_x on |omega| <= {} delta: {:.4g} (<= {})", kOracleBand,
                       dev, kRwaVsFull));
  });

  guard("8c closed-form entries", [&] {
    double worst = 0.0;
    for (double T : {0.0, 300.0}) {
      PhysicalParams p = params;
      p.T = T;
      const DerivedParams base = solve_steady_state(p);
      for (double d : {0.0, opt.d_o, 0.2 * gamma}) {
        const DerivedParams at = with_detuning(base, d);
        for (double w : linear_grid(-gamma, gamma, 41)) {
          const Covariance4 V =
              assemble_covariance(adiabatic_response(at, w, NoiseRouting::AsPrinted), at.n_m);
          const Covariance4 P = closed_form_covariance(transfer_functions(at, w), at.n_m, at).first;
          worst = std::max(worst, (V.entries - P.entries).cwiseAbs().maxCoeff() /
                                      P.entries.cwiseAbs().maxCoeff());
        }
      }
    }
    report("8c closed-form entries", worst <= kClosedFormEntries,
           fmt::format("max relative entry difference {:.2e} (<= {}), V14 with the "
                       "omega^2 + gamma^2/4 term",
                       worst, kClosedFormEntries));
  });

  guard("9 numeric optimum", [&] {
    const double numeric = find_optimum_d_numeric(params, {0.01 * gamma, 0.2 * gamma});
    const double dev = (numeric - opt.d_o) / opt.d_o;
    report("9 numeric optimum", std::abs(dev) <= kNumericOptimum,
           fmt::format("numeric d*/gamma = {:.5f}, closed form {:.5f}, deviation {:+.3f}% (<= {:g}%)",
                       numeric / gamma, opt.d_o / gamma, 100.0 * dev, 100.0 * kNumericOptimum));
  });

  guard("10 intracavity occupation", [&] {
    const double occ = intracavity_occupation(ref);
    const double frac = occ / (ref.alpha * ref.alpha);
    const bool pass = occ >= kOccupationLo && occ <= kOccupationHi && frac < kOccupationFrac;
    report("10 intracavity occupation", pass,
           fmt::format("<a1^dag a1> = {:.2f} in [{:g}, {:g}], ratio to |alpha|^2 = {:.2e} (< {:g})", occ,
                       kOccupationLo, kOccupationHi, frac, kOccupationFrac));
  });

  guard("11 metric consistency", [&] {
    bool decreasing = true;
    double prev = INFINITY;
    for (int i = 1; i <= 1000; ++i) {
      const double e = eof(i / 1001.0);
      decreasing = decreasing && e < prev;
      prev = e;
    }
    const bool zero_at_one = eof(1.0) == 0.0;
    const bool s_exact = squeezing_db(0.1) == 10.0;
    double logneg = 0.0;
    for (double n : {1.0, 2.5, 40.0}) {
      for (double frac : {0.1, 0.5, 0.99}) {
        const double k = frac * std::sqrt(n * n - 1.0);
        Covariance4 V;
        V.entries << n, 0, k, 0, 0, n, 0, -k, k, 0, n, 0, 0, -k, 0, n;
        if (n - k >= 1.0) continue;
        logneg = std::max(logneg, std::abs(log_negativity(V) - squeezing_db(n - k) / (10.0 * std::log10(2.0))));
      }
    }
    report("11 metric consistency", decreasing && zero_at_one && s_exact && logneg <= kLogNegTol,
           fmt::format("eof decreasing on 1000 points: {}, eof(1) = 0: {}, S(0.1) = 10 dB: {}, "
                       "max |E_N - S/(10 log10 2)| = {:.2e} (<= {})",
                       decreasing, zero_at_one, s_exact, logneg, kLogNegTol));
  });

  guard("12 determinism", [&] {
    if (cli.empty()) {
      report("12 determinism", false, "CLI path not given");
      return;
    }
    const std::string a = "acceptance_spectrum_a.csv", b = "acceptance_spectrum_b.csv";
    const std::string cfg = "acceptance_defaults.cfg";
    std::ofstream(cfg) << "defaults: paper\ncommand = spectrum\n";
    int rc = 0;
    for (const auto& out : {a, b}) {
      rc |= std::system(fmt::format("\"{}\" --config {} --out {} spectrum", cli, cfg, out).c_str());
    }
    const std::string x = slurp(a), y = slurp(b);
    const bool pass = rc == 0 && !x.empty() && x == y;
    report("12 determinism", pass,
           fmt::format("two spectrum runs: {} bytes and {} bytes, identical: {}", x.size(), y.size(), x == y));
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove(cfg.c_str());
  });

  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
