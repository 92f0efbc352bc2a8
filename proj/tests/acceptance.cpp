// Acceptance suite: the project's top-level gates, printed one per line.
// Each gate pins its thresholds in code; the binary exits nonzero if any
// gate fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "schottky/fup.hpp"
#include "schottky/fup_defaults.hpp"
#include "schottky/group_io.hpp"
#include "schottky/measure.hpp"
#include "schottky/oscillatory.hpp"
#include "schottky/scan.hpp"

using namespace schottky;

#ifndef SCHOTTKY_DATA_DIR
#define SCHOTTKY_DATA_DIR "data"
#endif

namespace {

int failures = 0;

using Clock = std::chrono::steady_clock;

struct Gate {
    const char* name;
    double time_budget_s;
    Clock::time_point start = Clock::now();
    bool ok = true;
    std::ostringstream detail;

    Gate(const char* name, double budget) : name(name), time_budget_s(budget) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }

    void note(const std::string& what) {
        detail << (detail.str().empty() ? "" : "; ") << what;
    }

    void finish() {
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (secs > time_budget_s) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << "runtime " << secs << "s over budget";
        }
        std::printf("[%s] %-18s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                    detail.str().empty() ? "" : " -- ", detail.str().c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::string data_file(const char* name) {
    return std::string(SCHOTTKY_DATA_DIR) + "/" + name;
}

struct GroupCtx {
    SchottkyData data;
    DeltaReport delta;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- criterion 1: group validation ----------------------------------------

void criterion_validation() {
    Gate gate("1 validation", 1.0);
    for (const char* name : {"group_r2.json", "group_r3.json"}) {
        const ValidationReport rep = validate(load_group(data_file(name)));
        gate.require(rep.passed(), std::string(name) + " failed validation");
        for (const auto& c : rep.checks)
            gate.require(c.defect < 1e-9, std::string(name) + " defect " + c.name);
    }
    const ValidationReport bad_inv = validate(load_group(data_file("group_r2_bad_inverse.json")));
    gate.require(!bad_inv.passed() && bad_inv.find("inverse_pairs") &&
                     !bad_inv.find("inverse_pairs")->passed,
                 "perturbed inverse not caught");
    const ValidationReport overlap = validate(load_group(data_file("group_r2_overlap.json")));
    gate.require(!overlap.passed() && overlap.find("intervals_disjoint") &&
                     !overlap.find("intervals_disjoint")->passed,
                 "overlap not caught");
    gate.finish();
}

// ---- criterion 2: dimension ------------------------------------------------

void criterion_dimension(const GroupCtx& g2, const GroupCtx& g3) {
    Gate gate("2 dimension", 60.0);
    for (const GroupCtx* ctx : {&g2, &g3}) {
        const DeltaReport& rep = ctx->delta;
        gate.require(std::abs(rep.delta_hat - rep.oracle_delta) < 1e-3,
                     ctx->data.name + ": eigen/partial-sum routes disagree by " +
                         fmt17(std::abs(rep.delta_hat - rep.oracle_delta)));
        bool cauchy = false;
        for (size_t i = 1; i < rep.tau_grid.size(); ++i)
            if (rep.tau_grid[i] <= 1e-4 &&
                std::abs(rep.delta_by_tau[i] - rep.delta_by_tau[i - 1]) < 1e-4)
                cauchy = true;
        gate.require(cauchy, ctx->data.name + ": no Cauchy gap < 1e-4 by tau = 1e-4");
    }
    gate.finish();
}

// ---- criterion 3: partition counting law -----------------------------------

void criterion_partition_law(const GroupCtx& g2, const GroupCtx& g3) {
    Gate gate("3 partition law", 60.0);
    for (const GroupCtx* ctx : {&g2, &g3}) {
        std::vector<ScanPoint> pts;
        for (const double inv_tau : log_grid(10.0, 1e4, 25))
            pts.push_back({inv_tau,
                           static_cast<double>(build_partition(ctx->data, 1.0 / inv_tau).size())});
        const ScanResult fit = fit_power_law(std::move(pts), 0.0, 2.9);
        const double rel = fit.exponent_hat / ctx->delta.delta_hat - 1.0;
        gate.require(std::abs(rel) <= 0.05, ctx->data.name + ": slope off by " + fmt17(rel));
        gate.require(fit.r2 >= 0.99, ctx->data.name + ": r2 = " + fmt17(fit.r2));
    }
    gate.finish();
}

// ---- criterion 4: measure invariance ---------------------------------------

void criterion_invariance(const GroupCtx& g2) {
    Gate gate("4 invariance", 60.0);
    const SchottkyData& g = g2.data;
    const int levels = 5;
    std::vector<double> taus;
    std::vector<DiscreteMeasure> mus;
    for (int i = 0; i < levels; ++i) {
        const double tau = 0.04 / (1 << i);
        const double d = bowen_root(g, build_partition(g, tau), 1e-13, nullptr);
        taus.push_back(tau);
        mus.push_back(build_measure(g, tau, d));
    }
    // constants are exact at the discrete fixed point
    const auto one = [](double) { return 1.0; };
    for (int i = 0; i < levels; ++i)
        gate.require(transfer_invariance_residual(g, mus[i], one, 1) < 1e-10,
                     "constant residual above 1e-10 at tau " + fmt17(taus[i]));

    struct TestFn {
        const char* name;
        std::function<double(double)> f;
    };
    const TestFn fns[] = {{"x", [](double x) { return x; }},
                          {"x^2", [](double x) { return x * x; }},
                          {"sin", [](double x) { return std::sin(x); }}};
    for (const auto& fn : fns) {
        for (int k = 1; k <= 2; ++k) {
            std::vector<double> res;
            for (int i = 0; i < levels; ++i)
                res.push_back(transfer_invariance_residual(g, mus[i], fn.f, k));
            // three consecutive refinements shrink the residual by >= 1.5^3
            bool found = false;
            for (int i = 0; i + 3 < levels && !found; ++i)
                found = res[i] / res[i + 3] >= 1.5 * 1.5 * 1.5;
            gate.require(found, std::string(fn.name) + " k=" + std::to_string(k) +
                                    " lacks a 1.5^3 refinement window");
        }
    }
    gate.finish();
}

// ---- criterion 5: regularity bands -----------------------------------------

void criterion_regularity(const GroupCtx& g2, const GroupCtx& g3) {
    Gate gate("5 regularity", 60.0);
    for (const GroupCtx* ctx : {&g2, &g3}) {
        const double tau = 2e-4;
        const DiscreteMeasure coarse = build_measure(ctx->data, tau, ctx->delta.delta_hat);
        const DiscreteMeasure fine = build_measure(ctx->data, tau / 2, ctx->delta.delta_hat);
        const RegularityBand a = regularity_scan(coarse, 10000, 17, 10 * tau, 0);
        const RegularityBand b = regularity_scan(fine, 10000, 17, 10 * tau, 0);
        gate.require(std::isfinite(a.upper_max) && a.upper_max > 0,
                     ctx->data.name + ": upper band degenerate");
        gate.require(a.lower_min > 0, ctx->data.name + ": lower band degenerate");
        const double upper_drift = std::abs(b.upper_max / a.upper_max - 1.0);
        const double lower_drift = std::abs(b.lower_min / a.lower_min - 1.0);
        gate.require(upper_drift < 0.2,
                     ctx->data.name + ": upper band drift " + fmt17(upper_drift));
        gate.require(lower_drift < 0.2,
                     ctx->data.name + ": lower band drift " + fmt17(lower_drift));
    }
    gate.finish();
}

// ---- criterion 6: distortion lemma suite -----------------------------------

void criterion_distortion_suite(const GroupCtx& g2, const GroupCtx& g3) {
    Gate gate("6 distortion suite", 120.0);
    for (const GroupCtx* ctx : {&g2, &g3}) {
        const SchottkyData& g = ctx->data;
        const std::string tag = g.name;
        double child_ratio_min = 1e300, child_ratio_max = 0;
        double reversal_min = 1e300, reversal_max = 0;
        double concat_min = 1e300, concat_max = 0;
        double bracket_lo = 1e300, bracket_hi = 0;

        auto word_checks = [&](const Word& w, bool exhaustive) {
            const MobiusTransform prefix = group_element(g, w.parent());
            const MobiusTransform full = group_element(g, w);
            const Interval I = interval_of(g, w);
            const Interval& base = g.interval(w.last());
            for (Letter b = 1; b <= 2 * g.r; ++b) {
                if (b == g.bar(w.last())) continue;
                const Interval child_base = g.interval(b);
                const double lo = apply_finite(full, child_base.lo);
                const double hi = apply_finite(full, child_base.hi);
                const Interval child(std::min(lo, hi), std::max(lo, hi));
                const double ratio = child.size() / I.size();
                child_ratio_min = std::min(child_ratio_min, ratio);
                child_ratio_max = std::max(child_ratio_max, ratio);
                if (exhaustive)
                    gate.require(child.lo >= I.lo - 1e-12 && child.hi <= I.hi + 1e-12,
                                 tag + ": nesting violated at " + w.str());
            }
            // derivative sandwich, ratio bound, bracket on the base interval
            const double alpha = w.length() > 1 ? distortion_factor(prefix, base) : 0.0;
            const double ea = std::exp(std::abs(alpha));
            const double band = I.size() / base.size();
            double prev_x = base.lo, prev_d = derivative(prefix, base.lo);
            for (int i = 0; i <= 16; ++i) {
                const double x = base.lo + base.size() * i / 16;
                const double d = derivative(prefix, x);
                // equality holds at the endpoints, so allow the relative
                // noise of deep-word interval sizes (~1e-7)
                gate.require(d >= band / ea * (1 - 1e-6) && d <= band * ea * (1 + 1e-6),
                             tag + ": sandwich violated at " + w.str());
                gate.require(d / prev_d <= std::exp(2 * ea * std::abs(x - prev_x) /
                                                    base.size()) *
                                                   (1 + 1e-6) +
                                               1e-9,
                             tag + ": ratio bound violated at " + w.str());
                bracket_lo = std::min(bracket_lo, d / I.size());
                bracket_hi = std::max(bracket_hi, d / I.size());
                prev_x = x;
                prev_d = d;
            }
            const double rev = interval_of(g, w.bar(g.r)).size() / I.size();
            reversal_min = std::min(reversal_min, rev);
            reversal_max = std::max(reversal_max, rev);
        };

        std::vector<std::pair<Word, Interval>> all;
        for (int n = 1; n <= 5; ++n)
            for (const Word& w : enumerate_words(n, g.r)) {
                word_checks(w, true);
                all.emplace_back(w, interval_of(g, w));
            }
        double separation_min = 1e300;
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j) {
                if (is_prefix(all[i].first, all[j].first) ||
                    is_prefix(all[j].first, all[i].first))
                    continue;
                const double dist = interval_distance(all[i].second, all[j].second);
                if (dist <= 0) {
                    gate.require(false, tag + ": non-comparable intervals intersect");
                    continue;
                }
                separation_min = std::min(
                    separation_min,
                    dist / std::max(all[i].second.size(), all[j].second.size()));
            }

        Rng rng(2024);
        // random walks truncated by interval size so extreme branches stay
        // within double resolution
        auto random_word = [&](std::vector<Letter> letters, int len, double size_floor) {
            if (letters.empty())
                letters.push_back(static_cast<Letter>(1 + rng.below(2 * g.r)));
            while (static_cast<int>(letters.size()) < len) {
                Letter b;
                do {
                    b = static_cast<Letter>(1 + rng.below(2 * g.r));
                } while (b == bar_letter(letters.back(), g.r));
                letters.push_back(b);
                if (interval_of(g, Word(letters)).size() < size_floor) break;
            }
            return Word(std::move(letters));
        };
        for (int t = 0; t < 10000; ++t) {
            const Word w = random_word({}, 6 + static_cast<int>(rng.below(5)), 1e-4);
            word_checks(w, false);
            const Word w2 = random_word({w.last()}, 1 + static_cast<int>(rng.below(4)), 1e-2);
            const double ratio = interval_of(g, glue(w, w2)).size() /
                                 (interval_of(g, w).size() * interval_of(g, w2).size());
            concat_min = std::min(concat_min, ratio);
            concat_max = std::max(concat_max, ratio);
        }

        gate.require(child_ratio_max < 1.0, tag + ": contraction fails");
        gate.require(child_ratio_min > 0.0, tag + ": parent-child lower bound fails");
        gate.require(reversal_min > 0 && std::isfinite(reversal_max),
                     tag + ": reversal band degenerate");
        gate.require(concat_min > 0 && std::isfinite(concat_max),
                     tag + ": concatenation band degenerate");
        gate.require(separation_min > 1e-4, tag + ": separation constant too small");
        gate.require(bracket_lo > 0 && std::isfinite(bracket_hi),
                     tag + ": derivative bracket degenerate");
    }
    gate.finish();
}

// ---- criterion 7: Fourier decay ---------------------------------------------

void criterion_fourier(const GroupCtx& g2, const GroupCtx& g3) {
    Gate gate("7 fourier decay", 600.0);
    for (const GroupCtx* ctx : {&g2, &g3}) {
        const FourierScan scan =
            fourier_scan(ctx->data, ctx->delta.delta_hat, default_fourier_phase(ctx->data),
                         log_grid(10.0, 1e4, 33), 1);
        gate.require(scan.epsilon1_hat > 0.02,
                     ctx->data.name + ": epsilon1_hat = " + fmt17(scan.epsilon1_hat));
        gate.require(scan.scan.r2 >= 0.8, ctx->data.name + ": r2 = " + fmt17(scan.scan.r2));
        gate.require(scan.scan.window_hi / scan.scan.window_lo >= 10.0,
                     ctx->data.name + ": fit window narrower than a decade");
    }
    // linear middle-third control along its scaling subsequence
    const PhasePair pp = fourier_phase(1.0);
    const double two_pi = 2 * std::numbers::pi;
    std::vector<ScanPoint> pts;
    for (int k = 0; k <= 8; ++k) {
        const int level = k + 4;
        const std::vector<Atom> atoms = cantor_atoms(level);
        pts.push_back({two_pi * std::pow(3.0, k),
                       std::abs(oscillatory_integral(atoms, std::pow(3.0, -level), pp,
                                                     two_pi * std::pow(3.0, k)))});
    }
    const ScanResult control = fit_power_law(std::move(pts));
    gate.require(std::abs(control.exponent_hat) < 0.01,
                 "control exponent " + fmt17(-control.exponent_hat));
    gate.finish();
}

// ---- criterion 8: uncertainty-principle exponents ---------------------------

void criterion_fup(const GroupCtx& g2) {
    Gate gate("8 fup exponents", 900.0);
    const SchottkyData& g = g2.data;
    const double delta = g2.delta.delta_hat;
    const KernelSpec ks = default_hyperbolic_kernel(g);
    const FupScan scan = fup_scan(g, delta, ks, log_grid(1e-4, 1e-1, 13), 1);
    gate.require(scan.beta_hat > 0.0, "beta_hat = " + fmt17(scan.beta_hat));
    for (size_t i = 0; i < scan.scan.points.size(); ++i) {
        const double norm = scan.scan.points[i].value;
        gate.require(norm * norm <= scan.schur_bounds[i] * 1.1,
                     "Schur inequality fails at h = " + fmt17(scan.scan.points[i].parameter));
        gate.require(norm <= 1.0 + 1e-9, "norm exceeds the mass ceiling");
        gate.require(scan.sizes[i] <= 4000, "matrix size over 4000");
    }
    const double rho = 0.9;
    const FupScan leb = lebesgue_fup_scan(g, ks, log_grid(3e-3, 1e-1, 10), rho, 1);
    const double floor = (0.5 - delta) - (1 - delta) * (1 - rho) - 0.05;
    gate.require(leb.beta_hat >= floor, "lebesgue beta_hat " + fmt17(leb.beta_hat) +
                                            " below floor " + fmt17(floor));
    // soft cross-relation with the measured modulus-decay exponent
    const FourierScan fs =
        fourier_scan(g, delta, default_fourier_phase(g), log_grid(10.0, 1e4, 17), 1);
    gate.require(scan.beta_hat >= fs.epsilon1_hat / 4 - 0.1,
                 "beta_hat below the quarter of the decay exponent");
    gate.note("beta_hat = " + fmt17(scan.beta_hat) + ", lebesgue = " + fmt17(leb.beta_hat));
    gate.finish();
}

// ---- criterion 9: oscillatory-sum diagnostics --------------------------------

void criterion_diagnostics(const GroupCtx& g2) {
    Gate gate("9 sum diagnostics", 600.0);
    const SchottkyData& g = g2.data;
    const double delta = g2.delta.delta_hat;

    const Partition Z = build_partition(g, 1e-8);
    const double n_scale = std::pow(Z.tau, -delta);
    Rng rng(11);
    const std::vector<Word> chain = sample_chain(g, Z, 2, rng);
    const LinkValues zeta = link_derivatives(Z, chain, 1);
    std::vector<ScanPoint> bpts;
    for (const double s : log_grid(Z.tau, std::pow(Z.tau, 1.0 / 8), 15))
        bpts.push_back({s, box_dim_statistic(zeta, s, n_scale)});
    const double box_slope = fit_power_law(std::move(bpts), 0.0, 0.5).exponent_hat;
    gate.require(box_slope >= delta / 4 - 0.05, "box-dimension slope " + fmt17(box_slope));

    double prev = -1;
    for (const double tau : {1e-3, 5e-4, 2.5e-4}) {
        const double frac =
            regular_chain_fraction(build_partition(g, tau), delta, 2, 0.4, 512, 7);
        if (tau == 1e-3) gate.require(frac >= 0.9, "regular fraction " + fmt17(frac));
        gate.require(frac >= prev - 1e-12, "regular fraction decreased under refinement");
        prev = frac;
    }

    std::vector<ScanPoint> tpts;
    for (const double s : log_grid(Z.tau, 1.0, 12))
        tpts.push_back({s, triple_count_statistic(g, Z, delta, chain[0], s)});
    const double triple_slope = fit_power_law(std::move(tpts), 0.0, 0.5).exponent_hat;
    gate.require(triple_slope >= delta / 2 - 0.1, "triple-count slope " + fmt17(triple_slope));
    gate.note("box " + fmt17(box_slope) + ", triple " + fmt17(triple_slope));
    gate.finish();
}

// ---- criterion 10: determinism across thread counts --------------------------

std::string serialize_scan(const ScanResult& s) {
    std::ostringstream os;
    os << "parameter,value,predicted\n";
    for (const auto& p : s.points)
        os << fmt17(p.parameter) << ',' << fmt17(p.value) << ','
           << fmt17(s.amplitude * std::pow(p.parameter, s.exponent_hat)) << '\n';
    return os.str();
}

void criterion_determinism(const GroupCtx& g2) {
    Gate gate("10 determinism", 600.0);
    const SchottkyData& g = g2.data;
    const double delta = g2.delta.delta_hat;
    const PhasePair pp = default_fourier_phase(g);
    const FourierScan f1 =
        fourier_scan(g, delta, pp, log_grid(10, 1e3, 9), 1, kDefaultWordBudget, 8);
    const FourierScan f3 =
        fourier_scan(g, delta, pp, log_grid(10, 1e3, 9), 3, kDefaultWordBudget, 8);
    gate.require(serialize_scan(f1.scan) == serialize_scan(f3.scan),
                 "fourier scan differs across thread counts");

    const KernelSpec ks = default_hyperbolic_kernel(g);
    const FupScan u1 = fup_scan(g, delta, ks, log_grid(5e-3, 5e-2, 3), 1);
    const FupScan u3 = fup_scan(g, delta, ks, log_grid(5e-3, 5e-2, 3), 3);
    std::ostringstream a, b;
    for (size_t i = 0; i < u1.scan.points.size(); ++i)
        a << fmt17(u1.scan.points[i].value) << ',' << fmt17(u1.schur_bounds[i]) << '\n';
    for (size_t i = 0; i < u3.scan.points.size(); ++i)
        b << fmt17(u3.scan.points[i].value) << ',' << fmt17(u3.schur_bounds[i]) << '\n';
    gate.require(a.str() == b.str(), "fup scan differs across thread counts");

    const double l1 = lebesgue_fup_norm(g, ks, 0.02, 0.9, 1);
    const double l3 = lebesgue_fup_norm(g, ks, 0.02, 0.9, 3);
    gate.require(fmt17(l1) == fmt17(l3), "lebesgue norm differs across thread counts");
    gate.finish();
}

} // namespace

int main() {
    std::printf("acceptance suite, data dir %s\n", SCHOTTKY_DATA_DIR);
    criterion_validation();

    GroupCtx g2{load_group(data_file("group_r2.json")), {}};
    GroupCtx g3{load_group(data_file("group_r3.json")), {}};
    {
        Gate setup("(delta setup)", 120.0);
        g2.delta = estimate_delta(g2.data, 1e-4, 1e-4);
        g3.delta = estimate_delta(g3.data, 1e-4, 1e-4);
        setup.note("delta_r2 = " + fmt17(g2.delta.delta_hat) +
                   ", delta_r3 = " + fmt17(g3.delta.delta_hat));
        setup.finish();
    }

    criterion_dimension(g2, g3);
    criterion_partition_law(g2, g3);
    criterion_invariance(g2);
    criterion_regularity(g2, g3);
    criterion_distortion_suite(g2, g3);
    criterion_fourier(g2, g3);
    criterion_fup(g2);
    criterion_diagnostics(g2);
    criterion_determinism(g2);

    if (failures)
        std::printf("%d criterion(s) FAILED\n", failures);
    else
        std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
