#include "schottky/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schottky/parallel.hpp"

namespace schottky {

double PhasePair::sup_dphi(const std::vector<Atom>& atoms) const {
    double m = 0;
    for (const auto& a : atoms) m = std::max(m, std::abs(dphi(a.center)));
    return m;
}

double PhasePair::inf_dphi(const std::vector<Atom>& atoms) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) m = std::min(m, std::abs(dphi(a.center)));
    return m;
}

double PhasePair::sup_g(const std::vector<Atom>& atoms) const {
    double m = 0;
    for (const auto& a : atoms) m = std::max(m, std::abs(g(a.center)));
    return m;
}

double PhasePair::hypothesis_margin(const std::vector<Atom>& atoms) const {
    return inf_dphi(atoms) - 1.0 / c_bound;
}

PhasePair fourier_phase(double hull_bound) {
    PhasePair pp;
    pp.phi = [](double x) { return x; };
    pp.dphi = [](double) { return 1.0; };
    pp.g = [](double) { return std::complex<double>(1.0, 0.0); };
    pp.c_bound = std::max(1.0, hull_bound + 1.0);
    return pp;
}

std::complex<double> oscillatory_integral(const std::vector<Atom>& atoms, double tau,
                                          const PhasePair& pp, double xi) {
    const double sup = pp.sup_dphi(atoms);
    if (std::abs(xi) * tau * sup > kResolutionGuard)
        throw RefineError("oscillatory_integral: quadrature does not resolve the oscillation",
                          kResolutionGuard / (std::abs(xi) * sup));
    // compensated accumulation keeps the sum independent of chunking
    std::complex<double> sum = 0, comp = 0;
    for (const auto& a : atoms) {
        const double phase = xi * pp.phi(a.center);
        const std::complex<double> term =
            std::complex<double>(std::cos(phase), std::sin(phase)) * pp.g(a.center) * a.mass;
        const std::complex<double> y = term - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

std::complex<double> oscillatory_integral(const DiscreteMeasure& mu, const PhasePair& pp,
                                          double xi) {
    return oscillatory_integral(mu.atoms, mu.tau, pp, xi);
}

FourierScan fourier_scan(const SchottkyData& data, double delta, const PhasePair& pp,
                         const std::vector<double>& xi_grid, int threads,
                         std::uint64_t budget, int block) {
    if (xi_grid.size() < 2) throw DomainError("fourier_scan: need at least two frequencies");
    if (block < 1) throw DomainError("fourier_scan: block size must be >= 1");
    for (const double xi : xi_grid)
        if (std::abs(xi) < 1.0)
            throw DomainError("fourier_scan: frequencies must satisfy |xi| >= 1");

    // conservative phase-slope bound from a coarse atom set
    const DiscreteMeasure coarse = build_measure(data, 0.45 * data.min_base_size(), delta, budget);
    if (pp.hypothesis_margin(coarse.atoms) < 0)
        throw PreconditionError("fourier_scan: phase slope drops below 1/c_bound on the support");
    const double sup = std::max(pp.sup_dphi(coarse.atoms), 1e-12);

    // The modulus at a single frequency fluctuates by an O(1) log factor, so
    // each grid point reports the rms over a short log-spaced block around
    // it; the resolution guard is enforced at the block's top frequency.
    const double spread = 1.2;
    FourierScan out;
    out.scan.points.resize(xi_grid.size());
    out.taus.resize(xi_grid.size());
    std::vector<std::string> failures(xi_grid.size());
    parallel_for(xi_grid.size(), threads, [&](size_t i) {
        const double xi = std::abs(xi_grid[i]);
        const double tau = 0.999 * kResolutionGuard / (xi * spread * sup);
        try {
            const DiscreteMeasure mu = build_measure(data, tau, delta, budget);
            out.taus[i] = tau;
            double acc = 0;
            for (int j = 0; j < block; ++j) {
                const double f =
                    block == 1 ? xi
                               : xi * std::pow(spread * spread, (j + 0.5) / block - 0.5);
                acc += std::norm(oscillatory_integral(mu, pp, f));
            }
            out.scan.points[i] = {xi, std::sqrt(acc / block)};
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (const auto& f : failures)
        if (!f.empty()) throw RefineError("fourier_scan: " + f, 0);

    out.scan = fit_power_law(std::move(out.scan.points));
    out.epsilon1_hat = -out.scan.exponent_hat;
    return out;
}

std::vector<Atom> cantor_atoms(int level) {
    if (level < 1 || level > 30) throw DomainError("cantor_atoms: level must be 1..30");
    const double tau = std::pow(3.0, -level);
    const double mass = std::pow(0.5, level);
    const size_t n = size_t(1) << level;
    std::vector<Atom> atoms(n);
    for (size_t idx = 0; idx < n; ++idx) {
        double x = 0, scale = 1;
        for (int bit = level - 1; bit >= 0; --bit) {
            scale /= 3;
            if (idx & (size_t(1) << bit)) x += 2 * scale;
        }
        atoms[idx] = {x + tau / 2, mass};
    }
    return atoms;
}

double tau_for_frequency(double xi, int k) {
    if (k < 1) throw DomainError("tau_for_frequency: k must be >= 1");
    return std::pow(std::abs(xi), -1.0 / (2 * k + 1.5));
}

LinkValues link_derivatives(const Partition& Z, const std::vector<Word>& chain, int j) {
    if (j < 1 || static_cast<size_t>(j) >= chain.size())
        throw DomainError("link_derivatives: slot j out of range");
    const Word& prev = chain[j - 1];
    const Word& next = chain[j];
    const auto prev_idx = Z.index_of(prev);
    const auto next_idx = Z.index_of(next);
    if (!prev_idx || !next_idx)
        throw PreconditionError("link_derivatives: chain words must belong to the partition");
    const MobiusTransform& prev_prefix = Z[*prev_idx].prefix; // g_{a_{j-1}'}
    const double x_next = Z[*next_idx].interval.midpoint();
    const Letter need_first = prev.last();
    const Letter need_last = next.first();
    const double inv_tau2 = 1.0 / (Z.tau * Z.tau);

    LinkValues out;
    for (size_t m = 0; m < Z.size(); ++m) {
        const Word& b = Z[m].word;
        if (b.first() != need_first || b.last() != need_last) continue;
        // chain rule for (g_{a'} o g_{b'})'(x); the composed matrix can have
        // entries too large for a stable determinant
        const double mid = apply_finite(Z[m].prefix, x_next);
        const double value = derivative(prev_prefix, mid) * derivative(Z[m].prefix, x_next);
        out.members.push_back(m);
        out.values.push_back(inv_tau2 * value);
    }
    if (out.values.empty())
        throw NoAdmissibleWordsError("link_derivatives: no linking words for this chain slot");
    return out;
}

std::complex<double> exponential_sum(const std::vector<LinkValues>& zetas, double eta,
                                     double n_scale, std::uint64_t work_budget) {
    if (zetas.empty()) throw DomainError("exponential_sum: need at least one value set");
    std::uint64_t work = 1;
    for (const auto& z : zetas) {
        if (z.values.empty()) throw DomainError("exponential_sum: empty value set");
        work *= z.values.size();
        if (work > work_budget) throw BudgetError("exponential_sum: tuple space too large");
    }
    const double two_pi = 2 * std::numbers::pi;
    std::complex<double> sum = 0;
    std::vector<size_t> idx(zetas.size(), 0);
    while (true) {
        double prod = eta;
        for (size_t j = 0; j < zetas.size(); ++j) prod *= zetas[j].values[idx[j]];
        const double phase = two_pi * prod;
        sum += std::complex<double>(std::cos(phase), std::sin(phase));
        size_t j = 0;
        while (j < idx.size() && ++idx[j] == zetas[j].values.size()) {
            idx[j] = 0;
            ++j;
        }
        if (j == idx.size()) break;
    }
    return sum / std::pow(n_scale, static_cast<double>(zetas.size()));
}

double box_dim_statistic(const LinkValues& zeta, double sigma, double n_scale) {
    if (!(sigma > 0)) throw DomainError("box_dim_statistic: sigma must be positive");
    std::vector<double> v = zeta.values;
    std::sort(v.begin(), v.end());
    std::uint64_t count = 0;
    size_t lo = 0;
    for (size_t hi = 0; hi < v.size(); ++hi) {
        while (v[hi] - v[lo] > sigma) ++lo;
        count += 2 * (hi - lo) + 1; // ordered pairs plus the diagonal
    }
    return static_cast<double>(count) / (n_scale * n_scale);
}

double regular_chain_fraction(const Partition& Z, double delta, int k, double epsilon2,
                              int n_samples, std::uint64_t seed) {
    if (k < 1) throw DomainError("regular_chain_fraction: k must be >= 1");
    if (!(epsilon2 > 0) || epsilon2 >= 1)
        throw DomainError("regular_chain_fraction: epsilon2 must lie in (0,1)");
    const double tau = Z.tau;
    const double sigma_lo = tau;
    const double sigma_hi = std::pow(tau, epsilon2 / 4);
    std::vector<double> sigmas;
    for (double s = sigma_hi; s >= sigma_lo * 0.9999; s /= 2) sigmas.push_back(s);
    sigmas.push_back(sigma_lo);

    const double norm = std::pow(tau, 2 * delta);
    Rng rng(seed);
    int regular = 0;
    for (int t = 0; t < n_samples; ++t) {
        std::vector<Word> chain(k + 1);
        for (int j = 0; j <= k; ++j) chain[j] = Z[rng.below(Z.size())].word;
        bool ok = true;
        for (int j = 1; j <= k && ok; ++j) {
            LinkValues zeta;
            try {
                zeta = link_derivatives(Z, chain, j);
            } catch (const NoAdmissibleWordsError&) {
                continue; // empty link set: the pair count is zero for every sigma
            }
            std::vector<double> v = zeta.values;
            std::sort(v.begin(), v.end());
            for (const double sigma : sigmas) {
                std::uint64_t count = 0;
                size_t lo = 0;
                for (size_t hi = 0; hi < v.size(); ++hi) {
                    while (v[hi] - v[lo] > sigma) ++lo;
                    count += 2 * (hi - lo) + 1;
                }
                if (norm * static_cast<double>(count) > std::pow(sigma, delta / 4)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) ++regular;
    }
    return static_cast<double>(regular) / n_samples;
}

double triple_count_statistic(const SchottkyData& data, const Partition& Z, double delta,
                              const Word& a, double sigma, std::uint64_t triple_budget) {
    const auto a_idx = Z.index_of(a);
    if (!a_idx) throw PreconditionError("triple_count_statistic: word not in the partition");
    if (!(sigma > 0)) throw DomainError("triple_count_statistic: sigma must be positive");
    const double tau = Z.tau;
    const double threshold = tau * tau * sigma;
    const MobiusTransform& a_prefix = Z[*a_idx].prefix;
    const Letter link = a.last();

    // candidate middle words grouped by their last letter
    std::vector<std::vector<size_t>> mids(2 * data.r + 1);
    std::uint64_t mid_total = 0;
    for (size_t m = 0; m < Z.size(); ++m) {
        if (Z[m].word.first() != link) continue;
        mids[Z[m].word.last()].push_back(m);
        ++mid_total;
    }

    // the pair count per target word is accumulated by a two-pointer sweep,
    // so the work is sum_d n_d log n_d, not the full triple space
    std::uint64_t work = 0;
    for (const auto& d : Z.members) work += mids[d.word.first()].size();
    if (work > triple_budget)
        throw BudgetError("triple_count_statistic: triple space exceeds the budget");

    std::uint64_t count = 0;
    for (size_t d = 0; d < Z.size(); ++d) {
        const Letter l = Z[d].word.first();
        const auto& cand = mids[l];
        if (cand.empty()) continue;
        const double x_d = Z[d].interval.midpoint();
        std::vector<double> v;
        v.reserve(cand.size());
        for (const size_t m : cand) {
            const double mid = apply_finite(Z[m].prefix, x_d);
            v.push_back(derivative(a_prefix, mid) * derivative(Z[m].prefix, x_d));
        }
        std::sort(v.begin(), v.end());
        size_t lo = 0;
        for (size_t hi = 0; hi < v.size(); ++hi) {
            while (v[hi] - v[lo] > threshold) ++lo;
            count += 2 * (hi - lo) + 1;
        }
    }
    return static_cast<double>(count) * std::pow(tau, 3 * delta);
}

double fourier_exponent_formula(double epsilon2, int k, double delta) {
    if (!(epsilon2 > 0) || k < 1)
        throw DomainError("fourier_exponent_formula: requires epsilon2 > 0 and k >= 1");
    return epsilon2 * delta / (40.0 * (2.0 * k + 1.5));
}

std::vector<Word> sample_chain(const SchottkyData& data, const Partition& Z, int k, Rng& rng) {
    // signature table: which (first, last) letter pairs occur in Z
    const int n = 2 * data.r;
    std::vector<std::vector<std::vector<size_t>>> by_sig(
        n + 1, std::vector<std::vector<size_t>>(n + 1));
    for (size_t m = 0; m < Z.size(); ++m)
        by_sig[Z[m].word.first()][Z[m].word.last()].push_back(m);

    for (int attempt = 0; attempt < 4096; ++attempt) {
        std::vector<Word> chain;
        chain.push_back(Z[rng.below(Z.size())].word);
        bool ok = true;
        for (int j = 1; j <= k && ok; ++j) {
            // next word must be reachable through some middle word with
            // first = last(prev) and last = first(next)
            const Letter from = chain.back().last();
            std::vector<size_t> options;
            for (size_t m = 0; m < Z.size(); ++m)
                if (!by_sig[from][Z[m].word.first()].empty()) options.push_back(m);
            if (options.empty()) {
                ok = false;
                break;
            }
            chain.push_back(Z[options[rng.below(options.size())]].word);
        }
        if (!ok) continue;
        // verify every slot has a nonempty link set
        bool linked = true;
        for (int j = 1; j <= k && linked; ++j)
            linked = !by_sig[chain[j - 1].last()][chain[j].first()].empty();
        if (linked) return chain;
    }
    throw NoAdmissibleWordsError("sample_chain: could not find a linkable chain");
}

} // namespace schottky
