#include "schottky/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "schottky/rng.hpp"
#include "schottky/word.hpp"

namespace schottky {

TransferMatrix::TransferMatrix(const SchottkyData& data, const Partition& Z, double s)
    : Z_(&Z), n_(Z.size()), s_(s) {
    // columns grouped by the last letter of the source word
    std::vector<std::vector<size_t>> by_last(2 * data.r + 1);
    for (size_t j = 0; j < n_; ++j) by_last[Z[j].word.last()].push_back(j);

    row_ptr_.reserve(n_ + 1);
    row_ptr_.push_back(0);
    for (size_t i = 0; i < n_; ++i) {
        const double x = Z[i].interval.midpoint();
        for (const size_t j : by_last[Z[i].word.first()]) {
            col_.push_back(j);
            base_.push_back(ball_derivative(Z[j].prefix, x));
        }
        row_ptr_.push_back(col_.size());
    }
    weights_.resize(base_.size());
    set_exponent(s);
}

void TransferMatrix::set_exponent(double s) {
    s_ = s;
    for (size_t k = 0; k < base_.size(); ++k) weights_[k] = std::pow(base_[k], s);
}

double TransferMatrix::entry(size_t row, size_t col) const {
    for (size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
        if (col_[k] == col) return weights_[k];
    return 0.0;
}

void TransferMatrix::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (size_t i = 0; i < n_; ++i) {
        double acc = 0;
        for (size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += weights_[k] * x[col_[k]];
        y[i] = acc;
    }
}

void TransferMatrix::apply_transpose(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (size_t i = 0; i < n_; ++i) {
        const double xi = x[i];
        for (size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_[k]] += weights_[k] * xi;
    }
}

double TransferMatrix::row_sum(size_t row) const {
    double acc = 0;
    for (size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) acc += weights_[k];
    return acc;
}

TransferMatrix build_transfer_matrix(const SchottkyData& data, const Partition& Z, double s) {
    return TransferMatrix(data, Z, s);
}

namespace {

double normalize_l1(std::vector<double>& v) {
    double sum = 0;
    for (const double t : v) sum += t;
    for (double& t : v) t /= sum;
    return sum;
}

// one-sided power iteration; lambda is the L1 growth factor at the fixed point
double power_iterate(const TransferMatrix& m,
                     void (TransferMatrix::*op)(const std::vector<double>&,
                                                std::vector<double>&) const,
                     std::vector<double>& v, double tol, int max_iterations, int* iters) {
    const size_t n = m.size();
    if (v.size() != n) v.assign(n, 1.0 / static_cast<double>(n));
    std::vector<double> w(n);
    double lambda = 0;
    for (int it = 1; it <= max_iterations; ++it) {
        (m.*op)(v, w);
        const double growth = normalize_l1(w);
        double diff = 0;
        for (size_t i = 0; i < n; ++i) diff += std::abs(w[i] - v[i]);
        v.swap(w);
        const double shift = std::abs(growth - lambda) / std::max(1.0, std::abs(growth));
        lambda = growth;
        if (diff < tol && shift < tol) {
            if (iters) *iters = it;
            return lambda;
        }
    }
    throw ConvergenceError("power iteration did not converge");
}

} // namespace

EigenTriple leading_eigen(const TransferMatrix& m, double tol, int max_iterations) {
    if (m.size() == 0) throw DomainError("leading_eigen: empty matrix");
    EigenTriple out;
    int it_l = 0, it_r = 0;
    const double inner_tol = std::min(tol, 1e-12);
    out.left.clear();
    out.lambda = power_iterate(m, &TransferMatrix::apply_transpose, out.left, inner_tol,
                               max_iterations, &it_l);
    out.right.clear();
    power_iterate(m, &TransferMatrix::apply, out.right, inner_tol, max_iterations, &it_r);
    out.iterations = it_l + it_r;

    std::vector<double> check;
    m.apply_transpose(out.left, check);
    double resid = 0;
    for (size_t i = 0; i < m.size(); ++i) resid += std::abs(check[i] - out.lambda * out.left[i]);
    out.residual = resid;
    if (!(resid < std::max(tol, 1e-9) * std::max(1.0, out.lambda)))
        throw ConvergenceError("leading_eigen: residual above tolerance");
    return out;
}

double bowen_root(const SchottkyData& data, const Partition& Z, double tol,
                  double* lambda_residual, std::vector<std::pair<double, double>>* samples) {
    TransferMatrix m(data, Z, 1.0);
    std::vector<double> warm;
    auto log_lambda = [&](double s) {
        m.set_exponent(s);
        const double lambda = power_iterate(m, &TransferMatrix::apply_transpose, warm,
                                            1e-13, 200000, nullptr);
        if (samples) samples->emplace_back(s, lambda);
        return std::log(lambda);
    };

    double lo = 0.0, hi = 1.0;
    double flo = log_lambda(1e-6), fhi = log_lambda(1.0);
    if (!(flo > 0))
        throw NonElementaryError("bowen_root: lambda(0) <= 1, group is degenerate");
    while (fhi > 0) {
        // dimension above 1 cannot occur for disjoint intervals on the line
        hi += 0.5;
        fhi = log_lambda(hi);
        if (hi > 4) throw ConvergenceError("bowen_root: no sign change in lambda(s)");
    }

    // safeguarded secant (Illinois) on log lambda
    double s0 = lo, f0 = flo, s1 = hi, f1 = fhi;
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        root = s1 - f1 * (s1 - s0) / (f1 - f0);
        if (!(root > lo && root < hi)) root = 0.5 * (s0 + s1);
        const double fr = log_lambda(root);
        if (std::abs(fr) < tol) {
            if (lambda_residual) *lambda_residual = std::abs(std::exp(fr) - 1.0);
            return root;
        }
        if ((fr > 0) == (f0 > 0)) {
            s0 = root;
            f0 = fr;
        } else {
            s1 = root;
            f1 = fr;
            f0 *= 0.5; // Illinois damping keeps the bracket moving
        }
        if (std::abs(s1 - s0) < 1e-16) break;
    }
    throw ConvergenceError("bowen_root: secant iteration did not converge");
}

DeltaReport estimate_delta(const SchottkyData& data, double tau_final, double tol,
                           bool with_oracle, std::uint64_t budget) {
    if (data.r < 2) throw NonElementaryError("estimate_delta: requires r >= 2");
    if (!(tau_final > 0) || !(tol > 0))
        throw DomainError("estimate_delta: tau and tol must be positive");
    DeltaReport report;
    report.tol = tol;
    // start below the smallest base interval so every member has length >= 2
    double tau = 0.45 * data.min_base_size();
    double prev = std::numeric_limits<double>::quiet_NaN();
    const double bowen_tol = std::min(1e-12, tol);
    for (int step = 0; step < 60; ++step) {
        const Partition Z = build_partition(data, tau, budget);
        double resid = 0;
        report.lambda_samples.clear();
        const double delta = bowen_root(data, Z, bowen_tol, &resid, &report.lambda_samples);
        report.tau_grid.push_back(tau);
        report.delta_by_tau.push_back(delta);
        report.lambda_residuals.push_back(resid);
        const bool cauchy = !std::isnan(prev) && std::abs(delta - prev) < tol;
        prev = delta;
        if (tau <= tau_final && cauchy) break;
        if (tau <= tau_final / 8) break; // refinement stalled; report what we have
        tau *= 0.5;
    }
    report.delta_hat = report.delta_by_tau.back();
    if (with_oracle) report.oracle_delta = poincare_delta(data);
    return report;
}

double poincare_delta(const SchottkyData& data, std::uint64_t word_budget) {
    const int q = 2 * data.r - 1;
    int depth = 1;
    std::uint64_t total = 2 * data.r, level = 2 * data.r;
    while (total + level * q <= word_budget) {
        level *= q;
        total += level;
        ++depth;
    }
    if (depth < 5) throw BudgetError("poincare_delta: budget too small for extrapolation");

    // cap the depth before interval endpoints collapse in double precision
    {
        const int probe_depth = std::min(depth, 5);
        double min_size = std::numeric_limits<double>::infinity();
        for (const Word& w : enumerate_words(probe_depth, data.r))
            min_size = std::min(min_size, interval_of(data, w).size());
        const double rate = std::pow(min_size, 1.0 / probe_depth);
        int safe = probe_depth;
        double projected = min_size;
        while (safe < depth && projected * rate > 1e-13) {
            projected *= rate;
            ++safe;
        }
        depth = std::max(5, safe);
    }

    // log interval sizes on the top four depths
    std::vector<std::vector<double>> logs(4);
    struct Frame {
        MobiusTransform full;
        Interval interval;
        Letter last;
        int depth;
    };
    std::vector<Frame> stack;
    for (Letter a = 1; a <= 2 * data.r; ++a)
        stack.push_back({data.generator(a), data.interval(a), a, 1});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.depth >= depth - 3)
            logs[f.depth - (depth - 3)].push_back(std::log(f.interval.size()));
        if (f.depth == depth) continue;
        for (Letter b = 1; b <= 2 * data.r; ++b) {
            if (b == data.bar(f.last)) continue;
            const Interval& base = data.interval(b);
            const double lo = apply_finite(f.full, base.lo);
            const double hi = apply_finite(f.full, base.hi);
            stack.push_back({f.full * data.generator(b),
                             Interval(std::min(lo, hi), std::max(lo, hi)), b, f.depth + 1});
        }
    }

    auto growth = [&](double s) {
        double g[4];
        for (int i = 0; i < 4; ++i) {
            // log-sum-exp over the depth level
            const auto& ls = logs[i];
            double mx = -std::numeric_limits<double>::infinity();
            for (const double t : ls) mx = std::max(mx, s * t);
            double acc = 0;
            for (const double t : ls) acc += std::exp(s * t - mx);
            g[i] = mx + std::log(acc);
        }
        const double d1 = g[1] - g[0], d2 = g[2] - g[1], d3 = g[3] - g[2];
        // Aitken acceleration of the per-depth growth rates
        const double denom = (d3 - d2) - (d2 - d1);
        if (std::abs(denom) > 1e-12 * std::max(1.0, std::abs(d3)))
            return d3 - (d3 - d2) * (d3 - d2) / denom;
        return d3;
    };

    double lo = 1e-6, hi = 1.0;
    const double flo = growth(lo);
    double fhi = growth(hi);
    if (!(flo > 0)) throw ConvergenceError("poincare_delta: series decays at s ~ 0");
    while (fhi > 0 && hi < 4) {
        hi += 0.5;
        fhi = growth(hi);
    }
    if (fhi > 0) throw ConvergenceError("poincare_delta: no decay up to s = 4");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (growth(mid) > 0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

double DiscreteMeasure::total_mass() const {
    double acc = 0;
    for (const auto& a : atoms) acc += a.mass;
    return acc;
}

Interval DiscreteMeasure::support_hull() const {
    double lo = atoms.front().center, hi = atoms.front().center;
    for (const auto& a : atoms) {
        lo = std::min(lo, a.center);
        hi = std::max(hi, a.center);
    }
    return Interval(lo - tau, hi + tau);
}

DiscreteMeasure build_measure(const SchottkyData& data, double tau, double delta,
                              std::uint64_t budget) {
    DiscreteMeasure mu;
    mu.tau = tau;
    mu.delta = delta;
    mu.partition = build_partition(data, tau, budget);
    const TransferMatrix m(data, mu.partition, delta);
    const EigenTriple eig = leading_eigen(m, 1e-12);
    mu.atoms.resize(mu.partition.size());
    for (size_t i = 0; i < mu.partition.size(); ++i)
        mu.atoms[i] = {mu.partition[i].interval.midpoint(), eig.left[i]};
    return mu;
}

double interval_mass(const DiscreteMeasure& mu, const Interval& J) {
    double acc = 0;
    for (const auto& a : mu.atoms)
        if (J.contains(a.center)) acc += a.mass;
    return acc;
}

double apply_transfer(const SchottkyData& data, const Partition& Z, double delta,
                      const std::function<double(double)>& f, double x, Letter b, int k) {
    if (k == 0) return f(x);
    double acc = 0;
    for (const auto& member : Z.members) {
        if (member.word.last() != b) continue;
        const double w = std::pow(ball_derivative(member.prefix, x), delta);
        const double y = apply_finite(member.prefix, x);
        acc += w * apply_transfer(data, Z, delta, f, y, member.word.first(), k - 1);
    }
    return acc;
}

double transfer_invariance_residual(const SchottkyData& data, const DiscreteMeasure& mu,
                                    const std::function<double(double)>& f, int k) {
    if (k < 1 || k > 3) throw DomainError("transfer_invariance_residual: k must be 1..3");
    double direct = 0, transferred = 0;
    for (size_t i = 0; i < mu.atoms.size(); ++i) {
        direct += mu.atoms[i].mass * f(mu.atoms[i].center);
        transferred += mu.atoms[i].mass *
                       apply_transfer(data, mu.partition, mu.delta, f, mu.atoms[i].center,
                                      mu.partition[i].word.first(), k);
    }
    return std::abs(direct - transferred);
}

// a point of the limit set, sampled by a long random symbolic itinerary
double sample_limit_point(const SchottkyData& data, Rng& rng) {
    Letter a = static_cast<Letter>(1 + rng.below(2 * data.r));
    MobiusTransform g = data.generator(a);
    Interval I = data.interval(a);
    while (I.size() > 1e-11) {
        Letter b;
        do {
            b = static_cast<Letter>(1 + rng.below(2 * data.r));
        } while (b == data.bar(a));
        const Interval& base = data.interval(b);
        const double lo = apply_finite(g, base.lo);
        const double hi = apply_finite(g, base.hi);
        I = Interval(std::min(lo, hi), std::max(lo, hi));
        g = g * data.generator(b);
        a = b;
    }
    return I.midpoint();
}

RegularityBand regularity_scan(const DiscreteMeasure& mu, int n_samples, std::uint64_t seed,
                               double size_lo, double size_hi) {
    RegularityBand band;
    band.upper_min = band.lower_min = std::numeric_limits<double>::infinity();
    const Interval hull = mu.support_hull();
    if (size_lo <= 0) size_lo = 10 * mu.tau;
    if (size_hi <= 0) size_hi = hull.size();
    Rng rng(seed);
    // draw all interval shapes up front so two resolutions with the same
    // seed probe identical intervals on the upper side and identical sizes
    // on the lower side
    std::vector<double> upper_size(n_samples), upper_center(n_samples), lower_size(n_samples);
    for (int t = 0; t < n_samples; ++t) {
        upper_size[t] = rng.log_uniform(size_lo, size_hi);
        upper_center[t] = rng.uniform(hull.lo, hull.hi);
        lower_size[t] = rng.log_uniform(size_lo, std::min(1.0, size_hi));
    }
    for (int t = 0; t < n_samples; ++t) {
        const double size = upper_size[t];
        const double ratio =
            interval_mass(mu, Interval(upper_center[t] - size / 2, upper_center[t] + size / 2)) /
            std::pow(size, mu.delta);
        band.upper_max = std::max(band.upper_max, ratio);
        band.upper_min = std::min(band.upper_min, ratio);
    }
    // lower bound: intervals centered on the support
    for (int t = 0; t < n_samples; ++t) {
        const double size = lower_size[t];
        const double center = mu.atoms[rng.below(mu.atoms.size())].center;
        const double ratio =
            interval_mass(mu, Interval(center - size / 2, center + size / 2)) /
            std::pow(size, mu.delta);
        band.lower_max = std::max(band.lower_max, ratio);
        band.lower_min = std::min(band.lower_min, ratio);
    }
    return band;
}

double equivariance_residual(const SchottkyData& data, const DiscreteMeasure& mu, Letter a,
                             const std::function<double(double)>& f) {
    const Interval& excluded = data.interval(data.bar(a));
    auto supported = [&](double x) { return excluded.contains(x) ? 0.0 : f(x); };
    const MobiusTransform& g = data.generator(a);
    double direct = 0, pushed = 0;
    for (const auto& atom : mu.atoms) {
        direct += atom.mass * supported(atom.center);
        const double gx = apply_finite(g, atom.center);
        pushed += atom.mass * supported(gx) * std::pow(ball_derivative(g, atom.center), mu.delta);
    }
    return std::abs(direct - pushed);
}

} // namespace schottky
