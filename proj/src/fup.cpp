#include "schottky/fup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schottky/parallel.hpp"

namespace schottky {

namespace {

double smoothstep(double t) {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    return t * t * (3 - 2 * t);
}

} // namespace

KernelSpec hyperbolic_phase(double diag_gap, double hull_bound) {
    if (!(diag_gap > 0) || !(hull_bound > 0))
        throw DomainError("hyperbolic_phase: gap and hull bound must be positive");
    KernelSpec ks;
    ks.diag_gap = diag_gap;
    ks.phi = [diag_gap](double x, double y) {
        const double d = std::abs(x - y);
        if (d < diag_gap)
            throw DomainError("hyperbolic_phase: evaluation inside the diagonal gap");
        return 2 * std::log(d) - std::log1p(x * x) - std::log1p(y * y);
    };
    ks.dphi_xy = [diag_gap](double x, double y) {
        const double d = x - y;
        if (std::abs(d) < diag_gap)
            throw DomainError("hyperbolic_phase: evaluation inside the diagonal gap");
        return 2.0 / (d * d);
    };
    const double lo = 1.2 * diag_gap, hi = 2.0 * diag_gap;
    ks.amp = [lo, hi](double x, double y) {
        return std::complex<double>(smoothstep((std::abs(x - y) - lo) / (hi - lo)), 0.0);
    };

    // conservative closed-form norms on the admissible region
    const double span = 2 * hull_bound;
    const double c0 = 2 * std::max(std::abs(std::log(diag_gap)), std::log(span)) +
                      2 * std::log1p(hull_bound * hull_bound);
    const double c1 = 2 / diag_gap + 1;
    const double c2 = 2 / (diag_gap * diag_gap) + 2;
    const double c3 = 4 / (diag_gap * diag_gap * diag_gap) + 4;
    const double phi_norm = std::max({c0, c1, c2, c3});
    const double amp_norm = std::max(1.0, 1.5 / (hi - lo));
    const double inv_inf_mixed = span * span / 2;
    ks.c_bound = std::max(phi_norm + amp_norm, inv_inf_mixed);
    return ks;
}

FupMatrix build_fup_matrix(const DiscreteMeasure& mu, const KernelSpec& ks, double h,
                           int threads) {
    if (!(h > 0) || h >= 1) throw DomainError("build_fup_matrix: h must lie in (0,1)");
    if (mu.tau > h / (10 * ks.c_bound))
        throw RefineError("build_fup_matrix: atoms too coarse for this h",
                          h / (10 * ks.c_bound));
    FupMatrix m;
    m.h = h;
    m.n = mu.atoms.size();
    m.entries.assign(m.n * m.n, {0.0, 0.0});
    m.masses.resize(m.n);
    for (size_t i = 0; i < m.n; ++i) m.masses[i] = mu.atoms[i].mass;

    parallel_for(m.n, threads, [&](size_t row) {
        const double x = mu.atoms[row].center;
        for (size_t col = 0; col < m.n; ++col) {
            const double y = mu.atoms[col].center;
            const std::complex<double> g = ks.amp(x, y);
            if (g == std::complex<double>(0.0, 0.0)) continue;
            if (std::abs(x - y) < ks.diag_gap)
                throw DomainError("build_fup_matrix: amplitude reaches the diagonal gap");
            const double phase = ks.phi(x, y) / h;
            m.entries[row * m.n + col] = std::complex<double>(std::cos(phase), std::sin(phase)) *
                                         g * mu.atoms[col].mass;
        }
    });
    return m;
}

namespace {

// mass^{1/2}-weighted copy: W(a,b) = sqrt(m_a) entry(a,b) / sqrt(m_b)
std::vector<std::complex<double>> weighted_copy(const FupMatrix& m) {
    std::vector<std::complex<double>> w(m.n * m.n);
    std::vector<double> sq(m.n), isq(m.n);
    for (size_t i = 0; i < m.n; ++i) {
        sq[i] = std::sqrt(m.masses[i]);
        isq[i] = m.masses[i] > 0 ? 1.0 / sq[i] : 0.0;
    }
    for (size_t a = 0; a < m.n; ++a)
        for (size_t b = 0; b < m.n; ++b) w[a * m.n + b] = sq[a] * m.entries[a * m.n + b] * isq[b];
    return w;
}

double norm2(const std::vector<std::complex<double>>& v) {
    double acc = 0;
    for (const auto& t : v) acc += std::norm(t);
    return std::sqrt(acc);
}

} // namespace

double operator_norm(const FupMatrix& m, double tol, int max_iterations) {
    if (m.n == 0) return 0;
    const std::vector<std::complex<double>> w = weighted_copy(m);
    const size_t n = m.n;
    std::vector<std::complex<double>> v(n, std::complex<double>(1.0 / std::sqrt((double)n), 0)),
        t(n), u(n);
    double sigma = 0;
    for (int it = 0; it < max_iterations; ++it) {
        for (size_t a = 0; a < n; ++a) {
            std::complex<double> acc = 0;
            const std::complex<double>* row = &w[a * n];
            for (size_t b = 0; b < n; ++b) acc += row[b] * v[b];
            t[a] = acc;
        }
        const double est = norm2(t); // ||W v|| with unit v
        if (est == 0) return 0;
        for (size_t b = 0; b < n; ++b) {
            std::complex<double> acc = 0;
            for (size_t a = 0; a < n; ++a) acc += std::conj(w[a * n + b]) * t[a];
            u[b] = acc;
        }
        const double un = norm2(u);
        if (un == 0) return est;
        for (size_t i = 0; i < n; ++i) v[i] = u[i] / un;
        if (it > 2 && std::abs(est - sigma) <= tol * std::max(1.0, est)) return est;
        sigma = est;
    }
    throw ConvergenceError("operator_norm: power iteration did not converge");
}

double schur_bound(const FupMatrix& m, int threads) {
    if (m.n == 0) return 0;
    const size_t n = m.n;
    // F(c,b) = conj(entry(c,b)) / mass_b, so K(a,c) = <E_a, F_c>
    std::vector<std::complex<double>> f(n * n);
    for (size_t c = 0; c < n; ++c)
        for (size_t b = 0; b < n; ++b)
            f[c * n + b] = m.masses[b] > 0
                               ? std::conj(m.entries[c * n + b]) / m.masses[b]
                               : std::complex<double>(0, 0);
    std::vector<double> row_sums(n, 0.0);
    parallel_for(n, threads, [&](size_t a) {
        const std::complex<double>* ea = &m.entries[a * n];
        double acc = 0;
        for (size_t c = 0; c < n; ++c) {
            const std::complex<double>* fc = &f[c * n];
            std::complex<double> k = 0;
            for (size_t b = 0; b < n; ++b) k += ea[b] * fc[b];
            acc += std::abs(k) * m.masses[c];
        }
        row_sums[a] = acc;
    });
    double sup = 0;
    for (const double s : row_sums) sup = std::max(sup, s);
    return sup;
}

FupScan fup_scan(const SchottkyData& data, double delta, const KernelSpec& ks,
                 const std::vector<double>& h_grid, int threads, std::uint64_t budget) {
    FupScan out;
    out.scan.points.resize(h_grid.size());
    out.schur_bounds.resize(h_grid.size());
    out.taus.resize(h_grid.size());
    out.sizes.resize(h_grid.size());
    for (size_t i = 0; i < h_grid.size(); ++i) {
        const double h = h_grid[i];
        const double tau = 0.999 * h / (10 * ks.c_bound);
        const DiscreteMeasure mu = build_measure(data, tau, delta, budget);
        const FupMatrix B = build_fup_matrix(mu, ks, h, threads);
        out.taus[i] = tau;
        out.sizes[i] = B.n;
        out.scan.points[i] = {h, operator_norm(B, 1e-9)};
        out.schur_bounds[i] = schur_bound(B, threads);
    }
    out.scan = fit_power_law(std::move(out.scan.points));
    out.beta_hat = out.scan.exponent_hat;
    return out;
}

double thickened_density(const DiscreteMeasure& mu, double h, double x) {
    if (!(h > 0)) throw DomainError("thickened_density: h must be positive");
    return interval_mass(mu, Interval(x - 2 * h, x + 2 * h)) / (4 * std::pow(h, mu.delta));
}

namespace {

// uniform grid of midpoints covering the rho-neighborhood of the limit set
std::vector<double> neighborhood_grid(const SchottkyData& data, double h, double rho,
                                      std::uint64_t grid_budget, std::uint64_t budget,
                                      double* step_out) {
    const double radius = std::pow(h, rho);
    const double tau = std::min(radius, 0.45 * data.min_base_size());
    const Partition Z = build_partition(data, tau, budget);
    std::vector<Interval> fat;
    fat.reserve(Z.size());
    for (const auto& mem : Z.members)
        fat.emplace_back(mem.interval.lo - radius, mem.interval.hi + radius);
    std::sort(fat.begin(), fat.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo;
    });
    std::vector<Interval> merged;
    for (const auto& I : fat) {
        if (!merged.empty() && I.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, I.hi);
        else
            merged.push_back(I);
    }
    const double step = h / 20;
    *step_out = step;
    std::vector<double> pts;
    for (const auto& seg : merged) {
        const auto count = static_cast<std::uint64_t>(std::ceil(seg.size() / step));
        if (pts.size() + count > grid_budget)
            throw BudgetError("lebesgue_fup_norm: grid budget exceeded");
        for (std::uint64_t i = 0; i < count; ++i) pts.push_back(seg.lo + (i + 0.5) * step);
    }
    return pts;
}

} // namespace

double lebesgue_fup_norm(const SchottkyData& data, const KernelSpec& ks, double h, double rho,
                         int threads, std::uint64_t grid_budget, std::uint64_t budget) {
    if (!(rho > 0) || rho >= 1) throw DomainError("lebesgue_fup_norm: rho must lie in (0,1)");
    if (!(h > 0) || h >= 1) throw DomainError("lebesgue_fup_norm: h must lie in (0,1)");
    double step = 0;
    const std::vector<double> pts = neighborhood_grid(data, h, rho, grid_budget, budget, &step);
    const size_t n = pts.size();
    if (n == 0) return 0;
    if (n * n * 16 > std::uint64_t(2) << 30)
        throw BudgetError("lebesgue_fup_norm: kernel matrix would exceed memory budget");

    FupMatrix m; // reuse the weighted SVD machinery with unit masses
    m.h = h;
    m.n = n;
    m.masses.assign(n, 1.0);
    m.entries.assign(n * n, {0, 0});
    const double prefactor = step / std::sqrt(2 * std::numbers::pi * h);
    parallel_for(n, threads, [&](size_t row) {
        const double x = pts[row];
        for (size_t col = 0; col < n; ++col) {
            const double y = pts[col];
            const std::complex<double> g = ks.amp(x, y);
            if (g == std::complex<double>(0.0, 0.0)) continue;
            const double phase = ks.phi(x, y) / h;
            m.entries[row * n + col] =
                std::complex<double>(std::cos(phase), std::sin(phase)) * g * prefactor;
        }
    });
    return operator_norm(m, 1e-9);
}

FupScan lebesgue_fup_scan(const SchottkyData& data, const KernelSpec& ks,
                          const std::vector<double>& h_grid, double rho, int threads,
                          std::uint64_t grid_budget, std::uint64_t budget) {
    FupScan out;
    out.scan.points.resize(h_grid.size());
    for (size_t i = 0; i < h_grid.size(); ++i) {
        const double h = h_grid[i];
        out.scan.points[i] = {h, lebesgue_fup_norm(data, ks, h, rho, threads, grid_budget, budget)};
    }
    out.scan = fit_power_law(std::move(out.scan.points));
    out.beta_hat = out.scan.exponent_hat;
    return out;
}

} // namespace schottky
