#include "schottky/scan.hpp"

#include <algorithm>
#include <cmath>

#include "schottky/errors.hpp"

namespace schottky {

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 2) throw DomainError("log_grid: bad range");
    std::vector<double> out(n);
    const double step = (std::log(hi) - std::log(lo)) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = std::exp(std::log(lo) + step * i);
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

struct Fit {
    double slope = 0, intercept = 0, r2 = 0;
};

Fit fit_range(const std::vector<double>& x, const std::vector<double>& y, size_t lo, size_t hi) {
    const size_t n = hi - lo + 1;
    double sx = 0, sy = 0;
    for (size_t i = lo; i <= hi; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = lo; i <= hi; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Fit f;
    if (sxx == 0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

} // namespace

ScanResult fit_power_law(std::vector<ScanPoint> points, double r2_floor, double min_decades) {
    ScanResult out;
    out.points = std::move(points);
    std::vector<double> lx, ly;
    for (const auto& p : out.points) {
        if (p.parameter > 0 && p.value > 0) {
            lx.push_back(std::log10(p.parameter));
            ly.push_back(std::log10(p.value));
        }
    }
    if (lx.size() < 2) return out;

    // points are expected in increasing parameter order; enforce it
    std::vector<size_t> order(lx.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return lx[a] < lx[b]; });
    std::vector<double> sx(lx.size()), sy(lx.size());
    for (size_t i = 0; i < order.size(); ++i) {
        sx[i] = lx[order[i]];
        sy[i] = ly[order[i]];
    }

    // widest window spanning at least min_decades with acceptable r^2
    bool found = false;
    double best_span = -1;
    size_t best_lo = 0, best_hi = sx.size() - 1;
    Fit best;
    for (size_t lo = 0; lo < sx.size(); ++lo) {
        for (size_t hi = lo + 1; hi < sx.size(); ++hi) {
            const double span = sx[hi] - sx[lo];
            if (span < min_decades) continue;
            const Fit f = fit_range(sx, sy, lo, hi);
            if (f.r2 < r2_floor) continue;
            if (span > best_span + 1e-12 ||
                (std::abs(span - best_span) <= 1e-12 && f.r2 > best.r2)) {
                best_span = span;
                best = f;
                best_lo = lo;
                best_hi = hi;
                found = true;
            }
        }
    }
    if (!found) {
        best = fit_range(sx, sy, 0, sx.size() - 1);
        best_lo = 0;
        best_hi = sx.size() - 1;
    }
    out.exponent_hat = best.slope;
    out.amplitude = std::pow(10.0, best.intercept);
    out.r2 = best.r2;
    out.window_lo = std::pow(10.0, sx[best_lo]);
    out.window_hi = std::pow(10.0, sx[best_hi]);
    out.window_points = best_hi - best_lo + 1;
    return out;
}

} // namespace schottky
