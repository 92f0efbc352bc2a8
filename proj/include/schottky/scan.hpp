#pragma once

#include <vector>

namespace schottky {

struct ScanPoint {
    double parameter = 0;
    double value = 0; // |value|; must be positive to enter the fit
};

// (parameter, value) series with a fitted power law value ~ C * parameter^p.
// exponent_hat is the least-squares slope of log(value) against
// log(parameter); decay in the parameter shows up as a negative slope.
struct ScanResult {
    std::vector<ScanPoint> points;
    double exponent_hat = 0;
    double amplitude = 0; // fitted prefactor: value ~ amplitude * parameter^exponent_hat
    double r2 = 0;
    // fitted window in parameter units
    double window_lo = 0;
    double window_hi = 0;
    size_t window_points = 0;
};

// Least-squares power-law fit on log-log data over the widest window that
// spans at least one decade with r^2 >= r2_floor; falls back to the full
// range when no window qualifies.
ScanResult fit_power_law(std::vector<ScanPoint> points, double r2_floor = 0.8,
                         double min_decades = 1.0);

// log-spaced grid with n >= 2 points from lo to hi inclusive
std::vector<double> log_grid(double lo, double hi, int n);

} // namespace schottky
