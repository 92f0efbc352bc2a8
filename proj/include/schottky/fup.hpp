#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "schottky/measure.hpp"
#include "schottky/scan.hpp"

namespace schottky {

// Oscillatory kernel data for the uncertainty-principle operators: a real
// phase with nonvanishing mixed derivative away from the diagonal and a
// complex amplitude supported off the diagonal.
struct KernelSpec {
    std::function<double(double, double)> phi;     // Phi(x, y)
    std::function<double(double, double)> dphi_xy; // mixed second derivative
    std::function<std::complex<double>(double, double)> amp;
    double c_bound = 1;
    double diag_gap = 0; // phi evaluation requires |x - y| >= diag_gap
};

// Phase 2 log|x-y| - log(1+x^2) - log(1+y^2): the boundary kernel of the
// half-plane-to-disk change of variables (2 log of the chordal distance, up
// to an additive constant). The amplitude ramps from 0 at |x-y| <= 1.2 gap
// to 1 at |x-y| >= 2 gap. hull_bound caps |x|, |y| on the support.
KernelSpec hyperbolic_phase(double diag_gap, double hull_bound);

// Dense kernel matrix over the measure atoms:
// entry(a, b) = exp(i Phi(x_a, x_b)/h) G(x_a, x_b) mass_b.
struct FupMatrix {
    double h = 0;
    size_t n = 0;
    std::vector<std::complex<double>> entries; // row-major, rows = x atoms
    std::vector<double> masses;

    const std::complex<double>& entry(size_t row, size_t col) const {
        return entries[row * n + col];
    }
};

// Resolution guard: tau <= h / (10 c_bound) so the phase moves by <= ~0.1
// across an atom. Throws RefineError otherwise.
FupMatrix build_fup_matrix(const DiscreteMeasure& mu, const KernelSpec& ks, double h,
                           int threads = 1);

// Largest singular value of the matrix as an operator on the mass-weighted
// sequence space (the quadrature stand-in for L^2 of the measure).
double operator_norm(const FupMatrix& m, double tol = 1e-10, int max_iterations = 20000);

// sup over rows of the absolute column sums of the composed kernel
// K K^* against the measure; dominates the squared operator norm.
double schur_bound(const FupMatrix& m, int threads = 1);

struct FupScan {
    ScanResult scan; // (h, operator norm); exponent_hat is the fitted slope
    std::vector<double> schur_bounds;
    std::vector<double> taus;
    std::vector<size_t> sizes;
    double beta_hat = 0; // = scan.exponent_hat (norms ~ h^beta)
};

// Rebuilds the measure at each h so the resolution guard holds.
FupScan fup_scan(const SchottkyData& data, double delta, const KernelSpec& ks,
                 const std::vector<double>& h_grid, int threads = 1,
                 std::uint64_t budget = kDefaultWordBudget);

// F_h(x) = mu([x-2h, x+2h]) / (4 h^delta)
double thickened_density(const DiscreteMeasure& mu, double h, double x);

inline constexpr std::uint64_t kDefaultGridBudget = 40000;

// Largest singular value of the Lebesgue-side operator
// (2 pi h)^{-1/2} exp(i Phi/h) G cut to the h^rho-neighborhood of the limit
// set on both sides, discretized on a uniform grid of step h/20.
double lebesgue_fup_norm(const SchottkyData& data, const KernelSpec& ks, double h, double rho,
                         int threads = 1, std::uint64_t grid_budget = kDefaultGridBudget,
                         std::uint64_t budget = kDefaultWordBudget);

FupScan lebesgue_fup_scan(const SchottkyData& data, const KernelSpec& ks,
                          const std::vector<double>& h_grid, double rho, int threads = 1,
                          std::uint64_t grid_budget = kDefaultGridBudget,
                          std::uint64_t budget = kDefaultWordBudget);

} // namespace schottky
