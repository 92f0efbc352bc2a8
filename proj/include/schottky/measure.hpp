#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "schottky/rng.hpp"
#include "schottky/schottky.hpp"

namespace schottky {

// Discretized transfer operator over a partition. Row b / column a holds
// |g_{a'}'(x_b)|_B^s when last(a) == first(b), where x_b is the atom of b;
// entries are zero otherwise. Acting on function vectors f by rows gives
// (Lf)(x_b) = sum_a entry(b,a) f(x_a); the measure atoms form a left fixed
// vector at the dimension exponent.
class TransferMatrix {
public:
    TransferMatrix(const SchottkyData& data, const Partition& Z, double s);

    size_t size() const { return n_; }
    double exponent() const { return s_; }
    const Partition& partition() const { return *Z_; }

    // switches the exponent without re-deriving the base weights
    void set_exponent(double s);

    double entry(size_t row, size_t col) const;

    // y = M x (row action) and y = M^T x (column action)
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const;

    // number of stored (structurally nonzero) entries
    size_t nnz() const { return weights_.size(); }
    double row_sum(size_t row) const;

private:
    const Partition* Z_;
    size_t n_;
    double s_;
    // CSR over rows (target words); base holds the ball derivatives,
    // weights the current powers base^s
    std::vector<size_t> row_ptr_;
    std::vector<size_t> col_;
    std::vector<double> base_;
    std::vector<double> weights_;
};

TransferMatrix build_transfer_matrix(const SchottkyData& data, const Partition& Z, double s);

struct EigenTriple {
    double lambda = 0;
    std::vector<double> left;  // unit sum, entrywise positive
    std::vector<double> right; // unit sum, entrywise positive
    double residual = 0;       // ||left^T M - lambda left^T||_1
    int iterations = 0;
};

// Perron data of a nonnegative irreducible matrix by power iteration.
EigenTriple leading_eigen(const TransferMatrix& m, double tol = 1e-12,
                          int max_iterations = 100000);

struct DeltaReport {
    std::vector<double> tau_grid;
    std::vector<double> delta_by_tau;     // Bowen root at each resolution
    std::vector<double> lambda_residuals; // |lambda(delta) - 1| at each resolution
    // (s, lambda(s)) pairs visited by the root search at the finest resolution
    std::vector<std::pair<double, double>> lambda_samples;
    double delta_hat = 0;
    double oracle_delta = 0; // partial-sum route; 0 if not computed
    double tol = 0;
};

// Root of lambda(s) = 1 at resolution tau (bisection; lambda decreasing in s).
double bowen_root(const SchottkyData& data, const Partition& Z, double tol,
                  double* lambda_residual = nullptr,
                  std::vector<std::pair<double, double>>* samples = nullptr);

// Dimension of the limit set: Bowen roots refined over tau -> tau/2 until
// successive estimates differ by < tol or tau_final is reached.
DeltaReport estimate_delta(const SchottkyData& data, double tau_final, double tol,
                           bool with_oracle = true,
                           std::uint64_t budget = kDefaultWordBudget);

// Independent route to the dimension: the abscissa where the depth-n sums
// sum_{|w|=n} |I_w|^s switch from growth to decay, extrapolated over depth.
// Enumerates intervals directly; no transfer matrices involved.
double poincare_delta(const SchottkyData& data, std::uint64_t word_budget = 4000000);

struct Atom {
    double center = 0;
    double mass = 0;
};

// Numerical stand-in for the Patterson-Sullivan measure: one atom per
// partition word at the interval center, masses the normalized left Perron
// vector of the transfer matrix at s = delta.
struct DiscreteMeasure {
    double tau = 0;
    double delta = 0;
    Partition partition;
    std::vector<Atom> atoms; // parallel to partition.members

    double total_mass() const;
    // hull of the atom support
    Interval support_hull() const;
};

DiscreteMeasure build_measure(const SchottkyData& data, double tau, double delta,
                              std::uint64_t budget = kDefaultWordBudget);

// sum of atom masses with centers in J
double interval_mass(const DiscreteMeasure& mu, const Interval& J);

// Exact k-fold transfer operator applied to f, evaluated at x in base
// interval b: branch values are composed analytically rather than through
// the matrix discretization.
double apply_transfer(const SchottkyData& data, const Partition& Z, double delta,
                      const std::function<double(double)>& f, double x, Letter b, int k);

// |int f dmu - int L^k f dmu| with both sides evaluated by atom sums
double transfer_invariance_residual(const SchottkyData& data, const DiscreteMeasure& mu,
                                    const std::function<double(double)>& f, int k);

struct RegularityBand {
    double upper_max = 0; // max mu(I)/|I|^delta over random intervals
    double upper_min = 0;
    double lower_max = 0; // over intervals centered at atoms, |I| in [10 tau, 1]
    double lower_min = 0;
};

// size_lo/size_hi <= 0 select the defaults [10 tau, diameter].
RegularityBand regularity_scan(const DiscreteMeasure& mu, int n_samples, std::uint64_t seed,
                               double size_lo = 0, double size_hi = 0);

// a point of the limit set, sampled by a long random symbolic itinerary
double sample_limit_point(const SchottkyData& data, Rng& rng);

// residual of the pushforward identity for one generator:
// int f dmu vs int (f o g_a) |g_a'|_B^delta dmu over the admissible atoms
double equivariance_residual(const SchottkyData& data, const DiscreteMeasure& mu, Letter a,
                             const std::function<double(double)>& f);

} // namespace schottky
