#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "schottky/measure.hpp"
#include "schottky/rng.hpp"
#include "schottky/scan.hpp"

namespace schottky {

// Phase/amplitude pair for oscillatory integrals against the measure.
// c_bound plays the role of the C^2/C^1 norm budget: the phase derivative
// must stay >= 1/c_bound on the support (checked on atom sets).
struct PhasePair {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<std::complex<double>(double)> g;
    double c_bound = 1;

    double sup_dphi(const std::vector<Atom>& atoms) const;
    double inf_dphi(const std::vector<Atom>& atoms) const;
    double sup_g(const std::vector<Atom>& atoms) const;
    // worst margin of the inf |phi'| >= 1/c_bound hypothesis; negative = violated
    double hypothesis_margin(const std::vector<Atom>& atoms) const;
};

// phi(x) = x, g = 1: the plain Fourier transform of the measure
PhasePair fourier_phase(double hull_bound);

inline constexpr double kResolutionGuard = 0.1;

// Atom-sum quadrature of int exp(i xi phi) g dmu. The oscillation must be
// resolved: |xi| * tau * sup|phi'| <= 0.1, else RefineError.
std::complex<double> oscillatory_integral(const std::vector<Atom>& atoms, double tau,
                                          const PhasePair& pp, double xi);
std::complex<double> oscillatory_integral(const DiscreteMeasure& mu, const PhasePair& pp,
                                          double xi);

// Modulus-decay scan: the measure is rebuilt for every frequency so the
// resolution guard holds, and each grid point reports the rms modulus over
// a short log-spaced block (block = 1 gives raw single-frequency values).
// exponent_hat < 0 for decaying moduli; epsilon1_hat is its negation.
struct FourierScan {
    ScanResult scan;        // (xi, rms |integral| near xi)
    std::vector<double> taus; // resolution used at each frequency
    double epsilon1_hat = 0;  // -scan.exponent_hat
};

FourierScan fourier_scan(const SchottkyData& data, double delta, const PhasePair& pp,
                         const std::vector<double>& xi_grid, int threads = 1,
                         std::uint64_t budget = kDefaultWordBudget, int block = 24);

// Level-n binary-coded middle-third Cantor measure (linear IFS control case):
// 2^level atoms of equal mass; tau = 3^-level.
std::vector<Atom> cantor_atoms(int level);

// The proof-regime coupling between frequency and resolution:
// tau = |xi|^(-1/(2k+3/2)).
double tau_for_frequency(double xi, int k);

// Values of the normalized linking derivatives along a chain of partition
// words: for chain A = (a_0..a_k) and slot j, the map
// b -> tau^-2 (g_{a_{j-1}' b'})'(x_{a_j}) over all b in Z with
// a_{j-1} ~> b ~> a_j.
struct LinkValues {
    std::vector<size_t> members; // indices into the partition
    std::vector<double> values;
};

LinkValues link_derivatives(const Partition& Z, const std::vector<Word>& chain, int j);

// S_k(eta) = N^-k sum over tuples of exp(2 pi i eta * product of values)
std::complex<double> exponential_sum(const std::vector<LinkValues>& zetas, double eta,
                                     double n_scale, std::uint64_t work_budget = 100000000);

// #{(b,c) : |zeta(b)-zeta(c)| <= sigma} / n_scale^2, diagonal included
double box_dim_statistic(const LinkValues& zeta, double sigma, double n_scale);

// Fraction of sampled chains A in Z^{k+1} whose link-derivative pair counts
// obey tau^{2 delta} #{|zeta(b)-zeta(c)| <= sigma} <= sigma^{delta/4} for all
// sigma in [tau, tau^{epsilon2/4}] (checked on a dyadic grid).
double regular_chain_fraction(const Partition& Z, double delta, int k, double epsilon2,
                              int n_samples, std::uint64_t seed);

// Normalized count of near-collisions of branch derivatives:
// tau^{3 delta} #{(b,c,d) in Z^3 : a ~> b,c ~> d,
//                |(g_{a'b'})'(x_d) - (g_{a'c'})'(x_d)| <= tau^2 sigma}.
double triple_count_statistic(const SchottkyData& data, const Partition& Z, double delta,
                              const Word& a, double sigma,
                              std::uint64_t triple_budget = 100000000);

// epsilon_2 * delta / (40 (2k + 3/2))
double fourier_exponent_formula(double epsilon2, int k, double delta);

// Random chain in Z^{k+1} with every consecutive pair linkable.
std::vector<Word> sample_chain(const SchottkyData& data, const Partition& Z, int k,
                               Rng& rng);

} // namespace schottky
