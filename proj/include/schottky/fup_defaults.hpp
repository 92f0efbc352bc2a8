#pragma once

#include <algorithm>
#include <cmath>

#include "schottky/fup.hpp"
#include "schottky/oscillatory.hpp"

namespace schottky {

// Hyperbolic kernel with the diagonal gap set to a quarter of the support
// diameter (well above the 1% floor the phase formula requires).
inline KernelSpec default_hyperbolic_kernel(const SchottkyData& data) {
    const Interval hull = data.hull();
    const double bound = std::max(std::abs(hull.lo), std::abs(hull.hi));
    return hyperbolic_phase(0.25 * hull.size(), bound);
}

inline PhasePair default_fourier_phase(const SchottkyData& data) {
    const Interval hull = data.hull();
    return fourier_phase(std::max(std::abs(hull.lo), std::abs(hull.hi)));
}

} // namespace schottky
