#include "schottky/mobius.hpp"

#include <algorithm>
#include <ostream>

namespace schottky {

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.is_infinite()) return os << "inf";
    return os << x.value();
}

std::ostream& operator<<(std::ostream& os, const Interval& I) {
    return os << "[" << I.lo << ", " << I.hi << "]";
}

double interval_distance(const Interval& a, const Interval& b) {
    if (a.intersects(b)) return 0;
    return a.hi < b.lo ? b.lo - a.hi : a.lo - b.hi;
}

MobiusTransform MobiusTransform::raw(double a, double b, double c, double d) {
    MobiusTransform g;
    g.a = a;
    g.b = b;
    g.c = c;
    g.d = d;
    return g;
}

double MobiusTransform::det() const {
    const double w = b * c;
    return std::fma(a, d, -w) + std::fma(-b, c, w);
}

MobiusTransform::MobiusTransform(double a, double b, double c, double d)
    : a(a), b(b), c(c), d(d) {
    const double det = this->det();
    if (!(det > 0))
        throw DomainError("MobiusTransform: determinant must be positive");
    const double s = std::sqrt(det);
    this->a /= s;
    this->b /= s;
    this->c /= s;
    this->d /= s;
}

double MobiusTransform::distance_to(const MobiusTransform& o) const {
    const double plus = std::max({std::abs(a - o.a), std::abs(b - o.b),
                                  std::abs(c - o.c), std::abs(d - o.d)});
    const double minus = std::max({std::abs(a + o.a), std::abs(b + o.b),
                                   std::abs(c + o.c), std::abs(d + o.d)});
    return std::min(plus, minus);
}

MobiusTransform operator*(const MobiusTransform& g, const MobiusTransform& h) {
    MobiusTransform p = MobiusTransform::raw(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                                             g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
    // renormalize only while the determinant is numerically meaningful
    const double det = p.det();
    if (det > 0.25 && det < 4.0) {
        const double s = std::sqrt(det);
        p.a /= s;
        p.b /= s;
        p.c /= s;
        p.d /= s;
    }
    return p;
}

std::ostream& operator<<(std::ostream& os, const MobiusTransform& g) {
    return os << "[[" << g.a << ", " << g.b << "], [" << g.c << ", " << g.d << "]]";
}

ExtendedReal apply(const MobiusTransform& g, const ExtendedReal& x) {
    if (x.is_infinite()) {
        if (g.c == 0) return ExtendedReal::infinity();
        return ExtendedReal(g.a / g.c);
    }
    const double t = x.value();
    const double den = g.c * t + g.d;
    if (den == 0) return ExtendedReal::infinity();
    return ExtendedReal((g.a * t + g.b) / den);
}

double derivative(const MobiusTransform& g, double x) {
    const double den = g.c * x + g.d;
    if (std::abs(den) < kPoleTolerance)
        throw PoleError("derivative: evaluation at the pole of the transform");
    // det/(cx+d)^2; the determinant is 1 up to renormalization residue
    return g.det() / (den * den);
}

double ball_derivative(const MobiusTransform& g, double x) {
    const double gx = apply(g, ExtendedReal(x)).value();
    return (1.0 + x * x) / (1.0 + gx * gx) * derivative(g, x);
}

double distortion_factor(const MobiusTransform& g, const Interval& I) {
    const ExtendedReal p = apply(g.inverse(), ExtendedReal::infinity());
    if (p.is_infinite()) return 0.0;
    const double q = p.value();
    if (I.contains(q))
        throw PoleInIntervalError("distortion_factor: preimage of infinity lies in the interval");
    return std::log((q - I.hi) / (q - I.lo));
}

MobiusTransform affine_onto(const Interval& I) {
    const double w = I.size();
    const double s = std::sqrt(w);
    return MobiusTransform(s, I.lo / s, 0.0, 1.0 / s);
}

MobiusTransform standard_distortion(double alpha) {
    const double e = std::exp(alpha / 2);
    return MobiusTransform(e, 0.0, e - 1.0 / e, 1.0 / e);
}

double verify_decomposition(const MobiusTransform& g, const Interval& I, const Interval& J,
                            int n_samples) {
    const double scale = std::max(1.0, std::max(std::abs(J.lo), std::abs(J.hi)));
    if (std::abs(apply_finite(g, I.lo) - J.lo) > 1e-9 * scale ||
        std::abs(apply_finite(g, I.hi) - J.hi) > 1e-9 * scale)
        throw PreconditionError("verify_decomposition: g does not map I onto J");

    const double alpha = distortion_factor(g, I);
    const MobiusTransform cand =
        affine_onto(J) * standard_distortion(alpha) * affine_onto(I).inverse();

    n_samples = std::max(n_samples, 100);
    double worst = 0;
    for (int i = 0; i <= n_samples; ++i) {
        const double x = I.lo + I.size() * i / n_samples;
        worst = std::max(worst, std::abs(apply_finite(g, x) - apply_finite(cand, x)));
    }
    return worst;
}

} // namespace schottky
