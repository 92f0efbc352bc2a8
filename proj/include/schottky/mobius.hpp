#pragma once

#include <cmath>
#include <iosfwd>

#include "schottky/errors.hpp"

namespace schottky {

// Point of the extended real line R u {inf}. Infinity is a tagged state,
// never a sentinel double.
class ExtendedReal {
public:
    ExtendedReal() : value_(0), infinite_(false) {}
    ExtendedReal(double v) : value_(v), infinite_(false) {}
    static ExtendedReal infinity() {
        ExtendedReal x;
        x.infinite_ = true;
        return x;
    }

    bool is_infinite() const { return infinite_; }
    double value() const {
        if (infinite_) throw DomainError("ExtendedReal: finite value requested at infinity");
        return value_;
    }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
        return a.value_ == b.value_;
    }

private:
    double value_;
    bool infinite_;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

// Closed bounded interval [lo, hi], lo < hi.
struct Interval {
    double lo = 0;
    double hi = 1;

    Interval() = default;
    Interval(double lo, double hi) : lo(lo), hi(hi) {
        if (!(lo < hi)) throw DomainError("Interval: requires lo < hi");
    }

    double size() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

std::ostream& operator<<(std::ostream& os, const Interval& I);

// distance between two intervals (0 if they intersect)
double interval_distance(const Interval& a, const Interval& b);

// Real 2x2 matrix acting on the extended real line as x -> (ax+b)/(cx+d),
// kept unit-determinant by renormalization. Deep compositions can have
// entries so large that the determinant is numerically unobservable; in
// that regime products stay unrenormalized (the action is scale-invariant
// and the true determinant of a product of unit-determinant factors is 1).
class MobiusTransform {
public:
    double a, b, c, d;

    MobiusTransform() : a(1), b(0), c(0), d(1) {}
    // renormalizes to det 1; requires det > 0
    MobiusTransform(double a, double b, double c, double d);

    static MobiusTransform identity() { return MobiusTransform(); }
    // no determinant check or renormalization
    static MobiusTransform raw(double a, double b, double c, double d);

    // compensated ad - bc
    double det() const;
    MobiusTransform inverse() const { return raw(d, -b, -c, a); }
    bool is_affine() const { return c == 0; }

    // entrywise distance up to the overall sign ambiguity of SL(2,R)
    double distance_to(const MobiusTransform& o) const;
};

MobiusTransform operator*(const MobiusTransform& g, const MobiusTransform& h);
std::ostream& operator<<(std::ostream& os, const MobiusTransform& g);

inline constexpr double kPoleTolerance = 1e-14;

// g(x) = (ax+b)/(cx+d), total on the extended reals
ExtendedReal apply(const MobiusTransform& g, const ExtendedReal& x);
inline double apply_finite(const MobiusTransform& g, double x) {
    return apply(g, ExtendedReal(x)).value();
}

// g'(x) = 1/(cx+d)^2 for det 1; throws PoleError near the pole
double derivative(const MobiusTransform& g, double x);

// derivative in the ball model of the hyperbolic plane:
// |g'(x)|_B = (1+x^2)/(1+g(x)^2) * g'(x)
double ball_derivative(const MobiusTransform& g, double x);

// log cross-ratio measuring how far g is from affine on I; 0 for affine g.
// Requires g^{-1}(inf) outside I.
double distortion_factor(const MobiusTransform& g, const Interval& I);

// the unique increasing affine transform with g([0,1]) = I
MobiusTransform affine_onto(const Interval& I);

// fixes 0 and 1; the canonical transform with distortion factor alpha on [0,1]
MobiusTransform standard_distortion(double alpha);

// max over >= n_samples equispaced x in I of |g(x) - (aff_J o standard o aff_I^-1)(x)|;
// requires g to map the endpoints of I onto those of J
double verify_decomposition(const MobiusTransform& g, const Interval& I, const Interval& J,
                            int n_samples = 100);

} // namespace schottky
