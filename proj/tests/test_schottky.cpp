#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "schottky/group_io.hpp"
#include "schottky/rng.hpp"
#include "schottky/schottky.hpp"

using namespace schottky;

#ifndef SCHOTTKY_DATA_DIR
#define SCHOTTKY_DATA_DIR "data"
#endif

namespace {

std::string data_file(const char* name) {
    return std::string(SCHOTTKY_DATA_DIR) + "/" + name;
}

// scale-free comparison of two matrices as boundary maps
double projective_distance(const MobiusTransform& g, const MobiusTransform& h) {
    auto unit = [](const MobiusTransform& m) {
        const double n = std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
        return MobiusTransform::raw(m.a / n, m.b / n, m.c / n, m.d / n);
    };
    return unit(g).distance_to(unit(h));
}

// independent interval oracle: right-folded product in extended precision
Interval interval_oracle(const SchottkyData& data, const Word& w) {
    long double a = 1, b = 0, c = 0, d = 1;
    const auto& letters = w.letters();
    for (size_t i = letters.size() - 1; i-- > 0;) {
        const MobiusTransform& g = data.generator(letters[i]);
        const long double na = g.a * a + g.b * c, nb = g.a * b + g.b * d;
        const long double nc = g.c * a + g.d * c, nd = g.c * b + g.d * d;
        a = na; b = nb; c = nc; d = nd;
    }
    const Interval& base = data.interval(w.last());
    auto map = [&](long double x) {
        return static_cast<double>((a * x + b) / (c * x + d));
    };
    const double u = map(base.lo), v = map(base.hi);
    return Interval(std::min(u, v), std::max(u, v));
}

} // namespace

TEST_CASE("shipped groups validate, mutated configs fail the right axiom") {
    for (const char* name : {"group_r2.json", "group_r3.json"}) {
        const ValidationReport rep = validate(load_group(data_file(name)));
        for (const auto& c : rep.checks) {
            INFO(name << ": " << c.name);
            CHECK(c.passed);
            CHECK(c.defect < 1e-9);
        }
    }
    const ValidationReport bad_inv = validate(load_group(data_file("group_r2_bad_inverse.json")));
    CHECK_FALSE(bad_inv.passed());
    REQUIRE(bad_inv.find("inverse_pairs") != nullptr);
    CHECK_FALSE(bad_inv.find("inverse_pairs")->passed);

    const ValidationReport overlap = validate(load_group(data_file("group_r2_overlap.json")));
    CHECK_FALSE(overlap.passed());
    REQUIRE(overlap.find("intervals_disjoint") != nullptr);
    CHECK_FALSE(overlap.find("intervals_disjoint")->passed);
}

TEST_CASE("group config io round trip") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    const SchottkyData again = group_from_json_text(group_to_json_text(g));
    CHECK(again.r == g.r);
    for (int a = 1; a <= 2 * g.r; ++a) {
        CHECK(again.interval(a).lo == g.interval(a).lo);
        CHECK(again.generator(a).distance_to(g.generator(a)) < 1e-12);
    }
    // generators may be listed for the first half only
    SchottkyData half = g;
    half.generators.resize(g.r);
    std::string text = group_to_json_text(half);
    // group_to_json_text keeps what's present; emulate an r-generator config
    const SchottkyData derived = group_from_json_text(text);
    CHECK(derived.generators.size() == static_cast<size_t>(2 * g.r));
    CHECK(derived.generator(3).distance_to(g.generator(3)) < 1e-12);
}

TEST_CASE("group elements: identity, generators, homomorphism") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    CHECK(group_element(g, Word()).distance_to(MobiusTransform::identity()) < 1e-15);
    CHECK(group_element(g, Word({2})).distance_to(g.generator(2)) < 1e-15);
    CHECK(projective_distance(group_element(g, Word({1, 2}).bar(g.r)),
                              group_element(g, Word({1, 2})).inverse()) < 1e-9);

    Rng rng(3);
    const auto words = enumerate_words(3, g.r);
    for (int t = 0; t < 200; ++t) {
        const Word& a = words[rng.below(words.size())];
        const Word& b = words[rng.below(words.size())];
        if (!arrow(a, b, g.r)) continue;
        const MobiusTransform lhs = group_element(g, concat(a, b, g.r));
        const MobiusTransform rhs = group_element(g, a) * group_element(g, b);
        CHECK(projective_distance(lhs, rhs) < 1e-9);
    }
}

TEST_CASE("intervals: base case, independent oracle, nesting, disjointness") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    for (Letter a = 1; a <= 4; ++a) {
        const Interval I = interval_of(g, Word({a}));
        CHECK(I.lo == g.interval(a).lo);
        CHECK(I.hi == g.interval(a).hi);
    }
    for (const Word& w : enumerate_words(3, g.r)) {
        const Interval got = interval_of(g, w);
        const Interval want = interval_oracle(g, w);
        CHECK(got.size() == doctest::Approx(want.size()).epsilon(1e-9));
        CHECK(got.lo == doctest::Approx(want.lo).epsilon(1e-9));
    }
    // nesting to depth 5
    for (int n = 1; n < 5; ++n)
        for (const Word& w : enumerate_words(n, g.r)) {
            const Interval parent = interval_of(g, w);
            for (const Word& c : children(w, g.r)) {
                const Interval child = interval_of(g, c);
                CHECK(child.lo >= parent.lo - 1e-12);
                CHECK(child.hi <= parent.hi + 1e-12);
            }
        }
    // disjointness at fixed length
    for (int n = 1; n <= 4; ++n) {
        const auto words = enumerate_words(n, g.r);
        std::vector<Interval> ivs;
        for (const Word& w : words) ivs.push_back(interval_of(g, w));
        for (size_t i = 0; i < ivs.size(); ++i)
            for (size_t j = i + 1; j < ivs.size(); ++j)
                CHECK(interval_distance(ivs[i], ivs[j]) > 0);
    }
}

TEST_CASE("partition: trivial resolution gives the single-letter words") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    double max_base = 0;
    for (const auto& I : g.intervals) max_base = std::max(max_base, I.size());
    const Partition Z = build_partition(g, max_base);
    REQUIRE(Z.size() == 4);
    for (size_t i = 0; i < Z.size(); ++i) CHECK(Z[i].word.length() == 1);
}

TEST_CASE("partition: defining inequality, prefix uniqueness, size band") {
    const SchottkyData g = load_group(data_file("group_r3.json"));
    const double tau = 0.01;
    const Partition Z = build_partition(g, tau);
    size_t max_len = 0;
    double min_size = 1e300;
    for (const auto& m : Z.members) {
        CHECK(m.interval.size() <= tau);
        if (m.word.length() > 1)
            CHECK(interval_of(g, m.word.parent()).size() > tau);
        max_len = std::max(max_len, m.word.length());
        min_size = std::min(min_size, m.interval.size());
    }
    // every long enough word has exactly one prefix in the partition
    for (const Word& w : enumerate_words(static_cast<int>(max_len), g.r)) {
        int hits = 0;
        for (const auto& m : Z.members)
            if (is_prefix(m.word, w)) ++hits;
        CHECK(hits == 1);
    }
    // single-resolution band: sizes within a bounded factor of tau; the
    // factor is the group's parent-child constant (about 140 here) and must
    // be stable across resolutions
    CHECK(min_size > 0);
    const double band = tau / min_size;
    CHECK(band < 500);
    double fine_min = 1e300;
    const double fine_tau = tau / 10;
    for (const auto& m : build_partition(g, fine_tau).members)
        fine_min = std::min(fine_min, m.interval.size());
    const double fine_band = fine_tau / fine_min;
    CHECK(fine_band < 500);
    CHECK(std::abs(std::log(band / fine_band)) < std::log(3.0));
}

TEST_CASE("partition budget") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    CHECK_THROWS_AS(build_partition(g, 1e-4, 10), BudgetError);
}

TEST_CASE("words_intersecting: empty, filtered, bounded counts") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    CHECK(words_intersecting(g, Interval(10, 11), 1e-3, 1.0).empty());

    const Interval J = g.interval(1);
    const auto hits = words_intersecting(g, J, 1e-2, 10.0);
    CHECK(!hits.empty());
    for (const auto& m : hits) {
        CHECK(m.interval.intersects(J));
        CHECK(m.interval.size() >= 1e-2);
        CHECK(m.interval.size() <= 10.0);
    }
    // every depth-1..2 word starting with letter 1 and in the band is present
    for (int n = 1; n <= 2; ++n)
        for (const Word& w : enumerate_words(n, g.r)) {
            if (w.first() != 1) continue;
            const double size = interval_of(g, w).size();
            if (size < 1e-2 || size > 10.0) continue;
            bool found = false;
            for (const auto& m : hits) found = found || m.word == w;
            CHECK(found);
        }
}

TEST_CASE("band-intersection counts obey the recorded constant") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    const double delta = 0.4156; // shipped group's dimension
    Rng rng(13);
    const double c0 = 8.0;
    double recorded = 0;
    for (int t = 0; t < 40; ++t) {
        const double tau = rng.log_uniform(1e-4, 1e-2);
        const double size = rng.log_uniform(5 * tau, 1.0);
        const double center = rng.uniform(-2.5, 2.5);
        const Interval J(center - size / 2, center + size / 2);
        const double count =
            static_cast<double>(words_intersecting(g, J, tau, c0 * tau).size());
        const double bound_shape =
            std::pow(tau, -delta) * std::pow(size, delta) + std::log(c0);
        recorded = std::max(recorded, count / bound_shape);
    }
    CHECK(recorded > 0);
    CHECK(recorded < 30.0);
}

TEST_CASE("interval lemma bands are positive and finite") {
    const SchottkyData g = load_group(data_file("group_r2.json"));
    const LemmaBands b = lemma_bands(g, 4, 500, 8, 42);
    CHECK(b.contraction_max < 1.0);
    CHECK(b.parent_child_min > 0.0);
    CHECK(b.concat_min > 0.0);
    CHECK(std::isfinite(b.concat_max));
    CHECK(b.reversal_min > 0.0);
    CHECK(std::isfinite(b.reversal_max));
    CHECK(b.separation_min > 0.0);
    CHECK(b.derivative_lo > 0.0);
    CHECK(std::isfinite(b.derivative_hi));
}

TEST_CASE("exterior_onto solves the three-point mapping problem") {
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const double p = rng.uniform(-5, 5);
        const Interval from(p, p + rng.uniform(0.1, 2));
        double q = rng.uniform(-5, 5);
        while (std::abs(q - p) < 3) q = rng.uniform(-8, 8);
        Interval onto(q, q + rng.uniform(0.1, 2));
        if (onto.intersects(from)) continue;
        const MobiusTransform g = exterior_onto(from, onto);
        CHECK(apply_finite(g, from.hi) == doctest::Approx(onto.lo).epsilon(1e-10));
        CHECK(apply_finite(g, from.lo) == doctest::Approx(onto.hi).epsilon(1e-10));
        CHECK(apply(g, ExtendedReal::infinity()).value() ==
              doctest::Approx(onto.midpoint()).epsilon(1e-10));
        CHECK(g.det() == doctest::Approx(1.0).epsilon(1e-12));
    }
}
