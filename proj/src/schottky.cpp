#include "schottky/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schottky/rng.hpp"

namespace schottky {

double Rng::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

Interval SchottkyData::hull() const {
    double lo = intervals.front().lo, hi = intervals.front().hi;
    for (const auto& I : intervals) {
        lo = std::min(lo, I.lo);
        hi = std::max(hi, I.hi);
    }
    return Interval(lo, hi);
}

double SchottkyData::min_base_size() const {
    double m = intervals.front().size();
    for (const auto& I : intervals) m = std::min(m, I.size());
    return m;
}

MobiusTransform exterior_onto(const Interval& from, const Interval& onto) {
    const double p = from.lo, q = from.hi, u = onto.lo, v = onto.hi;
    // determined by q -> u, p -> v, inf -> midpoint(onto); det = (v-u)(q-p) > 0
    return MobiusTransform(u + v, -(v * q + u * p), 2.0, -(p + q));
}

SchottkyData make_group(int r, const std::vector<Interval>& intervals, const std::string& name) {
    if (r < 2) throw NonElementaryError("make_group: requires r >= 2");
    if (intervals.size() != static_cast<size_t>(2 * r))
        throw ConfigError("make_group: expected 2r intervals");
    SchottkyData data;
    data.r = r;
    data.name = name;
    data.intervals = intervals;
    data.generators.resize(2 * r);
    for (Letter a = 1; a <= r; ++a) {
        data.generators[a - 1] = exterior_onto(intervals[a + r - 1], intervals[a - 1]);
        data.generators[a + r - 1] = data.generators[a - 1].inverse();
    }
    return data;
}

namespace {

AxiomCheck check_disjoint(const SchottkyData& data) {
    AxiomCheck c{"intervals_disjoint", false, 0, 0, ""};
    std::vector<Interval> sorted = data.intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    double min_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        min_gap = std::min(min_gap, sorted[i + 1].lo - sorted[i].hi);
    c.passed = min_gap > 0;
    c.defect = min_gap > 0 ? 0.0 : -min_gap;
    std::ostringstream os;
    os << "min gap " << min_gap;
    c.detail = os.str();
    return c;
}

AxiomCheck check_determinants(const SchottkyData& data) {
    AxiomCheck c{"unit_determinant", false, 0, 1e-12, ""};
    for (const auto& g : data.generators)
        c.defect = std::max(c.defect, std::abs(g.det() - 1.0));
    c.passed = c.defect < c.tolerance;
    return c;
}

AxiomCheck check_inverses(const SchottkyData& data) {
    AxiomCheck c{"inverse_pairs", false, 0, 1e-10, ""};
    for (Letter a = 1; a <= data.r; ++a) {
        const double d = data.generator(data.bar(a)).distance_to(data.generator(a).inverse());
        c.defect = std::max(c.defect, d);
    }
    c.passed = c.defect < c.tolerance;
    return c;
}

AxiomCheck check_mapping_endpoints(const SchottkyData& data) {
    AxiomCheck c{"mapping_endpoints", false, 0, 1e-9, ""};
    for (Letter a = 1; a <= 2 * data.r; ++a) {
        const Interval& from = data.interval(data.bar(a));
        const Interval& onto = data.interval(a);
        const MobiusTransform& g = data.generator(a);
        c.defect = std::max(c.defect, std::abs(apply_finite(g, from.hi) - onto.lo));
        c.defect = std::max(c.defect, std::abs(apply_finite(g, from.lo) - onto.hi));
    }
    c.passed = c.defect < c.tolerance;
    return c;
}

AxiomCheck check_mapping_exterior(const SchottkyData& data) {
    AxiomCheck c{"mapping_exterior", false, 0, 1e-9, ""};
    const Interval hull = data.hull();
    const double pad = 2.0 * hull.size();
    for (Letter a = 1; a <= 2 * data.r; ++a) {
        const Interval& from = data.interval(data.bar(a));
        const Interval& onto = data.interval(a);
        const MobiusTransform& g = data.generator(a);
        auto outside_by = [&](const ExtendedReal& y) {
            if (y.is_infinite()) return std::numeric_limits<double>::infinity();
            const double t = y.value();
            return std::max({0.0, onto.lo - t, t - onto.hi});
        };
        // exterior grid: sweep the hull (skipping the interior of I_{bar a}),
        // far points on both sides, and infinity
        const int n = 200;
        for (int i = 0; i <= n; ++i) {
            const double x = hull.lo - pad + (hull.size() + 2 * pad) * i / n;
            if (x > from.lo && x < from.hi) continue;
            c.defect = std::max(c.defect, outside_by(apply(g, ExtendedReal(x))));
        }
        c.defect = std::max(c.defect, outside_by(apply(g, ExtendedReal::infinity())));
        // the pole of g must sit inside I_{bar a}
        const ExtendedReal pole = apply(g.inverse(), ExtendedReal::infinity());
        if (pole.is_infinite() || !(pole.value() > from.lo && pole.value() < from.hi)) {
            c.defect = std::numeric_limits<double>::infinity();
            c.detail = "pole outside base interval";
        }
    }
    c.passed = c.defect < c.tolerance;
    return c;
}

} // namespace

ValidationReport validate(const SchottkyData& data) {
    ValidationReport report;
    AxiomCheck rank{"nonelementary_rank", data.r >= 2, data.r >= 2 ? 0.0 : 1.0, 0, "r >= 2"};
    report.checks.push_back(rank);
    if (data.intervals.size() != static_cast<size_t>(2 * data.r) ||
        data.generators.size() != static_cast<size_t>(2 * data.r)) {
        report.checks.push_back({"field_counts", false, 1.0, 0, "expected 2r intervals and generators"});
        return report;
    }
    report.checks.push_back({"field_counts", true, 0, 0, ""});
    report.checks.push_back(check_disjoint(data));
    report.checks.push_back(check_determinants(data));
    report.checks.push_back(check_inverses(data));
    report.checks.push_back(check_mapping_endpoints(data));
    report.checks.push_back(check_mapping_exterior(data));
    return report;
}

MobiusTransform group_element(const SchottkyData& data, const Word& w) {
    MobiusTransform g;
    for (const Letter a : w.letters()) g = g * data.generator(a);
    return g;
}

Interval interval_of(const SchottkyData& data, const Word& w) {
    if (w.empty()) throw EmptyWordError("interval_of: word must be nonempty");
    const MobiusTransform prefix = group_element(data, w.parent());
    const Interval& base = data.interval(w.last());
    const double x = apply_finite(prefix, base.lo);
    const double y = apply_finite(prefix, base.hi);
    return Interval(std::min(x, y), std::max(x, y));
}

std::optional<size_t> Partition::index_of(const Word& w) const {
    auto it = std::lower_bound(members.begin(), members.end(), w,
                               [](const PartitionMember& m, const Word& key) {
                                   return shortlex_less(m.word, key);
                               });
    if (it != members.end() && it->word == w) return it - members.begin();
    return std::nullopt;
}

namespace {

struct Node {
    Word word;
    MobiusTransform prefix; // g_{w'}
    MobiusTransform full;   // g_w
    Interval interval;
};

Interval map_interval(const MobiusTransform& g, const Interval& I) {
    const double x = apply_finite(g, I.lo);
    const double y = apply_finite(g, I.hi);
    return Interval(std::min(x, y), std::max(x, y));
}

std::vector<Node> root_nodes(const SchottkyData& data) {
    std::vector<Node> nodes;
    for (Letter a = 2 * data.r; a >= 1; --a) {
        Node n;
        n.word = Word().child(a);
        n.prefix = MobiusTransform::identity();
        n.full = data.generator(a);
        n.interval = data.interval(a);
        nodes.push_back(std::move(n));
    }
    return nodes;
}

Node make_child(const SchottkyData& data, const Node& parent, Letter b) {
    Node n;
    n.word = parent.word.child(b);
    n.prefix = parent.full;
    n.full = parent.full * data.generator(b);
    n.interval = map_interval(parent.full, data.interval(b));
    return n;
}

} // namespace

Partition build_partition(const SchottkyData& data, double tau, std::uint64_t budget) {
    if (!(tau >= 1e-12))
        throw DomainError("build_partition: tau below the double-precision floor 1e-12");
    Partition Z;
    Z.tau = tau;
    std::vector<Node> stack = root_nodes(data);
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.interval.size() <= tau) {
            if (Z.members.size() >= budget)
                throw BudgetError("build_partition: word budget exceeded");
            Z.members.push_back({node.word, node.interval, node.prefix});
            continue;
        }
        const Letter forbidden = data.bar(node.word.last());
        for (Letter b = 2 * data.r; b >= 1; --b)
            if (b != forbidden) stack.push_back(make_child(data, node, b));
    }
    std::sort(Z.members.begin(), Z.members.end(),
              [](const PartitionMember& a, const PartitionMember& b) {
                  return shortlex_less(a.word, b.word);
              });
    return Z;
}

std::vector<PartitionMember> words_intersecting(const SchottkyData& data, const Interval& J,
                                                double tau_lo, double tau_hi,
                                                std::uint64_t budget) {
    if (!(tau_lo > 0) || tau_lo > tau_hi)
        throw DomainError("words_intersecting: requires 0 < tau_lo <= tau_hi");
    std::vector<PartitionMember> out;
    std::vector<Node> stack = root_nodes(data);
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (!node.interval.intersects(J)) continue;
        const double size = node.interval.size();
        if (size < tau_lo) continue;
        if (size <= tau_hi) {
            if (out.size() >= budget)
                throw BudgetError("words_intersecting: word budget exceeded");
            out.push_back({node.word, node.interval, node.prefix});
        }
        const Letter forbidden = data.bar(node.word.last());
        for (Letter b = 2 * data.r; b >= 1; --b)
            if (b != forbidden) stack.push_back(make_child(data, node, b));
    }
    std::sort(out.begin(), out.end(), [](const PartitionMember& a, const PartitionMember& b) {
        return shortlex_less(a.word, b.word);
    });
    return out;
}

LemmaBands lemma_bands(const SchottkyData& data, int exhaustive_depth, int n_random,
                       int deep_depth, std::uint64_t seed) {
    LemmaBands bands;
    bands.contraction_max = 0;
    bands.parent_child_min = std::numeric_limits<double>::infinity();
    bands.concat_min = bands.reversal_min = bands.separation_min =
        std::numeric_limits<double>::infinity();
    bands.derivative_lo = std::numeric_limits<double>::infinity();

    auto word_stats = [&](const Word& w, const Interval& I, const MobiusTransform& full) {
        // parent-child / contraction over all admissible extensions
        for (Letter b = 1; b <= 2 * data.r; ++b) {
            if (b == data.bar(w.last())) continue;
            const double ratio = map_interval(full, data.interval(b)).size() / I.size();
            bands.contraction_max = std::max(bands.contraction_max, ratio);
            bands.parent_child_min = std::min(bands.parent_child_min, ratio);
        }
        // reversal
        bands.reversal_min = std::min(bands.reversal_min,
                                      interval_of(data, w.bar(data.r)).size() / I.size());
        bands.reversal_max = std::max(bands.reversal_max,
                                      interval_of(data, w.bar(data.r)).size() / I.size());
        // derivative bracket of g_{w'} on the base interval, normalized by |I_w|
        const MobiusTransform prefix = group_element(data, w.parent());
        const Interval& base = data.interval(w.last());
        for (int i = 0; i <= 16; ++i) {
            const double x = base.lo + base.size() * i / 16;
            const double ratio = derivative(prefix, x) / I.size();
            bands.derivative_lo = std::min(bands.derivative_lo, ratio);
            bands.derivative_hi = std::max(bands.derivative_hi, ratio);
        }
    };

    // exhaustive sweep to the requested depth
    std::vector<Node> stack = root_nodes(data);
    std::vector<std::pair<Word, Interval>> all;
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        word_stats(node.word, node.interval, node.full);
        all.emplace_back(node.word, node.interval);
        if (static_cast<int>(node.word.length()) >= exhaustive_depth) continue;
        const Letter forbidden = data.bar(node.word.last());
        for (Letter b = 2 * data.r; b >= 1; --b)
            if (b != forbidden) stack.push_back(make_child(data, node, b));
    }

    // separation over non-prefix-comparable exhaustive pairs
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            if (is_prefix(all[i].first, all[j].first) || is_prefix(all[j].first, all[i].first))
                continue;
            const double dist = interval_distance(all[i].second, all[j].second);
            const double scale = std::max(all[i].second.size(), all[j].second.size());
            bands.separation_min = std::min(bands.separation_min, dist / scale);
        }

    Rng rng(seed);
    // random walks truncated by depth and by interval size, so deep branches
    // with extreme contraction never collapse below double resolution
    auto extend_word = [&](std::vector<Letter> letters, int len, double size_floor) {
        if (letters.empty())
            letters.push_back(static_cast<Letter>(1 + rng.below(2 * data.r)));
        while (static_cast<int>(letters.size()) < len) {
            Letter b;
            do {
                b = static_cast<Letter>(1 + rng.below(2 * data.r));
            } while (b == bar_letter(letters.back(), data.r));
            letters.push_back(b);
            if (interval_of(data, Word(letters)).size() < size_floor) break;
        }
        return Word(std::move(letters));
    };

    for (int t = 0; t < n_random; ++t) {
        const int len = 2 + static_cast<int>(rng.below(std::max(1, deep_depth - 1)));
        const Word w = extend_word({}, len, 1e-4);
        word_stats(w, interval_of(data, w), group_element(data, w));
        // concatenation over a random linkable pair: w2 starts with last(w)
        const int len2 = 1 + static_cast<int>(rng.below(std::max(1, deep_depth)));
        const Word w2 = extend_word({w.last()}, len2, 1e-2);
        const Word glued = glue(w, w2);
        const double ratio = interval_of(data, glued).size() /
                             (interval_of(data, w).size() * interval_of(data, w2).size());
        bands.concat_min = std::min(bands.concat_min, ratio);
        bands.concat_max = std::max(bands.concat_max, ratio);
    }
    return bands;
}

} // namespace schottky
