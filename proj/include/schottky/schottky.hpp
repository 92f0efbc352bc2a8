#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schottky/mobius.hpp"
#include "schottky/word.hpp"

namespace schottky {

// One check of the group axioms: name, worst observed defect, tolerance.
struct AxiomCheck {
    std::string name;
    bool passed = false;
    double defect = 0;
    double tolerance = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<AxiomCheck> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
    const AxiomCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Schottky data: 2r pairwise disjoint closed intervals I_1..I_2r on R and
// generators g_1..g_2r with g_a mapping the exterior of I_{bar a} onto I_a
// and g_{bar a} = g_a^{-1}.
struct SchottkyData {
    int r = 0;
    std::string name;
    std::vector<Interval> intervals;         // size 2r
    std::vector<MobiusTransform> generators; // size 2r

    Letter bar(Letter a) const { return bar_letter(a, r); }
    const Interval& interval(Letter a) const { return intervals[a - 1]; }
    const MobiusTransform& generator(Letter a) const { return generators[a - 1]; }

    // smallest interval containing all I_a
    Interval hull() const;
    double min_base_size() const;
};

// The unique transform sending the exterior of `from` onto `onto` with
// from.hi -> onto.lo, from.lo -> onto.hi, inf -> midpoint(onto).
MobiusTransform exterior_onto(const Interval& from, const Interval& onto);

// Builds a group from r base intervals-pairs: generator a maps the exterior
// of interval bar(a) onto interval a. Intervals are listed for all 2r letters.
SchottkyData make_group(int r, const std::vector<Interval>& intervals,
                        const std::string& name = "");

// Checks all axioms; never throws on failure, reports defects instead.
ValidationReport validate(const SchottkyData& data);

// product of generator matrices along the word (identity for the empty word)
MobiusTransform group_element(const SchottkyData& data, const Word& w);

// I_w = g_{w'}(I_{last(w)}); w must be nonempty admissible
Interval interval_of(const SchottkyData& data, const Word& w);

// A member of a resolution partition: the word, its interval, and the
// prefix transform g_{w'} used by every weight evaluation.
struct PartitionMember {
    Word word;
    Interval interval;
    MobiusTransform prefix; // g_{w'}
};

// Antichain of words whose interval size first drops to <= tau.
struct Partition {
    double tau = 0;
    std::vector<PartitionMember> members; // sorted shortlex by word

    size_t size() const { return members.size(); }
    const PartitionMember& operator[](size_t i) const { return members[i]; }

    // index of the member whose word equals w, if any
    std::optional<size_t> index_of(const Word& w) const;
};

inline constexpr std::uint64_t kDefaultWordBudget = 1000000;

// Tree search for { w : |I_w| <= tau < |I_{parent(w)}| } with |I_empty| = inf.
// Throws BudgetError if more than `budget` members would be produced.
Partition build_partition(const SchottkyData& data, double tau,
                          std::uint64_t budget = kDefaultWordBudget);

// All words with size in [tau_lo, tau_hi] whose interval meets J.
std::vector<PartitionMember> words_intersecting(const SchottkyData& data, const Interval& J,
                                                double tau_lo, double tau_hi,
                                                std::uint64_t budget = kDefaultWordBudget);

// Empirically observed min/max ratios for the interval lemmas (contraction,
// parent-child, concatenation, reversal, separation, derivative bracket).
struct LemmaBands {
    double contraction_max = 0;    // max |I_{wb}| / |I_w|
    double parent_child_min = 0;   // min |I_{wb}| / |I_w|
    double concat_min = 0, concat_max = 0;       // |I_{w1' w2}| / (|I_w1| |I_w2|)
    double reversal_min = 0, reversal_max = 0;   // |I_{bar w}| / |I_w|
    double separation_min = 0;     // dist(I_w1, I_w2) / max(|I_w1|, |I_w2|)
    double derivative_lo = 0, derivative_hi = 0; // g_{w'}' / |I_w| bracket
};

LemmaBands lemma_bands(const SchottkyData& data, int exhaustive_depth, int n_random,
                       int deep_depth, std::uint64_t seed);

} // namespace schottky
