#pragma once

#include <string>
#include <vector>

#include "schottky/errors.hpp"

namespace schottky {

// Letters are 1-based: 1..2r, the inverse of a being bar(a) = a +/- r.
using Letter = int;

inline Letter bar_letter(Letter a, int r) { return a <= r ? a + r : a - r; }

// Admissible letter sequence (no immediate cancellation a, bar(a)).
// The empty word is valid and acts as the tree root / group identity.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    static bool is_admissible(const std::vector<Letter>& letters, int r);

    // throws PreconditionError if the sequence is not admissible
    static Word checked(std::vector<Letter> letters, int r);

    size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }
    Letter first() const;
    Letter last() const;

    // drops the last letter
    Word parent() const;
    // appends a letter (no admissibility check)
    Word child(Letter b) const;
    // reverses and bars every letter
    Word bar(int r) const;

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    bool operator!=(const Word& o) const { return letters_ != o.letters_; }
    // lexicographic; see shortlex_less for the enumeration order
    bool operator<(const Word& o) const { return letters_ < o.letters_; }

    // dot-separated letters, e.g. "1.2.1"; empty word prints as "-"
    std::string str() const;
    static Word parse(const std::string& s);

private:
    std::vector<Letter> letters_;
};

bool shortlex_less(const Word& a, const Word& b);

// concatenation w1 w2 is a word (at least one empty, or last(w1) != bar(first(w2)))
bool arrow(const Word& w1, const Word& w2, int r);

// last(w1) == first(w2); both words must be nonempty
bool squiggle(const Word& w1, const Word& w2);

// w1 a prefix of w2
bool is_prefix(const Word& w1, const Word& w2);

// for w1 ~> w2, the word parent(w1) + w2 of length |w1| + |w2| - 1
Word glue(const Word& w1, const Word& w2);

// plain concatenation; requires arrow(w1, w2, r)
Word concat(const Word& w1, const Word& w2, int r);

// admissible one-letter extensions in letter order (2r at the root, else 2r-1)
std::vector<Word> children(const Word& w, int r);

// all words of exactly length n, in lexicographic order
std::vector<Word> enumerate_words(int n, int r);

} // namespace schottky
