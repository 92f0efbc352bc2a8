#include "schottky/word.hpp"

#include <sstream>

namespace schottky {

bool Word::is_admissible(const std::vector<Letter>& letters, int r) {
    for (const Letter a : letters)
        if (a < 1 || a > 2 * r) return false;
    for (size_t j = 0; j + 1 < letters.size(); ++j)
        if (letters[j + 1] == bar_letter(letters[j], r)) return false;
    return true;
}

Word Word::checked(std::vector<Letter> letters, int r) {
    if (!is_admissible(letters, r))
        throw PreconditionError("Word: letter sequence is not admissible");
    return Word(std::move(letters));
}

Letter Word::first() const {
    if (empty()) throw EmptyWordError("Word::first on empty word");
    return letters_.front();
}

Letter Word::last() const {
    if (empty()) throw EmptyWordError("Word::last on empty word");
    return letters_.back();
}

Word Word::parent() const {
    if (empty()) throw EmptyWordError("Word::parent on empty word");
    return Word(std::vector<Letter>(letters_.begin(), letters_.end() - 1));
}

Word Word::child(Letter b) const {
    std::vector<Letter> ext = letters_;
    ext.push_back(b);
    return Word(std::move(ext));
}

Word Word::bar(int r) const {
    std::vector<Letter> rev(letters_.rbegin(), letters_.rend());
    for (Letter& a : rev) a = bar_letter(a, r);
    return Word(std::move(rev));
}

std::string Word::str() const {
    if (empty()) return "-";
    std::ostringstream os;
    for (size_t j = 0; j < letters_.size(); ++j) {
        if (j) os << '.';
        os << letters_[j];
    }
    return os.str();
}

Word Word::parse(const std::string& s) {
    if (s.empty() || s == "-") return Word();
    std::vector<Letter> letters;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, '.')) {
        try {
            letters.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ConfigError("Word::parse: bad token '" + tok + "' in '" + s + "'");
        }
    }
    return Word(std::move(letters));
}

bool shortlex_less(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.letters() < b.letters();
}

bool arrow(const Word& w1, const Word& w2, int r) {
    if (w1.empty() || w2.empty()) return true;
    return w2.first() != bar_letter(w1.last(), r);
}

bool squiggle(const Word& w1, const Word& w2) {
    if (w1.empty() || w2.empty())
        throw EmptyWordError("squiggle: both words must be nonempty");
    return w1.last() == w2.first();
}

bool is_prefix(const Word& w1, const Word& w2) {
    if (w1.length() > w2.length()) return false;
    for (size_t j = 0; j < w1.length(); ++j)
        if (w1.letters()[j] != w2.letters()[j]) return false;
    return true;
}

Word glue(const Word& w1, const Word& w2) {
    if (!squiggle(w1, w2))
        throw PreconditionError("glue: words are not linkable (last != first)");
    std::vector<Letter> out(w1.letters().begin(), w1.letters().end() - 1);
    out.insert(out.end(), w2.letters().begin(), w2.letters().end());
    return Word(std::move(out));
}

Word concat(const Word& w1, const Word& w2, int r) {
    if (!arrow(w1, w2, r))
        throw PreconditionError("concat: concatenation would cancel");
    std::vector<Letter> out = w1.letters();
    out.insert(out.end(), w2.letters().begin(), w2.letters().end());
    return Word(std::move(out));
}

std::vector<Word> children(const Word& w, int r) {
    std::vector<Word> out;
    out.reserve(w.empty() ? 2 * r : 2 * r - 1);
    const Letter forbidden = w.empty() ? 0 : bar_letter(w.last(), r);
    for (Letter b = 1; b <= 2 * r; ++b)
        if (b != forbidden) out.push_back(w.child(b));
    return out;
}

std::vector<Word> enumerate_words(int n, int r) {
    std::vector<Word> level = {Word()};
    for (int depth = 0; depth < n; ++depth) {
        std::vector<Word> next;
        next.reserve(level.size() * (2 * r - 1) + 1);
        for (const Word& w : level)
            for (const Word& c : children(w, r)) next.push_back(c);
        level = std::move(next);
    }
    return level;
}

} // namespace schottky
