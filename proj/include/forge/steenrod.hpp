#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge::steenrod {

// A composition of squaring operations Sq^{i1} Sq^{i2} ... as its exponent
// word. The empty word is the identity operation.
using Word = std::vector<int>;

inline int degree(const Word& w) {
    int d = 0;
    for (int i : w) d += i;
    return d;
}

// A word is admissible when each exponent is at least twice its right neighbor.
inline bool admissible(const Word& w) {
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        if (w[j] < 2 * w[j + 1]) return false;
    return true;
}

// Binomial coefficient mod 2: nonzero exactly when k's binary digits are a
// subset of n's (no carries in k + (n-k)).
inline int binom_mod2(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    return ((k & (n - k)) == 0) ? 1 : 0;
}

inline std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::ostringstream out;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (j) out << " ";
        out << "Sq" << w[j];
    }
    return out.str();
}

// A mod-2 sum of admissible words, all of the same degree. Addition is
// symmetric difference of the term sets.
struct Element {
    std::set<Word> terms;

    static Element zero() { return {}; }
    static Element identity() { return Element{{Word{}}}; }

    bool is_zero() const { return terms.empty(); }

    void xor_insert(const Word& w) {
        auto it = terms.find(w);
        if (it == terms.end())
            terms.insert(w);
        else
            terms.erase(it);
    }

    friend Element operator+(const Element& a, const Element& b) {
        Element r = a;
        for (const Word& w : b.terms) r.xor_insert(w);
        return r;
    }

    friend bool operator==(const Element& a, const Element& b) { return a.terms == b.terms; }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

    // Common degree of the terms; nullopt for the zero element.
    std::optional<int> degree() const {
        if (terms.empty()) return std::nullopt;
        return steenrod::degree(*terms.begin());
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const Word& w : terms) {
            if (!first) out << " + ";
            first = false;
            out << word_to_string(w);
        }
        return out.str();
    }
};

// Rewrites an arbitrary word as a mod-2 sum of admissible words by repeatedly
// expanding the leftmost inadmissible adjacent pair with the Adem relation
//   Sq^a Sq^b = sum_c binom(b-c-1, a-2c) Sq^{a+b-c} Sq^c   (a < 2b),
// where the c = 0 term is the single operation Sq^{a+b}. Exponent 0 factors
// are identity operations and are dropped; negative exponents are rejected.
inline Element adem_reduce(const Word& input) {
    Word start;
    start.reserve(input.size());
    for (int i : input) {
        if (i < 0)
            throw std::invalid_argument("adem_reduce: negative exponent in word");
        if (i > 0) start.push_back(i);
    }

    Element result;
    std::vector<Word> work{start};
    while (!work.empty()) {
        Word w = std::move(work.back());
        work.pop_back();

        std::size_t j = 0;
        while (j + 1 < w.size() && w[j] >= 2 * w[j + 1]) ++j;
        if (j + 1 >= w.size()) {
            result.xor_insert(w);
            continue;
        }

        const int a = w[j], b = w[j + 1];
        for (int c = 0; 2 * c <= a; ++c) {
            if (!binom_mod2(b - c - 1, a - 2 * c)) continue;
            Word next(w.begin(), w.begin() + j);
            next.push_back(a + b - c);
            if (c > 0) next.push_back(c);
            next.insert(next.end(), w.begin() + j + 2, w.end());
            work.push_back(std::move(next));
        }
    }
    return result;
}

// Excess of an admissible word: leading exponent minus the sum of the rest.
// Only defined on admissible words; anything else is a caller error.
inline int excess(const Word& w) {
    if (!admissible(w))
        throw std::invalid_argument("excess: word " + word_to_string(w) + " is not admissible");
    if (w.empty()) return 0;
    int rest = 0;
    for (std::size_t j = 1; j < w.size(); ++j) rest += w[j];
    return w[0] - rest;
}

// Bilinear composition: concatenate term pairs and reduce.
inline Element compose(const Element& x, const Element& y) {
    Element r;
    for (const Word& u : x.terms)
        for (const Word& v : y.terms) {
            Word cat = u;
            cat.insert(cat.end(), v.begin(), v.end());
            r = r + adem_reduce(cat);
        }
    return r;
}

// Parses "5,2,1" (or whitespace-separated) into a word.
inline Word parse_word(const std::string& text) {
    Word w;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::istringstream part(token);
        int value;
        while (part >> value) w.push_back(value);
        if (!part.eof()) throw std::invalid_argument("parse_word: bad token '" + token + "'");
    }
    return w;
}

}  // namespace forge::steenrod
