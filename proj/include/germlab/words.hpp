#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <vector>

#include "germlab/base.hpp"

namespace germlab {

using Letter = int;

// Alphabet {0, ..., degree-1} of a d-ary rooted tree.
struct Alphabet {
    int degree;

    explicit Alphabet(int d) : degree(d) {
        require(d >= 2, "alphabet degree must be at least 2");
    }

    bool operator==(const Alphabet&) const = default;
};

// A vertex of the tree: a finite word over the alphabet.  The empty
// word is the root.
struct Word {
    std::vector<Letter> letters;

    Word() = default;
    explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    Letter operator[](std::size_t i) const { return letters[i]; }

    void push_back(Letter a) { letters.push_back(a); }

    Word prefix(std::size_t n) const {
        return Word(std::vector<Letter>(letters.begin(), letters.begin() + std::min(n, size())));
    }

    bool is_prefix_of(const Word& other) const {
        if (size() > other.size()) return false;
        return std::equal(letters.begin(), letters.end(), other.letters.begin());
    }

    Word operator+(const Word& rhs) const {
        Word out = *this;
        out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
        return out;
    }

    auto operator<=>(const Word&) const = default;
};

inline void check_word(const Alphabet& alpha, const Word& w) {
    for (Letter a : w.letters)
        require(a >= 0 && a < alpha.degree, "word letter out of alphabet range");
}

// --- textual syntax -------------------------------------------------------
//
// Words over d <= 10 are digit strings ("0121"); larger alphabets use
// comma-separated integers ("0,12,3").  The empty string is the root.

inline std::string format_word(const Alphabet& alpha, const Word& w) {
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (alpha.degree > 10 && i > 0) os << ',';
        os << w[i];
    }
    return os.str();
}

inline Word parse_word(const Alphabet& alpha, const std::string& text) {
    Word w;
    if (text.empty()) return w;
    if (alpha.degree <= 10) {
        for (char c : text) {
            require(c >= '0' && c <= '9', std::string("bad letter '") + c + "' in word");
            w.push_back(c - '0');
        }
    } else {
        std::istringstream is(text);
        std::string part;
        while (std::getline(is, part, ',')) {
            try {
                w.push_back(std::stoi(part));
            } catch (const std::exception&) {
                throw parse_error("bad letter '" + part + "' in word");
            }
        }
    }
    check_word(alpha, w);
    return w;
}

// An eventually periodic point of the boundary, kept in canonical form:
// the period is primitive and the preperiod never ends with the last
// letter of the period, so equality is a componentwise check.
struct Ray {
    Word preperiod;
    Word period;

    Ray(Word pre, Word per) : preperiod(std::move(pre)), period(std::move(per)) {
        require(!period.empty(), "ray period must be nonempty");
        canonicalize();
    }

    Letter at(std::size_t i) const {
        if (i < preperiod.size()) return preperiod[i];
        return period[(i - preperiod.size()) % period.size()];
    }

    Word prefix(std::size_t n) const {
        Word w;
        w.letters.reserve(n);
        for (std::size_t i = 0; i < n; ++i) w.push_back(at(i));
        return w;
    }

    bool operator==(const Ray& other) const {
        return preperiod == other.preperiod && period == other.period;
    }

    bool operator<(const Ray& other) const {
        return std::tie(preperiod, period) < std::tie(other.preperiod, other.period);
    }

  private:
    void canonicalize() {
        // primitive period: shrink to the shortest root
        for (std::size_t len = 1; len <= period.size() / 2; ++len) {
            if (period.size() % len != 0) continue;
            bool is_root = true;
            for (std::size_t i = len; i < period.size() && is_root; ++i)
                is_root = (period[i] == period[i % len]);
            if (is_root) {
                period = period.prefix(len);
                break;
            }
        }
        // absorb trailing preperiod letters that match the period's tail
        while (!preperiod.empty() &&
               preperiod.letters.back() == period.letters.back()) {
            preperiod.letters.pop_back();
            std::rotate(period.letters.begin(), period.letters.end() - 1, period.letters.end());
        }
    }
};

inline void check_ray(const Alphabet& alpha, const Ray& z) {
    check_word(alpha, z.preperiod);
    check_word(alpha, z.period);
}

// Syntax: "preperiod(period)", e.g. "01(10)"; "(1)" for the constant ray.
inline std::string format_ray(const Alphabet& alpha, const Ray& z) {
    return format_word(alpha, z.preperiod) + "(" + format_word(alpha, z.period) + ")";
}

inline Ray parse_ray(const Alphabet& alpha, const std::string& text) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    require(open != std::string::npos && close == text.size() - 1 && close > open,
            "ray syntax is \"preperiod(period)\", e.g. \"01(10)\"");
    Word pre = parse_word(alpha, text.substr(0, open));
    Word per = parse_word(alpha, text.substr(open + 1, close - open - 1));
    return Ray(std::move(pre), std::move(per));
}

// The clopen set of all rays extending a fixed vertex word.
struct Cylinder {
    Word base;
};

inline bool cylinder_contains(const Cylinder& c, const Ray& z) {
    return z.prefix(c.base.size()) == c.base;
}

inline Word ray_prefix(const Ray& z, std::size_t n) { return z.prefix(n); }

// Rank of a vertex among the level-|w| words, lexicographic order.
inline std::uint64_t vertex_index(const Word& w, int degree) {
    std::uint64_t idx = 0;
    for (Letter a : w.letters) idx = idx * degree + static_cast<std::uint64_t>(a);
    return idx;
}

// Value of the boundary metric: 0 or 2^(-agreement).
struct BoundaryDistance {
    bool is_zero = false;
    std::size_t agreement = 0;

    double value() const { return is_zero ? 0.0 : std::ldexp(1.0, -static_cast<int>(agreement)); }

    std::string str() const {
        if (is_zero) return "0";
        if (agreement == 0) return "1";
        return "2^-" + std::to_string(agreement);
    }

    bool operator==(const BoundaryDistance&) const = default;

    // metric comparison: larger agreement = smaller distance
    bool operator<=(const BoundaryDistance& other) const {
        if (is_zero) return true;
        if (other.is_zero) return false;
        return agreement >= other.agreement;
    }
};

// Ultrametric on the boundary: 2^(-m) with m the longest common prefix.
// Two canonical rays that agree past both preperiods and a full common
// period block are equal, so the scan below is exact.
inline BoundaryDistance boundary_metric(const Alphabet& alpha, const Ray& a, const Ray& b) {
    check_ray(alpha, a);
    check_ray(alpha, b);
    if (a == b) return {.is_zero = true, .agreement = 0};
    std::size_t start = std::max(a.preperiod.size(), b.preperiod.size());
    std::size_t span = std::lcm(a.period.size(), b.period.size());
    std::size_t bound = start + span + 1;
    for (std::size_t i = 0; i < bound; ++i) {
        if (a.at(i) != b.at(i)) return {.is_zero = false, .agreement = i};
    }
    throw internal_error("distinct canonical rays must differ within the scan bound");
}

} // namespace germlab
