#ifndef SIGHEDGE_WORDS_HPP
#define SIGHEDGE_WORDS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sighedge {

// Words over the alphabet {1..d} are packed into integers by
//   pack(empty) = 0,  pack(w letter) = d*pack(w) + letter.
// Under this packing the integer order coincides with the canonical
// word order (by length, then lexicographic), and the words of each
// length occupy a contiguous index block.
using WordIndex = std::uint32_t;

inline constexpr WordIndex kEmptyWord = 0;

inline std::uint64_t int_pow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Number of words of length exactly n.
inline std::uint64_t level_size(int dim, int n) { return int_pow(dim, n); }

// Packed index of the first word of length n: (d^n - 1)/(d - 1).
inline std::uint64_t level_offset(int dim, int n) {
    return (int_pow(dim, n) - 1) / (dim - 1);
}

// Total number of words of length <= trunc.
inline std::size_t word_space_size(int dim, int trunc) {
    return static_cast<std::size_t>(level_offset(dim, trunc + 1));
}

inline int word_length(int dim, WordIndex w) {
    int n = 0;
    while (w != 0) {
        w = (w - 1) / static_cast<WordIndex>(dim);
        ++n;
    }
    return n;
}

// Letter in {1..d} appended last.
inline int word_last_letter(int dim, WordIndex w) {
    return static_cast<int>((w - 1) % static_cast<WordIndex>(dim)) + 1;
}

inline WordIndex word_parent(int dim, WordIndex w) {
    return (w - static_cast<WordIndex>(word_last_letter(dim, w))) /
           static_cast<WordIndex>(dim);
}

inline WordIndex word_append(int dim, WordIndex w, int letter) {
    return w * static_cast<WordIndex>(dim) + static_cast<WordIndex>(letter);
}

// Packed index of the concatenation u.v given |v|.
inline WordIndex word_concat(int dim, WordIndex u, WordIndex v, int len_v) {
    return u * static_cast<WordIndex>(int_pow(dim, len_v)) + v;
}

// Digits of w in path order (first letter first).
inline void word_digits(int dim, WordIndex w, std::vector<std::uint8_t>& out) {
    out.clear();
    while (w != 0) {
        out.push_back(static_cast<std::uint8_t>(word_last_letter(dim, w)));
        w = word_parent(dim, w);
    }
    for (std::size_t i = 0, j = out.size(); i + 1 < j; ++i, --j)
        std::swap(out[i], out[j - 1]);
}

inline WordIndex word_from_digits(int dim, const std::uint8_t* digits, int n) {
    WordIndex w = kEmptyWord;
    for (int i = 0; i < n; ++i) w = word_append(dim, w, digits[i]);
    return w;
}

// Text form used by tensor dumps: digit string, or "ø" for the empty word.
inline std::string word_to_string(int dim, WordIndex w) {
    if (w == kEmptyWord) return "ø";
    std::vector<std::uint8_t> d;
    word_digits(dim, w, d);
    std::string s;
    s.reserve(d.size());
    for (auto x : d) s.push_back(static_cast<char>('0' + x));
    return s;
}

inline WordIndex word_from_string(int dim, const std::string& s) {
    if (s == "ø" || s == "e" || s.empty()) return kEmptyWord;
    WordIndex w = kEmptyWord;
    for (char c : s) {
        int letter = c - '0';
        if (letter < 1 || letter > dim)
            throw std::invalid_argument("word letter out of range: " + s);
        w = word_append(dim, w, letter);
    }
    return w;
}

// Precomputed digit/length tables for all words of length <= trunc,
// shared by the dense kernels.
struct WordTable {
    int dim = 0;
    int trunc = 0;
    std::vector<std::uint8_t> len;            // per word
    std::vector<std::uint8_t> digits;         // (trunc) bytes per word, padded
    const std::uint8_t* word(WordIndex w) const {
        return digits.data() + static_cast<std::size_t>(w) * trunc;
    }
};

const WordTable& word_table(int dim, int trunc);

}  // namespace sighedge

#endif
