#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twist/group.hpp"

namespace twist {

/// Module alphabet A: a finite list of elements of K containing zero,
/// optionally checked to be symmetrized (closed under negation).
struct Alphabet {
    std::vector<ModuleElement> letters;
    bool symmetrized = false;
    std::uint32_t zero_index = 0;
    /// inverse_index[i] is the index of -letters[i]; filled when symmetrized.
    std::vector<std::uint32_t> inverse_index;

    std::size_t size() const { return letters.size(); }
};

Alphabet make_alphabet(const Group& group, std::vector<ModuleElement> letters,
                       bool require_symmetrized);

/// t-word: at most one letter per power of t, all letters nonzero.
/// Entries are kept sorted by power.
struct TWord {
    std::vector<std::pair<std::int64_t, std::uint32_t>> entries;

    std::int64_t length() const { return static_cast<std::int64_t>(entries.size()); }
    bool empty() const { return entries.empty(); }
    bool operator==(const TWord& rhs) const { return entries == rhs.entries; }
    bool operator<(const TWord& rhs) const;
};

TWord make_tword(const Alphabet& alphabet,
                 std::vector<std::pair<std::int64_t, std::uint32_t>> entries);

/// Generalized t-word: an integer combination of letters placed at powers of
/// t; several letters may share a power. Terms are sorted by (power, letter)
/// and carry nonzero coefficients.
struct GeneralizedTWord {
    struct Term {
        std::int64_t power;
        std::uint32_t letter;
        std::int64_t coeff;
        bool operator==(const Term& rhs) const {
            return power == rhs.power && letter == rhs.letter && coeff == rhs.coeff;
        }
    };
    std::vector<Term> terms;

    static GeneralizedTWord from_tword(const TWord& w);
    std::int64_t length() const;
    bool empty() const { return terms.empty(); }
    bool operator==(const GeneralizedTWord& rhs) const { return terms == rhs.terms; }
};

GeneralizedTWord formal_sum(const GeneralizedTWord& a, const GeneralizedTWord& b);
GeneralizedTWord scaled_word(const GeneralizedTWord& a, std::int64_t factor);

ModuleElement evaluate(const Group& group, const Alphabet& alphabet, const GeneralizedTWord& w);
ModuleElement evaluate(const Group& group, const Alphabet& alphabet, const TWord& w);

/// Largest / smallest power of t carrying a letter. nullopt encodes the empty
/// word's sentinels (-inf for max_power, +inf for min_power).
std::optional<std::int64_t> max_power(const GeneralizedTWord& w);
std::optional<std::int64_t> min_power(const GeneralizedTWord& w);
std::optional<std::int64_t> max_power(const TWord& w);
std::optional<std::int64_t> min_power(const TWord& w);

/// Sum over powers of max(layer_length - n, 0).
std::int64_t truncated_norm(const GeneralizedTWord& w, std::int64_t n);

struct Window {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t width() const { return hi - lo + 1; }
};

/// All inclusion-minimal t-words representing `target` with support inside
/// `window` and length at most `length_cap`, sorted by (length, support).
/// Exhaustive within the window and cap; nothing is claimed outside them.
/// An empty result is an answer, not an error.
std::vector<TWord> minimal_twords(const Group& group, const Alphabet& alphabet,
                                  const ModuleElement& target, Window window,
                                  std::int64_t length_cap);

/// The minimal-length subset of minimal_twords output.
std::vector<TWord> shortest_twords(const Group& group, const Alphabet& alphabet,
                                   const ModuleElement& target, Window window,
                                   std::int64_t length_cap);

/// Every t-word over the alphabet with support in the window and at most
/// length_cap letters, in a fixed enumeration order, truncated at `budget`
/// words. No minimality or value filtering.
std::vector<TWord> enumerate_twords(const Group& group, const Alphabet& alphabet, Window window,
                                    std::int64_t length_cap, std::int64_t budget);

/// Window-relative power range of an element: extremes of max_power and
/// min_power over its minimal-length t-words in the window.
struct ElementPowerRange {
    bool is_zero = false;       // sentinels (-inf, +inf) apply
    std::int64_t max_power = 0; // min over minimal-length words of max_power
    std::int64_t min_power = 0; // max over minimal-length words of min_power
    std::int64_t max_power_spread = 0;
    std::int64_t min_power_spread = 0;
    std::int64_t min_length = 0;
    std::int64_t word_count = 0;
};

/// Throws BoundedSearchExhausted when no representative exists within the
/// window and cap (distinct from the target being the zero element).
ElementPowerRange element_power_range(const Group& group, const Alphabet& alphabet,
                                      const ModuleElement& k, Window window,
                                      std::int64_t length_cap);

// ---- alphabet quality constants (sample certificates) --------------------

struct StrongLogEntry {
    std::int64_t m = 1;
    std::int64_t n = 0;
    double b = 0.0;
    double c = 0.0;
};

/// Upper envelopes over the tested sample. They certify the corresponding
/// inequalities on that sample only, never universally.
struct ConstantsEstimate {
    std::int64_t c_efficiency = 0;
    std::int64_t c_logarithmic = 0;
    std::vector<StrongLogEntry> strong;
    std::string sample_description;
};

struct EstimateParams {
    Window window{-5, 5};
    std::int64_t cap = 8;       // length cap for the base t-word sample
    std::int64_t rep_cap = 0;   // cap for representative searches; 0 = 2*cap
    std::int64_t pairs_budget = 200000;
    std::vector<std::pair<std::int64_t, std::int64_t>> strong_grid =
        {{1, 0}, {1, 1}, {2, 0}, {2, 1}};
};

ConstantsEstimate estimate_constants(const Group& group, const Alphabet& alphabet,
                                     const EstimateParams& params);

// ---- projection of generator words to generalized t-words ----------------

/// One token of a spelled-out word over the alphabet letters and powers of t.
struct Token {
    bool is_t = false;
    std::int64_t t_delta = 0;   // when is_t
    std::uint32_t letter = 0;   // when !is_t
    int sign = 1;               // +1 or -1
};

struct ProjectedWord {
    std::int64_t shift = 0;
    GeneralizedTWord word;
};

/// Projects a spelled word to (total t-exponent, abelianized letter sum):
/// a letter whose suffix carries total t-exponent s lands at power -s, so
/// that evaluating the projection recovers the K part of the group product.
ProjectedWord project_tokens(const std::vector<Token>& tokens);

/// Group evaluation of a token word (the sigma map).
GroupElement evaluate_tokens(const Group& group, const Alphabet& alphabet,
                             const std::vector<Token>& tokens);

std::vector<Token> inverted_tokens(std::vector<Token> tokens);

/// JSON array of [power, letter-index, coefficient] triples.
std::string to_json(const GeneralizedTWord& w);
std::string to_json(const TWord& w);

} // namespace twist
