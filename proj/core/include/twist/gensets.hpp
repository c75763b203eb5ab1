#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twist/twords.hpp"

namespace twist {

/// A labeled generator: the group element plus, when known, a spelling over
/// the alphabet letters and t. Spellings feed the projection to generalized
/// t-words; generating sets loaded from JSON have none.
struct GenEntry {
    std::string label;
    GroupElement g;
    std::vector<Token> spelling;
};

struct GeneratingSet {
    Alphabet alphabet;
    std::vector<GenEntry> entries;
    bool closed_under_inverse = false;
    bool has_spellings = false;

    std::size_t size() const { return entries.size(); }
};

/// Validates labels (unique, nonempty), excludes the identity, verifies each
/// nonemtpy spelling evaluates to its element, and records whether the set is
/// closed under inversion.
GeneratingSet make_generating_set(const Group& group, Alphabet alphabet,
                                  std::vector<GenEntry> entries);

/// S = {t a : a in A} u A, closed under inversion. Labels follow the
/// alphabet: "t", "t.a<i>", "a<i>", with "^-1" suffixes for added inverses.
GeneratingSet build_unbound_gens(const Group& group, const Alphabet& alphabet);

/// S = {t a1 t^2 a2 t : a1, a2 in A} u A u {t}, closed under inversion.
/// Pair elements are labeled "b<i>_<j>".
GeneratingSet build_bound_gens(const Group& group, const Alphabet& alphabet);

/// S = {t} u (A \ {0}), closed under inversion.
GeneratingSet build_standard_gens(const Group& group, const Alphabet& alphabet);

/// Index of the first entry with maximal shift.
std::size_t max_shift_entry(const GeneratingSet& gens);

/// One letter of a word over the generating set.
struct SLetter {
    std::uint32_t index = 0;
    bool inverse = false;
};

GroupElement evaluate_sword(const Group& group, const GeneratingSet& gens,
                            const std::vector<SLetter>& word);

/// Projection of a generator word through the spellings: total t-exponent
/// plus the abelianized letter word. Evaluating the projection recovers the
/// K part of evaluate_sword.
ProjectedWord project_sword(const Group& group, const GeneratingSet& gens,
                            const std::vector<SLetter>& word);

std::string to_json(const Group& group, const GeneratingSet& gens);
GeneratingSet generating_set_from_json(const Group& group, const std::string& text);

// ---------------------------------------------------------------------------
// signed-digit systems for hyperbolic integer matrices
// ---------------------------------------------------------------------------

/// Digits {sum_a i_a a : |i_a| < bound} over the standard basis of Z^d,
/// together with the coset table of Z^d / T Z^d used to peel digits.
/// Greedy expansion picks, among the digits in the residue's coset, one
/// minimizing the sup norm of the next residual T^{-1}(k - a); ties go to the
/// digit smallest by (sup norm, lexicographic order).
class DigitSystem {
public:
    DigitSystem(const Group& group, std::int64_t bound);

    const Alphabet& alphabet() const { return alphabet_; }
    std::int64_t bound() const { return bound_; }

    /// Greedy expansion of k as sum of T^i(d_i). Nullopt when the step budget
    /// runs out or a residue class has no digit.
    std::optional<TWord> expand(const ModuleElement& k, std::int64_t budget) const;

    bool covers_all_cosets() const;
    /// First coset with no digit, as a concrete lattice element.
    ModuleElement uncovered_coset_witness() const;

private:
    std::int64_t coset_of(const std::vector<BigInt>& v) const;

    const Group* group_;
    std::int64_t bound_;
    Alphabet alphabet_;
    std::int64_t coset_count_ = 1;
    std::vector<std::vector<std::uint32_t>> coset_digits_;
};

struct DigitCheckResult {
    bool pass = false;
    std::string reason;
    std::optional<ModuleElement> witness;
    std::int64_t expansions_run = 0;
    std::int64_t max_steps_seen = 0;
};

/// The completeness test behind the digit-alphabet search: every coset of
/// Z^d / T Z^d must hold a digit, and greedy expansion must terminate within
/// `budget` steps on the box {-3n..3n}^d and on 1000 seeded random elements
/// of level up to 3. Each successful expansion is round-trip checked exactly.
DigitCheckResult check_digit_bound(const Group& group, const DigitSystem& system,
                                   std::int64_t budget);

/// Searches bound = 2, 3, ... for the first digit alphabet passing
/// check_digit_bound. Throws BoundedSearchExhausted when max_bound is hit;
/// the existence of some bound is not effective, so exhaustion is an
/// expected, reportable outcome.
struct DigitAlphabet {
    DigitSystem system;
    std::int64_t bound;
};
DigitAlphabet build_digit_alphabet(const Group& group, std::int64_t max_bound,
                                   std::int64_t budget);

} // namespace twist
