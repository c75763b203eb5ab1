#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twist/cayley.hpp"

namespace twist {

/// t^n a t^-2n a t^n: shift 0 with K part T^n(a) + T^-n(a).
GroupElement deep_element(const Group& group, const Alphabet& alphabet, std::uint32_t letter,
                          std::int64_t n);
/// The same element as the literal five-factor product, kept as an
/// independent route for cross-checks.
GroupElement deep_element_by_product(const Group& group, const Alphabet& alphabet,
                                     std::uint32_t letter, std::int64_t n);

/// h+ = g_n(J) and h- = g_n(-J) for g_n(i) = s^{n+i} a s^{-2n} a s^n, where s
/// is the first generator of maximal shift. Satisfies h+ (h-)^-1 = s^{2J}.
std::pair<GroupElement, GroupElement> acx_witness_pair(const Group& group,
                                                       const GeneratingSet& gens,
                                                       std::uint32_t letter, std::int64_t n,
                                                       std::int64_t j);

/// sum_{i=1}^{n-1} m^i as an element of Z[1/m].
ModuleElement power_sum_element(const Group& group, std::int64_t n);

/// Smallest n from which the two-letter word T^n a + T^-n a is safely a
/// minimal t-word, derived from the sampled efficiency constant instead of a
/// hardcoded threshold: 2 * C_eff + 1.
std::int64_t min_deep_n_guidance(const ConstantsEstimate& constants);

/// Exhaustive verification of the support-gap inequality
/// |N_n(w)| <= I (l(w) - n) + J over every generalized t-word w representing
/// `target` within the window and length cap, where N_n(w) is the set of
/// powers 0 < i < n at which w holds no letter. Words are enumerated up to
/// per-layer (value, minimal cost) profiles; the inequality is monotone in
/// the length, so checking the minimal-cost realization of each profile
/// decides it for every word.
struct GapCheckResult {
    bool pass = true;
    std::int64_t profiles_checked = 0;
    std::int64_t worst_excess = INT64_MIN; // max gaps - I(l - n) - J seen
    std::int64_t worst_gaps = 0;
    std::int64_t worst_length = 0;
    GeneralizedTWord worst_word;
};
GapCheckResult check_gap_condition(const Group& group, const Alphabet& alphabet,
                                   const ModuleElement& target, std::int64_t n,
                                   std::int64_t i_coef, std::int64_t j_coef, Window window,
                                   std::int64_t length_cap);

struct WitnessReport {
    std::string family;
    std::int64_t n = 0;
    std::int64_t j = 0;
    std::vector<std::pair<std::string, std::string>> elements; // (name, rendering)
    std::vector<std::pair<std::string, std::int64_t>> measured;
    std::vector<std::string> censored;
};

/// Word length and depth of the deep witness; requires the element to be
/// stored in the ball.
WitnessReport measure_deep_witness(const BallIndex& ball, std::uint32_t letter, std::int64_t n,
                                   std::int64_t depth_cap = 32);

/// Word lengths of h+ and h- and their interior distance at the level of the
/// farther of the two.
WitnessReport measure_acx_witness(const BallIndex& ball, std::uint32_t letter, std::int64_t n,
                                  std::int64_t j);

std::string to_json(const Group& group, const WitnessReport& report);

} // namespace twist
