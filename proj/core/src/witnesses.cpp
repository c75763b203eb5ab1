#include "twist/witnesses.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace twist {

namespace {

const ModuleElement& nonzero_letter(const Alphabet& alphabet, std::uint32_t letter) {
    if (letter >= alphabet.size()) throw InvalidInputError("letter index out of range");
    if (letter == alphabet.zero_index)
        throw InvalidInputError("witness constructions need a nonzero letter");
    return alphabet.letters[letter];
}

GroupElement pow_element(const Group& group, const GroupElement& g, std::int64_t e) {
    GroupElement acc = group.identity();
    GroupElement base = e < 0 ? group.inverse(g) : g;
    for (std::int64_t i = 0; i < std::llabs(e); ++i) acc = group.multiply(acc, base);
    return acc;
}

} // namespace

GroupElement deep_element(const Group& group, const Alphabet& alphabet, std::uint32_t letter,
                          std::int64_t n) {
    if (n < 1) throw InvalidInputError("deep_element needs n >= 1");
    const ModuleElement& a = nonzero_letter(alphabet, letter);
    return GroupElement{0, group.add(group.shifted(a, n), group.shifted(a, -n))};
}

GroupElement deep_element_by_product(const Group& group, const Alphabet& alphabet,
                                     std::uint32_t letter, std::int64_t n) {
    if (n < 1) throw InvalidInputError("deep_element needs n >= 1");
    GroupElement a{0, nonzero_letter(alphabet, letter)};
    GroupElement tn{n, group.zero()};
    GroupElement tm2n{-2 * n, group.zero()};
    return group.multiply(
        group.multiply(group.multiply(group.multiply(tn, a), tm2n), a), tn);
}

std::pair<GroupElement, GroupElement> acx_witness_pair(const Group& group,
                                                       const GeneratingSet& gens,
                                                       std::uint32_t letter, std::int64_t n,
                                                       std::int64_t j) {
    if (j < 0 || j > n) throw InvalidInputError("acx pair needs 0 <= J <= n");
    const GroupElement& s = gens.entries[max_shift_entry(gens)].g;
    GroupElement a{0, nonzero_letter(gens.alphabet, letter)};

    auto g_n = [&](std::int64_t i) {
        GroupElement acc = pow_element(group, s, n + i);
        acc = group.multiply(acc, a);
        acc = group.multiply(acc, pow_element(group, s, -2 * n));
        acc = group.multiply(acc, a);
        return group.multiply(acc, pow_element(group, s, n));
    };
    GroupElement plus = g_n(j), minus = g_n(-j);
    if (group.multiply(plus, group.inverse(minus)) != pow_element(group, s, 2 * j))
        throw Error("acx pair identity h+ (h-)^-1 = s^(2J) failed");
    return {std::move(plus), std::move(minus)};
}

ModuleElement power_sum_element(const Group& group, std::int64_t n) {
    if (group.kind() != GroupKind::BaumslagSolitar)
        throw SpecMismatchError("power_sum_element lives in Z[1/m]");
    if (n < 2) throw InvalidInputError("power_sum_element needs n >= 2");
    BigInt sum = 0, term = 1;
    for (std::int64_t i = 1; i <= n - 1; ++i) {
        term *= group.spec().m;
        sum += term;
    }
    return group.bs_element(sum, 0);
}

std::int64_t min_deep_n_guidance(const ConstantsEstimate& constants) {
    return 2 * constants.c_efficiency + 1;
}

// ---------------------------------------------------------------------------
// support-gap condition
// ---------------------------------------------------------------------------

namespace {

struct LayerOption {
    ModuleElement value; // at power 0
    std::int64_t cost;   // minimal letter count realizing the value
    std::vector<std::pair<std::uint32_t, std::int64_t>> coeffs; // one realization
};

struct GapSearch {
    const Group& group;
    const Alphabet& alphabet;
    Window window;
    std::int64_t cap, n, i_coef, j_coef;

    std::vector<LayerOption> options; // nonempty layer contents
    // Baumslag-Solitar prune data (other kinds run uncut)
    bool bs = false;
    std::int64_t bs_max_e = 0;
    BigInt bs_max_val_num = 0;

    GapCheckResult result;
    std::vector<std::int64_t> chosen; // option index per layer, -1 = empty

    GapSearch(const Group& g, const Alphabet& a, Window w, std::int64_t cap_,
              std::int64_t n_, std::int64_t i_, std::int64_t j_)
        : group(g), alphabet(a), window(w), cap(cap_), n(n_), i_coef(i_), j_coef(j_) {
        build_options();
        if (group.kind() == GroupKind::BaumslagSolitar) {
            bs = true;
            for (std::uint32_t i = 0; i < alphabet.size(); ++i) {
                if (i == alphabet.zero_index) continue;
                const auto& b = alphabet.letters[i].bs();
                bs_max_e = std::max(bs_max_e, b.exp);
            }
            for (std::uint32_t i = 0; i < alphabet.size(); ++i) {
                if (i == alphabet.zero_index) continue;
                const auto& b = alphabet.letters[i].bs();
                BigInt scaled =
                    abs(b.num) * pow(BigInt(group.spec().m),
                                     static_cast<unsigned>(bs_max_e - b.exp));
                bs_max_val_num = std::max(bs_max_val_num, scaled);
            }
        }
    }

    void build_options() {
        // Enumerate coefficient vectors over the nonzero letters with total
        // weight <= cap; keep the cheapest realization of each value.
        std::vector<std::uint32_t> letters;
        for (std::uint32_t i = 0; i < alphabet.size(); ++i)
            if (i != alphabet.zero_index) letters.push_back(i);
        std::unordered_map<std::string, std::size_t> best;
        std::vector<std::pair<std::uint32_t, std::int64_t>> coeffs;

        struct Rec {
            GapSearch& s;
            const std::vector<std::uint32_t>& letters;
            std::unordered_map<std::string, std::size_t>& best;
            std::vector<std::pair<std::uint32_t, std::int64_t>>& coeffs;

            void operator()(std::size_t li, std::int64_t used, const ModuleElement& value) {
                if (used > 0) {
                    std::string key = s.group.key(value);
                    auto it = best.find(key);
                    if (it == best.end()) {
                        best.emplace(std::move(key), s.options.size());
                        s.options.push_back(LayerOption{value, used, coeffs});
                    } else if (s.options[it->second].cost > used) {
                        s.options[it->second] = LayerOption{value, used, coeffs};
                    }
                }
                if (li == letters.size() || used >= s.cap) return;
                (*this)(li + 1, used, value);
                for (std::int64_t c = 1; used + c <= s.cap; ++c) {
                    coeffs.emplace_back(letters[li], c);
                    (*this)(li + 1, used + c,
                            s.group.add(value, s.group.scaled(s.alphabet.letters[letters[li]], c)));
                    coeffs.pop_back();
                    coeffs.emplace_back(letters[li], -c);
                    (*this)(li + 1, used + c,
                            s.group.add(value,
                                        s.group.scaled(s.alphabet.letters[letters[li]], -c)));
                    coeffs.pop_back();
                }
            }
        } rec{*this, letters, best, coeffs};
        rec(0, 0, group.zero());
        std::sort(options.begin(), options.end(), [&](const LayerOption& a, const LayerOption& b) {
            if (a.cost != b.cost) return a.cost < b.cost;
            return group.key(a.value) < group.key(b.value);
        });
    }

    bool reachable(std::int64_t p, const ModuleElement& remaining, std::int64_t used) const {
        if (remaining.is_zero()) return true;
        if (used >= cap) return false;
        if (!bs) return true;
        const auto& b = remaining.bs();
        std::int64_t need = bs_max_e - p;
        if (need >= 0) {
            if (b.exp > need) return false;
        } else {
            if (b.exp > 0) return false;
            if (b.num % pow(BigInt(group.spec().m), static_cast<unsigned>(-need)) != 0)
                return false;
        }
        BigInt lhs = abs(b.num) * pow(BigInt(group.spec().m), static_cast<unsigned>(bs_max_e));
        std::int64_t rhs_exp = window.hi + b.exp;
        BigInt rhs = (cap - used) * bs_max_val_num;
        if (rhs_exp >= 0)
            rhs *= pow(BigInt(group.spec().m), static_cast<unsigned>(rhs_exp));
        else
            lhs *= pow(BigInt(group.spec().m), static_cast<unsigned>(-rhs_exp));
        return lhs <= rhs;
    }

    void record() {
        std::int64_t length = 0, gaps = 0;
        for (std::size_t li = 0; li < chosen.size(); ++li) {
            std::int64_t p = window.lo + static_cast<std::int64_t>(li);
            if (chosen[li] >= 0)
                length += options[static_cast<std::size_t>(chosen[li])].cost;
            else if (p > 0 && p < n)
                ++gaps;
        }
        // powers in (0, n) outside the window never hold a letter
        for (std::int64_t p = std::max<std::int64_t>(1, window.hi + 1); p < n; ++p) ++gaps;
        for (std::int64_t p = 1; p < std::min<std::int64_t>(n, window.lo); ++p) ++gaps;

        ++result.profiles_checked;
        std::int64_t excess = gaps - i_coef * (length - n) - j_coef;
        if (excess > result.worst_excess) {
            result.worst_excess = excess;
            result.worst_gaps = gaps;
            result.worst_length = length;
            result.worst_word.terms.clear();
            for (std::size_t li = 0; li < chosen.size(); ++li)
                if (chosen[li] >= 0) {
                    std::int64_t p = window.lo + static_cast<std::int64_t>(li);
                    for (const auto& [letter, c] :
                         options[static_cast<std::size_t>(chosen[li])].coeffs)
                        result.worst_word.terms.push_back({p, letter, c});
                }
        }
        if (excess > 0) result.pass = false;
    }

    void run(std::int64_t p, const ModuleElement& remaining, std::int64_t used) {
        if (p > window.hi) {
            if (remaining.is_zero()) record();
            return;
        }
        if (!reachable(p, remaining, used)) return;
        chosen.push_back(-1);
        run(p + 1, remaining, used);
        chosen.pop_back();
        for (std::size_t oi = 0; oi < options.size(); ++oi) {
            if (used + options[oi].cost > cap) continue;
            chosen.push_back(static_cast<std::int64_t>(oi));
            run(p + 1,
                group.add(remaining, group.negated(group.shifted(options[oi].value, p))),
                used + options[oi].cost);
            chosen.pop_back();
        }
    }
};

} // namespace

GapCheckResult check_gap_condition(const Group& group, const Alphabet& alphabet,
                                   const ModuleElement& target, std::int64_t n,
                                   std::int64_t i_coef, std::int64_t j_coef, Window window,
                                   std::int64_t length_cap) {
    group.check_same(target);
    if (length_cap < 0 || window.lo > window.hi)
        throw InvalidInputError("gap check needs a nonempty window and nonnegative cap");
    GapSearch search(group, alphabet, window, length_cap, n, i_coef, j_coef);
    search.run(window.lo, target, 0);
    return search.result;
}

// ---------------------------------------------------------------------------
// witness measurements
// ---------------------------------------------------------------------------

WitnessReport measure_deep_witness(const BallIndex& ball, std::uint32_t letter, std::int64_t n,
                                   std::int64_t depth_cap) {
    const Group& group = ball.group();
    WitnessReport report;
    report.family = "deep";
    report.n = n;
    GroupElement g = deep_element(group, ball.gens().alphabet, letter, n);
    report.elements.emplace_back("g", group.format(g));
    std::optional<std::uint32_t> id = ball.find(g);
    if (!id)
        throw InsufficientRadiusError("deep witness lies outside the ball; its length is at most 4n",
                                      4 * n);
    report.measured.emplace_back("word_length", ball.dist(*id));
    DepthResult d = depth(ball, *id, depth_cap);
    report.measured.emplace_back("depth", d.value);
    if (d.censored) report.censored.push_back("depth exceeds cap " + std::to_string(depth_cap));
    return report;
}

WitnessReport measure_acx_witness(const BallIndex& ball, std::uint32_t letter, std::int64_t n,
                                  std::int64_t j) {
    const Group& group = ball.group();
    WitnessReport report;
    report.family = "acx";
    report.n = n;
    report.j = j;
    auto [plus, minus] = acx_witness_pair(group, ball.gens(), letter, n, j);
    report.elements.emplace_back("h+", group.format(plus));
    report.elements.emplace_back("h-", group.format(minus));

    std::optional<std::uint32_t> id_plus = ball.find(plus);
    std::optional<std::uint32_t> id_minus = ball.find(minus);
    if (!id_plus || !id_minus)
        throw InsufficientRadiusError("acx witness pair lies outside the ball", 4 * n + 2);
    report.measured.emplace_back("word_length_plus", ball.dist(*id_plus));
    report.measured.emplace_back("word_length_minus", ball.dist(*id_minus));
    std::int64_t r = std::max(ball.dist(*id_plus), ball.dist(*id_minus));
    report.measured.emplace_back("level", r);
    std::optional<std::int64_t> interior = interior_distance(ball, *id_plus, *id_minus, r);
    if (interior) {
        report.measured.emplace_back("interior_distance", *interior);
    } else {
        report.measured.emplace_back("interior_distance", -1);
        report.censored.push_back("interior distance: unreachable inside the stored ball");
    }
    return report;
}

std::string to_json(const Group& group, const WitnessReport& report) {
    (void)group;
    nlohmann::ordered_json obj;
    obj["family"] = report.family;
    obj["n"] = report.n;
    obj["j"] = report.j;
    nlohmann::ordered_json elements;
    for (const auto& [name, text] : report.elements) elements[name] = text;
    obj["elements"] = std::move(elements);
    nlohmann::ordered_json measured;
    for (const auto& [name, value] : report.measured) measured[name] = value;
    obj["measured"] = std::move(measured);
    obj["censored"] = report.censored;
    return obj.dump(2);
}

} // namespace twist
