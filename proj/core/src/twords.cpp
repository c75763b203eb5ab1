#include "twist/twords.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace twist {

namespace {

BigInt pow_m(std::int64_t m, std::int64_t e) {
    return pow(BigInt(m), static_cast<unsigned>(e));
}

} // namespace

Alphabet make_alphabet(const Group& group, std::vector<ModuleElement> letters,
                       bool require_symmetrized) {
    if (letters.empty()) throw InvalidInputError("alphabet must not be empty");
    Alphabet a;
    a.letters = std::move(letters);

    std::unordered_map<std::string, std::uint32_t> index;
    bool has_zero = false;
    for (std::uint32_t i = 0; i < a.letters.size(); ++i) {
        group.check_same(a.letters[i]);
        auto [it, inserted] = index.emplace(group.key(a.letters[i]), i);
        if (!inserted) throw InvalidInputError("alphabet letters must be distinct");
        if (a.letters[i].is_zero()) {
            a.zero_index = i;
            has_zero = true;
        }
    }
    if (!has_zero) throw InvalidInputError("alphabet must contain the zero letter");

    a.inverse_index.assign(a.letters.size(), 0);
    bool symmetric = true;
    for (std::uint32_t i = 0; i < a.letters.size(); ++i) {
        auto it = index.find(group.key(group.negated(a.letters[i])));
        if (it == index.end()) {
            symmetric = false;
            break;
        }
        a.inverse_index[i] = it->second;
    }
    if (require_symmetrized && !symmetric)
        throw InvalidInputError("alphabet is not symmetrized (closed under negation)");
    a.symmetrized = symmetric;
    return a;
}

bool TWord::operator<(const TWord& rhs) const {
    if (entries.size() != rhs.entries.size()) return entries.size() < rhs.entries.size();
    return entries < rhs.entries;
}

TWord make_tword(const Alphabet& alphabet,
                 std::vector<std::pair<std::int64_t, std::uint32_t>> entries) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].second >= alphabet.size())
            throw InvalidInputError("t-word letter index out of range");
        if (entries[i].second == alphabet.zero_index)
            throw InvalidInputError("t-words store nonzero letters only");
        if (i > 0 && entries[i].first == entries[i - 1].first)
            throw InvalidInputError("t-word has two letters at one power");
    }
    TWord w;
    w.entries = std::move(entries);
    return w;
}

GeneralizedTWord GeneralizedTWord::from_tword(const TWord& w) {
    GeneralizedTWord g;
    g.terms.reserve(w.entries.size());
    for (const auto& [p, l] : w.entries) g.terms.push_back({p, l, 1});
    return g;
}

std::int64_t GeneralizedTWord::length() const {
    std::int64_t n = 0;
    for (const auto& t : terms) n += std::llabs(t.coeff);
    return n;
}

GeneralizedTWord formal_sum(const GeneralizedTWord& a, const GeneralizedTWord& b) {
    GeneralizedTWord out;
    out.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    auto lt = [](const GeneralizedTWord::Term& x, const GeneralizedTWord::Term& y) {
        return x.power != y.power ? x.power < y.power : x.letter < y.letter;
    };
    while (i < a.terms.size() || j < b.terms.size()) {
        if (j == b.terms.size() || (i < a.terms.size() && lt(a.terms[i], b.terms[j]))) {
            out.terms.push_back(a.terms[i++]);
        } else if (i == a.terms.size() || lt(b.terms[j], a.terms[i])) {
            out.terms.push_back(b.terms[j++]);
        } else {
            auto t = a.terms[i++];
            t.coeff += b.terms[j++].coeff;
            if (t.coeff != 0) out.terms.push_back(t);
        }
    }
    return out;
}

GeneralizedTWord scaled_word(const GeneralizedTWord& a, std::int64_t factor) {
    GeneralizedTWord out;
    if (factor == 0) return out;
    out.terms = a.terms;
    for (auto& t : out.terms) t.coeff *= factor;
    return out;
}

ModuleElement evaluate(const Group& group, const Alphabet& alphabet, const GeneralizedTWord& w) {
    ModuleElement acc = group.zero();
    for (const auto& t : w.terms) {
        if (t.letter >= alphabet.size()) throw InvalidInputError("letter index out of range");
        ModuleElement v = group.scaled(alphabet.letters[t.letter], t.coeff);
        acc = group.add(acc, group.shifted(v, t.power));
    }
    return acc;
}

ModuleElement evaluate(const Group& group, const Alphabet& alphabet, const TWord& w) {
    return evaluate(group, alphabet, GeneralizedTWord::from_tword(w));
}

std::optional<std::int64_t> max_power(const GeneralizedTWord& w) {
    if (w.terms.empty()) return std::nullopt;
    return w.terms.back().power;
}
std::optional<std::int64_t> min_power(const GeneralizedTWord& w) {
    if (w.terms.empty()) return std::nullopt;
    return w.terms.front().power;
}
std::optional<std::int64_t> max_power(const TWord& w) {
    if (w.entries.empty()) return std::nullopt;
    return w.entries.back().first;
}
std::optional<std::int64_t> min_power(const TWord& w) {
    if (w.entries.empty()) return std::nullopt;
    return w.entries.front().first;
}

std::int64_t truncated_norm(const GeneralizedTWord& w, std::int64_t n) {
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < w.terms.size()) {
        std::int64_t p = w.terms[i].power;
        std::int64_t layer = 0;
        while (i < w.terms.size() && w.terms[i].power == p) layer += std::llabs(w.terms[i++].coeff);
        total += std::max<std::int64_t>(layer - n, 0);
    }
    return total;
}

// ---------------------------------------------------------------------------
// minimal t-word search
// ---------------------------------------------------------------------------

namespace {

struct Search {
    const Group& group;
    const Alphabet& alphabet;
    Window window;
    std::int64_t cap;

    std::vector<std::uint32_t> nonzero_letters;
    // letter values shifted to each power of the window, [p - lo][letter]
    std::vector<std::vector<ModuleElement>> at_power;

    // lamplighter fast path: every nonzero letter is a single lamp at
    // position 0, so the letter at power p is forced by the target value there
    bool lamp_forced = false;
    std::unordered_map<std::int64_t, std::uint32_t> lamp_coeff_to_letter;
    std::int64_t lamp_min_off = 0, lamp_max_off = 0;

    // Baumslag-Solitar pruning data
    std::int64_t bs_max_e = 0;
    BigInt bs_max_val_num = 0; // largest |letter| is bs_max_val_num / m^bs_max_e

    // subset minimality check can be skipped when distinct-power letters can
    // never cancel
    bool cancellation_free = false;

    std::vector<std::pair<std::int64_t, std::uint32_t>> current;
    std::vector<TWord> found;

    Search(const Group& g, const Alphabet& a, Window w, std::int64_t c)
        : group(g), alphabet(a), window(w), cap(c) {
        for (std::uint32_t i = 0; i < alphabet.size(); ++i)
            if (i != alphabet.zero_index) nonzero_letters.push_back(i);

        at_power.resize(static_cast<std::size_t>(window.width()));
        for (std::int64_t p = window.lo; p <= window.hi; ++p) {
            auto& row = at_power[static_cast<std::size_t>(p - window.lo)];
            row.reserve(alphabet.size());
            for (const auto& letter : alphabet.letters) row.push_back(group.shifted(letter, p));
        }

        switch (group.kind()) {
        case GroupKind::Lamplighter: {
            lamp_forced = true;
            bool first = true;
            for (auto i : nonzero_letters) {
                const auto& lamps = alphabet.letters[i].lamp().lamps;
                if (lamps.size() != 1 || lamps[0].first != 0) lamp_forced = false;
                for (const auto& [pos, c] : lamps) {
                    if (first || pos < lamp_min_off) lamp_min_off = pos;
                    if (first || pos > lamp_max_off) lamp_max_off = pos;
                    first = false;
                }
                if (lamps.size() == 1 && lamps[0].first == 0)
                    lamp_coeff_to_letter.emplace(lamps[0].second, i);
            }
            if (nonzero_letters.empty()) lamp_forced = false;
            cancellation_free = lamp_forced;
            break;
        }
        case GroupKind::BaumslagSolitar: {
            bool small = true;
            for (auto i : nonzero_letters) {
                const auto& b = alphabet.letters[i].bs();
                bs_max_e = std::max(bs_max_e, b.exp);
                if (b.exp != 0 || abs(b.num) >= group.spec().m) small = false;
            }
            for (auto i : nonzero_letters) {
                const auto& b = alphabet.letters[i].bs();
                BigInt scaled = abs(b.num) * pow_m(group.spec().m, bs_max_e - b.exp);
                bs_max_val_num = std::max(bs_max_val_num, scaled);
            }
            cancellation_free = small;
            break;
        }
        case GroupKind::MatrixModule:
            break;
        }
    }

    bool reachable(std::int64_t p, const ModuleElement& remaining, std::int64_t used) const {
        switch (group.kind()) {
        case GroupKind::Lamplighter: {
            const auto& lamps = remaining.lamp().lamps;
            if (lamps.empty()) return true;
            if (used >= cap) return false;
            // positions below p + min_off can no longer be touched
            if (lamps.front().first < p + lamp_min_off) return false;
            if (lamps.back().first > window.hi + lamp_max_off) return false;
            return true;
        }
        case GroupKind::BaumslagSolitar: {
            const auto& b = remaining.bs();
            if (b.num == 0) return true;
            if (used >= cap) return false;
            // contributions from powers >= p are multiples of m^{p - max_e}
            std::int64_t need = bs_max_e - p;
            if (need >= 0) {
                if (b.exp > need) return false;
            } else {
                if (b.exp > 0) return false;
                if (b.num % pow_m(group.spec().m, -need) != 0) return false;
            }
            // |remaining| <= letters_left * max |letter value at window.hi|
            // both sides times m^{max_e + exp}:
            BigInt lhs = abs(b.num) * pow_m(group.spec().m, bs_max_e);
            std::int64_t rhs_exp = window.hi + b.exp;
            BigInt rhs = (cap - used) * bs_max_val_num;
            if (rhs_exp >= 0)
                rhs *= pow_m(group.spec().m, rhs_exp);
            else
                lhs *= pow_m(group.spec().m, -rhs_exp);
            return lhs <= rhs;
        }
        case GroupKind::MatrixModule: return used < cap || remaining.is_zero();
        }
        return true;
    }

    bool is_minimal(const std::vector<std::pair<std::int64_t, std::uint32_t>>& entries) const {
        if (cancellation_free || entries.size() <= 1) return true;
        std::vector<ModuleElement> vals;
        vals.reserve(entries.size());
        for (const auto& [p, l] : entries)
            vals.push_back(at_power[static_cast<std::size_t>(p - window.lo)][l]);
        const std::size_t n = entries.size();
        for (std::uint64_t mask = 1; mask + 1 < (1ULL << n); ++mask) {
            ModuleElement s = group.zero();
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) s = group.add(s, vals[i]);
            if (s.is_zero()) return false;
        }
        return true;
    }

    void accept() {
        TWord w;
        w.entries = current;
        if (is_minimal(w.entries)) found.push_back(std::move(w));
    }

    void run(std::int64_t p, const ModuleElement& remaining, std::int64_t used) {
        if (remaining.is_zero()) {
            // any completion would append a subword evaluating to zero
            accept();
            return;
        }
        if (p > window.hi) return;
        if (!reachable(p, remaining, used)) return;

        if (lamp_forced) {
            // the layer at p is forced by the remaining coefficient there
            const auto& lamps = remaining.lamp().lamps;
            std::int64_t want = 0;
            for (const auto& [pos, c] : lamps)
                if (pos == p) {
                    want = c;
                    break;
                }
            if (want == 0) {
                run(p + 1, remaining, used);
                return;
            }
            auto it = lamp_coeff_to_letter.find(want);
            if (it == lamp_coeff_to_letter.end() || used >= cap) return;
            current.emplace_back(p, it->second);
            ModuleElement next = group.add(
                remaining,
                group.negated(at_power[static_cast<std::size_t>(p - window.lo)][it->second]));
            run(p + 1, next, used + 1);
            current.pop_back();
            return;
        }

        run(p + 1, remaining, used); // no letter at this power
        if (used < cap) {
            const auto& row = at_power[static_cast<std::size_t>(p - window.lo)];
            for (auto l : nonzero_letters) {
                current.emplace_back(p, l);
                run(p + 1, group.add(remaining, group.negated(row[l])), used + 1);
                current.pop_back();
            }
        }
    }
};

} // namespace

std::vector<TWord> minimal_twords(const Group& group, const Alphabet& alphabet,
                                  const ModuleElement& target, Window window,
                                  std::int64_t length_cap) {
    group.check_same(target);
    if (window.lo > window.hi) throw InvalidInputError("window is empty");
    if (length_cap < 0) throw InvalidInputError("length cap must be >= 0");
    Search s(group, alphabet, window, length_cap);
    s.run(window.lo, target, 0);
    std::sort(s.found.begin(), s.found.end());
    return s.found;
}

std::vector<TWord> shortest_twords(const Group& group, const Alphabet& alphabet,
                                   const ModuleElement& target, Window window,
                                   std::int64_t length_cap) {
    std::vector<TWord> all = minimal_twords(group, alphabet, target, window, length_cap);
    if (all.empty()) return all;
    std::int64_t best = all.front().length(); // sorted by length first
    std::vector<TWord> out;
    for (auto& w : all)
        if (w.length() == best) out.push_back(std::move(w));
        else break;
    return out;
}

ElementPowerRange element_power_range(const Group& group, const Alphabet& alphabet,
                                      const ModuleElement& k, Window window,
                                      std::int64_t length_cap) {
    ElementPowerRange r;
    if (k.is_zero()) {
        r.is_zero = true;
        return r;
    }
    std::vector<TWord> words = shortest_twords(group, alphabet, k, window, length_cap);
    if (words.empty()) {
        std::ostringstream os;
        os << "no t-word for element within window [" << window.lo << ", " << window.hi
           << "] and cap " << length_cap;
        throw BoundedSearchExhausted(os.str());
    }
    r.min_length = words.front().length();
    r.word_count = static_cast<std::int64_t>(words.size());
    std::int64_t max_hi = INT64_MIN, min_hi = INT64_MAX;
    std::int64_t max_lo = INT64_MIN, min_lo = INT64_MAX;
    for (const auto& w : words) {
        std::int64_t hi = *max_power(w), lo = *min_power(w);
        max_hi = std::max(max_hi, hi);
        min_hi = std::min(min_hi, hi);
        max_lo = std::max(max_lo, lo);
        min_lo = std::min(min_lo, lo);
    }
    r.max_power = min_hi; // least max_power over minimal-length words
    r.min_power = max_lo; // greatest min_power over minimal-length words
    r.max_power_spread = max_hi - min_hi;
    r.min_power_spread = max_lo - min_lo;
    return r;
}

// ---------------------------------------------------------------------------
// constants estimation
// ---------------------------------------------------------------------------

std::vector<TWord> enumerate_twords(const Group& group, const Alphabet& alphabet, Window window,
                                    std::int64_t length_cap, std::int64_t budget) {
    (void)group;
    std::vector<TWord> out;
    const std::int64_t cap = length_cap;
    std::vector<std::uint32_t> nonzero;
    for (std::uint32_t i = 0; i < alphabet.size(); ++i)
        if (i != alphabet.zero_index) nonzero.push_back(i);

    std::vector<std::pair<std::int64_t, std::uint32_t>> current;
    std::int64_t emitted = 0;

    struct Rec {
        Window window;
        std::int64_t cap, budget;
        const std::vector<std::uint32_t>& nonzero;
        std::vector<std::pair<std::int64_t, std::uint32_t>>& current;
        std::vector<TWord>& out;
        std::int64_t& emitted;

        void operator()(std::int64_t p, std::int64_t used) {
            if (emitted >= budget) return;
            if (p > window.hi) {
                TWord w;
                w.entries = current;
                out.push_back(std::move(w));
                ++emitted;
                return;
            }
            (*this)(p + 1, used);
            if (used < cap)
                for (auto l : nonzero) {
                    current.emplace_back(p, l);
                    (*this)(p + 1, used + 1);
                    current.pop_back();
                    if (emitted >= budget) return;
                }
        }
    } rec{window, cap, budget, nonzero, current, out, emitted};
    rec(window.lo, 0);
    return out;
}

namespace {

struct RepStats {
    bool exhausted = false;
    bool zero = false;
    std::int64_t min_length = 0;
    std::int64_t max_hi = 0, min_hi = 0, max_lo = 0, min_lo = 0; // at min length
    // worst-case extremes over minimal words within n of minimal length
    std::vector<std::int64_t> max_hi_at_n, min_lo_at_n;
};

} // namespace

ConstantsEstimate estimate_constants(const Group& group, const Alphabet& alphabet,
                                     const EstimateParams& params) {
    if (params.cap <= 0 || params.pairs_budget <= 0)
        throw InvalidInputError("estimate budgets must be positive");
    const std::int64_t rep_cap = params.rep_cap > 0 ? params.rep_cap : 2 * params.cap;
    std::int64_t max_n = 0;
    for (const auto& [m, n] : params.strong_grid) max_n = std::max(max_n, n);

    // Base sample: every t-word in the window up to the cap.
    std::vector<TWord> base =
        enumerate_twords(group, alphabet, params.window, params.cap, 500000);

    std::unordered_map<std::string, RepStats> rep_cache;
    auto rep_stats = [&](const ModuleElement& k) -> const RepStats& {
        std::string key = group.key(k);
        auto it = rep_cache.find(key);
        if (it != rep_cache.end()) return it->second;
        RepStats s;
        if (k.is_zero()) {
            s.zero = true;
            s.max_hi_at_n.assign(max_n + 1, 0);
            s.min_lo_at_n.assign(max_n + 1, 0);
        } else {
            std::vector<TWord> words =
                minimal_twords(group, alphabet, k, params.window, rep_cap);
            if (words.empty()) {
                s.exhausted = true;
            } else {
                s.min_length = words.front().length();
                s.max_hi = INT64_MIN;
                s.min_hi = INT64_MAX;
                s.max_lo = INT64_MIN;
                s.min_lo = INT64_MAX;
                s.max_hi_at_n.assign(max_n + 1, INT64_MIN);
                s.min_lo_at_n.assign(max_n + 1, INT64_MAX);
                for (const auto& w : words) {
                    std::int64_t hi = *max_power(w), lo = *min_power(w);
                    if (w.length() == s.min_length) {
                        s.max_hi = std::max(s.max_hi, hi);
                        s.min_hi = std::min(s.min_hi, hi);
                        s.max_lo = std::max(s.max_lo, lo);
                        s.min_lo = std::min(s.min_lo, lo);
                    }
                    for (std::int64_t n = 0; n <= max_n; ++n)
                        if (w.length() <= s.min_length + n) {
                            s.max_hi_at_n[n] = std::max(s.max_hi_at_n[n], hi);
                            s.min_lo_at_n[n] = std::min(s.min_lo_at_n[n], lo);
                        }
                }
            }
        }
        return rep_cache.emplace(std::move(key), std::move(s)).first->second;
    };

    // Deduplicate base elements; keep one value per element in a stable order.
    std::vector<ModuleElement> elements;
    {
        std::unordered_map<std::string, std::size_t> seen;
        for (const auto& w : base) {
            ModuleElement k = evaluate(group, alphabet, w);
            std::string key = group.key(k);
            if (seen.emplace(std::move(key), elements.size()).second)
                elements.push_back(std::move(k));
        }
    }

    // t-efficiency: spread of extreme powers across minimal-length words.
    std::int64_t spread = 0;
    for (const auto& k : elements) {
        if (k.is_zero()) continue;
        const RepStats& s = rep_stats(k);
        if (s.exhausted) continue;
        spread = std::max({spread, s.max_hi - s.min_hi, s.max_lo - s.min_lo});
    }
    // least strict bound C with all spreads < C
    const std::int64_t c_eff = spread + 1;

    // t-logarithmicity over sampled pairs.
    std::int64_t c_log = 0;
    std::int64_t pair_total = 0, pair_used = 0, pair_skipped = 0;
    {
        const std::int64_t count = static_cast<std::int64_t>(elements.size());
        const std::int64_t all_pairs = count * (count + 1) / 2;
        const std::int64_t stride = std::max<std::int64_t>(1, all_pairs / params.pairs_budget);
        std::int64_t index = 0;
        for (std::int64_t i = 0; i < count; ++i) {
            for (std::int64_t j = i; j < count; ++j, ++index) {
                if (index % stride != 0) continue;
                ++pair_total;
                const ModuleElement &k1 = elements[i], &k2 = elements[j];
                if (k1.is_zero() || k2.is_zero()) continue;
                ModuleElement sum = group.add(k1, k2);
                if (sum.is_zero()) continue;
                const RepStats &s1 = rep_stats(k1), &s2 = rep_stats(k2);
                const RepStats& ss = rep_stats(sum);
                if (s1.exhausted || s2.exhausted || ss.exhausted) {
                    ++pair_skipped;
                    continue;
                }
                ++pair_used;
                // element-level powers: least max_hi / greatest max_lo
                std::int64_t d1 = ss.min_hi - std::max(s1.min_hi, s2.min_hi);
                std::int64_t d2 = std::min(s1.max_lo, s2.max_lo) - ss.max_lo;
                c_log = std::max({c_log, d1, d2});
            }
        }
    }

    // Strong t-logarithmicity sample: base words, doubled words, and pairwise
    // formal sums. Each sample pins defect(n) and layer norms; the (B, C)
    // envelope is scanned over a fixed grid of B.
    static const std::vector<double> b_grid = {0,   0.5, 1,   1.5, 2,   2.5, 3,   3.5, 4,
                                               4.5, 5,   5.5, 6,   6.5, 7,   7.5, 8};
    struct Accum {
        std::vector<double> max_residual; // per B
    };
    std::vector<Accum> acc(params.strong_grid.size());
    for (auto& a : acc) a.max_residual.assign(b_grid.size(), -1e300);
    std::int64_t strong_samples = 0, strong_skipped = 0;

    std::vector<GeneralizedTWord> base_g;
    base_g.reserve(base.size());
    for (const auto& w : base) base_g.push_back(GeneralizedTWord::from_tword(w));
    std::vector<ModuleElement> base_vals;
    base_vals.reserve(base.size());
    for (const auto& w : base) base_vals.push_back(evaluate(group, alphabet, w));

    auto feed = [&](const GeneralizedTWord& w, const ModuleElement& value) {
        if (w.empty()) return;
        const RepStats& s = rep_stats(value);
        if (s.exhausted) {
            ++strong_skipped;
            return;
        }
        ++strong_samples;
        std::optional<std::int64_t> w_hi = max_power(w), w_lo = min_power(w);
        for (std::size_t gi = 0; gi < params.strong_grid.size(); ++gi) {
            auto [m, n] = params.strong_grid[gi];
            std::int64_t defect;
            if (s.zero) continue; // represented by the empty word, no defect
            defect = std::max(s.max_hi_at_n[n] - *w_hi, *w_lo - s.min_lo_at_n[n]);
            double lg = std::log(static_cast<double>(truncated_norm(w, m)) + 1.0);
            for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
                double residual = static_cast<double>(defect) - b_grid[bi] * lg;
                acc[gi].max_residual[bi] = std::max(acc[gi].max_residual[bi], residual);
            }
        }
    };

    for (std::size_t i = 0; i < base_g.size(); ++i) feed(base_g[i], base_vals[i]);
    for (std::size_t i = 0; i < base_g.size(); ++i)
        feed(scaled_word(base_g[i], 2), group.scaled(base_vals[i], 2));
    {
        const std::int64_t count = static_cast<std::int64_t>(base_g.size());
        const std::int64_t all_pairs = count * (count + 1) / 2;
        const std::int64_t stride = std::max<std::int64_t>(1, all_pairs / params.pairs_budget);
        std::int64_t index = 0;
        for (std::int64_t i = 0; i < count; ++i)
            for (std::int64_t j = i; j < count; ++j, ++index) {
                if (index % stride != 0) continue;
                feed(formal_sum(base_g[i], base_g[j]),
                     group.add(base_vals[i], base_vals[j]));
            }
    }

    ConstantsEstimate est;
    est.c_efficiency = c_eff;
    est.c_logarithmic = c_log;
    for (std::size_t gi = 0; gi < params.strong_grid.size(); ++gi) {
        StrongLogEntry e;
        e.m = params.strong_grid[gi].first;
        e.n = params.strong_grid[gi].second;
        // least integer C with defect < B log(|w|_m + 1) + C on the sample,
        // then the smallest B already achieving the best such C
        std::vector<double> c_at(b_grid.size());
        for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
            double r = acc[gi].max_residual[bi];
            c_at[bi] = r <= -1e299 ? 0.0 : std::floor(r) + 1.0;
        }
        double best = c_at.back();
        std::size_t pick = b_grid.size() - 1;
        for (std::size_t bi = 0; bi < b_grid.size(); ++bi)
            if (c_at[bi] == best) {
                pick = bi;
                break;
            }
        e.b = b_grid[pick];
        e.c = c_at[pick];
        est.strong.push_back(e);
    }

    std::ostringstream desc;
    desc << "window [" << params.window.lo << ", " << params.window.hi << "], cap " << params.cap
         << ", rep cap " << rep_cap << "; " << base.size() << " base t-words, "
         << elements.size() << " elements; " << pair_used << "/" << pair_total
         << " sum pairs measured (" << pair_skipped << " skipped: no in-window representative); "
         << strong_samples << " generalized-word samples (" << strong_skipped << " skipped)";
    est.sample_description = desc.str();
    return est;
}

// ---------------------------------------------------------------------------
// token words and projection
// ---------------------------------------------------------------------------

ProjectedWord project_tokens(const std::vector<Token>& tokens) {
    ProjectedWord out;
    std::int64_t suffix = 0;
    std::map<std::pair<std::int64_t, std::uint32_t>, std::int64_t> coeffs;
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
        if (it->is_t) {
            suffix += it->t_delta;
        } else {
            coeffs[{-suffix, it->letter}] += it->sign;
        }
    }
    out.shift = suffix;
    for (const auto& [key, c] : coeffs)
        if (c != 0) out.word.terms.push_back({key.first, key.second, c});
    return out;
}

GroupElement evaluate_tokens(const Group& group, const Alphabet& alphabet,
                             const std::vector<Token>& tokens) {
    GroupElement acc = group.identity();
    for (const auto& t : tokens) {
        GroupElement step;
        if (t.is_t) {
            step = GroupElement{t.t_delta, group.zero()};
        } else {
            if (t.letter >= alphabet.size()) throw InvalidInputError("letter index out of range");
            ModuleElement k = alphabet.letters[t.letter];
            if (t.sign < 0) k = group.negated(k);
            step = GroupElement{0, std::move(k)};
        }
        acc = group.multiply(acc, step);
    }
    return acc;
}

std::vector<Token> inverted_tokens(std::vector<Token> tokens) {
    std::reverse(tokens.begin(), tokens.end());
    for (auto& t : tokens) {
        if (t.is_t)
            t.t_delta = -t.t_delta;
        else
            t.sign = -t.sign;
    }
    return tokens;
}

std::string to_json(const GeneralizedTWord& w) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < w.terms.size(); ++i) {
        if (i) os << ",";
        os << "[" << w.terms[i].power << "," << w.terms[i].letter << "," << w.terms[i].coeff
           << "]";
    }
    os << "]";
    return os.str();
}

std::string to_json(const TWord& w) { return to_json(GeneralizedTWord::from_tword(w)); }

} // namespace twist
