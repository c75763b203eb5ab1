#include "twist/gensets.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace twist {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::vector<Token> letter_token(std::uint32_t idx) { return {Token{false, 0, idx, 1}}; }

Token t_token(std::int64_t delta) { return Token{true, delta, 0, 1}; }

void require_usable_alphabet(const Alphabet& alphabet) {
    if (!alphabet.symmetrized)
        throw InvalidInputError("generating-set construction needs a symmetrized alphabet");
    if (alphabet.size() < 2)
        throw InvalidInputError("alphabet has no nonzero letter, the module would be trivial");
}

OrderedJson element_to_json(const Group& group, const ModuleElement& k) {
    switch (group.kind()) {
    case GroupKind::Lamplighter: {
        OrderedJson arr = OrderedJson::array();
        for (const auto& [pos, c] : k.lamp().lamps) arr.push_back({pos, c});
        return arr;
    }
    case GroupKind::BaumslagSolitar: {
        OrderedJson obj;
        obj["num"] = k.bs().num.str();
        obj["exp"] = k.bs().exp;
        return obj;
    }
    case GroupKind::MatrixModule: {
        OrderedJson obj;
        obj["level"] = k.mat().level;
        OrderedJson vec = OrderedJson::array();
        for (const auto& v : k.mat().vec) vec.push_back(v.str());
        obj["vec"] = vec;
        return obj;
    }
    }
    throw Error("unreachable");
}

ModuleElement element_from_json(const Group& group, const OrderedJson& j) {
    switch (group.kind()) {
    case GroupKind::Lamplighter: {
        std::vector<std::pair<std::int64_t, std::int64_t>> lamps;
        for (const auto& pair : j) lamps.emplace_back(pair.at(0), pair.at(1));
        return group.lamp_element(std::move(lamps));
    }
    case GroupKind::BaumslagSolitar:
        return group.bs_element(BigInt(j.at("num").get<std::string>()), j.at("exp"));
    case GroupKind::MatrixModule: {
        std::vector<BigInt> vec;
        for (const auto& v : j.at("vec")) vec.emplace_back(v.get<std::string>());
        return group.lattice_element(std::move(vec), j.at("level"));
    }
    }
    throw Error("unreachable");
}

} // namespace

GeneratingSet make_generating_set(const Group& group, Alphabet alphabet,
                                  std::vector<GenEntry> entries) {
    if (entries.empty()) throw InvalidInputError("generating set is empty");
    GeneratingSet out;
    out.alphabet = std::move(alphabet);
    out.entries = std::move(entries);

    std::unordered_set<std::string> labels;
    std::unordered_set<std::string> keys;
    out.has_spellings = true;
    for (const auto& e : out.entries) {
        if (e.label.empty()) throw InvalidInputError("generator label is empty");
        if (!labels.insert(e.label).second)
            throw InvalidInputError("duplicate generator label: " + e.label);
        if (e.g == group.identity())
            throw InvalidInputError("generating set must not contain the identity");
        if (!keys.insert(group.key(e.g)).second)
            throw InvalidInputError("duplicate generator element under label " + e.label);
        if (e.spelling.empty()) {
            out.has_spellings = false;
        } else if (evaluate_tokens(group, out.alphabet, e.spelling) != e.g) {
            throw InvalidInputError("spelling of " + e.label + " does not evaluate to it");
        }
    }

    out.closed_under_inverse = true;
    for (const auto& e : out.entries)
        if (!keys.count(group.key(group.inverse(e.g)))) {
            out.closed_under_inverse = false;
            break;
        }
    return out;
}

namespace {

/// Appends missing inverses, labeling them "<base>^-1".
void close_under_inversion(const Group& group, std::vector<GenEntry>& entries) {
    std::unordered_set<std::string> keys;
    for (const auto& e : entries) keys.insert(group.key(e.g));
    const std::size_t base_count = entries.size();
    for (std::size_t i = 0; i < base_count; ++i) {
        GroupElement inv = group.inverse(entries[i].g);
        std::string key = group.key(inv);
        if (keys.count(key)) continue;
        keys.insert(std::move(key));
        entries.push_back(GenEntry{entries[i].label + "^-1", inv,
                                   inverted_tokens(entries[i].spelling)});
    }
}

} // namespace

GeneratingSet build_unbound_gens(const Group& group, const Alphabet& alphabet) {
    require_usable_alphabet(alphabet);
    std::vector<GenEntry> entries;
    std::unordered_set<std::string> keys;
    auto push = [&](std::string label, std::vector<Token> tokens) {
        GroupElement g = evaluate_tokens(group, alphabet, tokens);
        if (!keys.insert(group.key(g)).second) return;
        entries.push_back(GenEntry{std::move(label), std::move(g), std::move(tokens)});
    };
    for (std::uint32_t i = 0; i < alphabet.size(); ++i) {
        std::vector<Token> tokens{t_token(1)};
        if (i != alphabet.zero_index) tokens.push_back(Token{false, 0, i, 1});
        push(i == alphabet.zero_index ? "t" : "t.a" + std::to_string(i), std::move(tokens));
    }
    for (std::uint32_t i = 0; i < alphabet.size(); ++i)
        if (i != alphabet.zero_index) push("a" + std::to_string(i), letter_token(i));
    close_under_inversion(group, entries);
    return make_generating_set(group, alphabet, std::move(entries));
}

GeneratingSet build_bound_gens(const Group& group, const Alphabet& alphabet) {
    require_usable_alphabet(alphabet);
    std::vector<GenEntry> entries;
    std::unordered_set<std::string> keys;
    auto push = [&](std::string label, std::vector<Token> tokens) {
        GroupElement g = evaluate_tokens(group, alphabet, tokens);
        if (!keys.insert(group.key(g)).second) return;
        entries.push_back(GenEntry{std::move(label), std::move(g), std::move(tokens)});
    };
    for (std::uint32_t i = 0; i < alphabet.size(); ++i)
        for (std::uint32_t j = 0; j < alphabet.size(); ++j) {
            std::vector<Token> tokens{t_token(1)};
            if (i != alphabet.zero_index) tokens.push_back(Token{false, 0, i, 1});
            tokens.push_back(t_token(2));
            if (j != alphabet.zero_index) tokens.push_back(Token{false, 0, j, 1});
            tokens.push_back(t_token(1));
            push("b" + std::to_string(i) + "_" + std::to_string(j), std::move(tokens));
        }
    for (std::uint32_t i = 0; i < alphabet.size(); ++i)
        if (i != alphabet.zero_index) push("a" + std::to_string(i), letter_token(i));
    push("t", {t_token(1)});
    close_under_inversion(group, entries);
    return make_generating_set(group, alphabet, std::move(entries));
}

GeneratingSet build_standard_gens(const Group& group, const Alphabet& alphabet) {
    require_usable_alphabet(alphabet);
    std::vector<GenEntry> entries;
    std::unordered_set<std::string> keys;
    auto push = [&](std::string label, std::vector<Token> tokens) {
        GroupElement g = evaluate_tokens(group, alphabet, tokens);
        if (!keys.insert(group.key(g)).second) return;
        entries.push_back(GenEntry{std::move(label), std::move(g), std::move(tokens)});
    };
    push("t", {t_token(1)});
    for (std::uint32_t i = 0; i < alphabet.size(); ++i)
        if (i != alphabet.zero_index) push("a" + std::to_string(i), letter_token(i));
    close_under_inversion(group, entries);
    return make_generating_set(group, alphabet, std::move(entries));
}

std::size_t max_shift_entry(const GeneratingSet& gens) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < gens.entries.size(); ++i)
        if (gens.entries[i].g.shift > gens.entries[best].g.shift) best = i;
    return best;
}

GroupElement evaluate_sword(const Group& group, const GeneratingSet& gens,
                            const std::vector<SLetter>& word) {
    GroupElement acc = group.identity();
    for (const auto& s : word) {
        if (s.index >= gens.size()) throw InvalidInputError("generator index out of range");
        const GroupElement& g = gens.entries[s.index].g;
        acc = group.multiply(acc, s.inverse ? group.inverse(g) : g);
    }
    return acc;
}

ProjectedWord project_sword(const Group& group, const GeneratingSet& gens,
                            const std::vector<SLetter>& word) {
    (void)group;
    if (!gens.has_spellings)
        throw InvalidInputError("generating set has no spellings to project through");
    std::vector<Token> tokens;
    for (const auto& s : word) {
        if (s.index >= gens.size()) throw InvalidInputError("generator index out of range");
        const auto& spelling = gens.entries[s.index].spelling;
        if (s.inverse) {
            std::vector<Token> inv = inverted_tokens(spelling);
            tokens.insert(tokens.end(), inv.begin(), inv.end());
        } else {
            tokens.insert(tokens.end(), spelling.begin(), spelling.end());
        }
    }
    return project_tokens(tokens);
}

std::string to_json(const Group& group, const GeneratingSet& gens) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& e : gens.entries) {
        OrderedJson obj;
        obj["label"] = e.label;
        obj["shift"] = e.g.shift;
        obj["k"] = element_to_json(group, e.g.k);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2);
}

GeneratingSet generating_set_from_json(const Group& group, const std::string& text) {
    OrderedJson arr = OrderedJson::parse(text);
    std::vector<GenEntry> entries;
    for (const auto& obj : arr) {
        GenEntry e;
        e.label = obj.at("label").get<std::string>();
        e.g = GroupElement{obj.at("shift").get<std::int64_t>(),
                           element_from_json(group, obj.at("k"))};
        entries.push_back(std::move(e));
    }
    Alphabet trivial = make_alphabet(group, {group.zero()}, false);
    return make_generating_set(group, std::move(trivial), std::move(entries));
}

// ---------------------------------------------------------------------------
// digit systems
// ---------------------------------------------------------------------------

namespace {

BigInt inf_norm(const std::vector<BigInt>& v) {
    BigInt n = 0;
    for (const auto& x : v) {
        BigInt a = abs(x);
        if (a > n) n = a;
    }
    return n;
}

} // namespace

DigitSystem::DigitSystem(const Group& group, std::int64_t bound) : group_(&group), bound_(bound) {
    if (group.kind() != GroupKind::MatrixModule)
        throw SpecMismatchError("digit systems require a MatrixModule group");
    if (bound < 1) throw InvalidInputError("digit bound must be >= 1");
    const int d = group.spec().dim;

    BigInt cosets = abs(group.matrix_det());
    if (cosets > 1000000) throw InvalidInputError("determinant too large for coset enumeration");
    coset_count_ = static_cast<std::int64_t>(cosets);

    // Box digits, enumerated lexicographically.
    std::vector<ModuleElement> letters;
    std::vector<BigInt> coords(d, -(bound - 1));
    while (true) {
        letters.push_back(group.lattice_element(coords, 0));
        int i = d - 1;
        while (i >= 0 && coords[i] == bound - 1) coords[i--] = -(bound - 1);
        if (i < 0) break;
        coords[i] += 1;
    }
    alphabet_ = make_alphabet(group, std::move(letters), true);

    coset_digits_.resize(static_cast<std::size_t>(coset_count_));
    for (std::uint32_t i = 0; i < alphabet_.size(); ++i)
        coset_digits_[static_cast<std::size_t>(coset_of(alphabet_.letters[i].mat().vec))]
            .push_back(i);
    for (auto& digits : coset_digits_)
        std::sort(digits.begin(), digits.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto &va = alphabet_.letters[a].mat().vec, &vb = alphabet_.letters[b].mat().vec;
            BigInt na = inf_norm(va), nb = inf_norm(vb);
            if (na != nb) return na < nb;
            return va < vb;
        });
}

std::int64_t DigitSystem::coset_of(const std::vector<BigInt>& v) const {
    const SmithForm& snf = group_->smith();
    std::vector<BigInt> r = snf.row_transform.apply(v);
    std::int64_t index = 0, stride = 1;
    for (std::size_t i = 0; i < r.size(); ++i) {
        BigInt d = snf.diag[i];
        BigInt residue = 0;
        if (d != 1) residue = ((r[i] % d) + d) % d;
        index += static_cast<std::int64_t>(residue) * stride;
        stride *= static_cast<std::int64_t>(d);
    }
    return index;
}

bool DigitSystem::covers_all_cosets() const {
    for (const auto& digits : coset_digits_)
        if (digits.empty()) return false;
    return true;
}

ModuleElement DigitSystem::uncovered_coset_witness() const {
    std::int64_t missing = -1;
    for (std::size_t c = 0; c < coset_digits_.size(); ++c)
        if (coset_digits_[c].empty()) {
            missing = static_cast<std::int64_t>(c);
            break;
        }
    if (missing < 0) throw Error("all cosets are covered");
    const SmithForm& snf = group_->smith();
    const int d = group_->spec().dim;
    std::vector<BigInt> r(d);
    std::int64_t rem = missing;
    for (int i = 0; i < d; ++i) {
        std::int64_t di = static_cast<std::int64_t>(snf.diag[i]);
        r[i] = rem % di;
        rem /= di;
    }
    // invert the unimodular row transform exactly
    IntMat adj = snf.row_transform.adjugate();
    BigInt det = snf.row_transform.determinant(); // +1 or -1
    std::vector<BigInt> v = adj.apply(r);
    for (auto& x : v) x *= det;
    return group_->lattice_element(std::move(v), 0);
}

std::optional<TWord> DigitSystem::expand(const ModuleElement& k, std::int64_t budget) const {
    group_->check_same(k);
    std::vector<BigInt> v = k.mat().vec;
    std::int64_t power = -k.mat().level;
    std::vector<std::pair<std::int64_t, std::uint32_t>> entries;

    auto is_zero = [](const std::vector<BigInt>& x) {
        return std::all_of(x.begin(), x.end(), [](const BigInt& e) { return e == 0; });
    };

    std::int64_t steps = 0;
    while (!is_zero(v)) {
        if (++steps > budget) return std::nullopt;
        const auto& candidates = coset_digits_[static_cast<std::size_t>(coset_of(v))];
        if (candidates.empty()) return std::nullopt;

        bool have = false;
        BigInt best_norm = 0;
        std::uint32_t best_digit = 0;
        std::vector<BigInt> best_next;
        for (std::uint32_t cand : candidates) {
            const auto& a = alphabet_.letters[cand].mat().vec;
            std::vector<BigInt> diff(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - a[i];
            std::vector<BigInt> next;
            if (!group_->lattice_divide(diff, next))
                throw Error("digit in matching coset failed exact division");
            BigInt norm = inf_norm(next);
            if (!have || norm < best_norm) {
                have = true;
                best_norm = norm;
                best_digit = cand;
                best_next = std::move(next);
            }
        }
        if (best_digit != alphabet_.zero_index) entries.emplace_back(power, best_digit);
        v = std::move(best_next);
        ++power;
    }
    TWord w;
    w.entries = std::move(entries);
    return w;
}

DigitCheckResult check_digit_bound(const Group& group, const DigitSystem& system,
                                   std::int64_t budget) {
    DigitCheckResult result;
    if (!system.covers_all_cosets()) {
        result.pass = false;
        result.reason = "a coset of the lattice quotient contains no digit";
        result.witness = system.uncovered_coset_witness();
        return result;
    }

    const int d = group.spec().dim;
    const std::int64_t beta = 3 * system.bound();

    auto try_expand = [&](const ModuleElement& k) -> bool {
        ++result.expansions_run;
        std::optional<TWord> w = system.expand(k, budget);
        if (!w) {
            result.pass = false;
            result.reason = "greedy expansion exceeded the step budget";
            result.witness = k;
            return false;
        }
        result.max_steps_seen =
            std::max(result.max_steps_seen, static_cast<std::int64_t>(w->entries.size()));
        if (evaluate(group, system.alphabet(), *w) != k) {
            result.pass = false;
            result.reason = "expansion failed the round-trip identity";
            result.witness = k;
            return false;
        }
        return true;
    };

    // Exhaustive box scan where feasible, strided otherwise.
    double box_size = std::pow(2.0 * static_cast<double>(beta) + 1.0, d);
    std::int64_t stride = 1;
    if (box_size > 200000.0) {
        stride = static_cast<std::int64_t>(box_size / 200000.0) + 1;
        result.reason = "box scan strided";
    }
    std::vector<BigInt> coords(d, -beta);
    std::int64_t cell = 0;
    while (true) {
        if (cell++ % stride == 0) {
            if (!try_expand(group.lattice_element(coords, 0))) return result;
        }
        int i = d - 1;
        while (i >= 0 && coords[i] == beta) coords[i--] = -beta;
        if (i < 0) break;
        coords[i] += 1;
    }

    std::mt19937 rng(20240801u);
    std::uniform_int_distribution<std::int64_t> coord(-beta, beta);
    std::uniform_int_distribution<std::int64_t> level(0, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<BigInt> vec(d);
        for (int i = 0; i < d; ++i) vec[i] = coord(rng);
        if (!try_expand(group.lattice_element(std::move(vec), level(rng)))) return result;
    }

    result.pass = true;
    result.reason = "all expansions terminated and round-tripped";
    return result;
}

DigitAlphabet build_digit_alphabet(const Group& group, std::int64_t max_bound,
                                   std::int64_t budget) {
    if (max_bound < 2) throw InvalidInputError("max_bound must be >= 2");
    std::string last_reason = "no bound tried";
    for (std::int64_t n = 2; n <= max_bound; ++n) {
        DigitSystem system(group, n);
        DigitCheckResult check = check_digit_bound(group, system, budget);
        if (check.pass) return DigitAlphabet{std::move(system), n};
        std::ostringstream os;
        os << "bound " << n << ": " << check.reason;
        if (check.witness) os << " (witness " << group.format(*check.witness) << ")";
        last_reason = os.str();
    }
    throw BoundedSearchExhausted("no digit bound up to " + std::to_string(max_bound) +
                                 " passed the completeness check; last failure: " + last_reason);
}

} // namespace twist
