#include "doctest.h"

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "twist/gensets.hpp"
#include "twist/twords.hpp"

using namespace twist;
using testutil::baumslag_solitar;
using testutil::fib_group;
using testutil::lamplighter;

namespace {

Alphabet lamp_alphabet(const Group& g) {
    std::vector<ModuleElement> letters;
    for (std::int64_t c = 0; c < g.spec().q; ++c) letters.push_back(g.integer_element(c));
    return make_alphabet(g, std::move(letters), true);
}

Alphabet bs_alphabet(const Group& g) {
    std::vector<ModuleElement> letters;
    std::int64_t half = g.spec().m / 2;
    for (std::int64_t v = -half; v <= half; ++v) letters.push_back(g.integer_element(v));
    return make_alphabet(g, std::move(letters), true);
}

// Brute-force reference enumerator, independent of the search in the library:
// walks every assignment window -> letters directly and filters minimality by
// pairwise subword comparison over the full hit set. Any proper subword of a
// hit lies in the same window with smaller length, so the comparison is exact.
bool is_subword(const TWord& small, const TWord& big) {
    if (small.entries.size() >= big.entries.size()) return false;
    std::size_t j = 0;
    for (const auto& e : small.entries) {
        while (j < big.entries.size() && big.entries[j] != e) ++j;
        if (j == big.entries.size()) return false;
        ++j;
    }
    return true;
}

std::vector<TWord> oracle_minimal_twords(const Group& group, const Alphabet& alphabet,
                                         const ModuleElement& target, Window window,
                                         std::int64_t cap) {
    std::vector<std::uint32_t> choices; // 0 = no letter, i+1 = letter i
    std::vector<TWord> hits;
    const std::int64_t width = window.width();
    std::vector<std::uint32_t> state(static_cast<std::size_t>(width), 0);
    while (true) {
        TWord w;
        bool usable = true;
        for (std::int64_t i = 0; i < width && usable; ++i) {
            std::uint32_t c = state[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            std::uint32_t letter = c - 1;
            if (letter == alphabet.zero_index)
                usable = false; // skip zero-letter placements
            else
                w.entries.emplace_back(window.lo + i, letter);
        }
        if (usable && w.length() <= cap && evaluate(group, alphabet, w) == target)
            hits.push_back(w);
        // odometer
        std::int64_t i = width - 1;
        while (i >= 0 && state[static_cast<std::size_t>(i)] == alphabet.size())
            state[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++state[static_cast<std::size_t>(i)];
    }
    std::vector<TWord> minimal;
    for (const TWord& w : hits) {
        bool ok = true;
        for (const TWord& v : hits)
            if (is_subword(v, w)) {
                ok = false;
                break;
            }
        if (ok) minimal.push_back(w);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

} // namespace

TEST_CASE("evaluate on the three module kinds") {
    Group lamp = lamplighter(2);
    Alphabet la = lamp_alphabet(lamp);
    GeneralizedTWord twice;
    twice.terms.push_back({0, 1, 2}); // a + a at power 0
    CHECK(evaluate(lamp, la, twice).is_zero());

    Group bs = baumslag_solitar(3);
    Alphabet ba = bs_alphabet(bs);
    std::uint32_t one = 2; // letters are -1, 0, 1
    REQUIRE(ba.letters[one] == bs.integer_element(1));
    GeneralizedTWord w;
    w.terms.push_back({0, one, 1});
    w.terms.push_back({1, one, 1});
    CHECK(evaluate(bs, ba, w) == bs.integer_element(4));

    Group mat = fib_group();
    Alphabet ma = make_alphabet(
        mat, {mat.zero(), mat.lattice_element({1, 0}), mat.lattice_element({-1, 0})}, true);
    GeneralizedTWord v;
    v.terms.push_back({1, 1, 1});
    CHECK(evaluate(mat, ma, v) == mat.lattice_element({2, 1}));
}

TEST_CASE("support extremes and sentinels") {
    GeneralizedTWord w;
    w.terms.push_back({-1, 1, 1});
    w.terms.push_back({3, 1, 1});
    CHECK(*max_power(w) == 3);
    CHECK(*min_power(w) == -1);

    GeneralizedTWord empty;
    CHECK(!max_power(empty).has_value());
    CHECK(!min_power(empty).has_value());

    GeneralizedTWord single;
    single.terms.push_back({0, 1, 1});
    CHECK(*max_power(single) == 0);
    CHECK(*min_power(single) == 0);
}

TEST_CASE("truncated norm") {
    GeneralizedTWord w;
    // layer lengths 3 at power 0 and 2 at power 1
    w.terms.push_back({0, 1, 2});
    w.terms.push_back({0, 2, 1});
    w.terms.push_back({1, 1, 2});
    CHECK(truncated_norm(w, 0) == 5);
    CHECK(truncated_norm(w, 1) == 3);
    CHECK(truncated_norm(w, 2) == 1);
    CHECK(truncated_norm(w, 3) == 0);

    GeneralizedTWord empty;
    CHECK(truncated_norm(empty, 0) == 0);
    CHECK(truncated_norm(empty, 5) == 0);

    // every t-word has layers of length at most 1
    Group lamp = lamplighter(2);
    Alphabet la = lamp_alphabet(lamp);
    for (const TWord& t : enumerate_twords(lamp, la, Window{-2, 2}, 3, 1000)) {
        GeneralizedTWord g = GeneralizedTWord::from_tword(t);
        CHECK(truncated_norm(g, 1) == 0);
        std::int64_t prev = truncated_norm(g, 0);
        for (std::int64_t n = 1; n <= 3; ++n) {
            std::int64_t cur = truncated_norm(g, n);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("minimal t-words: stated instances") {
    Group lamp = lamplighter(2);
    Alphabet la = lamp_alphabet(lamp);
    ModuleElement k = lamp.lamp_element({{0, 1}, {3, 1}});
    std::vector<TWord> words = minimal_twords(lamp, la, k, Window{-1, 4}, 4);
    REQUIRE(words.size() == 1);
    CHECK(words[0].entries ==
          std::vector<std::pair<std::int64_t, std::uint32_t>>{{0, 1}, {3, 1}});

    Group bs = baumslag_solitar(3);
    Alphabet ba = bs_alphabet(bs);
    std::vector<TWord> four = minimal_twords(bs, ba, bs.integer_element(4), Window{-2, 4}, 4);
    REQUIRE(four.size() == 1);
    CHECK(four[0].entries ==
          std::vector<std::pair<std::int64_t, std::uint32_t>>{{0, 2}, {1, 2}});

    std::vector<TWord> zero = minimal_twords(bs, ba, bs.zero(), Window{-2, 4}, 4);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].empty());
}

TEST_CASE("minimal t-words agree with the brute-force oracle") {
    struct Case {
        Group group;
        Alphabet alphabet;
    };
    std::vector<Case> cases;
    {
        Group lamp = lamplighter(2);
        Alphabet la = lamp_alphabet(lamp);
        cases.push_back({std::move(lamp), std::move(la)});
    }
    {
        // a two-site letter defeats the forced-layer fast path and makes
        // cancellations between different powers possible
        Group lamp = lamplighter(2);
        ModuleElement wide = lamp.lamp_element({{0, 1}, {1, 1}});
        Alphabet la = make_alphabet(
            lamp, {lamp.zero(), lamp.integer_element(1), wide}, true);
        cases.push_back({std::move(lamp), std::move(la)});
    }
    {
        Group bs = baumslag_solitar(3);
        Alphabet ba = bs_alphabet(bs);
        cases.push_back({std::move(bs), std::move(ba)});
    }
    {
        // fractional letters exercise the denominator-aware pruning
        Group bs = baumslag_solitar(3);
        Alphabet ba = make_alphabet(bs,
                                    {bs.zero(), bs.integer_element(1), bs.integer_element(-1),
                                     bs.bs_element(1, 1), bs.bs_element(-1, 1)},
                                    true);
        cases.push_back({std::move(bs), std::move(ba)});
    }
    {
        Group mat = testutil::matrix_group(1, {3});
        Alphabet ma = make_alphabet(
            mat, {mat.zero(), mat.integer_element(1), mat.integer_element(-1)}, true);
        cases.push_back({std::move(mat), std::move(ma)});
    }
    for (const Case& c : cases) {
        std::mt19937 rng(2024);
        std::vector<Window> windows = {{-2, 2}, {0, 4}, {-3, 1}};
        for (const Window& window : windows) {
            // targets: everything reachable by short words, plus a few misses
            std::vector<ModuleElement> targets;
            for (const TWord& w : enumerate_twords(c.group, c.alphabet, window, 2, 100000))
                targets.push_back(evaluate(c.group, c.alphabet, w));
            for (int i = 0; i < 5; ++i)
                targets.push_back(testutil::random_module_element(c.group, rng));
            for (const ModuleElement& k : targets) {
                std::vector<TWord> got = minimal_twords(c.group, c.alphabet, k, window, 3);
                std::vector<TWord> want =
                    oracle_minimal_twords(c.group, c.alphabet, k, window, 3);
                REQUIRE(got == want);
            }
        }
    }
}

TEST_CASE("element power range") {
    Group lamp = lamplighter(2);
    Alphabet la = lamp_alphabet(lamp);
    ElementPowerRange r =
        element_power_range(lamp, la, lamp.lamp_element({{2, 1}}), Window{-4, 4}, 4);
    CHECK(r.max_power == 2);
    CHECK(r.min_power == 2);
    CHECK(r.min_length == 1);

    Group bs = baumslag_solitar(3);
    Alphabet ba = bs_alphabet(bs);
    ElementPowerRange r39 =
        element_power_range(bs, ba, bs.integer_element(39), Window{-2, 6}, 7);
    CHECK(r39.max_power == 3);
    CHECK(r39.min_power == 1);
    CHECK(r39.min_length == 3);

    CHECK(element_power_range(bs, ba, bs.zero(), Window{-2, 2}, 2).is_zero);

    // unreachable within the window: 1/9 needs power -2
    CHECK_THROWS_AS(
        (void)element_power_range(bs, ba, bs.bs_element(1, 2), Window{-1, 3}, 4),
        BoundedSearchExhausted);
}

TEST_CASE("evaluation is additive on formal sums") {
    Group bs = baumslag_solitar(3);
    Alphabet ba = bs_alphabet(bs);
    std::mt19937 rng(5150);
    std::uniform_int_distribution<std::int64_t> power(-3, 3);
    std::uniform_int_distribution<std::int64_t> coeff(-3, 3);
    std::uniform_int_distribution<std::uint32_t> letter(0, 2);
    auto random_word = [&] {
        GeneralizedTWord w;
        for (int i = 0; i < 4; ++i) {
            std::int64_t c = coeff(rng);
            if (c != 0) w.terms.push_back({power(rng), letter(rng), c});
        }
        std::sort(w.terms.begin(), w.terms.end(), [](const auto& a, const auto& b) {
            return std::pair(a.power, a.letter) < std::pair(b.power, b.letter);
        });
        GeneralizedTWord merged;
        for (const auto& t : w.terms) {
            GeneralizedTWord single;
            single.terms.push_back(t);
            merged = formal_sum(merged, single);
        }
        return merged;
    };
    for (int trial = 0; trial < 3000; ++trial) {
        GeneralizedTWord u = random_word(), v = random_word();
        REQUIRE(evaluate(bs, ba, formal_sum(u, v)) ==
                bs.add(evaluate(bs, ba, u), evaluate(bs, ba, v)));
    }
}

TEST_CASE("subword support monotonicity") {
    Group lamp = lamplighter(3);
    Alphabet la = lamp_alphabet(lamp);
    std::mt19937 rng(31337);
    for (const TWord& w : enumerate_twords(lamp, la, Window{-3, 3}, 4, 3000)) {
        if (w.empty()) continue;
        TWord sub;
        for (const auto& e : w.entries)
            if (rng() % 2) sub.entries.push_back(e);
        if (sub.empty() || sub.entries.size() == w.entries.size()) continue;
        CHECK(*max_power(sub) <= *max_power(w));
        CHECK(*min_power(sub) >= *min_power(w));
    }
}

TEST_CASE("lamplighter elements have unique t-words in any window") {
    Group lamp = lamplighter(2);
    Alphabet la = lamp_alphabet(lamp);
    std::mt19937 rng(808);
    for (int trial = 0; trial < 300; ++trial) {
        ModuleElement k = testutil::random_module_element(lamp, rng);
        std::vector<TWord> words = minimal_twords(lamp, la, k, Window{-7, 7}, 10);
        REQUIRE(words.size() == 1);
        CHECK(evaluate(lamp, la, words[0]) == k);
    }
}

TEST_CASE("projection: stated instances") {
    // [t, a, t^-1] -> shift 0, word t^1 a
    std::vector<Token> w1 = {Token{true, 1, 0, 1}, Token{false, 0, 1, 1}, Token{true, -1, 0, 1}};
    ProjectedWord p1 = project_tokens(w1);
    CHECK(p1.shift == 0);
    REQUIRE(p1.word.terms.size() == 1);
    CHECK(p1.word.terms[0].power == 1);
    CHECK(p1.word.terms[0].coeff == 1);

    // [a] -> shift 0, word t^0 a
    ProjectedWord p2 = project_tokens({Token{false, 0, 1, 1}});
    CHECK(p2.shift == 0);
    REQUIRE(p2.word.terms.size() == 1);
    CHECK(p2.word.terms[0].power == 0);

    // t^2 a t^-4 a t^2 -> shift 0, word t^2 a + t^-2 a
    std::vector<Token> w3 = {Token{true, 2, 0, 1}, Token{false, 0, 1, 1}, Token{true, -4, 0, 1},
                             Token{false, 0, 1, 1}, Token{true, 2, 0, 1}};
    ProjectedWord p3 = project_tokens(w3);
    CHECK(p3.shift == 0);
    REQUIRE(p3.word.terms.size() == 2);
    CHECK(p3.word.terms[0].power == -2);
    CHECK(p3.word.terms[1].power == 2);
}

TEST_CASE("projection commutes with group evaluation") {
    struct Case {
        Group group;
        Alphabet alphabet;
    };
    std::vector<Case> cases;
    {
        Group lamp = lamplighter(2);
        cases.push_back({lamp, lamp_alphabet(lamp)});
    }
    {
        Group bs = baumslag_solitar(3);
        cases.push_back({bs, bs_alphabet(bs)});
    }
    for (const Case& c : cases) {
      for (bool bound : {false, true}) {
        GeneratingSet gens = bound ? build_bound_gens(c.group, c.alphabet)
                                   : build_unbound_gens(c.group, c.alphabet);
        std::mt19937 rng(606);
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(
                                                                 gens.size() - 1));
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<SLetter> word;
            int len = 1 + static_cast<int>(rng() % 10);
            for (int i = 0; i < len; ++i) word.push_back(SLetter{pick(rng), rng() % 2 == 0});
            GroupElement sigma = evaluate_sword(c.group, gens, word);
            ProjectedWord phi = project_sword(c.group, gens, word);
            REQUIRE(phi.shift == sigma.shift);
            REQUIRE(evaluate(c.group, gens.alphabet, phi.word) == sigma.k);
        }
      }
    }
}

TEST_CASE("constants: lamplighter matches the known values") {
    Group lamp = lamplighter(2);
    Alphabet la = lamp_alphabet(lamp);
    EstimateParams params;
    params.window = Window{-5, 5};
    params.cap = 8;
    params.pairs_budget = 200000;
    ConstantsEstimate est = estimate_constants(lamp, la, params);
    CHECK(est.c_efficiency <= 1);
    CHECK(est.c_logarithmic == 0);
    for (const StrongLogEntry& e : est.strong) {
        CHECK(e.b == 0.0);
        CHECK(e.c <= 1.0);
    }
}

TEST_CASE("constants: balanced ternary defect stays small") {
    Group bs = baumslag_solitar(3);
    Alphabet ba = bs_alphabet(bs);
    EstimateParams params;
    params.window = Window{-4, 6};
    params.cap = 3;
    params.rep_cap = 8;
    params.pairs_budget = 300000;
    ConstantsEstimate est = estimate_constants(bs, ba, params);
    CHECK(est.c_logarithmic >= 0);
    CHECK(est.c_logarithmic <= 2);
}

TEST_CASE("word json") {
    GeneralizedTWord w;
    w.terms.push_back({-1, 2, -3});
    w.terms.push_back({4, 0, 1});
    CHECK(to_json(w) == "[[-1,2,-3],[4,0,1]]");
    CHECK(to_json(GeneralizedTWord{}) == "[]");
}
