#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <vector>

#include "doctest.h"
#include "serieslab/processes.hpp"
#include "serieslab/rng.hpp"
#include "serieslab/stats.hpp"

using namespace serieslab;

namespace {

std::vector<double> symbol_freq(const SymbolSequence& seq) {
    std::vector<double> freq(seq.alphabet.size, 0.0);
    for (uint8_t s : seq.data) freq[s] += 1.0;
    for (double& f : freq) f /= static_cast<double>(seq.length());
    return freq;
}

}  // namespace

TEST_CASE("i.i.d. generator hits its probabilities within sampling error") {
    const std::vector<double> probs{0.8, 0.2};
    SymbolSequence seq = gen_bernoulli(probs, 100000, 7);
    seq.validate();
    CHECK(seq.alphabet.size == 2);
    CHECK(seq.provenance.generator == "bernoulli");
    auto freq = symbol_freq(seq);
    for (size_t s = 0; s < probs.size(); ++s) {
        const double sigma = std::sqrt(probs[s] * (1 - probs[s]) / 100000.0);
        CHECK(std::abs(freq[s] - probs[s]) < 5 * sigma);
    }
}

TEST_CASE("i.i.d. generator is deterministic per seed and varies across seeds") {
    SymbolSequence a = gen_bernoulli({0.5, 0.5}, 5000, 11);
    SymbolSequence b = gen_bernoulli({0.5, 0.5}, 5000, 11);
    SymbolSequence c = gen_bernoulli({0.5, 0.5}, 5000, 12);
    CHECK(a.data == b.data);
    CHECK(a.data != c.data);
}

TEST_CASE("i.i.d. generator rejects bad probability vectors") {
    CHECK_THROWS(gen_bernoulli({}, 10, 1));
    CHECK_THROWS(gen_bernoulli({1.0}, 10, 1));
    CHECK_THROWS(gen_bernoulli({0.6, 0.6}, 10, 1));
    CHECK_THROWS(gen_bernoulli({1.2, -0.2}, 10, 1));
}

TEST_CASE("stationary vector: direct solve on a two-state chain") {
    auto pi = markov_stationary({{0.9, 0.1}, {0.5, 0.5}});
    REQUIRE(pi.size() == 2);
    CHECK(pi[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("stationary vector: doubly stochastic chains are uniform") {
    auto pi = markov_stationary({{0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}});
    for (double v : pi) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary vector: identity chain falls back to the uniform fixed point") {
    auto pi = markov_stationary({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("markov generator matches its chain empirically") {
    MarkovParams chain{{{0.9, 0.1}, {0.5, 0.5}}, {}};
    SymbolSequence seq = gen_markov(chain, 200000, 3);
    seq.validate();
    auto freq = symbol_freq(seq);
    CHECK(std::abs(freq[0] - 5.0 / 6.0) < 0.01);

    // Empirical one-step transition frequencies.
    uint64_t n0 = 0, n01 = 0;
    for (size_t i = 0; i + 1 < seq.length(); ++i) {
        if (seq.data[i] == 0) {
            ++n0;
            if (seq.data[i + 1] == 1) ++n01;
        }
    }
    CHECK(std::abs(static_cast<double>(n01) / static_cast<double>(n0) - 0.1) < 0.01);
}

TEST_CASE("markov generator honors an explicit initial distribution") {
    MarkovParams chain{{{1.0, 0.0}, {0.0, 1.0}}, {1.0, 0.0}};
    SymbolSequence seq = gen_markov(chain, 1000, 9);
    for (uint8_t s : seq.data) CHECK(s == 0);
}

TEST_CASE("markov generator rejects malformed chains") {
    CHECK_THROWS(gen_markov(MarkovParams{{{1.0}}, {}}, 10, 1));                    // 1 state
    CHECK_THROWS(gen_markov(MarkovParams{{{0.5, 0.5}, {0.7, 0.7}}, {}}, 10, 1));   // bad row
    CHECK_THROWS(gen_markov(MarkovParams{{{0.5, 0.5}}, {}}, 10, 1));               // not square
    CHECK_THROWS(gen_markov(MarkovParams{{{0.5, 0.5}, {0.5, 0.5}}, {0.4, 0.4}}, 10, 1));
}

TEST_CASE("periodic generator repeats its pattern from a seeded phase") {
    PeriodicParams params{{0, 1, 2}, 0};
    SymbolSequence seq = gen_periodic(params, 1000, 5);
    CHECK(seq.alphabet.size == 3);
    for (size_t i = 0; i + 3 < seq.length(); ++i) CHECK(seq.data[i] == seq.data[i + 3]);

    std::set<uint8_t> first;
    for (uint64_t seed = 0; seed < 24; ++seed)
        first.insert(gen_periodic(params, 10, seed).data[0]);
    CHECK(first.size() == 3);  // every phase occurs across seeds

    CHECK_THROWS(gen_periodic(PeriodicParams{{}, 0}, 10, 1));
    CHECK_THROWS(gen_periodic(PeriodicParams{{0, 5}, 3}, 10, 1));  // symbol outside alphabet
    CHECK(gen_periodic(PeriodicParams{{0, 1}, 4}, 10, 1).alphabet.size == 4);
}

TEST_CASE("block-cycle designated family enumerates every core word per marker") {
    DesignatedFamily fam = example1_designated_family(Example1Params{2, 2, 2});
    REQUIRE(fam.blocks.size() == 4);  // 2 core words x 2 markers
    CHECK(fam.blocks[0].word == std::vector<uint8_t>{0, 2});
    CHECK(fam.blocks[1].word == std::vector<uint8_t>{1, 2});
    CHECK(fam.blocks[2].word == std::vector<uint8_t>{0, 3});
    CHECK(fam.blocks[3].word == std::vector<uint8_t>{1, 3});
    CHECK(fam.block_measure == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(fam.family_measure == doctest::Approx(0.5).epsilon(1e-12));

    DesignatedFamily big = example1_designated_family(Example1Params{4, 3, 8});
    CHECK(big.blocks.size() == 128);
    CHECK(big.block_measure == doctest::Approx(1.0 / 384.0).epsilon(1e-12));
    CHECK(big.family_measure == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("block-cycle entropy formula") {
    // N0=2, n=2: log2(2!) / (2*2) = 1/4 exactly.
    CHECK(example1_entropy(2, 2) == doctest::Approx(0.25).epsilon(1e-12));
    // N0=4, n=3: log2(16!) / 48 with 16! = 20922789888000 exactly.
    const double expected = std::log2(20922789888000.0) / 48.0;
    CHECK(example1_entropy(4, 3) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS(example1_entropy(1, 3));
    CHECK_THROWS_WITH(example1_entropy(100, 4), "example1: N0^(n-1) exceeds the 1e5 guard");
}

TEST_CASE("block-cycle sequence is built from marker-terminated blocks") {
    Example1Params params{2, 2, 2};
    SymbolSequence seq = gen_example1(params, 4000, 13);
    seq.validate();
    CHECK(seq.alphabet.size == 4);

    // Markers occupy every second position (some parity, fixed by the phase).
    size_t parity = 2;
    for (size_t i = 0; i < seq.length(); ++i) {
        if (seq.data[i] >= 2) {
            parity = i % 2;
            break;
        }
    }
    REQUIRE(parity < 2);
    for (size_t i = 0; i < seq.length(); ++i) {
        if (i % 2 == parity)
            CHECK(seq.data[i] >= 2);
        else
            CHECK(seq.data[i] < 2);
    }

    // Marker classes appear in runs of exactly m = 2 blocks, alternating
    // between the two classes; the random phase may open mid-run.
    std::vector<uint8_t> markers;
    for (size_t i = parity; i < seq.length(); i += 2) markers.push_back(seq.data[i]);
    size_t start = 1;
    while (start < markers.size() && markers[start] == markers[start - 1]) ++start;
    REQUIRE(start <= 2);
    for (size_t c = start; c + 1 < markers.size(); c += 2) {
        CHECK(markers[c] == markers[c + 1]);
        if (c + 2 < markers.size()) CHECK(markers[c + 1] != markers[c + 2]);
    }
}

TEST_CASE("block-cycle designated blocks occur in balanced counts") {
    Example1Params params{2, 3, 2};  // m=4 words per class, cycle length 2*3*4 = 24
    SymbolSequence seq = gen_example1(params, 60000, 21);
    DesignatedFamily fam = example1_designated_family(params);
    uint64_t lo = UINT64_MAX, hi = 0;
    for (const Block& b : fam.blocks) {
        const uint64_t c = scan_occurrences(seq, b).size();
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    // Exactly one occurrence per block per 24-symbol cycle, up to the two
    // truncated cycles at the ends.
    CHECK(lo >= 2499);
    CHECK(hi <= 2501);
}

TEST_CASE("block-cycle phase varies with the seed") {
    Example1Params params{4, 3, 8};
    SymbolSequence a = gen_example1(params, 2000, 1);
    std::set<std::vector<uint8_t>> prefixes;
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        auto s = gen_example1(params, 24, seed).data;
        prefixes.insert(s);
    }
    CHECK(prefixes.size() > 6);  // uniform phase over 1536 rarely collides
    CHECK(a.provenance.generator == "example1");
}

TEST_CASE("word replacement: log invariants and the zone-clearing property") {
    LawOfSeriesParams params;
    params.base_spec = "bernoulli:0.8,0,0.1,0.1";
    params.k = 3;
    params.l = 4;
    params.p = 1000;
    params.N = 4;
    SymbolSequence base = gen_bernoulli({0.8, 0.0, 0.1, 0.1}, 200000, 17);
    LawOfSeriesResult result = apply_law_of_series(base, params, 17);
    const ConstructionLog& log = result.log;

    CHECK(log.a == 0);  // most frequent symbol
    CHECK(log.b == 1);  // zero-probability symbol is the least frequent non-a
    REQUIRE(log.words.size() == params.k);
    std::set<std::vector<uint8_t>> distinct;
    for (const Block& w : log.words) {
        REQUIRE(w.length() == params.l);
        CHECK(w.word.front() == log.a);
        CHECK(w.word.back() == log.a);
        for (uint8_t s : w.word) CHECK(s != log.b);
        distinct.insert(w.word);
    }
    CHECK(distinct.size() == params.k);

    // Changed positions: exactly the changed count, every change writes b.
    uint64_t changed = 0;
    for (size_t i = 0; i < base.length(); ++i) {
        if (result.sequence.data[i] != base.data[i]) {
            ++changed;
            CHECK(result.sequence.data[i] == log.b);
        }
    }
    CHECK(changed == log.changed_symbols);
    CHECK(log.changed_fraction ==
          doctest::Approx(static_cast<double>(changed) / 200000.0).epsilon(1e-12));
    CHECK(changed > 0);

    // Component grid: lengths r = k*p or r+1, both occurring.
    const uint64_t r = static_cast<uint64_t>(params.k) * params.p;
    std::set<uint64_t> lens;
    for (size_t c = 0; c + 1 < log.component_starts.size(); ++c) {
        const uint64_t len = log.component_starts[c + 1] - log.component_starts[c];
        CHECK((len == r || len == r + 1));
        lens.insert(len);
    }
    CHECK(lens.size() == 2);

    // Zone-clearing: no occurrence of word i begins inside zone i of any
    // component in the modified sequence.
    const uint64_t reach = static_cast<uint64_t>(params.N) * params.N;
    const uint64_t L = base.length();
    for (size_t c = 0; c < log.component_starts.size(); ++c) {
        const uint64_t s = log.component_starts[c];
        const uint64_t comp_end =
            (c + 1 < log.component_starts.size()) ? log.component_starts[c + 1] : L;
        for (uint32_t i = 0; i < params.k; ++i) {
            const uint64_t sub_start = s + static_cast<uint64_t>(i) * params.p;
            if (sub_start >= comp_end) break;
            const uint64_t sub_end =
                (i + 1 == params.k) ? comp_end
                                    : std::min(s + static_cast<uint64_t>(i + 1) * params.p,
                                               comp_end);
            const uint64_t zone_end = std::min(sub_end + reach, L);
            const auto& w = log.words[i].word;
            for (uint64_t j = sub_start; j < zone_end && j + params.l <= L; ++j) {
                CHECK(std::memcmp(result.sequence.data.data() + j, w.data(), params.l) != 0);
            }
        }
    }
}

TEST_CASE("word replacement rejects impossible parameters") {
    SymbolSequence base = gen_bernoulli({0.5, 0.5}, 50000, 2);
    LawOfSeriesParams params;
    params.base_spec = "bernoulli:0.5,0.5";
    params.k = 2;
    params.l = 4;
    params.p = 100;
    params.N = 4;

    LawOfSeriesParams bad = params;
    bad.k = 1;
    CHECK_THROWS(apply_law_of_series(base, bad, 1));
    bad = params;
    bad.l = 200;
    CHECK_THROWS(apply_law_of_series(base, bad, 1));  // l >= p
    bad = params;
    bad.N = 11;
    CHECK_THROWS(apply_law_of_series(base, bad, 1));  // N*N > p
    bad = params;
    bad.p = 30000;
    CHECK_THROWS_WITH(apply_law_of_series(base, bad, 1), "sequence too short for the construction");

    // Binary alphabet: the only b-free word bracketed by a is a^l, so k >= 2
    // distinct words cannot exist.
    CHECK_THROWS_WITH(apply_law_of_series(base, params, 1), "words not found");
}

TEST_CASE("canonical spec strings distinguish parameters and feed digests") {
    const std::string fair = canonical_spec_string(BernoulliParams{{0.5, 0.5}});
    const std::string bias = canonical_spec_string(BernoulliParams{{0.6, 0.4}});
    CHECK(fair != bias);
    CHECK(fair.find("bernoulli") == 0);

    SymbolSequence a = gen_bernoulli({0.5, 0.5}, 10, 1);
    SymbolSequence b = gen_bernoulli({0.6, 0.4}, 10, 1);
    CHECK(a.provenance.param_digest != b.provenance.param_digest);
    CHECK(a.provenance.param_digest.size() == 16);
}

TEST_CASE("generate dispatcher reproduces the manual base+apply pipeline") {
    LawOfSeriesParams params;
    params.base_spec = "bernoulli:0.8,0,0.1,0.1";
    params.k = 3;
    params.l = 4;
    params.p = 1000;
    params.N = 4;
    SymbolSequence via_dispatch = generate(ProcessPayload{params}, 100000, 23);

    const uint64_t base_seed = Rng::stream(23, "lawseries.base").next_u64();
    SymbolSequence base = gen_bernoulli({0.8, 0.0, 0.1, 0.1}, 100000, base_seed);
    SymbolSequence manual = apply_law_of_series(base, params, 23).sequence;
    CHECK(via_dispatch.data == manual.data);
}
