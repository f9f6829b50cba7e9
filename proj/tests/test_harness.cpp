#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "serieslab/core.hpp"
#include "serieslab/harness.hpp"
#include "serieslab/io.hpp"
#include "serieslab/processes.hpp"

using namespace serieslab;

namespace {

Block block_from(std::vector<uint8_t> word, uint32_t alphabet) {
    Block b;
    b.alphabet.size = alphabet;
    b.word = std::move(word);
    return b;
}

const MarkovParams kFairChain{{{0.5, 0.5}, {0.5, 0.5}}, {}};

}  // namespace

TEST_CASE("default probe lengths spread over the squared window") {
    CHECK(default_probe_lengths(3) == std::vector<uint32_t>{3, 4, 5, 6, 7, 8, 9});
    CHECK(default_probe_lengths(100, 5) == std::vector<uint32_t>{100, 2575, 5050, 7525, 10000});

    const auto probes = default_probe_lengths(4);
    CHECK(probes.size() == 12);
    CHECK(probes.front() == 4);
    CHECK(probes.back() == 16);
    for (size_t i = 1; i < probes.size(); ++i) CHECK(probes[i - 1] < probes[i]);

    CHECK_THROWS_WITH_AS(default_probe_lengths(1), "probe window requires N >= 2",
                         std::invalid_argument);
}

TEST_CASE("repelling-decay sweep aggregates per block length") {
    const ProcessPayload coin = BernoulliParams{{0.5, 0.5}};
    const SweepReport rep =
        run_repel_decay_sweep(coin, 200000, 99, 2, 6, {0.05, 0.1}, 50, 1);

    CHECK(rep.process == canonical_spec_string(coin));
    CHECK(rep.length == 200000);
    CHECK(rep.seed == 99);
    CHECK(rep.eps_list == std::vector<double>{0.05, 0.1});
    REQUIRE(rep.rows.size() == 5);
    REQUIRE(rep.per_block.size() == 5);

    for (size_t i = 0; i < rep.rows.size(); ++i) {
        const SweepRow& row = rep.rows[i];
        CHECK(row.n == 2 + i);
        CHECK(row.resolved_blocks == rep.per_block[i].size());
        CHECK(row.resolved_mass + row.unresolved_mass == doctest::Approx(1.0).epsilon(1e-9));
        REQUIRE(row.weighted_repel.size() == 2);
        REQUIRE(row.weighted_attract.size() == 2);
        // Raising the threshold can only shrink the qualifying mass.
        CHECK(row.weighted_repel[0] >= row.weighted_repel[1]);
        CHECK(row.weighted_repel[0] <= row.resolved_mass + 1e-12);
        CHECK(row.median_eps_repel >= 0.0);
        CHECK(row.median_ks >= row.median_eps_repel);
    }

    CHECK_THROWS_WITH_AS(run_repel_decay_sweep(coin, 1000, 1, 0, 3, {0.1}, 50, 1),
                         "bad block-length range", std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_repel_decay_sweep(coin, 1000, 1, 3, 2, {0.1}, 50, 1),
                         "bad block-length range", std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_repel_decay_sweep(coin, 1000, 1, 2, 3, {}, 50, 1),
                         "eps list must be nonempty", std::invalid_argument);
}

TEST_CASE("sweep reports serialize identically across thread counts") {
    const ProcessPayload coin = BernoulliParams{{0.5, 0.5}};
    const SweepReport a = run_repel_decay_sweep(coin, 100000, 7, 2, 4, {0.1}, 50, 1);
    const SweepReport b = run_repel_decay_sweep(coin, 100000, 7, 2, 4, {0.1}, 50, 3);
    CHECK(to_json(a) == to_json(b));
    CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("permuted-block-cycle check measures the designated family") {
    const Example1Params params{2, 3, 2};  // 4 words per class, cycle 24
    const Example1Report rep = run_example1_check(params, 120000, 5, 0.2, 1);

    CHECK(rep.designated_blocks == 8);
    CHECK(rep.designated_resolved == 8);
    CHECK(rep.family_measure == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rep.block_measure == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(rep.designated_mass == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(rep.entropy_bits == doctest::Approx(std::log2(24.0) / 12.0).epsilon(1e-12));

    // Each designated block recurs once per cycle; the jitter from the
    // per-cycle permutation stays within the (1 ± 1/r)/mu window.
    CHECK(rep.gaps_within_window);
    CHECK(rep.min_norm_gap >= 0.5);
    CHECK(rep.max_norm_gap <= 1.5);
    CHECK(rep.min_norm_gap < rep.max_norm_gap);
    CHECK(rep.repel_fraction == 1.0);

    REQUIRE(rep.designated.size() == 8);
    for (const auto& row : rep.designated) {
        CHECK(row.count >= 4999);
        CHECK(row.count <= 5001);
        CHECK(row.eps_repel >= 0.2);
    }

    const Example1Report again = run_example1_check(params, 120000, 5, 0.2, 1);
    CHECK(to_json(rep) == to_json(again));
}

TEST_CASE("word-replacement demo compares before and after") {
    const LawOfSeriesParams params{"bernoulli:0.85,0.05,0.05,0.05", 3, 4, 500, 3};
    const AttractReport rep =
        run_lawofseries_demo(params, 200000, 17, 2.0, 0.1, 50, {3, 6, 9}, 1);

    CHECK(rep.probe_lengths == std::vector<uint32_t>{3, 6, 9});
    REQUIRE(rep.before.size() == 3);
    REQUIRE(rep.after.size() == 3);
    REQUIRE(rep.after_rows.size() == 3);

    CHECK(rep.symbol_a != rep.symbol_b);
    REQUIRE(rep.words.size() == 3);
    for (const auto& w : rep.words) CHECK(w.size() == 4);
    CHECK(rep.replacements.size() == 3);
    CHECK(rep.changed_symbols > 0);
    CHECK(rep.changed_fraction ==
          doctest::Approx(static_cast<double>(rep.changed_symbols) / 200000.0).epsilon(1e-12));
    CHECK(rep.changed_fraction < 0.5);

    for (size_t i = 0; i < rep.probe_lengths.size(); ++i) {
        CHECK(rep.before[i].n == rep.probe_lengths[i]);
        CHECK(rep.after[i].n == rep.probe_lengths[i]);
        CHECK(rep.after[i].resolved_blocks == rep.after_rows[i].size());
        CHECK(rep.before[i].qualifying_mass <= rep.before[i].resolved_mass + 1e-12);
        CHECK(rep.after[i].qualifying_mass <= rep.after[i].resolved_mass + 1e-12);
    }

    CHECK_THROWS_WITH_AS(run_lawofseries_demo(params, 1000, 1, -1.0, 0.1, 50, {3}, 1),
                         "negative time", std::invalid_argument);
}

TEST_CASE("word-replacement demo rejects a nested construction as base") {
    const std::string path = "tmp_nested_base.json";
    write_text_file(path,
                    "{\"base\": \"bernoulli:0.5,0.5\", \"k\": 2, \"l\": 2, \"p\": 100, \"N\": 3}");
    const LawOfSeriesParams params{"lawofseries:@" + path, 2, 2, 100, 3};
    CHECK_THROWS_WITH_AS(run_lawofseries_demo(params, 1000, 1, 2.0, 0.1, 50, {3}, 1),
                         "nested lawofseries base is not supported", std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("exponential-law convergence check for i.i.d. processes") {
    const ProcessPayload coin = BernoulliParams{{0.5, 0.5}};
    const UnbiasedReport rep = run_unbiased_check(coin, 300000, 23, {2, 4}, 50, 1);

    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].n == 2);
    CHECK(rep.rows[1].n == 4);
    for (const auto& row : rep.rows) {
        CHECK(row.resolved_blocks > 0);
        CHECK(row.max_ks >= row.median_ks);
        CHECK(row.median_ks > 0.0);
    }
    // The integer-step coarse-graining gap shrinks as blocks get rarer.
    CHECK(rep.rows[1].median_ks < rep.rows[0].median_ks);

    CHECK_THROWS_WITH_AS(run_unbiased_check(ProcessPayload{kFairChain}, 1000, 1, {2}, 50, 1),
                         "unbiased check requires an i.i.d. process", std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_unbiased_check(coin, 1000, 1, {}, 50, 1),
                         "need at least one block length", std::invalid_argument);
}

TEST_CASE("oracle equivalence accepts the matching chain") {
    const std::vector<Block> blocks{block_from({0}, 2), block_from({0, 1}, 2),
                                    block_from({0, 1, 1, 0}, 2)};
    const OracleReport rep = run_oracle_equivalence(kFairChain, blocks, 300000, 12);

    CHECK(rep.pass);
    REQUIRE(rep.blocks.size() == 3);
    CHECK(rep.blocks[0].mu_exact == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.blocks[1].mu_exact == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.blocks[2].mu_exact == doctest::Approx(0.0625).epsilon(1e-12));
    for (const auto& b : rep.blocks) {
        CHECK(b.pass);
        CHECK(b.sup_dev <= b.bound);
        CHECK(b.mu_hat == doctest::Approx(b.mu_exact).epsilon(0.02));
    }

    const OracleReport again = run_oracle_equivalence(kFairChain, blocks, 300000, 12);
    CHECK(to_json(rep) == to_json(again));
}

TEST_CASE("oracle equivalence flags a mismatched process") {
    const SymbolSequence biased = gen_bernoulli({0.7, 0.3}, 300000, 8);
    const OracleReport rep =
        run_oracle_equivalence_on(biased, kFairChain, {block_from({0}, 2)});
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.blocks.size() == 1);
    CHECK_FALSE(rep.blocks[0].pass);
    CHECK(rep.blocks[0].sup_dev > rep.blocks[0].bound);

    const SymbolSequence wide = gen_bernoulli({0.4, 0.3, 0.3}, 1000, 2);
    CHECK_THROWS_WITH_AS(run_oracle_equivalence_on(wide, kFairChain, {block_from({0}, 3)}),
                         "sequence alphabet does not match the chain", std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_oracle_equivalence_on(biased, kFairChain, {}),
                         "need at least one block", std::invalid_argument);
}
