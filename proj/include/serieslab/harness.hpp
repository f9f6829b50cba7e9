#pragma once
// Experiment drivers tying generators, statistics and oracles together.
// Every run is a pure function of its parameters and one seed; reports embed
// the full parameter set so a run can be reproduced from its output alone.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "serieslab/processes.hpp"
#include "serieslab/stats.hpp"

namespace serieslab {

struct SweepRow {
    uint32_t n = 0;
    uint64_t distinct_blocks = 0;
    uint64_t resolved_blocks = 0;
    double resolved_mass = 0.0;
    double unresolved_mass = 0.0;
    std::vector<double> weighted_repel;    // parallel to eps_list
    std::vector<double> weighted_attract;  // parallel to eps_list
    double median_eps_repel = 0.0;
    double median_ks = 0.0;
};

// Repelling-decay sweep: for each block length n, the stationary mass of
// resolved blocks whose repelling intensity reaches each threshold in
// eps_list. For mixing positive-entropy processes this mass decays with n.
struct SweepReport {
    std::string process;  // canonical spec string
    uint64_t length = 0;
    uint64_t seed = 0;
    uint64_t min_count = 0;
    std::vector<double> eps_list;
    std::vector<SweepRow> rows;
    std::vector<std::vector<BlockStats>> per_block;  // parallel to rows
};

SweepReport run_repel_decay_sweep(const ProcessPayload& payload, uint64_t length, uint64_t seed,
                                  uint32_t n_from, uint32_t n_to, std::vector<double> eps_list,
                                  uint64_t min_count, uint32_t threads);

// Structural check of the permuted-block-cycle process: designated-family
// mass, the gap window [(1-1/r)/mu_hat, (1+1/r)/mu_hat] for every designated
// block, the fraction of designated blocks repelling at the threshold, and
// the entropy formula value.
struct Example1Report {
    Example1Params params;
    uint64_t length = 0;
    uint64_t seed = 0;
    double repel_threshold = 0.0;
    uint64_t designated_blocks = 0;
    uint64_t designated_resolved = 0;
    double designated_mass = 0.0;   // empirical; expected family_measure
    double family_measure = 0.0;    // theoretical 1/n
    double block_measure = 0.0;     // theoretical per-block measure
    bool gaps_within_window = true;
    double min_norm_gap = 0.0;  // min over designated blocks of mu_hat * gap
    double max_norm_gap = 0.0;
    double repel_fraction = 0.0;  // designated blocks with eps_repel >= threshold
    double entropy_bits = 0.0;
    std::vector<BlockStats> designated;
};

Example1Report run_example1_check(const Example1Params& params, uint64_t length, uint64_t seed,
                                  double repel_threshold, uint32_t threads);

// Before/after comparison for the word-replacement construction: at each
// probed block length, the stationary mass of resolved blocks whose hitting
// estimate at t_star is below eps_star.
struct AttractProbe {
    uint32_t n = 0;
    uint64_t distinct_blocks = 0;
    uint64_t resolved_blocks = 0;
    double resolved_mass = 0.0;
    double unresolved_mass = 0.0;
    uint64_t qualifying_blocks = 0;
    double qualifying_mass = 0.0;      // sum of mu_hat over qualifying blocks
    double qualifying_fraction = 0.0;  // qualifying_mass / resolved_mass
};

struct AttractReport {
    LawOfSeriesParams params;
    uint64_t length = 0;
    uint64_t seed = 0;
    double t_star = 2.0;
    double eps_star = 0.1;
    uint64_t min_count = 0;
    std::vector<uint32_t> probe_lengths;
    std::vector<AttractProbe> before;
    std::vector<AttractProbe> after;
    std::vector<std::vector<BlockStats>> after_rows;  // parallel to probe_lengths
    // Construction summary.
    uint32_t symbol_a = 0, symbol_b = 0;
    std::vector<std::string> words;
    std::vector<uint64_t> replacements;
    uint64_t changed_symbols = 0;
    double changed_fraction = 0.0;
};

// Default probe lengths: an arithmetic subset of [N, N*N] capped at 12.
std::vector<uint32_t> default_probe_lengths(uint32_t N, size_t cap = 12);

AttractReport run_lawofseries_demo(const LawOfSeriesParams& params, uint64_t length, uint64_t seed,
                                   double t_star, double eps_star, uint64_t min_count,
                                   std::vector<uint32_t> probe_lengths, uint32_t threads);

// Convergence to the exponential law for an i.i.d. process as n grows.
struct UnbiasedRow {
    uint32_t n = 0;
    uint64_t resolved_blocks = 0;
    double unresolved_mass = 0.0;
    double median_ks = 0.0;
    double max_ks = 0.0;
};

struct UnbiasedReport {
    std::string process;
    uint64_t length = 0;
    uint64_t seed = 0;
    uint64_t min_count = 0;
    std::vector<UnbiasedRow> rows;
};

UnbiasedReport run_unbiased_check(const ProcessPayload& payload, uint64_t length, uint64_t seed,
                                  const std::vector<uint32_t>& n_list, uint64_t min_count,
                                  uint32_t threads);

// Scan/ECDF pipeline vs the exact Markov return-time oracle. The comparison
// is on the integer-step return law (both sides evaluated at every resolved
// step), so it is free of normalization-constant jitter. A block fails when
// its sup deviation exceeds a high-confidence binomial envelope.
struct OracleBlockResult {
    std::string block;
    uint64_t count = 0;
    double mu_exact = 0.0;
    double mu_hat = 0.0;
    double sup_dev = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct OracleReport {
    std::string process;
    uint64_t length = 0;
    uint64_t seed = 0;
    std::vector<OracleBlockResult> blocks;
    bool pass = false;
};

OracleReport run_oracle_equivalence(const MarkovParams& chain, const std::vector<Block>& blocks,
                                    uint64_t length, uint64_t seed);

// Same comparison on an existing sequence (e.g. read from file). The report's
// length and seed come from the sequence itself.
OracleReport run_oracle_equivalence_on(const SymbolSequence& seq, const MarkovParams& chain,
                                       const std::vector<Block>& blocks);

}  // namespace serieslab
