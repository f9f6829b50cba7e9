#pragma once
// Empirical statistics of block visits in a sample path: occurrence scanning,
// return gaps and k-th returns, normalized return-time CDFs, hitting-time
// CDFs (integrated-survival estimate and direct sampled-start estimate),
// repelling/attracting intensities against the exponential law, and the
// per-length sweep over every distinct block.

#include <cstdint>
#include <string>
#include <vector>

#include "serieslab/core.hpp"

namespace serieslab {

using OccurrenceList = std::vector<uint64_t>;

// Start positions of every occurrence of `block` in `seq`, overlaps included.
OccurrenceList scan_occurrences(const SymbolSequence& seq, const Block& block);

// Every distinct n-block with its occurrence list, lexicographically sorted.
// Single pass; the dictionary is keyed by the block word itself, so hash
// collisions cannot merge distinct blocks.
std::vector<std::pair<Block, OccurrenceList>> scan_all_blocks(const SymbolSequence& seq,
                                                              uint32_t n);

// Consecutive occurrence differences. The partial gap after the last
// occurrence is censored. Errors "insufficient occurrences" when < 2.
std::vector<uint64_t> return_gaps(const OccurrenceList& occ);

// Sums of k consecutive gaps: samples of the k-th return time.
std::vector<uint64_t> kth_return_samples(const OccurrenceList& occ, uint32_t k);

// ECDF of mu_hat * gap (normalized return times; Kac: mean ~ 1).
StepCdf return_cdf(const std::vector<uint64_t>& gaps, double mu_hat);

// Hitting-time CDF estimate G(t) = integral_0^t (1 - return_cdf(s)) ds,
// sampled on the grid merged with the return CDF's jumps. Exact on trend
// kinks since G is piecewise linear with kinks exactly at those jumps.
StepCdf hitting_cdf_via_g(const StepCdf& ret_cdf, const EvalGrid& grid);

struct DirectHitting {
    StepCdf cdf;
    uint64_t sampled = 0;   // starts drawn
    uint64_t censored = 0;  // starts whose wait ran past the sequence end
};

// Direct estimate: waits mu_hat * (next occurrence strictly after a uniformly
// drawn start). Censored starts are dropped and counted. Errors when
// num_starts is zero or no start resolves.
DirectHitting hitting_cdf_direct(const OccurrenceList& occ, uint64_t window_count, double mu_hat,
                                 uint64_t num_starts, uint64_t seed);

struct Intensities {
    double repel = 0.0;    // max over eval points of (F(t) - (1 - e^{-t}))+
    double t_repel = 0.0;  // witness
    double attract = 0.0;  // max of ((1 - e^{-t}) - F(t))+
    double t_attract = 0.0;
    double ks = 0.0;  // sup |F(t) - (1 - e^{-t})|
};

// Evaluated over grid points, the CDF's jumps, and left limits at the jumps;
// on step CDFs the suprema are attained there exactly, so adding grid points
// never changes the result.
Intensities intensities(const StepCdf& hitting, const EvalGrid& grid);

double ks_to_exponential(const StepCdf& hitting, const EvalGrid& grid);

// Full per-block diagnostics for one block (keeps the curves).
struct BlockRecord {
    Block block;
    uint64_t count = 0;
    double mu_hat = 0.0;
    StepCdf return_law;      // normalized return-time CDF
    StepCdf g_curve;         // integrated-survival hitting estimate
    StepCdf hitting;         // defaults to g_curve; direct estimate if sampled
    Intensities intens;
};

BlockRecord analyze_block(const SymbolSequence& seq, const Block& block, const EvalGrid& grid);

// Slim per-block summary retained by sweeps.
struct BlockStats {
    std::string block;
    uint64_t count = 0;
    double mu_hat = 0.0;
    double eps_repel = 0.0, t_repel = 0.0;
    double eps_attract = 0.0, t_attract = 0.0;
    double ks_exp = 0.0;
    double f_tstar = -1.0;  // hitting estimate at SweepOptions::t_star; -1 if unset
};

struct SweepOptions {
    uint64_t min_count = 50;  // blocks below go to the unresolved bucket
    EvalGrid grid = EvalGrid::geometric();
    uint32_t threads = 1;
    double t_star = -1.0;  // >= 0: also record the hitting estimate there
};

struct SweepResult {
    uint32_t n = 0;
    uint64_t window_count = 0;
    uint64_t distinct_blocks = 0;
    uint64_t resolved_blocks = 0;
    double resolved_mass = 0.0;
    double unresolved_mass = 0.0;  // mass of blocks under min_count
    std::vector<BlockStats> rows;  // resolved blocks, lexicographic order

    double weighted_repel_measure(double eps) const;
    double weighted_attract_measure(double eps) const;
};

SweepResult block_sweep(const SymbolSequence& seq, uint32_t n, const SweepOptions& opts);

}  // namespace serieslab
