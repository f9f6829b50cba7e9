#pragma once
// Stationary symbolic process generators: i.i.d., Markov, periodic, the
// permuted-block-cycle process ("example1" in the CLI grammar), and the
// marker-grid word-replacement modification ("lawofseries"). All generators
// are pure functions of (params, length, seed).

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "serieslab/core.hpp"

namespace serieslab {

struct BernoulliParams {
    std::vector<double> probs;  // one entry per symbol; >= 0, sums to 1
};

struct MarkovParams {
    std::vector<std::vector<double>> transition;  // row-stochastic
    std::vector<double> initial;                  // empty = stationary start
};

struct PeriodicParams {
    std::vector<uint8_t> pattern;
    uint32_t alphabet_size = 0;  // 0 = max(pattern) + 1
};

// Alphabet of N0 + r symbols: N0 "core" symbols and r "marker" symbols. The
// designated blocks of class i are all n-words made of n-1 core symbols
// followed by marker i; class i contributes a component that concatenates
// every class-i block exactly once in a fresh uniform order, and components
// cycle 1..r forever. Stationarity is approximated by a uniform phase offset.
struct Example1Params {
    uint32_t N0 = 0;  // core symbol count (>= 2)
    uint32_t n = 0;   // designated block length (>= 2)
    uint32_t r = 0;   // marker / component class count (>= 2)
};

// Modification parameters: k words of length l (found in the base sample,
// each starting and ending with the same symbol), a marker grid cutting the
// sequence into components of length r = k*p or r+1, each split into k
// sub-blocks of length p. Within sub-block i and the first N*N positions of
// the following sub-block, every occurrence of word i is overwritten by a
// constant word b^l.
struct LawOfSeriesParams {
    std::string base_spec;  // process grammar string for the base process
    uint32_t k = 0;         // word count (>= 2)
    uint32_t l = 0;         // word length (>= 2, < p)
    uint64_t p = 0;         // sub-block length (>= N*N)
    uint32_t N = 0;         // probe-window parameter (replacement reach N*N)
};

using ProcessPayload =
    std::variant<BernoulliParams, MarkovParams, PeriodicParams, Example1Params, LawOfSeriesParams>;

struct DesignatedFamily {
    std::vector<Block> blocks;
    double block_measure = 0.0;   // theoretical per-block measure
    double family_measure = 0.0;  // theoretical joint measure (= 1/n)
};

struct ConstructionLog {
    uint8_t a = 0;  // shared first/last symbol of the replaced words
    uint8_t b = 0;  // fill symbol of the replacement word
    std::vector<Block> words;
    std::vector<uint64_t> replacements;  // per-word replacement counts
    std::vector<uint64_t> component_starts;
    uint64_t changed_symbols = 0;
    double changed_fraction = 0.0;
};

struct LawOfSeriesResult {
    SymbolSequence sequence;
    ConstructionLog log;
};

SymbolSequence gen_bernoulli(const std::vector<double>& probs, uint64_t length, uint64_t seed);

SymbolSequence gen_markov(const MarkovParams& params, uint64_t length, uint64_t seed);

// Stationary distribution of a row-stochastic matrix (dense solve).
std::vector<double> markov_stationary(const std::vector<std::vector<double>>& transition);

// Repeats the pattern with a seed-chosen uniform phase.
SymbolSequence gen_periodic(const PeriodicParams& params, uint64_t length, uint64_t seed);

SymbolSequence gen_example1(const Example1Params& params, uint64_t length, uint64_t seed);

// Entropy (bits/symbol) of the permuted-block-cycle process:
// log2(m!) / (n * m) with m = N0^(n-1), via lgamma, never a factorial table.
double example1_entropy(uint32_t N0, uint32_t n);

DesignatedFamily example1_designated_family(const Example1Params& params);

// Applies the word-replacement modification to an already generated base
// sequence. Errors: "alphabet too small" (fewer than 2 symbols), "words not
// found" (search could not produce k usable words).
LawOfSeriesResult apply_law_of_series(const SymbolSequence& base, const LawOfSeriesParams& params,
                                      uint64_t seed);

// Canonical one-line encoding of a payload; digests of this string are the
// parameter digests recorded in sequence provenance.
std::string canonical_spec_string(const ProcessPayload& payload);

// Dispatcher: generate a sequence from any payload. For LawOfSeriesParams the
// base spec string is parsed recursively (nested modifications are rejected).
SymbolSequence generate(const ProcessPayload& payload, uint64_t length, uint64_t seed);

// Parse the process grammar: "bernoulli:0.5,0.5", "periodic:0120",
// "example1:N0=4,n=3,r=8", "markov:@chain.json", "lawofseries:@params.json".
// "@file" forms read JSON from disk.
ProcessPayload parse_process_spec(const std::string& text);

}  // namespace serieslab
