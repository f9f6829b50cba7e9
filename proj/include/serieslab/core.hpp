#pragma once
// Core value types: symbol sequences over small alphabets, blocks (finite
// words), right-continuous step CDFs with exact survival integrals, and the
// evaluation grid used when comparing distributions against reference laws.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace serieslab {

// Alphabets are index-based: symbols are 0..size-1. Labels are optional and
// purely cosmetic; sequences are stored one byte per symbol, so size <= 256.
struct Alphabet {
    uint32_t size = 0;
    std::vector<std::string> labels;  // empty, or exactly `size` distinct labels

    void validate() const;
    // Render a symbol: its label if present, else its decimal index.
    std::string symbol_name(uint32_t sym) const;
};

// Where a sequence came from: enough to regenerate it bit-for-bit.
struct Provenance {
    std::string generator;     // e.g. "bernoulli", "markov", "example1"
    std::string param_digest;  // hex digest of the canonical parameter encoding
    uint64_t seed = 0;
};

struct SymbolSequence {
    Alphabet alphabet;
    std::vector<uint8_t> data;
    Provenance provenance;

    size_t length() const { return data.size(); }
    void validate() const;  // every symbol < alphabet.size
};

// A finite word over an alphabet; the unit whose returns/hittings we measure.
struct Block {
    Alphabet alphabet;
    std::vector<uint8_t> word;

    size_t length() const { return word.size(); }
    void validate() const;
    std::string to_string() const;  // digits if alphabet fits, else comma-joined
};

// Parse "0110" (or "0,1,1,0" for alphabets wider than 10) into a Block.
Block parse_block(const std::string& text, const Alphabet& alphabet);

// Right-continuous step CDF: value_at(t) = values[i] for the largest jump <= t,
// 0 before the first jump. Jumps strictly increasing, values nondecreasing in
// [0,1]. Survival integrals are computed in closed form, never by quadrature.
class StepCdf {
  public:
    StepCdf() = default;
    StepCdf(std::vector<double> jumps, std::vector<double> values);

    const std::vector<double>& jumps() const { return jumps_; }
    const std::vector<double>& values() const { return values_; }
    bool empty() const { return jumps_.empty(); }

    double value_at(double t) const;
    // Integral over [0, t] of (1 - value_at(s)) ds; errors on negative t.
    double survival_integral_to(double t) const;
    // Expected value of the underlying distribution, i.e. the survival
    // integral over [0, inf). Requires the CDF to reach 1 at its last jump.
    double mean() const;

  private:
    std::vector<double> jumps_;
    std::vector<double> values_;
    std::vector<double> prefix_;  // survival integral accumulated at each jump
};

// Empirical CDF of samples (each must be >= 0); errors on an empty span.
StepCdf ecdf_from_samples(std::span<const double> samples);

// Free-function aliases matching the operation vocabulary used throughout.
double cdf_eval(const StepCdf& cdf, double t);
double cdf_integral_of_survival(const StepCdf& cdf, double t);

// Geometric grid of evaluation points for curve comparisons. The default is
// 256 points spanning [0.01, 10]; jump points of the CDF under study are
// merged in so suprema over step functions are attained exactly.
struct EvalGrid {
    std::vector<double> points;  // sorted ascending

    static EvalGrid geometric(size_t count = 256, double lo = 0.01, double hi = 10.0);
    // Sorted union of grid points and the CDF's jump locations.
    std::vector<double> merged_with(const StepCdf& cdf) const;
};

}  // namespace serieslab
