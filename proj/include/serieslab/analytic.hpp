#pragma once
// Closed-form reference laws and exact oracles: the exponential law 1-e^{-t},
// closed-form caps on survival integrals of geometric mixtures of mean-k
// return laws, their envelope, Kac expectations, and an exact Markov-chain
// return-time oracle used to anchor the empirical pipeline.

#include <vector>

#include "serieslab/core.hpp"

namespace serieslab {

// 1 - e^{-t}; errors on negative t.
double exp_law(double t);

// e_p = (1-p)^{-1/p} (natural logs throughout). Closed-form cap
// (1 - e_p^{-t}) / ln(e_p) on the survival integral of a mixture
// sum_k p(1-p)^{k-1} Fk(t/p) whose k-th component has mean k. The exact
// supremum over such mixtures is the piecewise-linear curve through
// (m*p, 1-(1-p)^m), attained when every component is a point mass at its
// mean; it exceeds this closed form by a factor of at most 1/(1-p), and the
// two collapse onto 1 - e^{-t} as p -> 0+.
double geometric_mixture_bound(double p, double t);

// min{1, geometric_mixture_bound(p, t) + p*t}; decreases to the exponential
// law uniformly on compacts as p -> 0+.
double mixture_envelope(double p, double t);

// Number of mixture components needed before the remaining geometric weight
// drops below `tail_tol`.
size_t mixture_truncation(double p, double tail_tol = 1e-9);

// The mixture CDF F(t) = sum_{k>=1} p(1-p)^{k-1} family[k-1](t/p), truncated
// at mixture_truncation(p). family[k-1] must have mean exactly k (within
// 1e-9) and reach 1; family must cover the truncation horizon.
StepCdf mixture_cdf(double p, const std::vector<StepCdf>& family);

// Survival integral at t of the truncated mixture.
double mixture_survival_integral(double p, const std::vector<StepCdf>& family, double t);

// Expected return time 1/mu for a block of measure mu (Kac).
double kac_expectation(double mu);

struct MarkovReturnOracle {
    double mu = 0.0;          // exact cylinder measure of the block
    StepCdf absolute_cdf;     // P(return <= j) at integer steps j
    StepCdf normalized_cdf;   // same law with jumps at j * mu
    double tail_mass = 0.0;   // probability mass beyond the horizon
    uint64_t horizon = 0;     // number of steps resolved
};

// Exact law of the first return time of `block` under the chain, conditioned
// on an occurrence just having completed. Dynamic programming over the
// product state (pattern-automaton progress, last emitted symbol); the
// horizon extends until the unresolved tail mass is below tail_tol.
MarkovReturnOracle markov_return_oracle(const std::vector<std::vector<double>>& transition,
                                        const Block& block, double tail_tol = 1e-6);

}  // namespace serieslab
