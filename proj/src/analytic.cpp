#include "serieslab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "serieslab/processes.hpp"

namespace serieslab {

double exp_law(double t) {
    if (t < 0.0) throw std::invalid_argument("negative time");
    return -std::expm1(-t);
}

double geometric_mixture_bound(double p, double t) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (t < 0.0) throw std::invalid_argument("negative time");
    // ln(e_p) = -ln(1-p)/p; 1 - e_p^{-t} = 1 - exp(-t*ln(e_p)).
    const double log_ep = -std::log1p(-p) / p;
    return -std::expm1(-t * log_ep) / log_ep;
}

double mixture_envelope(double p, double t) {
    return std::min(1.0, geometric_mixture_bound(p, t) + p * t);
}

size_t mixture_truncation(double p, double tail_tol) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("tail tolerance must be positive");
    // Tail mass after K components is (1-p)^K.
    double K = std::ceil(std::log(tail_tol) / std::log1p(-p));
    return static_cast<size_t>(std::max(K, 1.0));
}

StepCdf mixture_cdf(double p, const std::vector<StepCdf>& family) {
    const size_t K = mixture_truncation(p);
    if (family.size() < K)
        throw std::invalid_argument("mixture family too small for the truncation horizon");
    struct Event {
        double t;
        uint32_t component;
        double value;
    };
    std::vector<Event> events;
    std::vector<double> weight(K);
    double w = p;
    for (size_t k = 0; k < K; ++k) {
        const StepCdf& fk = family[k];
        const double target = static_cast<double>(k + 1);
        if (std::abs(fk.mean() - target) > 1e-9)
            throw std::invalid_argument("mixture component mean violation");
        for (size_t j = 0; j < fk.jumps().size(); ++j)
            events.push_back({fk.jumps()[j] * p, static_cast<uint32_t>(k), fk.values()[j]});
        weight[k] = w;
        w *= (1.0 - p);
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        if (x.t != y.t) return x.t < y.t;
        return x.component < y.component;
    });
    // Sweep: maintain each component's current value and the running mixture.
    std::vector<double> cur(K, 0.0);
    std::vector<double> jumps, values;
    double mix = 0.0;
    size_t i = 0;
    while (i < events.size()) {
        const double t = events[i].t;
        while (i < events.size() && events[i].t == t) {
            const auto& e = events[i];
            mix += weight[e.component] * (e.value - cur[e.component]);
            cur[e.component] = e.value;
            ++i;
        }
        jumps.push_back(t);
        values.push_back(std::min(mix, 1.0));
    }
    return StepCdf(std::move(jumps), std::move(values));
}

double mixture_survival_integral(double p, const std::vector<StepCdf>& family, double t) {
    return mixture_cdf(p, family).survival_integral_to(t);
}

double kac_expectation(double mu) {
    if (!(mu > 0.0) || mu > 1.0) throw std::invalid_argument("measure must lie in (0,1]");
    return 1.0 / mu;
}

namespace {

// kmp_fail[i] = length of the longest proper border of the prefix of length i.
std::vector<uint32_t> kmp_failure(const std::vector<uint8_t>& w) {
    const size_t n = w.size();
    std::vector<uint32_t> fail(n + 1, 0);
    for (size_t i = 1; i < n; ++i) {
        uint32_t s = fail[i];
        while (s > 0 && w[i] != w[s]) s = fail[s];
        fail[i + 1] = (w[i] == w[s]) ? s + 1 : 0;
    }
    return fail;
}

uint32_t kmp_advance(const std::vector<uint8_t>& w, const std::vector<uint32_t>& fail, uint32_t s,
                     uint8_t sym) {
    while (s > 0 && w[s] != sym) s = fail[s];
    return (w[s] == sym) ? s + 1 : 0;
}

}  // namespace

MarkovReturnOracle markov_return_oracle(const std::vector<std::vector<double>>& transition,
                                        const Block& block, double tail_tol) {
    const size_t m = transition.size();
    if (m < 2 || m > 256) throw std::invalid_argument("transition matrix needs 2..256 states");
    for (const auto& row : transition) {
        if (row.size() != m) throw std::invalid_argument("transition matrix must be square");
        double sum = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) throw std::invalid_argument("probabilities must be >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("rows must sum to 1");
    }
    block.validate();
    const auto& w = block.word;
    const uint32_t n = static_cast<uint32_t>(w.size());
    for (uint8_t s : w)
        if (s >= m) throw std::invalid_argument("block symbol outside the chain's state space");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("tail tolerance must be positive");

    MarkovReturnOracle oracle;
    std::vector<double> pi = markov_stationary(transition);
    double mu = pi[w[0]];
    for (uint32_t i = 1; i < n; ++i) mu *= transition[w[i - 1]][w[i]];
    oracle.mu = mu;
    if (!(mu > 0.0)) throw std::invalid_argument("block has zero measure under the chain");

    const auto fail = kmp_failure(w);
    // States: automaton progress s in 1..n-1 (last symbol implied = w[s-1]),
    // plus (0, c) for every chain symbol c. Progress n is absorbing.
    const size_t states = (n - 1) + m;
    auto idx_progress = [&](uint32_t s) { return static_cast<size_t>(s - 1); };
    auto idx_zero = [&](uint8_t c) { return (n - 1) + static_cast<size_t>(c); };
    auto last_symbol = [&](size_t idx) -> uint8_t {
        return idx < n - 1 ? w[idx] : static_cast<uint8_t>(idx - (n - 1));
    };

    std::vector<double> cur(states, 0.0), nxt(states, 0.0);
    const uint32_t start = fail[n];  // progress after an occurrence just completed
    if (start >= 1)
        cur[idx_progress(start)] = 1.0;
    else
        cur[idx_zero(w[n - 1])] = 1.0;

    std::vector<double> jumps, values;
    double absorbed = 0.0;
    const uint64_t hard_cap = 100000000ULL;
    uint64_t step = 0;
    while (absorbed < 1.0 - tail_tol) {
        if (++step > hard_cap) throw std::runtime_error("return-time horizon exceeded hard cap");
        std::fill(nxt.begin(), nxt.end(), 0.0);
        double hit = 0.0;
        for (size_t idx = 0; idx < states; ++idx) {
            const double mass = cur[idx];
            if (mass == 0.0) continue;
            const uint8_t x = last_symbol(idx);
            const uint32_t s = idx < n - 1 ? static_cast<uint32_t>(idx + 1) : 0;
            const auto& row = transition[x];
            for (uint32_t y = 0; y < m; ++y) {
                const double pr = row[y];
                if (pr == 0.0) continue;
                const uint32_t ns = kmp_advance(w, fail, s, static_cast<uint8_t>(y));
                if (ns == n) {
                    hit += mass * pr;
                    continue;
                }
                if (ns >= 1)
                    nxt[idx_progress(ns)] += mass * pr;
                else
                    nxt[idx_zero(static_cast<uint8_t>(y))] += mass * pr;
            }
        }
        absorbed += hit;
        if (hit > 0.0) {
            jumps.push_back(static_cast<double>(step));
            values.push_back(std::min(absorbed, 1.0));
        }
        cur.swap(nxt);
    }
    oracle.horizon = step;
    oracle.tail_mass = std::max(0.0, 1.0 - absorbed);
    std::vector<double> njumps(jumps.size());
    for (size_t i = 0; i < jumps.size(); ++i) njumps[i] = jumps[i] * mu;
    oracle.absolute_cdf = StepCdf(std::move(jumps), std::vector<double>(values));
    oracle.normalized_cdf = StepCdf(std::move(njumps), std::move(values));
    return oracle;
}

}  // namespace serieslab
