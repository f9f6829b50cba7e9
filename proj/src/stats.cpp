#include "serieslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <unordered_map>

#include "serieslab/analytic.hpp"
#include "serieslab/rng.hpp"

namespace serieslab {

namespace {

// Run fn(begin, end) over [0, count) split into contiguous chunks. Results
// must be written to disjoint slots so the outcome is thread-count invariant.
void parallel_chunks(size_t count, uint32_t threads, const std::function<void(size_t, size_t)>& fn) {
    if (count == 0) return;
    size_t workers = std::max<uint32_t>(threads, 1);
    workers = std::min(workers, count);
    if (workers == 1) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t chunk = (count + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        const size_t begin = w * chunk;
        const size_t end = std::min(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

void check_scannable(const SymbolSequence& seq, size_t n) {
    if (n == 0) throw std::invalid_argument("block length must be positive");
    if (seq.length() < n) throw std::invalid_argument("sequence shorter than the block");
}

}  // namespace

OccurrenceList scan_occurrences(const SymbolSequence& seq, const Block& block) {
    block.validate();
    check_scannable(seq, block.length());
    const size_t n = block.length();
    const uint8_t* data = seq.data.data();
    const uint8_t* w = block.word.data();
    const uint64_t windows = seq.length() - n + 1;
    OccurrenceList occ;
    for (uint64_t pos = 0; pos < windows; ++pos) {
        if (data[pos] == w[0] && std::memcmp(data + pos, w, n) == 0) occ.push_back(pos);
    }
    return occ;
}

std::vector<std::pair<Block, OccurrenceList>> scan_all_blocks(const SymbolSequence& seq,
                                                              uint32_t n) {
    check_scannable(seq, n);
    const uint8_t* data = seq.data.data();
    const uint64_t windows = seq.length() - n + 1;
    std::unordered_map<std::string_view, OccurrenceList> dict;
    for (uint64_t pos = 0; pos < windows; ++pos) {
        std::string_view key(reinterpret_cast<const char*>(data + pos), n);
        dict[key].push_back(pos);
    }
    std::vector<std::pair<Block, OccurrenceList>> out;
    out.reserve(dict.size());
    for (auto& [key, occ] : dict) {
        Block b;
        b.alphabet = seq.alphabet;
        b.word.assign(key.begin(), key.end());
        out.emplace_back(std::move(b), std::move(occ));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first.word < y.first.word; });
    return out;
}

std::vector<uint64_t> return_gaps(const OccurrenceList& occ) {
    if (occ.size() < 2) throw std::invalid_argument("insufficient occurrences");
    std::vector<uint64_t> gaps(occ.size() - 1);
    for (size_t i = 1; i < occ.size(); ++i) gaps[i - 1] = occ[i] - occ[i - 1];
    return gaps;
}

std::vector<uint64_t> kth_return_samples(const OccurrenceList& occ, uint32_t k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (occ.size() < k + 1) throw std::invalid_argument("insufficient occurrences");
    std::vector<uint64_t> out(occ.size() - k);
    for (size_t i = k; i < occ.size(); ++i) out[i - k] = occ[i] - occ[i - k];
    return out;
}

StepCdf return_cdf(const std::vector<uint64_t>& gaps, double mu_hat) {
    if (gaps.empty()) throw std::invalid_argument("no samples");
    if (!(mu_hat > 0.0)) throw std::invalid_argument("measure must be positive");
    std::vector<double> samples(gaps.size());
    for (size_t i = 0; i < gaps.size(); ++i) samples[i] = mu_hat * static_cast<double>(gaps[i]);
    return ecdf_from_samples(samples);
}

StepCdf hitting_cdf_via_g(const StepCdf& ret_cdf, const EvalGrid& grid) {
    std::vector<double> pts = grid.merged_with(ret_cdf);
    std::vector<double> jumps, values;
    jumps.reserve(pts.size());
    values.reserve(pts.size());
    for (double t : pts) {
        if (t < 0.0) continue;
        // Censored edge effects can push the empirical mean a hair over 1;
        // hitting probabilities cap at 1 regardless.
        double g = std::min(ret_cdf.survival_integral_to(t), 1.0);
        jumps.push_back(t);
        values.push_back(g);
    }
    return StepCdf(std::move(jumps), std::move(values));
}

DirectHitting hitting_cdf_direct(const OccurrenceList& occ, uint64_t window_count, double mu_hat,
                                 uint64_t num_starts, uint64_t seed) {
    if (num_starts == 0) throw std::invalid_argument("num_starts must be positive");
    if (window_count == 0) throw std::invalid_argument("empty sequence window");
    if (!(mu_hat > 0.0)) throw std::invalid_argument("measure must be positive");
    Rng rng = Rng::stream(seed, "hitting.starts");
    DirectHitting out;
    out.sampled = num_starts;
    std::vector<double> waits;
    waits.reserve(num_starts);
    for (uint64_t i = 0; i < num_starts; ++i) {
        const uint64_t s = rng.next_below(window_count);
        // First occurrence strictly after the start.
        auto it = std::upper_bound(occ.begin(), occ.end(), s);
        if (it == occ.end()) {
            ++out.censored;
            continue;
        }
        waits.push_back(mu_hat * static_cast<double>(*it - s));
    }
    if (waits.empty()) throw std::invalid_argument("no samples");
    out.cdf = ecdf_from_samples(waits);
    return out;
}

namespace {

Intensities intensities_impl(const StepCdf& hitting, const EvalGrid& grid) {
    // Eval points: grid, jumps, and left limits at jumps. On a step CDF the
    // suprema against a continuous monotone reference are attained there.
    std::vector<double> pts = grid.merged_with(hitting);
    const auto& jumps = hitting.jumps();
    pts.reserve(pts.size() + jumps.size());
    for (double j : jumps) {
        double left = std::nextafter(j, 0.0);
        if (left >= 0.0) pts.push_back(left);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    Intensities out;
    double best_repel = -1.0, best_attract = -1.0;
    for (double t : pts) {
        if (t < 0.0) continue;
        const double diff = hitting.value_at(t) - exp_law(t);
        if (diff > best_repel) {
            best_repel = diff;
            out.t_repel = t;
        }
        if (-diff > best_attract) {
            best_attract = -diff;
            out.t_attract = t;
        }
        out.ks = std::max(out.ks, std::abs(diff));
    }
    out.repel = std::max(best_repel, 0.0);
    out.attract = std::max(best_attract, 0.0);
    return out;
}

}  // namespace

Intensities intensities(const StepCdf& hitting, const EvalGrid& grid) {
    return intensities_impl(hitting, grid);
}

double ks_to_exponential(const StepCdf& hitting, const EvalGrid& grid) {
    return intensities_impl(hitting, grid).ks;
}

BlockRecord analyze_block(const SymbolSequence& seq, const Block& block, const EvalGrid& grid) {
    BlockRecord rec;
    rec.block = block;
    OccurrenceList occ = scan_occurrences(seq, block);
    rec.count = occ.size();
    const uint64_t windows = seq.length() - block.length() + 1;
    rec.mu_hat = static_cast<double>(rec.count) / static_cast<double>(windows);
    if (rec.count < 2) throw std::invalid_argument("insufficient occurrences");
    rec.return_law = return_cdf(return_gaps(occ), rec.mu_hat);
    rec.g_curve = hitting_cdf_via_g(rec.return_law, grid);
    rec.hitting = rec.g_curve;
    rec.intens = intensities(rec.hitting, grid);
    return rec;
}

double SweepResult::weighted_repel_measure(double eps) const {
    double mass = 0.0;
    for (const auto& row : rows)
        if (row.eps_repel >= eps) mass += row.mu_hat;
    return mass;
}

double SweepResult::weighted_attract_measure(double eps) const {
    double mass = 0.0;
    for (const auto& row : rows)
        if (row.eps_attract >= eps) mass += row.mu_hat;
    return mass;
}

SweepResult block_sweep(const SymbolSequence& seq, uint32_t n, const SweepOptions& opts) {
    if (opts.min_count < 2) throw std::invalid_argument("min_count must be at least 2");
    auto blocks = scan_all_blocks(seq, n);

    SweepResult res;
    res.n = n;
    res.window_count = seq.length() - n + 1;
    res.distinct_blocks = blocks.size();

    std::vector<size_t> resolved_idx;
    const double inv_windows = 1.0 / static_cast<double>(res.window_count);
    for (size_t i = 0; i < blocks.size(); ++i) {
        const double mu = static_cast<double>(blocks[i].second.size()) * inv_windows;
        if (blocks[i].second.size() >= opts.min_count)
            resolved_idx.push_back(i);
        else
            res.unresolved_mass += mu;
    }
    res.resolved_blocks = resolved_idx.size();
    res.rows.resize(resolved_idx.size());

    parallel_chunks(resolved_idx.size(), opts.threads, [&](size_t begin, size_t end) {
        for (size_t j = begin; j < end; ++j) {
            const auto& [block, occ] = blocks[resolved_idx[j]];
            BlockStats& row = res.rows[j];
            row.block = block.to_string();
            row.count = occ.size();
            row.mu_hat = static_cast<double>(occ.size()) * inv_windows;
            StepCdf ret = return_cdf(return_gaps(occ), row.mu_hat);
            StepCdf hit = hitting_cdf_via_g(ret, opts.grid);
            Intensities in = intensities(hit, opts.grid);
            row.eps_repel = in.repel;
            row.t_repel = in.t_repel;
            row.eps_attract = in.attract;
            row.t_attract = in.t_attract;
            row.ks_exp = in.ks;
            if (opts.t_star >= 0.0)
                row.f_tstar = std::min(ret.survival_integral_to(opts.t_star), 1.0);
        }
    });
    for (const auto& row : res.rows) res.resolved_mass += row.mu_hat;
    return res;
}

}  // namespace serieslab
