#include "serieslab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "serieslab/analytic.hpp"
#include "serieslab/rng.hpp"

namespace serieslab {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

SweepRow summarize(const SweepResult& sweep, const std::vector<double>& eps_list) {
    SweepRow row;
    row.n = sweep.n;
    row.distinct_blocks = sweep.distinct_blocks;
    row.resolved_blocks = sweep.resolved_blocks;
    row.resolved_mass = sweep.resolved_mass;
    row.unresolved_mass = sweep.unresolved_mass;
    for (double eps : eps_list) {
        row.weighted_repel.push_back(sweep.weighted_repel_measure(eps));
        row.weighted_attract.push_back(sweep.weighted_attract_measure(eps));
    }
    std::vector<double> repel, ks;
    repel.reserve(sweep.rows.size());
    ks.reserve(sweep.rows.size());
    for (const auto& r : sweep.rows) {
        repel.push_back(r.eps_repel);
        ks.push_back(r.ks_exp);
    }
    row.median_eps_repel = median_of(std::move(repel));
    row.median_ks = median_of(std::move(ks));
    return row;
}

}  // namespace

SweepReport run_repel_decay_sweep(const ProcessPayload& payload, uint64_t length, uint64_t seed,
                                  uint32_t n_from, uint32_t n_to, std::vector<double> eps_list,
                                  uint64_t min_count, uint32_t threads) {
    if (n_from == 0 || n_to < n_from) throw std::invalid_argument("bad block-length range");
    if (eps_list.empty()) throw std::invalid_argument("eps list must be nonempty");
    SweepReport report;
    report.process = canonical_spec_string(payload);
    report.length = length;
    report.seed = seed;
    report.min_count = min_count;
    report.eps_list = std::move(eps_list);

    SymbolSequence seq = generate(payload, length, seed);
    SweepOptions opts;
    opts.min_count = min_count;
    opts.threads = threads;
    for (uint32_t n = n_from; n <= n_to; ++n) {
        SweepResult sweep = block_sweep(seq, n, opts);
        report.rows.push_back(summarize(sweep, report.eps_list));
        report.per_block.push_back(std::move(sweep.rows));
    }
    return report;
}

Example1Report run_example1_check(const Example1Params& params, uint64_t length, uint64_t seed,
                                  double repel_threshold, uint32_t threads) {
    Example1Report report;
    report.params = params;
    report.length = length;
    report.seed = seed;
    report.repel_threshold = repel_threshold;
    report.entropy_bits = example1_entropy(params.N0, params.n);

    DesignatedFamily fam = example1_designated_family(params);
    report.designated_blocks = fam.blocks.size();
    report.family_measure = fam.family_measure;
    report.block_measure = fam.block_measure;

    SymbolSequence seq = gen_example1(params, length, seed);
    auto all = scan_all_blocks(seq, params.n);
    const uint64_t windows = seq.length() - params.n + 1;
    const double inv_windows = 1.0 / static_cast<double>(windows);
    const double lo_factor = 1.0 - 1.0 / static_cast<double>(params.r);
    const double hi_factor = 1.0 + 1.0 / static_cast<double>(params.r);

    EvalGrid grid = EvalGrid::geometric();
    report.min_norm_gap = std::numeric_limits<double>::infinity();
    report.max_norm_gap = 0.0;
    report.designated.resize(fam.blocks.size());
    std::vector<uint8_t> gaps_ok(fam.blocks.size(), 1);
    std::vector<uint8_t> resolved(fam.blocks.size(), 0);
    std::vector<double> min_gap(fam.blocks.size(), std::numeric_limits<double>::infinity());
    std::vector<double> max_gap(fam.blocks.size(), 0.0);

    // Lex-sorted scan results allow binary search per designated block.
    auto find_occ = [&](const Block& b) -> const OccurrenceList* {
        auto it = std::lower_bound(all.begin(), all.end(), b.word,
                                   [](const auto& entry, const std::vector<uint8_t>& w) {
                                       return entry.first.word < w;
                                   });
        if (it == all.end() || it->first.word != b.word) return nullptr;
        return &it->second;
    };

    for (size_t i = 0; i < fam.blocks.size(); ++i) {
        const Block& b = fam.blocks[i];
        BlockStats& row = report.designated[i];
        row.block = b.to_string();
        const OccurrenceList* occ = find_occ(b);
        if (!occ || occ->size() < 2) {
            row.count = occ ? occ->size() : 0;
            row.mu_hat = static_cast<double>(row.count) * inv_windows;
            continue;
        }
        resolved[i] = 1;
        row.count = occ->size();
        row.mu_hat = static_cast<double>(row.count) * inv_windows;
        auto gaps = return_gaps(*occ);
        const double lo = lo_factor / row.mu_hat;
        const double hi = hi_factor / row.mu_hat;
        for (uint64_t g : gaps) {
            const double gd = static_cast<double>(g);
            if (gd < lo || gd > hi) gaps_ok[i] = 0;
            min_gap[i] = std::min(min_gap[i], gd * row.mu_hat);
            max_gap[i] = std::max(max_gap[i], gd * row.mu_hat);
        }
        StepCdf ret = return_cdf(gaps, row.mu_hat);
        StepCdf hit = hitting_cdf_via_g(ret, grid);
        Intensities in = intensities(hit, grid);
        row.eps_repel = in.repel;
        row.t_repel = in.t_repel;
        row.eps_attract = in.attract;
        row.t_attract = in.t_attract;
        row.ks_exp = in.ks;
    }
    (void)threads;

    uint64_t repelling = 0;
    for (size_t i = 0; i < fam.blocks.size(); ++i) {
        report.designated_mass += report.designated[i].mu_hat;
        if (!resolved[i]) {
            report.gaps_within_window = false;
            continue;
        }
        ++report.designated_resolved;
        if (!gaps_ok[i]) report.gaps_within_window = false;
        report.min_norm_gap = std::min(report.min_norm_gap, min_gap[i]);
        report.max_norm_gap = std::max(report.max_norm_gap, max_gap[i]);
        if (report.designated[i].eps_repel >= repel_threshold) ++repelling;
    }
    report.repel_fraction = fam.blocks.empty()
                                ? 0.0
                                : static_cast<double>(repelling) /
                                      static_cast<double>(fam.blocks.size());
    return report;
}

std::vector<uint32_t> default_probe_lengths(uint32_t N, size_t cap) {
    if (N < 2) throw std::invalid_argument("probe window requires N >= 2");
    const uint64_t lo = N;
    const uint64_t hi = static_cast<uint64_t>(N) * N;
    std::vector<uint32_t> out;
    if (hi - lo + 1 <= cap) {
        for (uint64_t n = lo; n <= hi; ++n) out.push_back(static_cast<uint32_t>(n));
        return out;
    }
    const double step = static_cast<double>(hi - lo) / static_cast<double>(cap - 1);
    for (size_t i = 0; i < cap; ++i) {
        auto n = static_cast<uint32_t>(std::llround(static_cast<double>(lo) + step * i));
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    return out;
}

namespace {

AttractProbe probe_from_sweep(const SweepResult& sweep, double eps_star) {
    AttractProbe p;
    p.n = sweep.n;
    p.distinct_blocks = sweep.distinct_blocks;
    p.resolved_blocks = sweep.resolved_blocks;
    p.resolved_mass = sweep.resolved_mass;
    p.unresolved_mass = sweep.unresolved_mass;
    for (const auto& row : sweep.rows) {
        if (row.f_tstar >= 0.0 && row.f_tstar < eps_star) {
            ++p.qualifying_blocks;
            p.qualifying_mass += row.mu_hat;
        }
    }
    p.qualifying_fraction = p.resolved_mass > 0.0 ? p.qualifying_mass / p.resolved_mass : 0.0;
    return p;
}

}  // namespace

AttractReport run_lawofseries_demo(const LawOfSeriesParams& params, uint64_t length, uint64_t seed,
                                   double t_star, double eps_star, uint64_t min_count,
                                   std::vector<uint32_t> probe_lengths, uint32_t threads) {
    if (!(t_star >= 0.0)) throw std::invalid_argument("negative time");
    AttractReport report;
    report.params = params;
    report.length = length;
    report.seed = seed;
    report.t_star = t_star;
    report.eps_star = eps_star;
    report.min_count = min_count;
    report.probe_lengths =
        probe_lengths.empty() ? default_probe_lengths(params.N) : std::move(probe_lengths);

    // Same derivation as generate() on a lawofseries payload, but keeping the
    // base sequence for the before/after comparison.
    ProcessPayload base_payload = parse_process_spec(params.base_spec);
    if (std::holds_alternative<LawOfSeriesParams>(base_payload))
        throw std::invalid_argument("nested lawofseries base is not supported");
    const uint64_t base_seed = Rng::stream(seed, "lawseries.base").next_u64();
    SymbolSequence base = generate(base_payload, length, base_seed);
    LawOfSeriesResult modified = apply_law_of_series(base, params, seed);

    report.symbol_a = modified.log.a;
    report.symbol_b = modified.log.b;
    for (const auto& w : modified.log.words) report.words.push_back(w.to_string());
    report.replacements = modified.log.replacements;
    report.changed_symbols = modified.log.changed_symbols;
    report.changed_fraction = modified.log.changed_fraction;

    SweepOptions opts;
    opts.min_count = min_count;
    opts.threads = threads;
    opts.t_star = t_star;
    for (uint32_t n : report.probe_lengths) {
        SweepResult before = block_sweep(base, n, opts);
        report.before.push_back(probe_from_sweep(before, eps_star));
        SweepResult after = block_sweep(modified.sequence, n, opts);
        report.after.push_back(probe_from_sweep(after, eps_star));
        report.after_rows.push_back(std::move(after.rows));
    }
    return report;
}

UnbiasedReport run_unbiased_check(const ProcessPayload& payload, uint64_t length, uint64_t seed,
                                  const std::vector<uint32_t>& n_list, uint64_t min_count,
                                  uint32_t threads) {
    if (!std::holds_alternative<BernoulliParams>(payload))
        throw std::invalid_argument("unbiased check requires an i.i.d. process");
    if (n_list.empty()) throw std::invalid_argument("need at least one block length");
    UnbiasedReport report;
    report.process = canonical_spec_string(payload);
    report.length = length;
    report.seed = seed;
    report.min_count = min_count;

    SymbolSequence seq = generate(payload, length, seed);
    SweepOptions opts;
    opts.min_count = min_count;
    opts.threads = threads;
    for (uint32_t n : n_list) {
        SweepResult sweep = block_sweep(seq, n, opts);
        UnbiasedRow row;
        row.n = n;
        row.resolved_blocks = sweep.resolved_blocks;
        row.unresolved_mass = sweep.unresolved_mass;
        std::vector<double> ks;
        ks.reserve(sweep.rows.size());
        for (const auto& r : sweep.rows) {
            ks.push_back(r.ks_exp);
            row.max_ks = std::max(row.max_ks, r.ks_exp);
        }
        row.median_ks = median_of(std::move(ks));
        report.rows.push_back(row);
    }
    return report;
}

OracleReport run_oracle_equivalence(const MarkovParams& chain, const std::vector<Block>& blocks,
                                    uint64_t length, uint64_t seed) {
    SymbolSequence seq = gen_markov(chain, length, seed);
    OracleReport report = run_oracle_equivalence_on(seq, chain, blocks);
    report.seed = seed;
    return report;
}

OracleReport run_oracle_equivalence_on(const SymbolSequence& seq, const MarkovParams& chain,
                                       const std::vector<Block>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("need at least one block");
    if (seq.alphabet.size != chain.transition.size())
        throw std::invalid_argument("sequence alphabet does not match the chain");
    OracleReport report;
    report.process = canonical_spec_string(chain);
    report.length = seq.length();
    report.seed = seq.provenance.seed;
    report.pass = true;

    for (const Block& block : blocks) {
        OracleBlockResult res;
        res.block = block.to_string();
        MarkovReturnOracle oracle = markov_return_oracle(chain.transition, block, 1e-9);
        res.mu_exact = oracle.mu;
        OccurrenceList occ = scan_occurrences(seq, block);
        res.count = occ.size();
        const uint64_t windows = seq.length() - block.length() + 1;
        res.mu_hat = static_cast<double>(res.count) / static_cast<double>(windows);
        if (occ.size() < 2) {
            res.sup_dev = 1.0;
            res.bound = 0.0;
            res.pass = false;
            report.pass = false;
            report.blocks.push_back(std::move(res));
            continue;
        }
        auto gaps = return_gaps(occ);
        std::vector<double> samples(gaps.size());
        for (size_t i = 0; i < gaps.size(); ++i) samples[i] = static_cast<double>(gaps[i]);
        StepCdf emp = ecdf_from_samples(samples);
        // Both CDFs live on integer steps: the sup over all t is attained on
        // the union of their jump points.
        std::vector<double> pts = emp.jumps();
        pts.insert(pts.end(), oracle.absolute_cdf.jumps().begin(),
                   oracle.absolute_cdf.jumps().end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        double sup = 0.0;
        for (double t : pts)
            sup = std::max(sup, std::abs(emp.value_at(t) - oracle.absolute_cdf.value_at(t)));
        res.sup_dev = sup;
        const double m = static_cast<double>(gaps.size());
        // High-confidence empirical-CDF envelope plus the oracle truncation
        // tail and a small dependent-sampling slack.
        res.bound = std::sqrt(std::log(2.0 / 1e-6) / (2.0 * m)) + oracle.tail_mass + 8.0 / m;
        res.pass = sup <= res.bound;
        if (!res.pass) report.pass = false;
        report.blocks.push_back(std::move(res));
    }
    return report;
}

}  // namespace serieslab
