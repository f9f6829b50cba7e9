#include "serieslab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "serieslab/rng.hpp"

namespace serieslab {

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void check_prob_vector(const std::vector<double>& probs) {
    if (probs.size() < 2 || probs.size() > 256)
        throw std::invalid_argument("probability vector needs 2..256 entries");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("probabilities must sum to 1");
}

Alphabet index_alphabet(uint32_t size) {
    Alphabet a;
    a.size = size;
    return a;
}

Provenance make_provenance(const std::string& generator, const std::string& canonical,
                           uint64_t seed) {
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    return Provenance{generator, digest, seed};
}

}  // namespace

SymbolSequence gen_bernoulli(const std::vector<double>& probs, uint64_t length, uint64_t seed) {
    check_prob_vector(probs);
    SymbolSequence seq;
    seq.alphabet = index_alphabet(static_cast<uint32_t>(probs.size()));
    seq.data.resize(length);
    Rng rng = Rng::stream(seed, "bernoulli");
    // Cumulative thresholds once, then one uniform draw per symbol.
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cum[i] = acc;
    }
    cum.back() = 1.0;
    for (uint64_t i = 0; i < length; ++i) {
        double u = rng.next_double();
        uint32_t s = 0;
        while (u >= cum[s]) ++s;
        seq.data[i] = static_cast<uint8_t>(s);
    }
    seq.provenance =
        make_provenance("bernoulli", canonical_spec_string(BernoulliParams{probs}), seed);
    return seq;
}

std::vector<double> markov_stationary(const std::vector<std::vector<double>>& transition) {
    const size_t m = transition.size();
    // Solve x^T P = x^T, sum x = 1: rows of A are (P^T - I) with the last
    // row replaced by all-ones; dense Gaussian elimination, partial pivoting.
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) a[i][j] = transition[j][i] - (i == j ? 1.0 : 0.0);
    }
    for (size_t j = 0; j < m; ++j) a[m - 1][j] = 1.0;
    a[m - 1][m] = 1.0;
    for (size_t col = 0; col < m; ++col) {
        size_t piv = col;
        for (size_t i = col + 1; i < m; ++i)
            if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
        if (std::abs(a[piv][col]) < 1e-14) {
            // Singular system: the chain has several stationary vectors
            // (e.g. the identity chain). Fall back to iterating the lazy
            // chain (P+I)/2 from uniform, which converges for any chain and
            // picks a canonical stationary vector.
            std::vector<double> x(m, 1.0 / static_cast<double>(m)), next(m);
            for (int iter = 0; iter < 100000; ++iter) {
                double delta = 0.0;
                for (size_t j = 0; j < m; ++j) {
                    double acc = 0.5 * x[j];
                    for (size_t i = 0; i < m; ++i) acc += 0.5 * x[i] * transition[i][j];
                    next[j] = acc;
                }
                for (size_t j = 0; j < m; ++j) delta = std::max(delta, std::abs(next[j] - x[j]));
                x.swap(next);
                if (delta < 1e-15) break;
            }
            return x;
        }
        std::swap(a[col], a[piv]);
        for (size_t i = 0; i < m; ++i) {
            if (i == col) continue;
            double f = a[i][col] / a[col][col];
            if (f == 0.0) continue;
            for (size_t j = col; j <= m; ++j) a[i][j] -= f * a[col][j];
        }
    }
    std::vector<double> pi(m);
    for (size_t i = 0; i < m; ++i) pi[i] = a[i][m] / a[i][i];
    for (double& v : pi) v = std::max(v, 0.0);
    double sum = 0.0;
    for (double v : pi) sum += v;
    for (double& v : pi) v /= sum;
    return pi;
}

SymbolSequence gen_markov(const MarkovParams& params, uint64_t length, uint64_t seed) {
    const size_t m = params.transition.size();
    if (m < 2 || m > 256) throw std::invalid_argument("transition matrix needs 2..256 states");
    for (const auto& row : params.transition) {
        if (row.size() != m) throw std::invalid_argument("transition matrix must be square");
        check_prob_vector(row);
    }
    std::vector<double> initial = params.initial;
    if (initial.empty()) {
        initial = markov_stationary(params.transition);
    } else {
        if (initial.size() != m)
            throw std::invalid_argument("initial distribution size mismatch");
        check_prob_vector(initial);
    }
    SymbolSequence seq;
    seq.alphabet = index_alphabet(static_cast<uint32_t>(m));
    seq.data.resize(length);
    Rng rng = Rng::stream(seed, "markov");
    if (length > 0) {
        uint32_t cur = rng.pick(initial);
        seq.data[0] = static_cast<uint8_t>(cur);
        for (uint64_t i = 1; i < length; ++i) {
            cur = rng.pick(params.transition[cur]);
            seq.data[i] = static_cast<uint8_t>(cur);
        }
    }
    seq.provenance = make_provenance("markov", canonical_spec_string(params), seed);
    return seq;
}

SymbolSequence gen_periodic(const PeriodicParams& params, uint64_t length, uint64_t seed) {
    if (params.pattern.empty()) throw std::invalid_argument("periodic pattern must be nonempty");
    uint32_t maxsym = 0;
    for (uint8_t s : params.pattern) maxsym = std::max<uint32_t>(maxsym, s);
    uint32_t asize = params.alphabet_size ? params.alphabet_size : maxsym + 1;
    asize = std::max<uint32_t>(asize, 2);
    if (maxsym >= asize) throw std::invalid_argument("pattern symbol out of alphabet range");
    SymbolSequence seq;
    seq.alphabet = index_alphabet(asize);
    seq.data.resize(length);
    const size_t q = params.pattern.size();
    size_t phase = static_cast<size_t>(Rng::stream(seed, "periodic.phase").next_below(q));
    for (uint64_t i = 0; i < length; ++i)
        seq.data[i] = params.pattern[(phase + i) % q];
    seq.provenance = make_provenance("periodic", canonical_spec_string(params), seed);
    return seq;
}

namespace {

uint64_t example1_class_block_count(const Example1Params& p) {
    uint64_t m = 1;
    for (uint32_t i = 0; i + 1 < p.n; ++i) {
        m *= p.N0;
        if (m > 100000)
            throw std::invalid_argument("example1: N0^(n-1) exceeds the 1e5 guard");
    }
    return m;
}

void check_example1(const Example1Params& p) {
    if (p.N0 < 2 || p.n < 2 || p.r < 2)
        throw std::invalid_argument("example1 requires N0 >= 2, n >= 2, r >= 2");
    if (p.N0 + p.r > 256) throw std::invalid_argument("example1 alphabet exceeds 256 symbols");
    example1_class_block_count(p);
}

}  // namespace

double example1_entropy(uint32_t N0, uint32_t n) {
    Example1Params p{N0, n, 2};
    if (N0 < 2 || n < 2) throw std::invalid_argument("example1 requires N0 >= 2, n >= 2");
    double m = static_cast<double>(example1_class_block_count(p));
    double log2_fact = std::lgamma(m + 1.0) / std::log(2.0);
    return log2_fact / (static_cast<double>(n) * m);
}

DesignatedFamily example1_designated_family(const Example1Params& params) {
    check_example1(params);
    const uint64_t m = example1_class_block_count(params);
    DesignatedFamily fam;
    Alphabet alpha = index_alphabet(params.N0 + params.r);
    fam.blocks.reserve(static_cast<size_t>(m) * params.r);
    for (uint32_t marker = 0; marker < params.r; ++marker) {
        for (uint64_t j = 0; j < m; ++j) {
            Block b;
            b.alphabet = alpha;
            b.word.resize(params.n);
            uint64_t v = j;
            for (uint32_t d = params.n - 1; d-- > 0;) {
                b.word[d] = static_cast<uint8_t>(v % params.N0);
                v /= params.N0;
            }
            b.word[params.n - 1] = static_cast<uint8_t>(params.N0 + marker);
            fam.blocks.push_back(std::move(b));
        }
    }
    fam.block_measure = 1.0 / (static_cast<double>(params.n) * static_cast<double>(params.r) *
                               static_cast<double>(m));
    fam.family_measure = 1.0 / static_cast<double>(params.n);
    return fam;
}

SymbolSequence gen_example1(const Example1Params& params, uint64_t length, uint64_t seed) {
    check_example1(params);
    const uint64_t m = example1_class_block_count(params);
    const uint64_t cycle_len = static_cast<uint64_t>(params.r) * params.n * m;

    SymbolSequence seq;
    seq.alphabet = index_alphabet(params.N0 + params.r);
    seq.data.reserve(length);

    uint64_t skip = Rng::stream(seed, "example1.phase").next_below(cycle_len);
    Rng perm_rng = Rng::stream(seed, "example1.perm");

    std::vector<uint32_t> perm(m);
    std::vector<uint8_t> digits(params.n - 1);
    auto emit = [&](uint8_t sym) {
        if (skip > 0) {
            --skip;
            return;
        }
        if (seq.data.size() < length) seq.data.push_back(sym);
    };
    while (seq.data.size() < length) {
        for (uint32_t marker = 0; marker < params.r && seq.data.size() < length; ++marker) {
            for (uint64_t j = 0; j < m; ++j) perm[j] = static_cast<uint32_t>(j);
            perm_rng.shuffle(perm);
            for (uint64_t idx = 0; idx < m && seq.data.size() < length; ++idx) {
                uint64_t v = perm[idx];
                for (uint32_t d = params.n - 1; d-- > 0;) {
                    digits[d] = static_cast<uint8_t>(v % params.N0);
                    v /= params.N0;
                }
                for (uint32_t d = 0; d + 1 < params.n; ++d) emit(digits[d]);
                emit(static_cast<uint8_t>(params.N0 + marker));
            }
        }
    }
    seq.provenance = make_provenance("example1", canonical_spec_string(params), seed);
    return seq;
}

namespace {

struct WordCandidate {
    std::string_view word;
    const std::vector<uint64_t>* positions;
};

void check_lawofseries(const LawOfSeriesParams& p) {
    if (p.k < 2) throw std::invalid_argument("lawofseries requires k >= 2");
    if (p.l < 2) throw std::invalid_argument("lawofseries requires l >= 2");
    if (p.p == 0 || p.l >= p.p) throw std::invalid_argument("lawofseries requires l < p");
    if (p.N == 0 || static_cast<uint64_t>(p.N) * p.N > p.p)
        throw std::invalid_argument("lawofseries requires N*N <= p");
}

}  // namespace

LawOfSeriesResult apply_law_of_series(const SymbolSequence& base, const LawOfSeriesParams& params,
                                      uint64_t seed) {
    check_lawofseries(params);
    base.validate();
    if (base.alphabet.size < 2) throw std::invalid_argument("alphabet too small");
    const uint64_t L = base.length();
    const uint32_t l = params.l;
    const uint32_t k = params.k;
    const uint64_t r = static_cast<uint64_t>(k) * params.p;
    if (L < l || L < r) throw std::invalid_argument("sequence too short for the construction");

    // a = most frequent symbol (words start and end with it), b = least
    // frequent other symbol (the replacement fill); ties break to the lower
    // index so the choice is deterministic.
    std::vector<uint64_t> counts(base.alphabet.size, 0);
    for (uint8_t s : base.data) ++counts[s];
    uint8_t a = 0, b = 0;
    for (uint32_t s = 1; s < base.alphabet.size; ++s)
        if (counts[s] > counts[a]) a = static_cast<uint8_t>(s);
    b = (a == 0) ? 1 : 0;
    for (uint32_t s = 0; s < base.alphabet.size; ++s)
        if (s != a && counts[s] < counts[b]) b = static_cast<uint8_t>(s);

    // Word search: distinct l-words starting and ending with `a` and free of
    // `b`. Excluding `b` keeps the key invariant airtight: replacements write
    // only `b`, so they can never create a fresh occurrence of any chosen word.
    const uint8_t* raw = base.data.data();
    std::unordered_map<std::string_view, std::vector<uint64_t>> found;
    for (uint64_t pos = 0; pos + l <= L; ++pos) {
        if (raw[pos] != a || raw[pos + l - 1] != a) continue;
        bool clean = true;
        for (uint32_t j = 1; j + 1 < l; ++j) {
            if (raw[pos + j] == b) {
                clean = false;
                break;
            }
        }
        if (!clean) continue;
        std::string_view key(reinterpret_cast<const char*>(raw + pos), l);
        found[key].push_back(pos);
    }
    std::vector<WordCandidate> candidates;
    candidates.reserve(found.size());
    for (const auto& [word, positions] : found) candidates.push_back({word, &positions});
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
        if (x.positions->size() != y.positions->size())
            return x.positions->size() > y.positions->size();
        return x.word < y.word;
    });

    // Greedy selection: most frequent first, each must contribute a witness
    // occurrence that does not overlap any previously chosen witness.
    std::vector<WordCandidate> chosen;
    std::vector<std::pair<uint64_t, uint64_t>> witnesses;  // [start, end)
    for (const auto& cand : candidates) {
        if (chosen.size() == k) break;
        for (uint64_t pos : *cand.positions) {
            bool overlaps = false;
            for (const auto& [ws, we] : witnesses) {
                if (pos < we && ws < pos + l) {
                    overlaps = true;
                    break;
                }
            }
            if (!overlaps) {
                chosen.push_back(cand);
                witnesses.emplace_back(pos, pos + l);
                break;
            }
        }
    }
    if (chosen.size() < k) throw std::invalid_argument("words not found");

    // Marker grid: components of length r or r+1, fair coin per component.
    Rng grid_rng = Rng::stream(seed, "lawseries.grid");
    std::vector<uint64_t> component_starts;
    std::vector<uint64_t> component_lens;
    for (uint64_t start = 0; start < L;) {
        uint64_t len = r + (grid_rng.next_u64() & 1);
        component_starts.push_back(start);
        component_lens.push_back(len);
        start += len;
    }

    LawOfSeriesResult result;
    result.sequence.alphabet = base.alphabet;
    result.sequence.data = base.data;
    uint8_t* out = result.sequence.data.data();

    ConstructionLog& log = result.log;
    log.a = a;
    log.b = b;
    log.replacements.assign(k, 0);
    log.component_starts = component_starts;
    for (const auto& cand : chosen) {
        Block wb;
        wb.alphabet = base.alphabet;
        wb.word.assign(cand.word.begin(), cand.word.end());
        log.words.push_back(std::move(wb));
    }

    // Within sub-block i of every component, plus the first N*N positions of
    // the following sub-block (which begins right at sub_end, also across the
    // component boundary), overwrite every occurrence of word i with b^l.
    // Left-to-right; after a replacement no new match can start inside the
    // written b-run because the words are b-free.
    const uint64_t reach = static_cast<uint64_t>(params.N) * params.N;
    for (size_t c = 0; c < component_starts.size(); ++c) {
        const uint64_t s = component_starts[c];
        const uint64_t comp_end = std::min(s + component_lens[c], L);
        for (uint32_t i = 0; i < k; ++i) {
            const uint64_t sub_start = s + static_cast<uint64_t>(i) * params.p;
            if (sub_start >= comp_end) break;
            const uint64_t sub_end = (i + 1 == k) ? comp_end
                                                  : std::min(s + static_cast<uint64_t>(i + 1) * params.p,
                                                             comp_end);
            const uint64_t zone_end = std::min(sub_end + reach, L);
            const uint8_t* w = reinterpret_cast<const uint8_t*>(chosen[i].word.data());
            uint64_t j = sub_start;
            while (j < zone_end && j + l <= L) {
                if (out[j] == w[0] && std::memcmp(out + j, w, l) == 0) {
                    std::memset(out + j, b, l);
                    ++log.replacements[i];
                    j += l;
                } else {
                    ++j;
                }
            }
        }
    }

    uint64_t changed = 0;
    for (uint64_t i = 0; i < L; ++i)
        if (out[i] != base.data[i]) ++changed;
    log.changed_symbols = changed;
    log.changed_fraction = L ? static_cast<double>(changed) / static_cast<double>(L) : 0.0;

    std::string canon = canonical_spec_string(params) + ";base_digest=" +
                        base.provenance.param_digest + ";base_gen=" + base.provenance.generator;
    result.sequence.provenance = make_provenance("lawofseries", canon, seed);
    return result;
}

std::string canonical_spec_string(const ProcessPayload& payload) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BernoulliParams>) {
                std::string s = "bernoulli:";
                for (size_t i = 0; i < p.probs.size(); ++i) {
                    if (i) s += ',';
                    s += fmt_double(p.probs[i]);
                }
                return s;
            } else if constexpr (std::is_same_v<T, MarkovParams>) {
                std::string s = "markov:rows=[";
                for (size_t i = 0; i < p.transition.size(); ++i) {
                    if (i) s += ';';
                    for (size_t j = 0; j < p.transition[i].size(); ++j) {
                        if (j) s += ',';
                        s += fmt_double(p.transition[i][j]);
                    }
                }
                s += "];initial=[";
                for (size_t i = 0; i < p.initial.size(); ++i) {
                    if (i) s += ',';
                    s += fmt_double(p.initial[i]);
                }
                s += "]";
                return s;
            } else if constexpr (std::is_same_v<T, PeriodicParams>) {
                std::string s = "periodic:";
                for (size_t i = 0; i < p.pattern.size(); ++i) {
                    if (i) s += ',';
                    s += std::to_string(p.pattern[i]);
                }
                s += ";alphabet=" + std::to_string(p.alphabet_size);
                return s;
            } else if constexpr (std::is_same_v<T, Example1Params>) {
                return "example1:N0=" + std::to_string(p.N0) + ",n=" + std::to_string(p.n) +
                       ",r=" + std::to_string(p.r);
            } else {
                return "lawofseries:base=(" + p.base_spec + ");k=" + std::to_string(p.k) +
                       ";l=" + std::to_string(p.l) + ";p=" + std::to_string(p.p) +
                       ";N=" + std::to_string(p.N);
            }
        },
        payload);
}

SymbolSequence generate(const ProcessPayload& payload, uint64_t length, uint64_t seed) {
    return std::visit(
        [&](const auto& p) -> SymbolSequence {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BernoulliParams>) {
                return gen_bernoulli(p.probs, length, seed);
            } else if constexpr (std::is_same_v<T, MarkovParams>) {
                return gen_markov(p, length, seed);
            } else if constexpr (std::is_same_v<T, PeriodicParams>) {
                return gen_periodic(p, length, seed);
            } else if constexpr (std::is_same_v<T, Example1Params>) {
                return gen_example1(p, length, seed);
            } else {
                ProcessPayload base_payload = parse_process_spec(p.base_spec);
                if (std::holds_alternative<LawOfSeriesParams>(base_payload))
                    throw std::invalid_argument("nested lawofseries base is not supported");
                uint64_t base_seed = Rng::stream(seed, "lawseries.base").next_u64();
                SymbolSequence base = generate(base_payload, length, base_seed);
                return apply_law_of_series(base, p, seed).sequence;
            }
        },
        payload);
}

}  // namespace serieslab
