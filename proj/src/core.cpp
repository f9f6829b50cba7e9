#include "serieslab/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace serieslab {

void Alphabet::validate() const {
    if (size < 2) throw std::invalid_argument("alphabet size must be >= 2");
    if (size > 256) throw std::invalid_argument("alphabet size must be <= 256");
    if (!labels.empty()) {
        if (labels.size() != size)
            throw std::invalid_argument("label count must match alphabet size");
        std::unordered_set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size())
            throw std::invalid_argument("alphabet labels must be distinct");
    }
}

std::string Alphabet::symbol_name(uint32_t sym) const {
    if (!labels.empty() && sym < labels.size()) return labels[sym];
    return std::to_string(sym);
}

void SymbolSequence::validate() const {
    alphabet.validate();
    for (uint8_t s : data)
        if (s >= alphabet.size)
            throw std::invalid_argument("symbol out of alphabet range");
}

void Block::validate() const {
    alphabet.validate();
    if (word.empty()) throw std::invalid_argument("block must be nonempty");
    for (uint8_t s : word)
        if (s >= alphabet.size)
            throw std::invalid_argument("block symbol out of alphabet range");
}

std::string Block::to_string() const {
    std::string out;
    bool digits = alphabet.size <= 10 && alphabet.labels.empty();
    for (size_t i = 0; i < word.size(); ++i) {
        if (digits) {
            out += static_cast<char>('0' + word[i]);
        } else {
            if (i) out += ',';
            out += alphabet.symbol_name(word[i]);
        }
    }
    return out;
}

Block parse_block(const std::string& text, const Alphabet& alphabet) {
    Block b;
    b.alphabet = alphabet;
    if (text.find(',') == std::string::npos && alphabet.size <= 10) {
        for (char c : text) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad block symbol: " + text);
            b.word.push_back(static_cast<uint8_t>(c - '0'));
        }
    } else {
        size_t pos = 0;
        while (pos <= text.size()) {
            size_t comma = text.find(',', pos);
            std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
            if (tok.empty()) throw std::invalid_argument("bad block symbol: " + text);
            b.word.push_back(static_cast<uint8_t>(std::stoul(tok)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    b.validate();
    return b;
}

StepCdf::StepCdf(std::vector<double> jumps, std::vector<double> values)
    : jumps_(std::move(jumps)), values_(std::move(values)) {
    if (jumps_.size() != values_.size())
        throw std::invalid_argument("jumps/values size mismatch");
    double prev_t = -1.0, prev_v = 0.0;
    for (size_t i = 0; i < jumps_.size(); ++i) {
        if (!(jumps_[i] >= 0.0)) throw std::invalid_argument("negative time");
        if (i > 0 && !(jumps_[i] > prev_t))
            throw std::invalid_argument("jumps must be strictly increasing");
        if (!(values_[i] >= prev_v - 1e-15))
            throw std::invalid_argument("values must be nondecreasing");
        if (values_[i] > 1.0 + 1e-12)
            throw std::invalid_argument("values must stay within [0,1]");
        values_[i] = std::min(values_[i], 1.0);
        prev_t = jumps_[i];
        prev_v = values_[i];
    }
    // Survival integral accumulated up to each jump; segment i contributes
    // (1 - value_i) * (t_{i+1} - t_i) exactly.
    prefix_.resize(jumps_.size());
    double acc = jumps_.empty() ? 0.0 : jumps_[0];  // survival is 1 before the first jump
    for (size_t i = 0; i < jumps_.size(); ++i) {
        prefix_[i] = acc;
        if (i + 1 < jumps_.size()) acc += (1.0 - values_[i]) * (jumps_[i + 1] - jumps_[i]);
    }
}

double StepCdf::value_at(double t) const {
    // Largest jump <= t; right-continuous.
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t);
    if (it == jumps_.begin()) return 0.0;
    return values_[static_cast<size_t>(it - jumps_.begin()) - 1];
}

double StepCdf::survival_integral_to(double t) const {
    if (t < 0.0) throw std::invalid_argument("negative time");
    if (jumps_.empty() || t <= jumps_.front()) return t;
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t);
    size_t i = static_cast<size_t>(it - jumps_.begin()) - 1;
    return prefix_[i] + (1.0 - values_[i]) * (t - jumps_[i]);
}

double StepCdf::mean() const {
    if (jumps_.empty() || values_.back() < 1.0)
        throw std::invalid_argument("mean undefined: cdf does not reach 1");
    return survival_integral_to(jumps_.back());
}

StepCdf ecdf_from_samples(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double s : sorted)
        if (!(s >= 0.0)) throw std::invalid_argument("negative time");
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> jumps, values;
    const double n = static_cast<double>(sorted.size());
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        jumps.push_back(sorted[i]);
        values.push_back(static_cast<double>(j) / n);
        i = j;
    }
    return StepCdf(std::move(jumps), std::move(values));
}

double cdf_eval(const StepCdf& cdf, double t) { return cdf.value_at(t); }

double cdf_integral_of_survival(const StepCdf& cdf, double t) {
    return cdf.survival_integral_to(t);
}

EvalGrid EvalGrid::geometric(size_t count, double lo, double hi) {
    if (count < 2 || !(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("bad grid parameters");
    EvalGrid g;
    g.points.resize(count);
    const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
    double t = lo;
    for (size_t i = 0; i < count; ++i) {
        g.points[i] = t;
        t *= ratio;
    }
    g.points.back() = hi;
    return g;
}

std::vector<double> EvalGrid::merged_with(const StepCdf& cdf) const {
    std::vector<double> out = points;
    out.insert(out.end(), cdf.jumps().begin(), cdf.jumps().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace serieslab
