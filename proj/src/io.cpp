#include "serieslab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace serieslab {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'S', 'E', 'R', 'I', 'E', 'S', 'E', 'Q'};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void put_u32_le(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64_le(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t get_le(const unsigned char* p, int bytes) {
    uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
}

ordered_json cdf_json(const StepCdf& cdf) {
    return ordered_json{{"jumps", cdf.jumps()}, {"values", cdf.values()}};
}

ordered_json intens_json(const Intensities& in) {
    return ordered_json{{"eps_repel", in.repel},     {"t_repel", in.t_repel},
                        {"eps_attract", in.attract}, {"t_attract", in.t_attract},
                        {"ks_exp", in.ks}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& token) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + token + "'");
    }
    if (used != token.size()) throw std::invalid_argument("not a number: '" + token + "'");
    return v;
}

uint64_t parse_u64(const std::string& token) {
    size_t used = 0;
    unsigned long long v;
    try {
        v = std::stoull(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + token + "'");
    }
    if (used != token.size()) throw std::invalid_argument("not an integer: '" + token + "'");
    return v;
}

nlohmann::json parse_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

std::vector<uint8_t> parse_symbol_word(const std::string& text) {
    std::vector<uint8_t> word;
    if (text.find(',') == std::string::npos) {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("bad symbol '" + std::string(1, c) + "'");
            word.push_back(static_cast<uint8_t>(c - '0'));
        }
    } else {
        for (const auto& tok : split(text, ',')) {
            uint64_t v = parse_u64(tok);
            if (v > 255) throw std::invalid_argument("symbol out of byte range: " + tok);
            word.push_back(static_cast<uint8_t>(v));
        }
    }
    if (word.empty()) throw std::invalid_argument("empty symbol pattern");
    return word;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream lin(path, std::ios::binary);
    if (!lin) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << lin.rdbuf();
    return buf.str();
}

void write_sequence(const SymbolSequence& seq, const std::string& path) {
    seq.validate();
    std::string out;
    out.reserve(20 + seq.length());
    out.append(kMagic, sizeof(kMagic));
    put_u32_le(out, seq.alphabet.size);
    put_u64_le(out, seq.length());
    out.append(reinterpret_cast<const char*>(seq.data.data()), seq.data.size());
    write_text_file(path, out);

    ordered_json side{{"format", "SERIESEQ"},
                      {"length", seq.length()},
                      {"alphabet", ordered_json{{"size", seq.alphabet.size},
                                                {"labels", seq.alphabet.labels}}},
                      {"provenance", ordered_json{{"generator", seq.provenance.generator},
                                                  {"param_digest", seq.provenance.param_digest},
                                                  {"seed", seq.provenance.seed}}}};
    write_text_file(path + ".json", dump(side));
}

SymbolSequence read_sequence(const std::string& path) {
    std::string raw = read_text_file(path);
    if (raw.size() < 20 || raw.compare(0, 8, kMagic, 8) != 0)
        throw std::runtime_error("not a SERIESEQ file");
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    const auto alpha = static_cast<uint32_t>(get_le(p + 8, 4));
    const uint64_t length = get_le(p + 12, 8);
    if (alpha == 0 || alpha > 256 || raw.size() != 20 + length)
        throw std::runtime_error("malformed sequence file");

    SymbolSequence seq;
    seq.alphabet.size = alpha;
    seq.data.assign(p + 20, p + 20 + length);
    for (uint8_t s : seq.data)
        if (s >= alpha) throw std::runtime_error("malformed sequence file");
    seq.provenance.generator = "file";

    std::ifstream side(path + ".json");
    if (side) {
        try {
            nlohmann::json j = nlohmann::json::parse(side);
            if (j.contains("alphabet") && j["alphabet"].contains("labels"))
                seq.alphabet.labels = j["alphabet"]["labels"].get<std::vector<std::string>>();
            if (j.contains("provenance")) {
                const auto& pv = j["provenance"];
                seq.provenance.generator = pv.value("generator", std::string("file"));
                seq.provenance.param_digest = pv.value("param_digest", std::string());
                seq.provenance.seed = pv.value("seed", uint64_t{0});
            }
            seq.alphabet.validate();
        } catch (const std::exception&) {
            // A corrupt sidecar degrades to defaults; the binary payload rules.
            seq.alphabet.labels.clear();
            seq.provenance = Provenance{"file", "", 0};
        }
    }
    return seq;
}

std::string step_cdf_to_json(const StepCdf& cdf) { return dump(cdf_json(cdf)); }

StepCdf step_cdf_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed CDF JSON: ") + e.what());
    }
    return StepCdf(j.at("jumps").get<std::vector<double>>(),
                   j.at("values").get<std::vector<double>>());
}

std::string to_json(const BlockRecord& record, uint64_t seed) {
    ordered_json j{{"block", record.block.to_string()},
                   {"count", record.count},
                   {"mu_hat", record.mu_hat},
                   {"seed", seed},
                   {"return_law", cdf_json(record.return_law)},
                   {"g_curve", cdf_json(record.g_curve)},
                   {"hitting", cdf_json(record.hitting)},
                   {"intensities", intens_json(record.intens)}};
    return dump(j);
}

std::string to_json(const SweepReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back(ordered_json{{"n", r.n},
                                    {"distinct_blocks", r.distinct_blocks},
                                    {"resolved_blocks", r.resolved_blocks},
                                    {"resolved_mass", r.resolved_mass},
                                    {"unresolved_mass", r.unresolved_mass},
                                    {"weighted_repel", r.weighted_repel},
                                    {"weighted_attract", r.weighted_attract},
                                    {"median_eps_repel", r.median_eps_repel},
                                    {"median_ks", r.median_ks}});
    }
    ordered_json j{{"report", "sweep"},       {"process", report.process},
                   {"length", report.length}, {"seed", report.seed},
                   {"min_count", report.min_count}, {"eps_list", report.eps_list},
                   {"rows", rows}};
    return dump(j);
}

std::string to_json(const Example1Report& report) {
    ordered_json j{{"report", "example1"},
                   {"params", ordered_json{{"N0", report.params.N0},
                                           {"n", report.params.n},
                                           {"r", report.params.r}}},
                   {"length", report.length},
                   {"seed", report.seed},
                   {"repel_threshold", report.repel_threshold},
                   {"designated_blocks", report.designated_blocks},
                   {"designated_resolved", report.designated_resolved},
                   {"designated_mass", report.designated_mass},
                   {"family_measure", report.family_measure},
                   {"block_measure", report.block_measure},
                   {"gaps_within_window", report.gaps_within_window},
                   {"min_norm_gap", report.min_norm_gap},
                   {"max_norm_gap", report.max_norm_gap},
                   {"repel_fraction", report.repel_fraction},
                   {"entropy_bits", report.entropy_bits}};
    return dump(j);
}

namespace {

ordered_json probe_json(const AttractProbe& p) {
    return ordered_json{{"n", p.n},
                        {"distinct_blocks", p.distinct_blocks},
                        {"resolved_blocks", p.resolved_blocks},
                        {"resolved_mass", p.resolved_mass},
                        {"unresolved_mass", p.unresolved_mass},
                        {"qualifying_blocks", p.qualifying_blocks},
                        {"qualifying_mass", p.qualifying_mass},
                        {"qualifying_fraction", p.qualifying_fraction}};
}

}  // namespace

std::string to_json(const AttractReport& report) {
    ordered_json before = ordered_json::array();
    ordered_json after = ordered_json::array();
    for (const auto& p : report.before) before.push_back(probe_json(p));
    for (const auto& p : report.after) after.push_back(probe_json(p));
    ordered_json j{{"report", "lawofseries"},
                   {"params", ordered_json{{"base", report.params.base_spec},
                                           {"k", report.params.k},
                                           {"l", report.params.l},
                                           {"p", report.params.p},
                                           {"N", report.params.N}}},
                   {"length", report.length},
                   {"seed", report.seed},
                   {"t_star", report.t_star},
                   {"eps_star", report.eps_star},
                   {"min_count", report.min_count},
                   {"probe_lengths", report.probe_lengths},
                   {"construction", ordered_json{{"symbol_a", report.symbol_a},
                                                 {"symbol_b", report.symbol_b},
                                                 {"words", report.words},
                                                 {"replacements", report.replacements},
                                                 {"changed_symbols", report.changed_symbols},
                                                 {"changed_fraction", report.changed_fraction}}},
                   {"before", before},
                   {"after", after}};
    return dump(j);
}

std::string to_json(const UnbiasedReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back(ordered_json{{"n", r.n},
                                    {"resolved_blocks", r.resolved_blocks},
                                    {"unresolved_mass", r.unresolved_mass},
                                    {"median_ks", r.median_ks},
                                    {"max_ks", r.max_ks}});
    }
    ordered_json j{{"report", "unbiased"},     {"process", report.process},
                   {"length", report.length},  {"seed", report.seed},
                   {"min_count", report.min_count}, {"rows", rows}};
    return dump(j);
}

std::string to_json(const OracleReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& b : report.blocks) {
        rows.push_back(ordered_json{{"block", b.block},
                                    {"count", b.count},
                                    {"mu_exact", b.mu_exact},
                                    {"mu_hat", b.mu_hat},
                                    {"sup_dev", b.sup_dev},
                                    {"bound", b.bound},
                                    {"pass", b.pass}});
    }
    ordered_json j{{"report", "oracle-check"}, {"process", report.process},
                   {"length", report.length},  {"seed", report.seed},
                   {"blocks", rows},           {"pass", report.pass}};
    return dump(j);
}

std::string block_stats_csv(const std::vector<BlockStats>& rows, uint32_t n, uint64_t seed) {
    std::string out = "block,count,mu_hat,eps_repel,t_repel,eps_attract,t_attract,ks_exp,n,seed\n";
    for (const auto& r : rows) {
        out += r.block;
        out += ',' + std::to_string(r.count);
        out += ',' + fmt_double(r.mu_hat);
        out += ',' + fmt_double(r.eps_repel);
        out += ',' + fmt_double(r.t_repel);
        out += ',' + fmt_double(r.eps_attract);
        out += ',' + fmt_double(r.t_attract);
        out += ',' + fmt_double(r.ks_exp);
        out += ',' + std::to_string(n);
        out += ',' + std::to_string(seed);
        out += '\n';
    }
    return out;
}

std::string to_csv(const SweepReport& report) {
    std::string out = "n,distinct_blocks,resolved_blocks,resolved_mass,unresolved_mass";
    for (double eps : report.eps_list) out += ",weighted_repel_" + fmt_short(eps);
    for (double eps : report.eps_list) out += ",weighted_attract_" + fmt_short(eps);
    out += ",median_eps_repel,median_ks,seed\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.n);
        out += ',' + std::to_string(r.distinct_blocks);
        out += ',' + std::to_string(r.resolved_blocks);
        out += ',' + fmt_double(r.resolved_mass);
        out += ',' + fmt_double(r.unresolved_mass);
        for (double v : r.weighted_repel) out += ',' + fmt_double(v);
        for (double v : r.weighted_attract) out += ',' + fmt_double(v);
        out += ',' + fmt_double(r.median_eps_repel);
        out += ',' + fmt_double(r.median_ks);
        out += ',' + std::to_string(report.seed);
        out += '\n';
    }
    return out;
}

std::string to_csv(const Example1Report& report) {
    return block_stats_csv(report.designated, report.params.n, report.seed);
}

std::string to_csv(const AttractReport& report) {
    std::string out =
        "n,phase,distinct_blocks,resolved_blocks,resolved_mass,unresolved_mass,"
        "qualifying_blocks,qualifying_mass,qualifying_fraction,seed\n";
    auto emit = [&](const AttractProbe& p, const char* phase) {
        out += std::to_string(p.n);
        out += ',';
        out += phase;
        out += ',' + std::to_string(p.distinct_blocks);
        out += ',' + std::to_string(p.resolved_blocks);
        out += ',' + fmt_double(p.resolved_mass);
        out += ',' + fmt_double(p.unresolved_mass);
        out += ',' + std::to_string(p.qualifying_blocks);
        out += ',' + fmt_double(p.qualifying_mass);
        out += ',' + fmt_double(p.qualifying_fraction);
        out += ',' + std::to_string(report.seed);
        out += '\n';
    };
    for (size_t i = 0; i < report.probe_lengths.size(); ++i) {
        emit(report.before[i], "before");
        emit(report.after[i], "after");
    }
    return out;
}

std::string to_csv(const UnbiasedReport& report) {
    std::string out = "n,resolved_blocks,unresolved_mass,median_ks,max_ks,seed\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.n);
        out += ',' + std::to_string(r.resolved_blocks);
        out += ',' + fmt_double(r.unresolved_mass);
        out += ',' + fmt_double(r.median_ks);
        out += ',' + fmt_double(r.max_ks);
        out += ',' + std::to_string(report.seed);
        out += '\n';
    }
    return out;
}

std::string to_csv(const OracleReport& report) {
    std::string out = "block,count,mu_exact,mu_hat,sup_dev,bound,pass,seed\n";
    for (const auto& b : report.blocks) {
        out += b.block;
        out += ',' + std::to_string(b.count);
        out += ',' + fmt_double(b.mu_exact);
        out += ',' + fmt_double(b.mu_hat);
        out += ',' + fmt_double(b.sup_dev);
        out += ',' + fmt_double(b.bound);
        out += ',' + std::string(b.pass ? "1" : "0");
        out += ',' + std::to_string(report.seed);
        out += '\n';
    }
    return out;
}

ProcessPayload parse_process_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("process spec needs the form kind:args, got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (rest.empty()) throw std::invalid_argument("empty arguments in process spec '" + text + "'");

    if (kind == "bernoulli") {
        BernoulliParams params;
        for (const auto& tok : split(rest, ',')) params.probs.push_back(parse_double(tok));
        return params;
    }

    if (kind == "markov") {
        MarkovParams params;
        if (rest[0] == '@') {
            nlohmann::json j = parse_json_file(rest.substr(1));
            params.transition = j.at("transition").get<std::vector<std::vector<double>>>();
            if (j.contains("initial"))
                params.initial = j["initial"].get<std::vector<double>>();
        } else {
            for (const auto& row : split(rest, ';')) {
                std::vector<double> entries;
                for (const auto& tok : split(row, ',')) entries.push_back(parse_double(tok));
                params.transition.push_back(std::move(entries));
            }
        }
        return params;
    }

    if (kind == "periodic") {
        PeriodicParams params;
        params.pattern = parse_symbol_word(rest);
        return params;
    }

    if (kind == "example1") {
        Example1Params params;
        bool got_n0 = false, got_n = false, got_r = false;
        for (const auto& tok : split(rest, ',')) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            const uint64_t value = parse_u64(tok.substr(eq + 1));
            if (key == "N0") {
                params.N0 = static_cast<uint32_t>(value);
                got_n0 = true;
            } else if (key == "n") {
                params.n = static_cast<uint32_t>(value);
                got_n = true;
            } else if (key == "r") {
                params.r = static_cast<uint32_t>(value);
                got_r = true;
            } else {
                throw std::invalid_argument("unknown example1 key '" + key + "'");
            }
        }
        if (!got_n0 || !got_n || !got_r)
            throw std::invalid_argument("example1 spec needs N0=, n=, r=");
        return params;
    }

    if (kind == "lawofseries") {
        if (rest[0] != '@')
            throw std::invalid_argument("lawofseries spec takes a JSON file: lawofseries:@file");
        nlohmann::json j = parse_json_file(rest.substr(1));
        LawOfSeriesParams params;
        params.base_spec = j.at("base").get<std::string>();
        params.k = j.at("k").get<uint32_t>();
        params.l = j.at("l").get<uint32_t>();
        params.p = j.at("p").get<uint64_t>();
        params.N = j.at("N").get<uint32_t>();
        return params;
    }

    throw std::invalid_argument("unknown process kind '" + kind + "'");
}

}  // namespace serieslab
