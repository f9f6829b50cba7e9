// serieslab: generate symbolic stationary processes and measure how the
// return/hitting statistics of their blocks sit against the exponential law.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 assertion failure
// (oracle-check deviation beyond its bound).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "serieslab/core.hpp"
#include "serieslab/harness.hpp"
#include "serieslab/io.hpp"
#include "serieslab/processes.hpp"
#include "serieslab/stats.hpp"

namespace {

using namespace serieslab;
using ordered_json = nlohmann::ordered_json;

uint32_t env_threads() {
    if (const char* env = std::getenv("SERIESLAB_THREADS")) {
        try {
            const auto v = std::stoul(env);
            if (v >= 1) return static_cast<uint32_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring bad SERIESLAB_THREADS value '" << env << "'\n";
    }
    return 1;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(std::stod(cur));
            cur.clear();
        }
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (c != ' ')
            cur.push_back(c);
    }
    flush();
    if (out.empty()) throw std::invalid_argument("empty number list '" + text + "'");
    return out;
}

std::vector<uint32_t> parse_u32_list(const std::string& text) {
    std::vector<uint32_t> out;
    for (double v : parse_double_list(text)) {
        if (v < 1 || v != static_cast<uint32_t>(v))
            throw std::invalid_argument("expected positive integers: '" + text + "'");
        out.push_back(static_cast<uint32_t>(v));
    }
    return out;
}

// "4" or "2..10"
std::pair<uint32_t, uint32_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto v = static_cast<uint32_t>(std::stoul(text));
        return {v, v};
    }
    const auto from = static_cast<uint32_t>(std::stoul(text.substr(0, dots)));
    const auto to = static_cast<uint32_t>(std::stoul(text.substr(dots + 2)));
    if (from == 0 || to < from) throw std::invalid_argument("bad range '" + text + "'");
    return {from, to};
}

// oracle-check accepts "fair-coin", any markov spec, or an i.i.d. spec
// (which is the Markov chain with identical rows).
MarkovParams chain_from_spec(const std::string& text) {
    if (text == "fair-coin") return MarkovParams{{{0.5, 0.5}, {0.5, 0.5}}, {}};
    ProcessPayload payload = parse_process_spec(text);
    if (const auto* markov = std::get_if<MarkovParams>(&payload)) return *markov;
    if (const auto* iid = std::get_if<BernoulliParams>(&payload)) {
        MarkovParams chain;
        chain.transition.assign(iid->probs.size(), iid->probs);
        return chain;
    }
    throw std::invalid_argument("oracle-check needs a Markov or i.i.d. chain spec");
}

void emit_config(const ordered_json& cfg, const std::string& out_dir) {
    const std::string text = cfg.dump(2) + "\n";
    std::cout << text;
    write_text_file(out_dir + "/config.json", text);
}

void ensure_dir(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
}

int do_generate(const std::string& process, uint64_t length, uint64_t seed,
                const std::string& out_dir, const std::string& out_name) {
    ensure_dir(out_dir);
    emit_config({{"command", "generate"},
                 {"process", process},
                 {"length", length},
                 {"seed", seed},
                 {"out", out_name}},
                out_dir);
    SymbolSequence seq = generate(parse_process_spec(process), length, seed);
    write_sequence(seq, out_dir + "/" + out_name);
    return 0;
}

int do_analyze(const std::string& in_path, const std::string& block_text, uint64_t starts,
               uint64_t seed, const std::string& out_dir) {
    SymbolSequence seq = read_sequence(in_path);
    ensure_dir(out_dir);
    emit_config({{"command", "analyze"},
                 {"in", in_path},
                 {"block", block_text},
                 {"starts", starts},
                 {"seed", seed}},
                out_dir);
    Block block = parse_block(block_text, seq.alphabet);
    EvalGrid grid = EvalGrid::geometric();
    BlockRecord record = analyze_block(seq, block, grid);
    if (starts > 0) {
        OccurrenceList occ = scan_occurrences(seq, block);
        const uint64_t windows = seq.length() - block.length() + 1;
        DirectHitting direct = hitting_cdf_direct(occ, windows, record.mu_hat, starts, seed);
        record.hitting = direct.cdf;
        record.intens = intensities(record.hitting, grid);
    }
    write_text_file(out_dir + "/analyze.json", to_json(record, seed));
    return 0;
}

int do_sweep(const std::string& process, uint64_t length, uint32_t n_from, uint32_t n_to,
             const std::vector<double>& eps, uint64_t seed, uint64_t min_count, uint32_t threads,
             const std::string& out_dir) {
    ensure_dir(out_dir);
    ordered_json cfg{{"command", "sweep"},     {"process", process},
                     {"length", length},       {"n_from", n_from},
                     {"n_to", n_to},           {"eps", eps},
                     {"seed", seed},           {"min_count", min_count}};
    emit_config(cfg, out_dir);
    SweepReport report = run_repel_decay_sweep(parse_process_spec(process), length, seed, n_from,
                                               n_to, eps, min_count, threads);
    write_text_file(out_dir + "/sweep.json", to_json(report));
    write_text_file(out_dir + "/sweep.csv", to_csv(report));
    for (size_t i = 0; i < report.per_block.size(); ++i) {
        const uint32_t n = report.rows[i].n;
        write_text_file(out_dir + "/blocks_n" + std::to_string(n) + ".csv",
                        block_stats_csv(report.per_block[i], n, seed));
    }
    return 0;
}

int do_example1(uint32_t N0, uint32_t n, uint32_t r, uint64_t length, uint64_t seed,
                double threshold, uint32_t threads, const std::string& out_dir) {
    ensure_dir(out_dir);
    emit_config({{"command", "example1"},
                 {"N0", N0},
                 {"n", n},
                 {"r", r},
                 {"length", length},
                 {"seed", seed},
                 {"repel_threshold", threshold}},
                out_dir);
    Example1Report report =
        run_example1_check(Example1Params{N0, n, r}, length, seed, threshold, threads);
    write_text_file(out_dir + "/example1.json", to_json(report));
    write_text_file(out_dir + "/example1.csv", to_csv(report));
    return 0;
}

int do_lawofseries(const LawOfSeriesParams& params, uint64_t length, uint64_t seed, double t_star,
                   double eps_star, uint64_t min_count, const std::vector<uint32_t>& probes,
                   uint32_t threads, const std::string& out_dir) {
    ensure_dir(out_dir);
    emit_config({{"command", "lawofseries"},
                 {"params", ordered_json{{"base", params.base_spec},
                                         {"k", params.k},
                                         {"l", params.l},
                                         {"p", params.p},
                                         {"N", params.N}}},
                 {"length", length},
                 {"seed", seed},
                 {"t_star", t_star},
                 {"eps_star", eps_star},
                 {"min_count", min_count},
                 {"probe_lengths", probes}},
                out_dir);
    AttractReport report =
        run_lawofseries_demo(params, length, seed, t_star, eps_star, min_count, probes, threads);
    write_text_file(out_dir + "/lawofseries.json", to_json(report));
    write_text_file(out_dir + "/lawofseries.csv", to_csv(report));
    for (size_t i = 0; i < report.after_rows.size(); ++i) {
        const uint32_t n = report.probe_lengths[i];
        write_text_file(out_dir + "/after_blocks_n" + std::to_string(n) + ".csv",
                        block_stats_csv(report.after_rows[i], n, seed));
    }
    return 0;
}

int do_unbiased(const std::string& process, uint64_t length, const std::vector<uint32_t>& n_list,
                uint64_t seed, uint64_t min_count, uint32_t threads, const std::string& out_dir) {
    ensure_dir(out_dir);
    emit_config({{"command", "unbiased"},
                 {"process", process},
                 {"length", length},
                 {"n_list", n_list},
                 {"seed", seed},
                 {"min_count", min_count}},
                out_dir);
    UnbiasedReport report = run_unbiased_check(parse_process_spec(process), length, seed, n_list,
                                               min_count, threads);
    write_text_file(out_dir + "/unbiased.json", to_json(report));
    write_text_file(out_dir + "/unbiased.csv", to_csv(report));
    return 0;
}

int do_oracle_check(const std::string& chain_spec, const std::vector<std::string>& block_texts,
                    uint64_t length, uint64_t seed, const std::string& in_path,
                    const std::string& out_dir) {
    MarkovParams chain = chain_from_spec(chain_spec);
    Alphabet alphabet{static_cast<uint32_t>(chain.transition.size()), {}};
    std::vector<Block> blocks;
    for (const auto& text : block_texts) blocks.push_back(parse_block(text, alphabet));

    ensure_dir(out_dir);
    emit_config({{"command", "oracle-check"},
                 {"chain", chain_spec},
                 {"blocks", block_texts},
                 {"length", length},
                 {"seed", seed},
                 {"in", in_path}},
                out_dir);
    OracleReport report;
    if (!in_path.empty()) {
        SymbolSequence seq = read_sequence(in_path);
        report = run_oracle_equivalence_on(seq, chain, blocks);
    } else {
        report = run_oracle_equivalence(chain, blocks, length, seed);
    }
    write_text_file(out_dir + "/oracle.json", to_json(report));
    write_text_file(out_dir + "/oracle.csv", to_csv(report));
    if (!report.pass) {
        std::cerr << "oracle-check: empirical law deviates beyond the bound\n";
        return 2;
    }
    return 0;
}

int do_replay(const std::string& config_path, const std::string& out_dir, uint32_t threads) {
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_text_file(config_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed config JSON: " + std::string(e.what()));
    }
    const std::string command = cfg.at("command").get<std::string>();
    if (command == "generate")
        return do_generate(cfg.at("process"), cfg.at("length"), cfg.at("seed"), out_dir,
                           cfg.at("out"));
    if (command == "analyze")
        return do_analyze(cfg.at("in"), cfg.at("block"), cfg.at("starts"), cfg.at("seed"),
                          out_dir);
    if (command == "sweep")
        return do_sweep(cfg.at("process"), cfg.at("length"), cfg.at("n_from"), cfg.at("n_to"),
                        cfg.at("eps").get<std::vector<double>>(), cfg.at("seed"),
                        cfg.at("min_count"), threads, out_dir);
    if (command == "example1")
        return do_example1(cfg.at("N0"), cfg.at("n"), cfg.at("r"), cfg.at("length"),
                           cfg.at("seed"), cfg.at("repel_threshold"), threads, out_dir);
    if (command == "lawofseries") {
        const auto& p = cfg.at("params");
        LawOfSeriesParams params{p.at("base"), p.at("k"), p.at("l"), p.at("p"), p.at("N")};
        return do_lawofseries(params, cfg.at("length"), cfg.at("seed"), cfg.at("t_star"),
                              cfg.at("eps_star"), cfg.at("min_count"),
                              cfg.at("probe_lengths").get<std::vector<uint32_t>>(), threads,
                              out_dir);
    }
    if (command == "unbiased")
        return do_unbiased(cfg.at("process"), cfg.at("length"),
                           cfg.at("n_list").get<std::vector<uint32_t>>(), cfg.at("seed"),
                           cfg.at("min_count"), threads, out_dir);
    if (command == "oracle-check")
        return do_oracle_check(cfg.at("chain"), cfg.at("blocks").get<std::vector<std::string>>(),
                               cfg.at("length"), cfg.at("seed"),
                               cfg.value("in", std::string()), out_dir);
    throw std::invalid_argument("unknown command in config: '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic-process return/hitting-time statistics workbench"};
    app.require_subcommand(1);

    std::string process, out_dir = ".", out_name = "seq.bin";
    std::string in_path, block_text, chain_spec, config_path;
    std::string n_range = "2..8", eps_text = "0.1", n_list_text = "2,4,6,8", probe_text;
    std::vector<std::string> block_texts;
    uint64_t length = 1000000, seed = 1, min_count = 50, starts = 0;
    uint32_t threads = env_threads();
    uint32_t N0 = 4, ex_n = 3, ex_r = 8;
    double threshold = 0.26787944117144233;  // e^{-1} - 0.1
    double t_star = 2.0, eps_star = 0.1;

    auto* gen = app.add_subcommand("generate", "generate a sequence and write it as SERIESEQ");
    gen->add_option("--process", process, "process spec, e.g. bernoulli:0.5,0.5")->required();
    gen->add_option("--length", length, "sequence length");
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--out-dir", out_dir, "output directory");
    gen->add_option("--out", out_name, "output file name inside --out-dir");

    auto* ana = app.add_subcommand("analyze", "full diagnostics for one block of a sequence file");
    ana->add_option("--in", in_path, "SERIESEQ input file")->required();
    ana->add_option("--block", block_text, "block, e.g. 0110")->required();
    ana->add_option("--starts", starts, "direct hitting-time sample count (0 = skip)");
    ana->add_option("--seed", seed, "RNG seed for hitting-time starts");
    ana->add_option("--out-dir", out_dir, "output directory");

    auto* swp = app.add_subcommand("sweep", "per-block-length repelling/attracting sweep");
    swp->add_option("--process", process, "process spec")->required();
    swp->add_option("--length", length, "sequence length");
    swp->add_option("--n", n_range, "block length or range, e.g. 1..8");
    swp->add_option("--eps", eps_text, "intensity thresholds, e.g. 0.1,0.15");
    swp->add_option("--seed", seed, "RNG seed");
    swp->add_option("--min-count", min_count, "occurrences required to resolve a block");
    swp->add_option("--threads", threads, "worker threads");
    swp->add_option("--out-dir", out_dir, "output directory");

    auto* ex1 = app.add_subcommand("example1", "permuted-block-cycle structural check");
    ex1->add_option("--N0", N0, "core symbol count");
    ex1->add_option("--n", ex_n, "designated block length");
    ex1->add_option("--r", ex_r, "marker class count");
    ex1->add_option("--length", length, "sequence length");
    ex1->add_option("--seed", seed, "RNG seed");
    ex1->add_option("--threshold", threshold, "repelling-intensity threshold");
    ex1->add_option("--threads", threads, "worker threads");
    ex1->add_option("--out-dir", out_dir, "output directory");

    auto* los = app.add_subcommand("lawofseries", "word-replacement demo: before/after attracting");
    los->add_option("--params", config_path, "JSON parameter file (base,k,l,p,N)")->required();
    los->add_option("--length", length, "sequence length");
    los->add_option("--seed", seed, "RNG seed");
    los->add_option("--t-star", t_star, "hitting-time probe point");
    los->add_option("--eps-star", eps_star, "qualifying threshold on the hitting estimate");
    los->add_option("--min-count", min_count, "occurrences required to resolve a block");
    los->add_option("--probe", probe_text, "probe block lengths (default: spread over [N,N^2])");
    los->add_option("--threads", threads, "worker threads");
    los->add_option("--out-dir", out_dir, "output directory");

    auto* unb = app.add_subcommand("unbiased", "KS-to-exponential summary per block length");
    unb->add_option("--process", process, "i.i.d. process spec")->required();
    unb->add_option("--length", length, "sequence length");
    unb->add_option("--n", n_list_text, "block lengths, e.g. 2,4,8");
    unb->add_option("--seed", seed, "RNG seed");
    unb->add_option("--min-count", min_count, "occurrences required to resolve a block");
    unb->add_option("--threads", threads, "worker threads");
    unb->add_option("--out-dir", out_dir, "output directory");

    auto* orc = app.add_subcommand("oracle-check", "empirical return law vs the exact chain law");
    orc->add_option("--chain", chain_spec, "chain spec or the alias fair-coin")->required();
    orc->add_option("--block", block_texts, "block to check (repeatable)")->required();
    orc->add_option("--length", length, "sequence length");
    orc->add_option("--seed", seed, "RNG seed");
    orc->add_option("--in", in_path, "check an existing SERIESEQ file instead of generating");
    orc->add_option("--out-dir", out_dir, "output directory");

    auto* rep = app.add_subcommand("replay", "re-run a command from an echoed config.json");
    rep->add_option("--config", config_path, "config.json from a previous run")->required();
    rep->add_option("--out-dir", out_dir, "output directory");
    rep->add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) return do_generate(process, length, seed, out_dir, out_name);
        if (ana->parsed()) return do_analyze(in_path, block_text, starts, seed, out_dir);
        if (swp->parsed()) {
            const auto [n_from, n_to] = parse_range(n_range);
            return do_sweep(process, length, n_from, n_to, parse_double_list(eps_text), seed,
                            min_count, threads, out_dir);
        }
        if (ex1->parsed())
            return do_example1(N0, ex_n, ex_r, length, seed, threshold, threads, out_dir);
        if (los->parsed()) {
            ProcessPayload payload = parse_process_spec("lawofseries:@" + config_path);
            std::vector<uint32_t> probes;
            if (!probe_text.empty()) probes = parse_u32_list(probe_text);
            return do_lawofseries(std::get<LawOfSeriesParams>(payload), length, seed, t_star,
                                  eps_star, min_count, probes, threads, out_dir);
        }
        if (unb->parsed())
            return do_unbiased(process, length, parse_u32_list(n_list_text), seed, min_count,
                               threads, out_dir);
        if (orc->parsed())
            return do_oracle_check(chain_spec, block_texts, length, seed, in_path, out_dir);
        if (rep->parsed()) return do_replay(config_path, out_dir, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
