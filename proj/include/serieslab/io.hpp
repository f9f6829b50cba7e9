#pragma once
// File formats: the SERIESEQ binary sequence format with its JSON provenance
// sidecar, JSON serialization of CDFs and reports, and plot-ready CSV
// emission. All emitters are deterministic: identical inputs produce
// byte-identical text.

#include <string>
#include <vector>

#include "serieslab/core.hpp"
#include "serieslab/harness.hpp"
#include "serieslab/processes.hpp"
#include "serieslab/stats.hpp"

namespace serieslab {

// Binary layout: 8-byte magic "SERIESEQ", u32 LE alphabet size, u64 LE
// length, one byte per symbol. A sidecar "<path>.json" records alphabet
// labels and provenance.
void write_sequence(const SymbolSequence& seq, const std::string& path);

// Errors "not a SERIESEQ file" on a bad magic and "malformed sequence file"
// on truncation or out-of-range symbols. The sidecar is optional on read.
SymbolSequence read_sequence(const std::string& path);

std::string step_cdf_to_json(const StepCdf& cdf);
StepCdf step_cdf_from_json_text(const std::string& text);

// Reports as JSON documents (2-space indent, stable key order).
std::string to_json(const BlockRecord& record, uint64_t seed);
std::string to_json(const SweepReport& report);
std::string to_json(const Example1Report& report);
std::string to_json(const AttractReport& report);
std::string to_json(const UnbiasedReport& report);
std::string to_json(const OracleReport& report);

// Per-block CSV rows: block,count,mu_hat,eps_repel,t_repel,eps_attract,
// t_attract,ks_exp plus the trailing n and seed columns every row carries.
std::string block_stats_csv(const std::vector<BlockStats>& rows, uint32_t n, uint64_t seed);

// Per-n / per-probe trend CSVs for plotting; every row carries the seed.
std::string to_csv(const SweepReport& report);
std::string to_csv(const Example1Report& report);
std::string to_csv(const AttractReport& report);
std::string to_csv(const UnbiasedReport& report);
std::string to_csv(const OracleReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace serieslab
