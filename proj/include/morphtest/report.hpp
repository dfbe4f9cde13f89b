#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "morphtest/harness.hpp"

namespace morphtest {

/// "26.80%" style rendering: two decimals, round half away from zero.
/// with_sign prepends '+' to non-negative values (Table V increase column).
std::string render_percent(double fraction, bool with_sign = false);

/// Fixed-point rendering with round-half-away, e.g. render_fixed(2521.8, 2)
/// = "2521.80".
std::string render_fixed(double value, int decimals);

/// On-disk layout of a generated suite: manifest.csv (one row per case),
/// generation.tsv (kind, counts, timing, seed), images/<case_id>.pgm.
void write_suite_manifest(const GeneratedSuite& suite, std::uint64_t suite_seed,
                          const std::filesystem::path& out_dir);
GeneratedSuite read_suite_manifest(const std::filesystem::path& dir);

/// Report files for one run: cases.csv with per-case verdicts, summary.tsv
/// mirroring the result-table columns, and PGM dumps of every misrecognized
/// image under misrecognized/. Identical inputs produce identical bytes.
void export_report(const GeneratedSuite& suite, const RunResult& run, const std::filesystem::path& out_dir);

/// Re-reads a cases.csv written by export_report.
std::vector<Verdict> read_cases_csv(const std::filesystem::path& path);

/// Summary rows as written to summary.tsv (sub-suite rows first for
/// composite runs).
std::string render_summary(const RunResult& run);

/// Parses a summary.tsv back into reports, for the report/extrapolate
/// subcommands.
std::vector<SuiteReport> read_summary_tsv(const std::filesystem::path& path);

}  // namespace morphtest
