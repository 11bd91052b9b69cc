#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "opa/metrics.hpp"
#include "opa/simulation.hpp"
#include "opa/sweep.hpp"

namespace opa {

/// Header line, then one tab-separated row per record.
void write_records(std::span<const BlackoutRecord> records, std::ostream& out);
/// Inverse of write_records; throws std::runtime_error with the line number.
std::vector<BlackoutRecord> read_records(std::istream& in);
std::vector<BlackoutRecord> read_records_file(const std::filesystem::path& path);

/// `key = value` lines for every scalar statistic.
void write_summary(const RunStatistics& stats, std::ostream& out);
void write_rank(const RankFunction& rank, std::ostream& out);
void write_intraday(std::span<const long> histogram, int bin_minutes, std::ostream& out);
void write_overload(const std::map<int, long>& histogram, std::ostream& out);
void write_daily_stress(std::span<const double> daily_stress, std::ostream& out);
void write_diagnostics(std::span<const StepDiagnostics> rows, std::ostream& out);
void write_sweep(const SweepResult& result, std::ostream& out);

/// Writes config.txt, records.tsv, summary.txt, rank.tsv, intraday.tsv,
/// overload.tsv, stress.tsv, final_grid.txt and, when recorded,
/// diagnostics.tsv into `dir` (created if needed).
void write_run(const SimConfig& config, const SimulationResult& result, const std::filesystem::path& dir);

/// Writes the statistics files derived from records alone.
void write_statistics(const RunStatistics& stats, int bin_minutes, const std::filesystem::path& dir);

/// sweep.tsv, per-quantity tables against b (and p3 for constant-product
/// sweeps), plus per-point intraday and overload tables.
void write_sweep_dir(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace opa
