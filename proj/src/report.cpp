#include "opa/report.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "opa/format.hpp"

namespace opa {

namespace {

constexpr const char* kRecordHeader =
    "day\tstep\tload_shed\ttotal_demand\tn_failed_lines\tn_overloaded_lines\tis_blackout";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_records(std::span<const BlackoutRecord> records, std::ostream& out) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.day << '\t' << r.step << '\t' << format_double(r.load_shed) << '\t' << format_double(r.total_demand)
        << '\t' << r.n_failed_lines << '\t' << r.n_overloaded_lines << '\t' << (r.is_blackout ? 1 : 0) << '\n';
  }
}

std::vector<BlackoutRecord> read_records(std::istream& in) {
  std::vector<BlackoutRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      if (t != kRecordHeader) throw std::runtime_error("records line " + std::to_string(line_no) + ": bad header");
      header = true;
      continue;
    }
    const auto f = split_fields(t);
    auto fail = [&](const char* what) {
      throw std::runtime_error("records line " + std::to_string(line_no) + ": " + what);
    };
    if (f.size() != 7) fail("expected 7 fields");
    BlackoutRecord r;
    auto day = parse_int<int>(f[0]);
    auto step = parse_int<int>(f[1]);
    auto shed = parse_double(f[2]);
    auto dem = parse_double(f[3]);
    auto nf = parse_int<int>(f[4]);
    auto no = parse_int<int>(f[5]);
    auto bo = parse_int<int>(f[6]);
    if (!day || !step || !shed || !dem || !nf || !no || !bo || (*bo != 0 && *bo != 1)) fail("malformed field");
    r = {*day, *step, *shed, *dem, *nf, *no, *bo == 1};
    out.push_back(r);
  }
  if (!header) throw std::runtime_error("records file has no header");
  return out;
}

std::vector<BlackoutRecord> read_records_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open records file " + path.string());
  try {
    return read_records(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_summary(const RunStatistics& s, std::ostream& out) {
  out << "days = " << format_double(s.days) << '\n';
  out << "events = " << s.events << '\n';
  out << "blackouts = " << s.blackouts << '\n';
  out << "blackout_frequency = " << format_double(s.blackout_frequency) << '\n';
  out << "mean_blackout_size = " << format_double(s.mean_blackout_size) << '\n';
  out << "tail_exponent = " << (s.rank.tail_exponent ? format_double(*s.rank.tail_exponent) : "none") << '\n';
  out << "tail_fit_points = " << s.rank.fit_points << '\n';
  out << "mean_stress = " << format_double(s.mean_stress) << '\n';
}

void write_rank(const RankFunction& rank, std::ostream& out) {
  out << "rank\tsize\n";
  for (const auto& [r, s] : rank.points) out << r << '\t' << format_double(s) << '\n';
}

void write_intraday(std::span<const long> histogram, int bin_minutes, std::ostream& out) {
  out << "bin_start_minute\tblackouts\n";
  for (std::size_t k = 0; k < histogram.size(); ++k) out << k * bin_minutes << '\t' << histogram[k] << '\n';
}

void write_overload(const std::map<int, long>& histogram, std::ostream& out) {
  out << "overloaded_lines\tblackouts\n";
  for (const auto& [k, v] : histogram) out << k << '\t' << v << '\n';
}

void write_daily_stress(std::span<const double> daily_stress, std::ostream& out) {
  out << "day\tmean_overload\n";
  for (std::size_t d = 0; d < daily_stress.size(); ++d) out << d << '\t' << format_double(daily_stress[d]) << '\n';
}

void write_diagnostics(std::span<const StepDiagnostics> rows, std::ostream& out) {
  out << "day\tstep\tscheduled_demand\ttotal_demand\tqueue_length\tsampled\tapplied\tpostponed\trecovered\n";
  for (const auto& r : rows) {
    out << r.day << '\t' << r.step << '\t' << format_double(r.scheduled_demand) << '\t'
        << format_double(r.total_demand) << '\t' << r.queue_length << '\t' << r.sampled << '\t' << r.applied << '\t'
        << r.postponed << '\t' << r.recovered << '\n';
  }
}

void write_sweep(const SweepResult& result, std::ostream& out) {
  out << "point\tlabel\tb\tp3\tcontrol\treplicas\tmean_frequency\tfrequency_stderr\tmean_size\tmean_stress";
  if (result.constant_product) out << "\tfrequency_ratio";
  out << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    const auto& c = row.point.config;
    out << i << '\t' << row.point.label << '\t' << format_double(c.b) << '\t' << format_double(c.p3) << '\t'
        << (c.control ? "on" : "off") << '\t' << row.replicas.size() << '\t' << format_double(row.mean_frequency)
        << '\t' << format_double(row.frequency_stderr) << '\t' << format_double(row.mean_size) << '\t'
        << format_double(row.mean_stress);
    if (result.constant_product) out << '\t' << (row.frequency_ratio ? format_double(*row.frequency_ratio) : "none");
    out << '\n';
  }
}

void write_statistics(const RunStatistics& stats, int bin_minutes, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto f = open_out(dir / "summary.txt");
    write_summary(stats, f);
  }
  {
    auto f = open_out(dir / "rank.tsv");
    write_rank(stats.rank, f);
  }
  {
    auto f = open_out(dir / "intraday.tsv");
    write_intraday(stats.intraday_histogram, bin_minutes, f);
  }
  {
    auto f = open_out(dir / "overload.tsv");
    write_overload(stats.overload_histogram, f);
  }
}

void write_run(const SimConfig& config, const SimulationResult& result, const std::filesystem::path& dir) {
  write_statistics(result.stats, config.intraday_bin_minutes, dir);
  {
    auto f = open_out(dir / "config.txt");
    write_config(config, f);
  }
  {
    auto f = open_out(dir / "records.tsv");
    write_records(result.records, f);
  }
  {
    auto f = open_out(dir / "stress.tsv");
    write_daily_stress(result.daily_stress, f);
  }
  save_grid_file(result.final_grid, dir / "final_grid.txt");
  if (config.diagnostics) {
    auto f = open_out(dir / "diagnostics.tsv");
    write_diagnostics(result.diagnostics, f);
  }
}

void write_sweep_dir(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto f = open_out(dir / "sweep.tsv");
    write_sweep(result, f);
  }
  auto by_b = [&](const char* name, const char* column, auto value) {
    auto f = open_out(dir / name);
    f << "b\tcontrol\t" << column << '\n';
    for (const auto& row : result.rows)
      f << format_double(row.point.config.b) << '\t' << (row.point.config.control ? "on" : "off") << '\t'
        << value(row) << '\n';
  };
  by_b("frequency_vs_b.tsv", "mean_frequency\tstderr",
       [](const SweepRow& r) { return format_double(r.mean_frequency) + '\t' + format_double(r.frequency_stderr); });
  by_b("size_vs_b.tsv", "mean_size", [](const SweepRow& r) { return format_double(r.mean_size); });
  by_b("stress_vs_b.tsv", "mean_stress", [](const SweepRow& r) { return format_double(r.mean_stress); });
  if (result.constant_product) {
    auto f = open_out(dir / "ratio_vs_p3.tsv");
    f << "p3\tb\tcontrol\tfrequency_ratio\n";
    for (const auto& row : result.rows)
      f << format_double(row.point.config.p3) << '\t' << format_double(row.point.config.b) << '\t'
        << (row.point.config.control ? "on" : "off") << '\t'
        << (row.frequency_ratio ? format_double(*row.frequency_ratio) : "none") << '\n';
  }
  {
    auto f = open_out(dir / "sweep_intraday.tsv");
    f << "point\tbin\tblackouts\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i)
      for (std::size_t k = 0; k < result.rows[i].intraday_histogram.size(); ++k)
        f << i << '\t' << k << '\t' << result.rows[i].intraday_histogram[k] << '\n';
  }
  {
    auto f = open_out(dir / "sweep_overload.tsv");
    f << "point\toverloaded_lines\tblackouts\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i)
      for (const auto& [k, v] : result.rows[i].overload_histogram) f << i << '\t' << k << '\t' << v << '\n';
  }
}

}  // namespace opa
