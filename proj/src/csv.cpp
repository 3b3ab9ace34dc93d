#include "hpai/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "hpai/error.hpp"

namespace hpai {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double field(std::string_view s, std::size_t line_no) {
  const auto v = parse_double(s);
  if (!v) throw ValidationError("CSV line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  return *v;
}

void expect_header(std::istream& is, std::string_view header) {
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw ValidationError("CSV header mismatch: expected '" + std::string(header) + "'");
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  // from_chars rejects a leading '+'.
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_double(traj.times[i]);
    for (std::size_t c = 0; c < kCompartments; ++c) os << ',' << format_double(traj.states[i][c]);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  expect_header(is, kTrajectoryHeader);
  Trajectory traj;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != kCompartments + 1) {
      throw ValidationError("CSV line " + std::to_string(line_no) + ": expected 7 fields");
    }
    traj.times.push_back(field(cells[0], line_no));
    HerdState x;
    for (std::size_t c = 0; c < kCompartments; ++c) x[c] = field(cells[c + 1], line_no);
    traj.states.push_back(x);
  }
  return traj;
}

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& summary) {
  os << kEnsembleHeader << '\n';
  for (std::size_t t = 0; t < summary.times.size(); ++t) {
    const std::string time = format_double(summary.times[t]);
    for (std::size_t c = 0; c < kCompartments; ++c) {
      const auto& st = summary.stats[c];
      os << time << ',' << kCompartmentNames[c] << ',' << format_double(st.mean[t]) << ','
         << format_double(st.std[t]) << ',' << format_double(st.q025[t]) << ','
         << format_double(st.q50[t]) << ',' << format_double(st.q975[t]) << '\n';
    }
  }
}

std::vector<EnsembleRow> read_ensemble_csv(std::istream& is) {
  expect_header(is, kEnsembleHeader);
  std::vector<EnsembleRow> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 7) throw ValidationError("CSV line " + std::to_string(line_no) + ": expected 7 fields");
    rows.push_back({field(cells[0], line_no), std::string(cells[1]), field(cells[2], line_no),
                    field(cells[3], line_no), field(cells[4], line_no), field(cells[5], line_no),
                    field(cells[6], line_no)});
  }
  return rows;
}

void write_sensitivity_csv(std::ostream& os, const SensitivityReport& report) {
  os << kSensitivityHeader << '\n';
  for (const auto& e : report.entries) {
    os << e.name << ',' << format_double(e.prcc) << ',' << format_double(e.p_value) << ','
       << (e.significant ? 1 : 0) << '\n';
  }
}

std::vector<PrccEntry> read_sensitivity_csv(std::istream& is) {
  expect_header(is, kSensitivityHeader);
  std::vector<PrccEntry> out;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4 || (cells[3] != "0" && cells[3] != "1")) {
      throw ValidationError("CSV line " + std::to_string(line_no) + ": malformed sensitivity row");
    }
    PrccEntry e;
    e.name = std::string(cells[0]);
    e.prcc = field(cells[1], line_no);
    e.p_value = field(cells[2], line_no);
    e.significant = cells[3] == "1";
    e.status = std::isnan(e.prcc) ? PrccStatus::constant : PrccStatus::ok;
    out.push_back(e);
  }
  return out;
}

}  // namespace hpai
