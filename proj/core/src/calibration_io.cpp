#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gripsim/calibration.hpp"
#include "gripsim/errors.hpp"
#include "gripsim/output.hpp"

namespace gripsim {
namespace {

constexpr std::string_view kMagic = "# caltab v1";
constexpr std::string_view kMetaPrefix = "# meta: ";
constexpr std::array<std::string_view, 4> kColumns = {"alpha_deg", "p0_kpa", "dp_kpa",
                                                       "torque_nmm"};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(std::string_view token, std::size_t line, std::size_t column) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto result = std::from_chars(first, last, value);
  if (token.empty() || result.ec != std::errc() || result.ptr != last) {
    throw ParseError(line, column, "malformed number '" + std::string(token) + "'");
  }
  return value;
}

struct Row {
  std::size_t line;
  std::array<double, 4> values;
};

}  // namespace

std::string to_csv(const CalibrationTable& table) {
  std::string out;
  out += kMagic;
  out += '\n';
  out += kMetaPrefix;
  for (std::size_t i = 0; i < table.meta().size(); ++i) {
    if (i > 0) out += ';';
    out += table.meta()[i].first;
    out += '=';
    out += table.meta()[i].second;
  }
  out += '\n';
  out += "alpha_deg,p0_kpa,dp_kpa,torque_nmm\n";
  for (std::size_t i = 0; i < table.num_alpha(); ++i) {
    for (std::size_t j = 0; j < table.num_p0(); ++j) {
      out += format_double(table.alpha_grid_deg()[i]);
      out += ',';
      out += format_double(table.p0_grid_kpa()[j]);
      out += ',';
      out += format_double(table.dp_at(i, j));
      out += ',';
      out += format_double(table.torque_at(i, j));
      out += '\n';
    }
  }
  return out;
}

CalibrationTable parse_csv(const std::string& text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].empty() && lines[i].back() == '\r') {
      throw ParseError(i + 1, lines[i].size(), "CR line ending; files must use LF");
    }
  }
  if (lines.empty() || lines[0] != kMagic) {
    throw ParseError(1, 0, "expected header '# caltab v1'");
  }
  if (lines.size() < 2 || lines[1].substr(0, kMetaPrefix.size()) != kMetaPrefix) {
    throw ParseError(2, 0, "expected metadata line starting with '# meta: '");
  }
  TableMeta meta;
  const std::string_view meta_body = lines[1].substr(kMetaPrefix.size());
  if (!meta_body.empty()) {
    std::size_t column = kMetaPrefix.size() + 1;
    for (std::string_view entry : split(meta_body, ';')) {
      const std::size_t eq = entry.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ParseError(2, column, "metadata entry '" + std::string(entry) + "' is not key=value");
      }
      meta.emplace_back(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
      column += entry.size() + 1;
    }
  }
  if (lines.size() < 3) throw ParseError(3, 0, "missing column header row");
  const auto header = split(lines[2], ',');
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (c >= header.size() || header[c] != kColumns[c]) {
      throw ParseError(3, c + 1, "missing header token '" + std::string(kColumns[c]) + "'");
    }
  }
  if (header.size() != kColumns.size()) {
    throw ParseError(3, kColumns.size() + 1, "unexpected extra header column");
  }

  std::vector<Row> rows;
  for (std::size_t li = 3; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = split(lines[li], ',');
    if (fields.size() != kColumns.size()) {
      throw ParseError(line_no, 0,
                       "expected 4 fields, found " + std::to_string(fields.size()));
    }
    Row row{line_no, {}};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      row.values[c] = parse_number(fields[c], line_no, c + 1);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError(4, 0, "table has no data rows");

  // The p0 grid is the run of rows sharing the first angle.
  std::size_t np = 1;
  while (np < rows.size() && rows[np].values[0] == rows[0].values[0]) ++np;
  std::vector<double> p0_grid;
  for (std::size_t j = 0; j < np; ++j) {
    const double p0 = rows[j].values[1];
    if (j > 0 && !(p0 > p0_grid.back())) {
      throw ParseError(rows[j].line, 2, "p0 grid is not strictly increasing");
    }
    p0_grid.push_back(p0);
  }

  std::vector<double> alpha_grid;
  std::vector<double> dp(rows.size());
  std::vector<double> torque(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    const std::size_t j = r % np;
    const double alpha = row.values[0];
    if (j == 0) {
      if (!alpha_grid.empty() && !(alpha > alpha_grid.back())) {
        throw ParseError(row.line, 1, "alpha grid is not strictly increasing");
      }
      alpha_grid.push_back(alpha);
    } else if (alpha != alpha_grid.back()) {
      throw ParseError(row.line, 1, "alpha_deg changes inside a p0 block");
    }
    if (row.values[1] != p0_grid[j]) {
      throw ParseError(row.line, 2, "p0_kpa does not follow the grid of the first block");
    }
    if (alpha_grid.size() > 1) {
      const double prev = dp[r - np];
      if (row.values[2] < prev) {
        throw ParseError(row.line, 3, "dp_kpa decreases along alpha");
      }
    }
    dp[r] = row.values[2];
    torque[r] = row.values[3];
  }
  if (rows.size() % np != 0) {
    throw ParseError(rows.back().line, 0,
                     "dimension mismatch: row count is not a multiple of the p0 grid size");
  }
  try {
    return CalibrationTable::create(std::move(alpha_grid), std::move(p0_grid), std::move(dp),
                                    std::move(torque), std::move(meta));
  } catch (const DomainError& e) {
    throw ParseError(4, 0, e.what());
  }
}

void write_csv(const CalibrationTable& table, const std::filesystem::path& path) {
  write_file_atomic(path, to_csv(table));
}

CalibrationTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open calibration table " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace gripsim
