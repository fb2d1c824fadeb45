#include "samaug/csv.hpp"

#include <charconv>
#include <fstream>

#include "samaug/error.hpp"

namespace samaug {

CsvRow split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  CsvRow fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string join_csv_row(const CsvRow& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    const auto& f = row[i];
    if (f.find_first_of(",\"") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char ch : f) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto row = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(row);
      have_header = true;
      continue;
    }
    if (row.size() != table.header.size()) {
      throw Error(ErrorKind::BadManifest, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.header.size()) + " fields, got " +
                                              std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorKind::BadManifest, path.string() + ": missing header");
  return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot create " + path.string());
  out << join_csv_row(table.header) << '\n';
  for (const auto& row : table.rows) out << join_csv_row(row) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::BadManifest, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows) {
  CsvTable table;
  const std::size_t n = rows.empty() ? 2 : rows.front().probs.size();
  table.header.push_back("id");
  for (std::size_t k = 0; k < n; ++k) table.header.push_back("p" + std::to_string(k));
  for (const auto& r : rows) {
    if (r.probs.size() != n) throw Error(ErrorKind::DimMismatch, "prediction row '" + r.id + "' has a different width");
    CsvRow row{r.id};
    for (double p : r.probs) row.push_back(format_double(p));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

std::vector<PredictionRow> read_predictions(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  if (table.header.size() < 3 || table.header[0] != "id") {
    throw Error(ErrorKind::BadManifest, path.string() + ": header must be id,p0,p1,...");
  }
  for (std::size_t k = 1; k < table.header.size(); ++k) {
    if (table.header[k] != "p" + std::to_string(k - 1)) {
      throw Error(ErrorKind::BadManifest, path.string() + ": column " + std::to_string(k) + " must be p" +
                                              std::to_string(k - 1));
    }
  }
  std::vector<PredictionRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    PredictionRow pr{r[0], {}};
    for (std::size_t k = 1; k < r.size(); ++k) {
      try {
        pr.probs.push_back(parse_double(r[k]));
      } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": row '" + r[0] + "': " + e.detail());
      }
    }
    rows.push_back(std::move(pr));
  }
  return rows;
}

}  // namespace samaug
