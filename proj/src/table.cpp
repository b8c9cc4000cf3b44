#include "accordion/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "accordion/error.hpp"

namespace accordion {

namespace {

constexpr const char* kMagic = "# accordion result table";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw ValidationError("row has " + std::to_string(row.size()) + " values, table '" + name +
                          "' has " + std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos ||
      value.find('\n') != std::string::npos)
    throw ValidationError("metadata entries must be single-line and keys must not contain '='");
  for (auto& [k, v] : metadata)
    if (k == key) {
      v = value;
      return;
    }
  metadata.emplace_back(key, value);
}

void ResultTable::set_meta(const std::string& key, double value) {
  set_meta(key, format_number(value));
}

std::optional<std::string> ResultTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

double ResultTable::meta_number(const std::string& key) const {
  const auto v = meta(key);
  if (!v) throw ValidationError("table '" + name + "' has no metadata '" + key + "'");
  return std::strtod(v->c_str(), nullptr);
}

std::size_t ResultTable::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == column) return i;
  throw ValidationError("table '" + name + "' has no column '" + column + "'");
}

std::vector<double> ResultTable::column(const std::string& c) const {
  const std::size_t j = column_index(c);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

std::string serialize_table(const ResultTable& table) {
  std::string out = kMagic;
  out += "\n# name = " + table.name + "\n";
  for (const auto& [k, v] : table.metadata) out += "# " + k + " = " + v + "\n";
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += '\t';
    out += table.columns[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += '\t';
      out += format_number(row[j]);
    }
    out += '\n';
  }
  return out;
}

ResultTable parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kMagic)
    throw ValidationError("not a result table (missing header line)");
  ResultTable t;
  bool have_columns = false;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_columns && line.rfind("# ", 0) == 0) {
      const std::string body = line.substr(2);
      const auto eq = body.find(" = ");
      if (eq == std::string::npos)
        throw ValidationError("line " + std::to_string(number) + ": malformed metadata");
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 3);
      if (key == "name") t.name = value;
      else t.metadata.emplace_back(key, value);
      continue;
    }
    if (!have_columns) {
      if (!line.empty()) t.columns = split_tabs(line);
      have_columns = true;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != t.columns.size())
      throw ValidationError("line " + std::to_string(number) + ": expected " +
                            std::to_string(t.columns.size()) + " values");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double x = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size())
        throw ValidationError("line " + std::to_string(number) + ": bad number '" + c + "'");
      row.push_back(x);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_table(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_table(table);
  if (!out) throw IoError("write to '" + path + "' failed");
}

ResultTable read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str());
}

}  // namespace accordion
