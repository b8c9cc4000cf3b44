#pragma once

// Column-named numeric tables with a '#' metadata header.
//
//   # accordion result table
//   # name = evolve
//   # <key> = <value>            (one per metadata entry, in insertion order)
//   t<TAB>re_T<TAB>...
//   0<TAB>-1<TAB>...             (%.17g, so doubles round-trip exactly)

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace accordion {

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<double> row);
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  std::optional<std::string> meta(const std::string& key) const;
  double meta_number(const std::string& key) const;   // ValidationError if absent
  std::size_t column_index(const std::string& column) const;  // ValidationError if absent
  std::vector<double> column(const std::string& column) const;
};

std::string serialize_table(const ResultTable& table);
ResultTable parse_table(const std::string& text);

void write_table(const ResultTable& table, const std::string& path);
ResultTable read_table(const std::string& path);

std::string format_number(double x);

}  // namespace accordion
