#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "locapprox/error.hpp"

namespace locapprox {

using Json = nlohmann::ordered_json;

/// Column-ordered string table; the common shape of every CSV report.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) fail(ErrorKind::DimensionMismatch, "row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string to_csv() const {
    std::string out;
    append_line(out, columns);
    for (const auto& r : rows) append_line(out, r);
    return out;
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = r[i];
      arr.push_back(std::move(obj));
    }
    return arr;
  }

 private:
  static std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += '\n';
  }
};

}  // namespace locapprox
