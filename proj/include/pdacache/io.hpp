#pragma once

// Array file formats.
//
// JSON: { "rows": F, "cols": K, "grid": [[...], ...] } with entries "*" or a
// 1-based symbol id (PDA) or "*" or [s, i] (GPDA). Optional "row_labels" and
// "col_labels"; GPDAs carry a 1-based "user_to_cache" array.
//
// Text (PDA only): one row per line, whitespace-separated "*" or integer tokens.

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pdacache/pda.hpp"

namespace pdacache::io {

using nlohmann::json;

namespace detail {

inline std::vector<std::string> string_array(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw FormatError(std::string(key) + " must be an array");
  for (const auto& e : j.at(key)) {
    if (!e.is_string()) throw FormatError(std::string(key) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::uint64_t positive_int(const json& e, const char* what) {
  if (!e.is_number_integer() || e.get<std::int64_t>() < 1)
    throw FormatError(std::string(what) + " must be a positive integer, got " + e.dump());
  return e.get<std::uint64_t>();
}

template <typename CellT, typename ParseCell>
Grid<CellT> parse_grid(const json& j, ParseCell parse_cell) {
  if (!j.is_object() || !j.contains("grid")) throw FormatError("expected an object with a \"grid\" key");
  const json& g = j.at("grid");
  if (!g.is_array()) throw FormatError("grid must be an array of rows");
  std::vector<std::vector<CellT>> rows;
  for (const auto& row : g) {
    if (!row.is_array()) throw FormatError("grid rows must be arrays");
    auto& out = rows.emplace_back();
    for (const auto& e : row) {
      if (e.is_string() && e.get<std::string>() == "*") {
        out.push_back(CellT::star());
      } else {
        out.push_back(parse_cell(e));
      }
    }
  }
  auto grid = Grid<CellT>::from_rows(rows);
  if (j.contains("rows") && j.at("rows") != grid.rows()) throw FormatError("\"rows\" disagrees with grid");
  if (j.contains("cols") && j.at("cols") != grid.cols()) throw FormatError("\"cols\" disagrees with grid");
  return grid;
}

}  // namespace detail

// Parses without validating so the caller can report every violation.
inline std::pair<Grid<Cell>, Labels> pda_grid_from_json(const json& j) {
  auto grid = detail::parse_grid<Cell>(j, [](const json& e) {
    return Cell::symbol(static_cast<SymbolId>(detail::positive_int(e, "symbol") - 1));
  });
  Labels labels{detail::string_array(j, "row_labels"), detail::string_array(j, "col_labels")};
  return {std::move(grid), std::move(labels)};
}

inline std::pair<Grid<GCell>, std::vector<std::size_t>> gpda_grid_from_json(const json& j) {
  auto grid = detail::parse_grid<GCell>(j, [](const json& e) {
    if (!e.is_array() || e.size() != 2) throw FormatError("GPDA entries must be \"*\" or [s, i], got " + e.dump());
    const auto s = detail::positive_int(e[0], "symbol");
    const auto i = detail::positive_int(e[1], "replica index");
    return GCell::pair(static_cast<SymbolId>(s - 1), static_cast<std::uint32_t>(i));
  });
  std::vector<std::size_t> user_to_cache;
  if (j.contains("user_to_cache")) {
    for (const auto& e : j.at("user_to_cache")) user_to_cache.push_back(detail::positive_int(e, "cache id") - 1);
  } else {
    // Without a map every user is its own cache.
    for (std::size_t k = 0; k < grid.cols(); ++k) user_to_cache.push_back(k);
  }
  return {std::move(grid), std::move(user_to_cache)};
}

inline Grid<Cell> pda_grid_from_text(std::string_view text) {
  std::vector<std::vector<Cell>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Cell> row;
    std::string tok;
    while (ls >> tok) {
      if (tok == "*") {
        row.push_back(Cell::star());
        continue;
      }
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw FormatError("bad token '" + tok + "'");
      }
      if (used != tok.size() || v < 1) throw FormatError("bad token '" + tok + "'");
      row.push_back(Cell::symbol(static_cast<SymbolId>(v - 1)));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return Grid<Cell>::from_rows(rows);
}

inline json to_json(const Pda& pda) {
  json grid = json::array();
  for (std::size_t r = 0; r < pda.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < pda.columns(); ++c) {
      const Cell cell = pda.at(r, c);
      if (cell.is_star()) {
        row.push_back("*");
      } else {
        row.push_back(cell.symbol() + 1);
      }
    }
    grid.push_back(std::move(row));
  }
  json j = {{"rows", pda.rows()}, {"cols", pda.columns()}, {"grid", std::move(grid)}};
  if (!pda.row_labels().empty()) j["row_labels"] = pda.row_labels();
  if (!pda.column_labels().empty()) j["col_labels"] = pda.column_labels();
  return j;
}

inline json to_json(const GeneralizedPda& g) {
  json grid = json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.columns(); ++c) {
      const GCell cell = g.at(r, c);
      if (cell.is_star()) {
        row.push_back("*");
      } else {
        row.push_back(json::array({cell.symbol() + 1, cell.replica()}));
      }
    }
    grid.push_back(std::move(row));
  }
  json caches = json::array();
  for (std::size_t c : g.user_to_cache()) caches.push_back(c + 1);
  return {{"rows", g.rows()}, {"cols", g.columns()}, {"grid", std::move(grid)}, {"user_to_cache", std::move(caches)}};
}

inline std::string to_text(const Pda& pda) {
  std::ostringstream os;
  for (std::size_t r = 0; r < pda.rows(); ++r) {
    for (std::size_t c = 0; c < pda.columns(); ++c) {
      if (c) os << ' ';
      const Cell cell = pda.at(r, c);
      if (cell.is_star()) {
        os << '*';
      } else {
        os << cell.symbol() + 1;
      }
    }
    os << '\n';
  }
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << content;
}

// Accepts either format: JSON when the first non-blank character is '{'.
inline std::pair<Grid<Cell>, Labels> load_pda_grid(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError(path + ": " + e.what());
    }
    return pda_grid_from_json(j);
  }
  return {pda_grid_from_text(text), {}};
}

inline std::pair<Grid<GCell>, std::vector<std::size_t>> load_gpda_grid(const std::string& path) {
  try {
    return gpda_grid_from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace pdacache::io
