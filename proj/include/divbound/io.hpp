#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "divbound/error.hpp"
#include "divbound/simplex.hpp"

namespace divbound {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Locale-independent parse of a single real (dot decimal separator).
inline double parse_real(std::string_view text) {
  text = detail::trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError,
                "not a real number: '" + std::string(text) + "'");
  }
  return value;
}

/// Accepts either a JSON array of numbers or CSV with one value per line
/// (no header). The format is chosen by the first non-blank character.
inline std::vector<double> parse_masses(std::string_view text) {
  const auto body = detail::trim(text);
  if (body.empty()) {
    throw Error(ErrorCode::ParseError, "empty distribution input");
  }
  std::vector<double> out;
  if (body.front() == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) {
      throw Error(ErrorCode::ParseError, "expected a JSON array of numbers");
    }
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!doc[i].is_number()) {
        throw Error(ErrorCode::ParseError,
                    "element at index " + std::to_string(i) + " is not a number",
                    i);
      }
      out.push_back(doc[i].get<double>());
    }
    return out;
  }
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto nl = body.find('\n', pos);
    const auto line = detail::trim(body.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (!line.empty()) {
      try {
        out.push_back(parse_real(line));
      } catch (const Error&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no + 1) + " is not a real: '" +
                        std::string(line) + "'",
                    out.size());
      }
    }
    ++line_no;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Distribution load_distribution(const std::string& path,
                                      bool normalize = false,
                                      SimplexTolerance tol = {}) {
  auto raw = parse_masses(read_file(path));
  if (normalize) raw = normalized(raw);
  return Distribution::validate(raw, tol);
}

/// Shortest decimal form that reads back to the same double (at most 17
/// significant digits).
inline std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace divbound
