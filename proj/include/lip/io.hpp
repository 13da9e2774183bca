// Copyright 2026 The liprr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lip/channel.hpp"
#include "lip/pmf.hpp"

namespace lip {

// Text formats. Priors are CSV with a `label,prob` header or a JSON object
// of label to probability. Channels are CSV with output labels across the
// header row and the input label leading each data row, or an equivalent
// JSON object with `inputs`, `outputs`, and `rows`. Numbers are printed
// with 12 significant digits in both formats.

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

inline double parse_number(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                     field + "'");
  }
  return value;
}

inline void check_csv_label(const std::string& label) {
  if (label.find_first_of(",\"\n\r") != std::string::npos) {
    throw std::invalid_argument("io: label '" + label +
                                "' cannot be written as CSV");
  }
}

// Splits nonempty lines, tolerating \r\n and a trailing newline.
inline std::vector<std::pair<std::size_t, std::string>> csv_lines(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      ++line_no;
      const std::string_view raw = trim(text.substr(start, i - start));
      if (!raw.empty()) lines.emplace_back(line_no, std::string(raw));
      start = i + 1;
    }
  }
  return lines;
}

}  // namespace detail

// 12 significant digits, shortest form.
inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

// The same value a reader of our text output reconstructs: the double
// nearest to the 12 digit decimal form. Keeps JSON and CSV output equal.
inline double json_number(double value) {
  return std::strtod(format_double(value).c_str(), nullptr);
}

// ---- Pmf ----

inline std::string pmf_to_csv(const Pmf& pmf) {
  std::string out = "label,prob\n";
  for (const Atom& a : pmf.atoms()) {
    detail::check_csv_label(a.symbol.label);
    out += a.symbol.label;
    out += ',';
    out += format_double(a.prob);
    out += '\n';
  }
  return out;
}

inline Pmf pmf_from_csv(std::string_view text,
                        ZeroPolicy policy = ZeroPolicy::kReject) {
  const auto lines = detail::csv_lines(text);
  if (lines.empty() || detail::split_csv_line(lines[0].second) !=
                           std::vector<std::string>{"label", "prob"}) {
    throw ParseError("pmf csv: missing 'label,prob' header");
  }
  std::vector<std::pair<std::string, double>> weighted;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError("pmf csv: line " + std::to_string(line_no) +
                       ": expected 'label,prob'");
    }
    weighted.emplace_back(fields[0], detail::parse_number(fields[1], line_no));
  }
  try {
    return Pmf::from_weights(weighted, policy);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("pmf csv: ") + e.what());
  }
}

inline nlohmann::ordered_json pmf_to_json(const Pmf& pmf) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const Atom& a : pmf.atoms()) {
    obj[a.symbol.label] = json_number(a.prob);
  }
  return obj;
}

inline Pmf pmf_from_json(const nlohmann::ordered_json& obj,
                         ZeroPolicy policy = ZeroPolicy::kReject) {
  if (!obj.is_object()) {
    throw ParseError("pmf json: expected an object of label to probability");
  }
  std::vector<std::pair<std::string, double>> weighted;
  for (const auto& [label, value] : obj.items()) {
    if (!value.is_number()) {
      throw ParseError("pmf json: value of '" + label + "' is not a number");
    }
    weighted.emplace_back(label, value.get<double>());
  }
  try {
    return Pmf::from_weights(weighted, policy);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("pmf json: ") + e.what());
  }
}

// ---- Channel ----

inline std::string channel_to_csv(const Channel& channel) {
  std::string out;
  for (const Symbol& y : channel.outputs()) {
    detail::check_csv_label(y.label);
    out += ',';
    out += y.label;
  }
  out += '\n';
  for (std::size_t x = 0; x < channel.num_inputs(); ++x) {
    detail::check_csv_label(channel.inputs()[x].label);
    out += channel.inputs()[x].label;
    for (std::size_t y = 0; y < channel.num_outputs(); ++y) {
      out += ',';
      out += format_double(channel.at(x, y));
    }
    out += '\n';
  }
  return out;
}

inline Channel channel_from_csv(std::string_view text) {
  const auto lines = detail::csv_lines(text);
  if (lines.empty()) throw ParseError("channel csv: empty input");
  const auto header = detail::split_csv_line(lines[0].second);
  if (header.size() < 2 || !header[0].empty()) {
    throw ParseError(
        "channel csv: header must start with an empty cell followed by "
        "output labels");
  }
  std::vector<Symbol> outputs;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty()) {
      throw ParseError("channel csv: empty output label in header");
    }
    outputs.push_back(Symbol{header[i]});
  }
  std::vector<Symbol> inputs;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != outputs.size() + 1 || fields[0].empty()) {
      throw ParseError("channel csv: line " + std::to_string(line_no) +
                       ": expected input label and " +
                       std::to_string(outputs.size()) + " entries");
    }
    inputs.push_back(Symbol{fields[0]});
    std::vector<double> row;
    row.reserve(outputs.size());
    for (std::size_t j = 1; j < fields.size(); ++j) {
      row.push_back(detail::parse_number(fields[j], line_no));
    }
    rows.push_back(std::move(row));
  }
  try {
    return Channel::from_rows(std::move(inputs), std::move(outputs),
                              std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("channel csv: ") + e.what());
  }
}

inline nlohmann::ordered_json channel_to_json(const Channel& channel) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  auto labels = [](const std::vector<Symbol>& syms) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Symbol& s : syms) arr.push_back(s.label);
    return arr;
  };
  obj["inputs"] = labels(channel.inputs());
  obj["outputs"] = labels(channel.outputs());
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t x = 0; x < channel.num_inputs(); ++x) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t y = 0; y < channel.num_outputs(); ++y) {
      row.push_back(json_number(channel.at(x, y)));
    }
    rows.push_back(std::move(row));
  }
  obj["rows"] = std::move(rows);
  return obj;
}

inline Channel channel_from_json(const nlohmann::ordered_json& obj) {
  if (!obj.is_object() || !obj.contains("inputs") || !obj.contains("outputs") ||
      !obj.contains("rows")) {
    throw ParseError(
        "channel json: expected an object with inputs, outputs, rows");
  }
  auto symbols = [](const nlohmann::ordered_json& arr, const char* what) {
    if (!arr.is_array()) {
      throw ParseError(std::string("channel json: ") + what +
                       " is not an array");
    }
    std::vector<Symbol> out;
    for (const auto& v : arr) {
      if (!v.is_string()) {
        throw ParseError(std::string("channel json: ") + what +
                         " holds a non-string label");
      }
      out.push_back(Symbol{v.get<std::string>()});
    }
    return out;
  };
  std::vector<Symbol> inputs = symbols(obj["inputs"], "inputs");
  std::vector<Symbol> outputs = symbols(obj["outputs"], "outputs");
  if (!obj["rows"].is_array()) {
    throw ParseError("channel json: rows is not an array");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : obj["rows"]) {
    if (!row.is_array()) {
      throw ParseError("channel json: row is not an array");
    }
    std::vector<double> values;
    for (const auto& v : row) {
      if (!v.is_number()) {
        throw ParseError("channel json: row holds a non-numeric entry");
      }
      values.push_back(v.get<double>());
    }
    rows.push_back(std::move(values));
  }
  try {
    return Channel::from_rows(std::move(inputs), std::move(outputs),
                              std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("channel json: ") + e.what());
  }
}

// ---- Files ----

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

// Writes via a sibling temp file plus rename, so readers never observe a
// half-written file.
inline void atomic_write_file(const std::filesystem::path& path,
                              std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw ParseError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ParseError("cannot replace '" + path.string() +
                     "': " + ec.message());
  }
}

inline nlohmann::ordered_json parse_json_text(std::string_view text,
                                              const char* what) {
  nlohmann::ordered_json obj =
      nlohmann::ordered_json::parse(text, nullptr, false);
  if (obj.is_discarded()) {
    throw ParseError(std::string(what) + ": invalid json");
  }
  return obj;
}

// Loads a prior from a file, sniffing JSON by a leading '{'.
inline Pmf load_pmf(const std::filesystem::path& path,
                    ZeroPolicy policy = ZeroPolicy::kReject) {
  const std::string text = read_file(path);
  const std::string_view body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    return pmf_from_json(parse_json_text(body, "pmf json"), policy);
  }
  return pmf_from_csv(text, policy);
}

inline Channel load_channel(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string_view body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    return channel_from_json(parse_json_text(body, "channel json"));
  }
  return channel_from_csv(text);
}

}  // namespace lip
