/*
 * Copyright 2026 The tsfuse authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TSFUSE_KEYVALUE_HPP
#define TSFUSE_KEYVALUE_HPP

#include <Eigen/Core>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "tsfuse/errors.hpp"

namespace tsfuse {

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const char *begin = text.data();
  const char *end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw FormatError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

inline long long parse_int(std::string_view text) {
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw FormatError("cannot parse integer '" + std::string(text) + "'");
  }
  return value;
}

inline std::string format_vector(const Eigen::VectorXd &v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(v[i]);
  }
  out += "]";
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline Eigen::VectorXd parse_vector(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw FormatError("vector value must be bracketed: '" + std::string(text) + "'");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<double> values;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    values.push_back(parse_double(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

/// Flat `key = value` document with stable key order, used for model
/// files, scenario configs and assessment reports.
class KeyValueDocument {
public:
  static KeyValueDocument parse(const std::string &text) {
    KeyValueDocument doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line(text.data() + pos,
                            (eol == std::string::npos ? text.size() : eol) - pos);
      pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": expected 'key = value'");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) {
        throw FormatError("line " + std::to_string(line_no) + ": empty key");
      }
      if (!doc.add(key, value)) {
        throw FormatError("line " + std::to_string(line_no) + ": duplicate key '" +
                          key + "'");
      }
    }
    return doc;
  }

  bool add(const std::string &key, std::string value) {
    if (index_.contains(key)) return false;
    index_.emplace(key, entries_.size());
    entries_.emplace_back(key, std::move(value));
    return true;
  }

  bool has(const std::string &key) const { return index_.contains(key); }

  const std::string &get(const std::string &key) const {
    const auto it = index_.find(key);
    if (it == index_.end()) throw FormatError("missing key '" + key + "'");
    return entries_[it->second].second;
  }

  double get_double(const std::string &key) const { return parse_double(get(key)); }
  long long get_int(const std::string &key) const { return parse_int(get(key)); }
  Eigen::VectorXd get_vector(const std::string &key) const {
    return parse_vector(get(key));
  }

  const std::vector<std::pair<std::string, std::string>> &entries() const {
    return entries_;
  }

  std::string serialize() const {
    std::string out;
    for (const auto &[key, value] : entries_) {
      out += key;
      out += " = ";
      out += value;
      out += "\n";
    }
    return out;
  }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

inline std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("cannot open '" + path.string() + "' for reading");
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw FileError("error while reading '" + path.string() + "'");
  }
  return content;
}

/// Write via a temporary file in the same directory, then rename.
inline void write_text_file_atomic(const std::filesystem::path &path,
                                   const std::string &content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw FileError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw FileError("error while writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw FileError("cannot move '" + tmp.string() + "' to '" + path.string() +
                    "': " + ec.message());
  }
}

} // namespace tsfuse

#endif // TSFUSE_KEYVALUE_HPP
