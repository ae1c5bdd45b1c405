// Copyright 2026 dmtlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License.  You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dmtlab/code_criterion.hpp"
#include "dmtlab/errors.hpp"

namespace dmtlab {

// Codebook text format
// --------------------
//   # comment lines and trailing "# ..." comments are ignored
//   m_t N count            <- header: rows per codeword, slots, codewords
//   re,im re,im ... re,im  <- count blocks of m_t rows with N entries each,
//   ...                       row-major within a codeword
// Whitespace (including newlines) between tokens is not significant beyond
// readability, so a codeword may be wrapped or flattened freely.

namespace detail {

struct CodebookToken {
  std::string text;
  int line = 0;
};

inline std::vector<CodebookToken> tokenize_codebook(std::istream& in) {
  std::vector<CodebookToken> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      tokens.push_back({tok, line_no});
    }
  }
  return tokens;
}

[[noreturn]] inline void codebook_error(const std::string& name, int line,
                                        const std::string& message) {
  throw validation_error(name + ":" + std::to_string(line) + ": " + message);
}

inline int parse_codebook_int(const std::string& name,
                              const CodebookToken& tok, const char* what) {
  int value = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 1) {
    codebook_error(name, tok.line,
                   std::string("expected positive integer ") + what +
                       ", got '" + tok.text + "'");
  }
  return value;
}

inline std::complex<double> parse_codebook_entry(const std::string& name,
                                                 const CodebookToken& tok) {
  const auto comma = tok.text.find(',');
  if (comma == std::string::npos) {
    codebook_error(name, tok.line,
                   "expected 're,im' entry, got '" + tok.text + "'");
  }
  double parts[2] = {0.0, 0.0};
  const std::string pieces[2] = {tok.text.substr(0, comma),
                                 tok.text.substr(comma + 1)};
  for (int k = 0; k < 2; ++k) {
    const char* first = pieces[k].data();
    const char* last = first + pieces[k].size();
    const auto [ptr, ec] = std::from_chars(first, last, parts[k]);
    if (ec != std::errc() || ptr != last) {
      codebook_error(name, tok.line,
                     "malformed number '" + pieces[k] + "' in entry '" +
                         tok.text + "'");
    }
  }
  return {parts[0], parts[1]};
}

}  // namespace detail

/// Parses the codebook text format; `name` labels error messages (use the
/// file path).  The SNR and rate of the surrounding family are not part of
/// the file and stay at their defaults.
inline Codebook parse_codebook(std::istream& in, const std::string& name) {
  const auto tokens = detail::tokenize_codebook(in);
  if (tokens.size() < 3) {
    throw validation_error(name + ": missing 'm_t N count' header");
  }
  Codebook cb;
  cb.tx = detail::parse_codebook_int(name, tokens[0], "m_t");
  cb.slots = detail::parse_codebook_int(name, tokens[1], "N");
  const int count = detail::parse_codebook_int(name, tokens[2], "count");

  const std::size_t per_codeword = std::size_t(cb.tx) * std::size_t(cb.slots);
  const std::size_t needed = 3 + per_codeword * std::size_t(count);
  if (tokens.size() < needed) {
    detail::codebook_error(
        name, tokens.back().line,
        "file ends after " + std::to_string(tokens.size() - 3) +
            " entries, header promises " + std::to_string(needed - 3));
  }
  if (tokens.size() > needed) {
    detail::codebook_error(name, tokens[needed].line,
                           "trailing data '" + tokens[needed].text +
                               "' past the final codeword");
  }

  std::size_t next = 3;
  cb.codewords.reserve(std::size_t(count));
  for (int k = 0; k < count; ++k) {
    Eigen::MatrixXcd x(cb.tx, cb.slots);
    for (int i = 0; i < cb.tx; ++i) {
      for (int n = 0; n < cb.slots; ++n) {
        x(i, n) = detail::parse_codebook_entry(name, tokens[next++]);
      }
    }
    cb.codewords.push_back(std::move(x));
  }
  return cb;
}

/// Writes the format read back by parse_codebook; entries use %.17g so a
/// round trip reproduces every double exactly.
inline void write_codebook(std::ostream& out, const Codebook& cb) {
  validate_codebook(cb, "write_codebook");
  out << "# dmtlab codebook: " << cb.codewords.size() << " codeword(s), "
      << cb.tx << " transmit row(s), " << cb.slots << " slot(s)\n";
  out << cb.tx << ' ' << cb.slots << ' ' << cb.codewords.size() << '\n';
  char buffer[64];
  for (std::size_t k = 0; k < cb.codewords.size(); ++k) {
    out << "# codeword " << k << '\n';
    const auto& x = cb.codewords[k];
    for (int i = 0; i < cb.tx; ++i) {
      for (int n = 0; n < cb.slots; ++n) {
        if (n > 0) out << ' ';
        std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g", x(i, n).real(),
                      x(i, n).imag());
        out << buffer;
      }
      out << '\n';
    }
  }
}

inline Codebook load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error(path + ": cannot open codebook file");
  }
  return parse_codebook(in, path);
}

inline void save_codebook(const std::string& path, const Codebook& cb) {
  std::ofstream out(path);
  if (!out) {
    throw validation_error(path + ": cannot open codebook file for writing");
  }
  write_codebook(out, cb);
  if (!out) {
    throw validation_error(path + ": write failed");
  }
}

}  // namespace dmtlab
