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

#include <complex>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "dmtlab/code_criterion.hpp"
#include "dmtlab/codebook_io.hpp"

using namespace std::complex_literals;
using dmtlab::Codebook;
using dmtlab::load_codebook;
using dmtlab::make_delay_diversity_codebook;
using dmtlab::parse_codebook;
using dmtlab::SnrPoint;
using dmtlab::write_codebook;

namespace {

Codebook from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_codebook(in, "book.txt");
}

std::string error_of(const std::string& text) {
  try {
    from_text(text);
  } catch (const dmtlab::validation_error& err) {
    return err.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("plain codebook parses with comments and blank lines", "[io]") {
  const Codebook cb = from_text(
      "# demo file\n"
      "1 2 2   # header: m_t N count\n"
      "\n"
      "0,0 0,0\n"
      "1,0 0,-1  # second codeword\n");
  REQUIRE(cb.tx == 1);
  REQUIRE(cb.slots == 2);
  REQUIRE(cb.codewords.size() == 2);
  CHECK(cb.codewords[0](0, 0) == 0.0 + 0.0i);
  CHECK(cb.codewords[1](0, 0) == 1.0 + 0.0i);
  CHECK(cb.codewords[1](0, 1) == -1.0i);
}

TEST_CASE("entries fill transmit rows in order", "[io]") {
  // One 2x2 codeword: tokens are row-major (row 0 slots, then row 1 slots).
  const Codebook cb = from_text(
      "2 2 1\n"
      "1,0 2,0\n"
      "3,0 4,0\n");
  REQUIRE(cb.codewords.size() == 1);
  const auto& x = cb.codewords[0];
  CHECK(x(0, 0).real() == 1.0);
  CHECK(x(0, 1).real() == 2.0);
  CHECK(x(1, 0).real() == 3.0);
  CHECK(x(1, 1).real() == 4.0);
}

TEST_CASE("write/parse round trip is exact", "[io]") {
  Codebook cb = make_delay_diversity_codebook(dmtlab::AntennaConfig(2, 1), 4,
                                              4, SnrPoint::from_db(20.0));
  // Include an awkward value that needs all 17 digits.
  cb.codewords[0](0, 0) = std::complex<double>(0.1, -1.0 / 3.0);

  std::ostringstream out;
  write_codebook(out, cb);
  std::istringstream in(out.str());
  const Codebook back = parse_codebook(in, "round.txt");
  REQUIRE(back.tx == cb.tx);
  REQUIRE(back.slots == cb.slots);
  REQUIRE(back.codewords.size() == cb.codewords.size());
  for (size_t k = 0; k < cb.codewords.size(); ++k) {
    REQUIRE(back.codewords[k] == cb.codewords[k]);  // bitwise
  }
}

TEST_CASE("save and load through the filesystem", "[io]") {
  const Codebook cb = make_delay_diversity_codebook(
      dmtlab::AntennaConfig(1, 1), 2, 2, SnrPoint::from_db(20.0));
  const std::string path = "test_codebook_io_tmp.txt";
  dmtlab::save_codebook(path, cb);
  const Codebook back = load_codebook(path);
  REQUIRE(back.codewords.size() == 2);
  CHECK(back.codewords[1] == cb.codewords[1]);
  std::remove(path.c_str());

  CHECK_THROWS_WITH(load_codebook("does_not_exist_12345.txt"),
                    Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("parse errors carry file and line positions", "[io]") {
  // Missing header.
  CHECK_THAT(error_of("1 2\n"),
             Catch::Matchers::ContainsSubstring("book.txt") &&
                 Catch::Matchers::ContainsSubstring("header"));

  // Non-numeric header field, reported on its line.
  CHECK_THAT(error_of("1 x 2\n0,0 0,0\n"),
             Catch::Matchers::ContainsSubstring("book.txt:1:"));

  // Nonpositive dimension.
  CHECK_THAT(error_of("0 2 2\n"),
             Catch::Matchers::ContainsSubstring("book.txt:1:"));

  // Too few entries: error points at the last line that had data.
  CHECK_THAT(error_of("1 2 2\n0,0 0,0\n1,0\n"),
             Catch::Matchers::ContainsSubstring("book.txt:3:") &&
                 Catch::Matchers::ContainsSubstring("header promises"));

  // Trailing garbage after the final codeword, on its own line.
  CHECK_THAT(error_of("1 1 2\n0,0\n1,0\n\n9,9\n"),
             Catch::Matchers::ContainsSubstring("book.txt:5:") &&
                 Catch::Matchers::ContainsSubstring("trailing"));

  // Malformed complex entry.
  CHECK_THAT(error_of("1 1 2\n0,0\nnope\n"),
             Catch::Matchers::ContainsSubstring("book.txt:3:"));
  CHECK_THAT(error_of("1 1 2\n0,0\n1,\n"),
             Catch::Matchers::ContainsSubstring("book.txt:3:"));
}
