// Copyright 2026 The shadowtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "shadowtomo/compression.hpp"

using namespace shadowtomo;

namespace {

struct Run {
  CompressedRep rep;
  EstimationReport report;
};

Run make_run(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  const QuantumState rho = haar_random_state(n, rng);
  Run run;
  run.report = learn_two_copy_template(rho, enumerate_local(n, 2), greedy_engine(), 0.5, seed, {}, &run.rep);
  return run;
}

}  // namespace

TEST_CASE("round trip is exact and canonical") {
  for (int n = 2; n <= 4; ++n) {
    const Run run = make_run(n, 40 + n);
    const auto bytes = serialize(run.rep);
    REQUIRE(bytes.size() > 5);
    CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "STDR1");
    const CompressedRep back = deserialize(bytes);
    CHECK(back == run.rep);
    CHECK(serialize(back) == bytes);
  }
}

TEST_CASE("queries equal the pipeline estimates") {
  const Run run = make_run(3, 5);
  const CompressedRep back = deserialize(serialize(run.rep));
  for (std::size_t i = 0; i < run.report.operators.size(); ++i) {
    const QueryAnswer a = query(back, run.report.operators[i]);
    CHECK(a.estimate == run.report.estimates[i]);
    CHECK(a.in_s_eps == run.report.in_s_eps[i]);
    CHECK_FALSE(a.extrapolated);
  }
  CHECK(query(back, PauliOp::identity(3)).estimate == 1.0);
  CHECK(query(back, PauliOp::parse("-III")).estimate == -1.0);
  const QueryAnswer outside = query(back, PauliOp::parse("XYZ"));
  CHECK(outside.extrapolated);
  CHECK(std::abs(outside.estimate) <= 1.0);
  CHECK_THROWS_AS(query(back, PauliOp::parse("XY")), Error);
}

TEST_CASE("corrupt input reports a byte offset") {
  const Run run = make_run(2, 9);
  auto bytes = serialize(run.rep);
  SUBCASE("bad magic") {
    bytes[0] = 'X';
    try {
      deserialize(bytes);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 0);
      CHECK(std::string(e.what()).find("parse error at byte 0") != std::string::npos);
    }
  }
  SUBCASE("truncated") {
    bytes.resize(bytes.size() - 1);
    CHECK_THROWS_AS(deserialize(bytes), ParseError);
  }
  SUBCASE("trailing bytes") {
    bytes.push_back(0);
    try {
      deserialize(bytes);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == bytes.size() - 1);
    }
  }
  SUBCASE("empty") { CHECK_THROWS_AS(deserialize(std::vector<std::uint8_t>{}), ParseError); }
}

TEST_CASE("file round trip and size reference") {
  const Run run = make_run(2, 13);
  const auto path = (std::filesystem::temp_directory_path() / "shadowtomo_test.stdr").string();
  write_compressed(path, run.rep);
  CHECK(read_compressed(path) == run.rep);
  const double bits = 8.0 * static_cast<double>(std::filesystem::file_size(path));
  const double ref = reference_bits(run.rep);
  CHECK(ref > 0.0);
  CHECK(bits / ref < 8.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_compressed(path), Error);
}
