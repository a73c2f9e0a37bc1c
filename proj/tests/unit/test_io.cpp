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

#include <filesystem>
#include <fstream>

#include "shadowtomo/io.hpp"

using namespace shadowtomo;

TEST_CASE("named generators") {
  CHECK(parse_state_spec("ghz n=3").num_qubits() == 3);
  CHECK(expectation(parse_state_spec("basis n=2 index=3"), PauliOp::parse("ZZ")) == doctest::Approx(1.0));
  CHECK(expectation(parse_state_spec("product 0+"), PauliOp::parse("ZX")) == doctest::Approx(1.0));
  CHECK(parse_state_spec("maximally_mixed n=2").members().size() == 4);
  const QuantumState a = parse_state_spec("haar_random n=2 seed=5");
  const QuantumState b = parse_state_spec("haar_random n=2 seed=5");
  CHECK((a.members()[0].amplitudes - b.members()[0].amplitudes).norm() == 0.0);
  CHECK(parse_state_spec("gaussian n_modes=2 seed=1 mapping=jw").num_qubits() == 2);
  CHECK_THROWS_AS(parse_state_spec("ghz"), Error);
}

TEST_CASE("ket files") {
  const auto path = (std::filesystem::temp_directory_path() / "shadowtomo_ket.txt").string();
  {
    std::ofstream out(path);
    out << "# Bell pair\n00 0.70710678118654752\n11 0 0.70710678118654752\n";
  }
  const QuantumState s = parse_state_spec(path);
  CHECK(s.num_qubits() == 2);
  CHECK(expectation(s, PauliOp::parse("ZZ")) == doctest::Approx(1.0));
  CHECK(expectation(s, PauliOp::parse("XY")) == doctest::Approx(1.0));
  std::filesystem::remove(path);
}

TEST_CASE("key values and lists") {
  const auto kv = parse_key_values("n=3 seed=7");
  CHECK(kv.at("n") == "3");
  CHECK(kv.at("seed") == "7");
  const auto ops = parse_pauli_list({"XX", "-ZI"});
  CHECK(ops[1] == PauliOp::parse("-ZI"));
  const auto ms = parse_monomial_list({"G[1,2]", "G[3,4]"});
  CHECK(ms[1].n_modes == 2);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}
