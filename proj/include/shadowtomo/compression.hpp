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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shadowtomo/protocols.hpp"

namespace shadowtomo {

/// Compressed representation of a two-copy run: the raw record itself.
using CompressedRep = TwoCopyRecord;

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// "STDR1" format: header, Bell block (2n bits per row), basis block (one record per
/// shot listing its Paulis), outcome block (one bit per listed Pauli). Little-endian.
std::vector<std::uint8_t> serialize(const CompressedRep& rep);

/// Throws ParseError with the byte offset of the first inconsistency.
CompressedRep deserialize(std::span<const std::uint8_t> bytes);

void write_compressed(const std::string& path, const CompressedRep& rep);
CompressedRep read_compressed(const std::string& path);

/// n M_bell + n^2 N_basis, the reference bit count for size audits.
double reference_bits(const CompressedRep& rep);

using QueryAnswer = RecordEstimator::Answer;

/// Estimate of Tr(P rho) recomputed from the stored data.
QueryAnswer query(const CompressedRep& rep, const PauliOp& p);

}  // namespace shadowtomo
