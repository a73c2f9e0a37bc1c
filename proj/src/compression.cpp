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

#include "shadowtomo/compression.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>

namespace shadowtomo {

namespace {

constexpr char kMagic[5] = {'S', 'T', 'D', 'R', '1'};

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    flush_bits();
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void bits(std::uint64_t v, int count) {
    for (int i = 0; i < count; ++i) {
      if (bit_pos_ == 0) out_.push_back(0);
      if ((v >> i) & 1U) out_.back() |= static_cast<std::uint8_t>(1U << bit_pos_);
      bit_pos_ = (bit_pos_ + 1) & 7;
    }
  }
  void flush_bits() { bit_pos_ = 0; }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    flush_bits();
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
  int bit_pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t offset() const { return pos_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void expect(std::size_t n) const {
    if (data_.size() - pos_ < n) fail("unexpected end of data");
  }
  void raw(void* out, std::size_t n) {
    align();
    expect(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::uint64_t bits(int count) {
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) {
      if (bit_pos_ == 0) expect(1);
      if ((data_[pos_] >> bit_pos_) & 1U) v |= std::uint64_t{1} << i;
      if (++bit_pos_ == 8) {
        bit_pos_ = 0;
        ++pos_;
      }
    }
    return v;
  }
  void align() {
    if (bit_pos_ != 0) {
      bit_pos_ = 0;
      ++pos_;
    }
  }
  bool at_end() const { return pos_ == data_.size() && bit_pos_ == 0; }

 private:
  std::uint64_t le(int n) {
    align();
    expect(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  int bit_pos_ = 0;
};

void write_pauli(Writer& w, const PauliOp& p) {
  require(p.is_hermitian(), "only Hermitian Paulis can be stored");
  const int n = p.num_qubits();
  w.bits(p.x_bits(), n);
  w.bits(p.z_bits(), n);
  w.bits(static_cast<std::uint64_t>(p.phase() >> 1), 1);
}

PauliOp read_pauli(Reader& r, int n) {
  const std::uint64_t x = r.bits(n);
  const std::uint64_t z = r.bits(n);
  const int sign = static_cast<int>(r.bits(1));
  return PauliOp(n, x, z, 2 * sign);
}

}  // namespace

constexpr double kMaxFileBits = 8.0 * (1ULL << 30);

std::vector<std::uint8_t> serialize(const CompressedRep& rep) {
  const int n = rep.num_qubits;
  require(n >= 1 && 2 * n <= 64, "stored runs need 1 <= n <= 32");
  double bits = 2.0 * n * static_cast<double>(rep.bell.shots);
  for (const auto& shot : rep.single.shots) {
    const double k = static_cast<double>(rep.single.bases[shot.basis].size());
    bits += static_cast<double>(shot.count) * (7.0 + k * (2 * n + 2));
  }
  require(bits <= kMaxFileBits, "record would take " + std::to_string(static_cast<std::uint64_t>(bits / 8)) +
                                    " bytes, above the 1 GiB limit");
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  // Header.
  w.u32(static_cast<std::uint32_t>(n));
  w.f64(rep.epsilon);
  w.f64(rep.delta_fail);
  w.u64(rep.seed);
  w.f64(rep.constants.batch_constant);
  w.f64(rep.constants.median_constant);
  w.f64(rep.constants.bell_constant);
  w.f64(rep.constants.delta_fail);
  w.u64(rep.targets.size());
  for (const auto& p : rep.targets) write_pauli(w, p);
  // Bell block.
  w.u64(rep.bell.shots);
  w.u64(rep.bell.counts.size());
  std::uint64_t rows = 0;
  for (const auto& [outcome, count] : rep.bell.counts) {
    for (std::uint64_t c = 0; c < count; ++c) w.bits(outcome, 2 * n);
    rows += count;
  }
  require(rows == rep.bell.shots, "Bell record counts do not add up to its shot total");
  // Basis block.
  const auto& s = rep.single;
  w.u32(s.num_batches);
  w.u64(s.shots_per_batch);
  w.u64(s.total_shots());
  for (const auto& shot : s.shots) {
    const auto& basis = s.bases[shot.basis];
    require(basis.size() <= 64, "a basis holds at most 64 Paulis");
    for (std::uint64_t c = 0; c < shot.count; ++c) {
      w.bits(basis.size(), 7);
      for (const auto& p : basis) write_pauli(w, p);
    }
  }
  // Outcome block.
  w.flush_bits();
  for (const auto& shot : s.shots)
    for (std::uint64_t c = 0; c < shot.count; ++c) w.bits(shot.outcomes, static_cast<int>(s.bases[shot.basis].size()));
  return w.take();
}

CompressedRep deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  char magic[5];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) throw ParseError(0, "bad magic, expected STDR1");
  CompressedRep rep;
  std::size_t at = r.offset();
  const std::uint32_t n = r.u32();
  if (n < 1 || n > 32) throw ParseError(at, "qubit count outside [1, 32]");
  rep.num_qubits = static_cast<int>(n);
  rep.epsilon = r.f64();
  rep.delta_fail = r.f64();
  rep.seed = r.u64();
  rep.constants.batch_constant = r.f64();
  rep.constants.median_constant = r.f64();
  rep.constants.bell_constant = r.f64();
  rep.constants.delta_fail = r.f64();
  at = r.offset();
  const std::uint64_t num_targets = r.u64();
  if (num_targets > bytes.size() * 8) throw ParseError(at, "target count exceeds the data size");
  for (std::uint64_t i = 0; i < num_targets; ++i) rep.targets.push_back(read_pauli(r, rep.num_qubits));

  at = r.offset();
  rep.bell.shots = r.u64();
  if (rep.bell.shots > bytes.size() * 8) throw ParseError(at, "Bell row count exceeds the data size");
  const std::size_t distinct_at = r.offset();
  const std::uint64_t distinct = r.u64();
  for (std::uint64_t i = 0; i < rep.bell.shots; ++i) {
    const std::uint64_t row = r.bits(2 * rep.num_qubits);
    if (!rep.bell.counts.empty() && rep.bell.counts.back().first == row) {
      ++rep.bell.counts.back().second;
    } else {
      if (!rep.bell.counts.empty() && rep.bell.counts.back().first > row) r.fail("Bell rows are not sorted");
      rep.bell.counts.push_back({row, 1});
    }
  }
  if (rep.bell.counts.size() != distinct) throw ParseError(distinct_at, "Bell distinct-row count mismatch");

  auto& s = rep.single;
  s.num_batches = r.u32();
  s.shots_per_batch = r.u64();
  at = r.offset();
  const std::uint64_t num_shots = r.u64();
  if (num_shots > bytes.size() * 8) throw ParseError(at, "shot count exceeds the data size");
  if (num_shots != static_cast<std::uint64_t>(s.num_batches) * s.shots_per_batch && num_shots != 0)
    throw ParseError(at, "shot count does not match batches x shots per batch");
  std::vector<std::uint32_t> basis_of;
  basis_of.reserve(num_shots);
  std::map<std::vector<PauliOp>, std::uint32_t> ids;
  for (std::uint64_t i = 0; i < num_shots; ++i) {
    at = r.offset();
    const auto k = static_cast<std::size_t>(r.bits(7));
    if (k > 64) throw ParseError(at, "basis record longer than 64 Paulis");
    std::vector<PauliOp> basis;
    for (std::size_t j = 0; j < k; ++j) basis.push_back(read_pauli(r, rep.num_qubits));
    auto it = ids.find(basis);
    if (it == ids.end()) {
      it = ids.emplace(basis, static_cast<std::uint32_t>(s.bases.size())).first;
      s.bases.push_back(std::move(basis));
    }
    basis_of.push_back(it->second);
  }
  r.align();
  for (std::uint64_t i = 0; i < num_shots; ++i) {
    const std::uint32_t basis = basis_of[i];
    const std::uint64_t outcome = r.bits(static_cast<int>(s.bases[basis].size()));
    const auto batch = static_cast<std::uint32_t>(i / s.shots_per_batch);
    if (!s.shots.empty() && s.shots.back().batch == batch && s.shots.back().basis == basis &&
        s.shots.back().outcomes == outcome) {
      ++s.shots.back().count;
    } else {
      s.shots.push_back({batch, basis, outcome, 1});
    }
  }
  r.align();
  if (!r.at_end()) r.fail("trailing bytes after the outcome block");
  return rep;
}

void write_compressed(const std::string& path, const CompressedRep& rep) {
  const auto bytes = serialize(rep);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), "write failed for " + path);
}

CompressedRep read_compressed(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

double reference_bits(const CompressedRep& rep) {
  const double n = rep.num_qubits;
  return n * static_cast<double>(rep.bell.shots) + n * n * static_cast<double>(rep.single.total_shots());
}

QueryAnswer query(const CompressedRep& rep, const PauliOp& p) { return RecordEstimator(rep).query(p); }

}  // namespace shadowtomo
