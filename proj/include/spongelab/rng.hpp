#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spongelab/common.hpp"

namespace spongelab {

// 64-bit finalizer (murmur3 constants); bijective, good avalanche.
inline constexpr uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline constexpr uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Root seed for an experiment. All randomness anywhere in the library is
// derived from one of these through labeled forks, so a run is fully
// reproducible from (seed, code).
struct Seed256 {
  std::array<uint64_t, 4> words{};

  static Seed256 from_u64(uint64_t v) {
    Seed256 s;
    s.words = {mix64(v ^ 0x9e3779b97f4a7c15ULL), mix64(v ^ 0xbf58476d1ce4e5b9ULL),
               mix64(v ^ 0x94d049bb133111ebULL), mix64(v ^ 0xd6e8feb86659fd93ULL)};
    return s;
  }

  friend bool operator==(const Seed256&, const Seed256&) = default;
};

// Counter-mode deterministic generator. A block is a keyed mix of the
// counter, so streams never depend on how much output earlier forks
// consumed. fork() derives an independent stream via a label; identical
// (seed, label path) pairs always produce identical streams.
class DetRng {
 public:
  DetRng() : DetRng(Seed256{}) {}
  explicit DetRng(const Seed256& seed) : key_(seed.words) {}

  DetRng fork(uint64_t label) const {
    Seed256 child;
    child.words[0] = mix64(key_[0] ^ mix64(label ^ 0xa0761d6478bd642fULL));
    child.words[1] = mix64(key_[1] ^ mix64(label ^ 0xe7037ed1a0b428dbULL));
    child.words[2] = mix64(key_[2] ^ mix64(label ^ 0x8ebc6af09c88c6e3ULL));
    child.words[3] = mix64(key_[3] ^ mix64(label ^ 0x589965cc75374cc3ULL));
    return DetRng(child);
  }

  DetRng fork(std::string_view label) const { return fork(fnv1a(label)); }

  Seed256 state_seed() const { return Seed256{key_}; }

  uint64_t next_u64() { return block(counter_++); }

  // Uniform on [0, bound). Masked rejection: no modulo bias.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    const uint64_t mask = mask_bits(ceil_log2(bound));
    for (;;) {
      uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return uniform01() < p; }

 private:
  uint64_t block(uint64_t ctr) const {
    uint64_t h = mix64(ctr * 0x9e3779b97f4a7c15ULL ^ key_[0]);
    h = mix64(h ^ key_[1]);
    h = mix64(h ^ key_[2]);
    return mix64(h ^ key_[3]);
  }

  std::array<uint64_t, 4> key_{};
  uint64_t counter_ = 0;
};

// Keyed bijection on [0, size) evaluable at a point in either direction,
// for domains too large to hold a shuffled table. Balanced Feistel over
// the next strictly larger power of two, then cycle walking back into
// range (expected < 2 iterations).
class PointPermutation {
 public:
  PointPermutation(const Seed256& key, uint64_t size) : key_(key.words), size_(size) {
    if (size < 1) throw parameter_error("point permutation: empty domain");
    uint32_t bits = ceil_log2(size) + 1;  // strictly larger, avoids the even-permutation artifact
    half_ = (bits + 1) / 2;
  }

  uint64_t size() const { return size_; }

  uint64_t fwd(uint64_t x) const {
    check(x);
    do {
      x = encrypt(x);
    } while (x >= size_);
    return x;
  }

  uint64_t inv(uint64_t x) const {
    check(x);
    do {
      x = decrypt(x);
    } while (x >= size_);
    return x;
  }

 private:
  static constexpr uint32_t kRounds = 4;

  void check(uint64_t x) const {
    if (x >= size_) throw parameter_error("point permutation: input out of range");
  }

  uint64_t round_fn(uint32_t round, uint64_t v) const {
    uint64_t h = mix64(v ^ key_[round & 3] ^ (uint64_t(round) << 56));
    return mix64(h ^ key_[(round + 1) & 3]) & mask_bits(half_);
  }

  uint64_t encrypt(uint64_t x) const {
    uint64_t left = x >> half_, right = x & mask_bits(half_);
    for (uint32_t r = 0; r < kRounds; ++r) {
      uint64_t next = left ^ round_fn(r, right);
      left = right;
      right = next;
    }
    return (left << half_) | right;
  }

  uint64_t decrypt(uint64_t x) const {
    uint64_t left = x >> half_, right = x & mask_bits(half_);
    for (uint32_t r = kRounds; r-- > 0;) {
      uint64_t prev = right ^ round_fn(r, left);
      right = left;
      left = prev;
    }
    return (left << half_) | right;
  }

  std::array<uint64_t, 4> key_{};
  uint64_t size_;
  uint32_t half_ = 0;
};

// Unbiased Fisher-Yates driven by a DetRng.
template <typename T>
void shuffle_vector(std::vector<T>& v, DetRng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = size_t(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

// Identity vector [0, size).
inline std::vector<uint32_t> iota_u32(size_t size) {
  std::vector<uint32_t> v(size);
  for (size_t i = 0; i < size; ++i) v[i] = uint32_t(i);
  return v;
}

// Draws distinct elements of [0, domain) without replacement, O(1) amortized
// per draw.  Backed by a sparse Fisher-Yates: only touched slots are stored.
// reset() is cheap, so one instance serves many Monte Carlo trials.
class SparseSampler {
 public:
  explicit SparseSampler(uint64_t domain) : domain_(domain) {
    if (domain > pow2(20)) {
      // keep the dense backing bounded; larger domains use the map
      dense_ = false;
    } else {
      dense_ = true;
      slot_.assign(size_t(domain), 0);
      epoch_mark_.assign(size_t(domain), 0);
    }
  }

  void reset() {
    drawn_ = 0;
    if (dense_) {
      ++epoch_;
    } else {
      sparse_.clear();
    }
  }

  uint64_t domain() const { return domain_; }
  uint64_t drawn() const { return drawn_; }

  // Next element of a uniform random enumeration of the domain.
  uint64_t draw(DetRng& rng) {
    uint64_t i = drawn_++;
    uint64_t j = i + rng.below(domain_ - i);
    uint64_t vi = get(i), vj = get(j);
    set(i, vj);
    set(j, vi);
    return vj;
  }

 private:
  uint64_t get(uint64_t idx) {
    if (dense_) return epoch_mark_[size_t(idx)] == epoch_ ? slot_[size_t(idx)] : idx;
    auto it = sparse_.find(idx);
    return it == sparse_.end() ? idx : it->second;
  }
  void set(uint64_t idx, uint64_t val) {
    if (dense_) {
      slot_[size_t(idx)] = val;
      epoch_mark_[size_t(idx)] = epoch_;
    } else {
      sparse_[idx] = val;
    }
  }

  uint64_t domain_;
  uint64_t drawn_ = 0;
  bool dense_;
  std::vector<uint64_t> slot_;
  std::vector<uint32_t> epoch_mark_;
  uint32_t epoch_ = 1;
  std::unordered_map<uint64_t, uint64_t> sparse_;
};

}  // namespace spongelab
