#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spongelab/bitdomain.hpp"
#include "spongelab/common.hpp"
#include "spongelab/parallel.hpp"
#include "spongelab/rng.hpp"

namespace spongelab {

// ---------------------------------------------------------------------------
// Small permutations (domains up to a few dozen points) used for exhaustive
// group enumeration. Represented as raw image vectors.

using SmallPerm = std::vector<uint8_t>;

inline SmallPerm small_identity(uint32_t n) {
  SmallPerm p(n);
  for (uint32_t i = 0; i < n; ++i) p[i] = uint8_t(i);
  return p;
}

// (a o b)(x) = a(b(x))
inline SmallPerm small_compose(const SmallPerm& a, const SmallPerm& b) {
  SmallPerm out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

inline uint64_t factorial(uint32_t n) {
  uint64_t f = 1;
  for (uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// Lehmer-code rank in [0, n!).
inline uint64_t perm_rank(const SmallPerm& p) {
  uint64_t rank = 0;
  const size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    uint32_t smaller = 0;
    for (size_t j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * factorial(uint32_t(n - 1 - i));
  }
  return rank;
}

inline SmallPerm perm_unrank(uint32_t n, uint64_t rank) {
  std::vector<uint8_t> pool(n);
  for (uint32_t i = 0; i < n; ++i) pool[i] = uint8_t(i);
  SmallPerm p(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint64_t f = factorial(n - 1 - i);
    uint64_t idx = rank / f;
    rank %= f;
    p[i] = pool[size_t(idx)];
    pool.erase(pool.begin() + ptrdiff_t(idx));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Partitions of {0,1}^n into blocks, with the two shapes the sponge needs:
//  - by_prefix: one block per r-bit prefix, each of size 2^c
//  - by_input_points: a singleton for every sponge input z||0^c, plus one
//    block holding everything else (always ordered last)

enum class PartitionKind { by_prefix, by_input_points, custom };

struct BlockPartition {
  SpongeParams params;
  PartitionKind kind = PartitionKind::custom;
  std::vector<std::vector<uint32_t>> blocks;  // sorted within, canonical order
  std::vector<uint32_t> block_of;             // point -> block index

  static BlockPartition by_prefix(const SpongeParams& p) {
    p.require_table_mode();
    BlockPartition part;
    part.params = p;
    part.kind = PartitionKind::by_prefix;
    const uint64_t block_size = pow2(p.c);
    part.blocks.resize(size_t(p.rate_size()));
    part.block_of.resize(size_t(p.domain_size()));
    for (uint64_t x = 0; x < p.rate_size(); ++x) {
      auto& blk = part.blocks[size_t(x)];
      blk.reserve(size_t(block_size));
      for (uint64_t y = 0; y < block_size; ++y) {
        uint32_t point = uint32_t((x << p.c) | y);
        blk.push_back(point);
        part.block_of[point] = uint32_t(x);
      }
    }
    return part;
  }

  static BlockPartition by_input_points(const SpongeParams& p) {
    p.require_table_mode();
    BlockPartition part;
    part.params = p;
    part.kind = PartitionKind::by_input_points;
    const uint64_t singles = p.rate_size();
    part.blocks.resize(size_t(singles) + 1);
    part.block_of.resize(size_t(p.domain_size()));
    for (uint64_t z = 0; z < singles; ++z) {
      uint32_t point = uint32_t(z << p.c);
      part.blocks[size_t(z)] = {point};
      part.block_of[point] = uint32_t(z);
    }
    auto& rest = part.blocks.back();
    rest.reserve(size_t(p.domain_size() - singles));
    for (uint64_t w = 0; w < p.domain_size(); ++w) {
      if ((w & mask_bits(p.c)) == 0) continue;  // a singleton, already placed
      rest.push_back(uint32_t(w));
      part.block_of[size_t(w)] = uint32_t(singles);
    }
    return part;
  }

  static BlockPartition custom_blocks(const SpongeParams& p,
                                      std::vector<std::vector<uint32_t>> blocks) {
    BlockPartition part;
    part.params = p;
    part.kind = PartitionKind::custom;
    part.blocks = std::move(blocks);
    part.block_of.assign(size_t(p.domain_size()), UINT32_MAX);
    uint64_t covered = 0;
    for (size_t b = 0; b < part.blocks.size(); ++b) {
      auto& blk = part.blocks[b];
      std::sort(blk.begin(), blk.end());
      for (uint32_t pt : blk) {
        if (pt >= p.domain_size() || part.block_of[pt] != UINT32_MAX)
          throw parameter_error("partition: blocks must be disjoint subsets of the domain");
        part.block_of[pt] = uint32_t(b);
        ++covered;
      }
    }
    if (covered != p.domain_size())
      throw parameter_error("partition: blocks must cover the domain");
    return part;
  }

  size_t block_count() const { return blocks.size(); }
};

// The canonical per-block randomness rule. Everything that realizes "a
// uniform permutation inside block i under seed s" (dense sampling here,
// lazy pointwise evaluation in the simulator) must go through these two
// functions so that the different realizations agree value for value.
inline DetRng block_stream(const Seed256& role_seed, uint64_t block_ordinal) {
  return DetRng(role_seed).fork("block").fork(block_ordinal);
}

inline std::vector<uint32_t> materialize_block_perm(const Seed256& role_seed,
                                                    uint64_t block_ordinal, uint64_t size) {
  if (size > kMaxMaterializedBlock)
    throw guardrail_error("block too large to materialize");
  DetRng rng = block_stream(role_seed, block_ordinal);
  std::vector<uint32_t> perm = iota_u32(size_t(size));
  shuffle_vector(perm, rng);
  return perm;
}

inline PointPermutation block_point_perm(const Seed256& role_seed, uint64_t block_ordinal,
                                         uint64_t size) {
  Seed256 key = block_stream(role_seed, block_ordinal).fork("cipher").state_seed();
  return PointPermutation(key, size);
}

// Stabilizer of a block partition: all permutations mapping every block to
// itself. Direct product of the per-block symmetric groups.
struct YoungSubgroup {
  BlockPartition partition;

  explicit YoungSubgroup(BlockPartition part) : partition(std::move(part)) {}

  // Product of factorials of block sizes; overflow-guarded, enumeration scale only.
  uint64_t order() const {
    uint64_t o = 1;
    for (const auto& blk : partition.blocks) {
      uint64_t f = factorial(uint32_t(blk.size()));
      if (f != 0 && o > UINT64_MAX / f) throw guardrail_error("subgroup order overflows u64");
      o *= f;
    }
    return o;
  }

  bool contains(const PermutationTable& pi) const {
    for (const auto& blk : partition.blocks)
      for (uint32_t pt : blk)
        if (partition.block_of[pi.fwd(pt)] != partition.block_of[pt]) return false;
    return true;
  }
};

// Uniform member of the subgroup: an independent unbiased shuffle inside
// each block, identity elsewhere.
inline PermutationTable sample_member(const YoungSubgroup& group, const Seed256& seed) {
  const SpongeParams& p = group.partition.params;
  std::vector<uint32_t> fwd(size_t(p.domain_size()));
  for (size_t b = 0; b < group.partition.blocks.size(); ++b) {
    const auto& blk = group.partition.blocks[b];
    if (blk.size() <= kMaxMaterializedBlock) {
      std::vector<uint32_t> inner = materialize_block_perm(seed, b, blk.size());
      for (size_t i = 0; i < blk.size(); ++i) fwd[blk[i]] = blk[inner[i]];
    } else {
      PointPermutation cipher = block_point_perm(seed, b, blk.size());
      for (size_t i = 0; i < blk.size(); ++i) fwd[blk[i]] = blk[size_t(cipher.fwd(i))];
    }
  }
  return PermutationTable::from_forward(p, std::move(fwd));
}

// ---------------------------------------------------------------------------
// Double-coset invariants. Two permutations lie in the same (H, K) double
// coset iff they move the same number of points from every K-block into
// every H-block; the matrix of those counts is the coset's signature.

struct CosetSignature {
  uint32_t rows = 0;  // H-blocks
  uint32_t cols = 0;  // K-blocks, remainder block last
  std::vector<uint32_t> counts;  // row-major

  uint32_t at(uint32_t i, uint32_t j) const { return counts[size_t(i) * cols + j]; }

  friend bool operator==(const CosetSignature&, const CosetSignature&) = default;
  friend auto operator<=>(const CosetSignature& a, const CosetSignature& b) {
    if (auto c = a.rows <=> b.rows; c != 0) return c;
    if (auto c = a.cols <=> b.cols; c != 0) return c;
    return a.counts <=> b.counts;
  }
};

namespace detail {

template <typename PermFn>
CosetSignature signature_impl(PermFn&& image_of, uint64_t domain, const BlockPartition& rows,
                              const BlockPartition& cols) {
  CosetSignature sig;
  sig.rows = uint32_t(rows.block_count());
  sig.cols = uint32_t(cols.block_count());
  sig.counts.assign(size_t(sig.rows) * sig.cols, 0);
  for (uint64_t w = 0; w < domain; ++w) {
    uint32_t j = cols.block_of[size_t(w)];
    uint32_t i = rows.block_of[image_of(uint32_t(w))];
    ++sig.counts[size_t(i) * sig.cols + j];
  }
  return sig;
}

}  // namespace detail

inline CosetSignature signature(const PermutationTable& pi, const BlockPartition& rows,
                                const BlockPartition& cols) {
  if (rows.params.n != pi.params.n || cols.params.n != pi.params.n)
    throw parameter_error("signature: partitions and permutation must share n");
  return detail::signature_impl([&](uint32_t w) { return pi.fwd(w); },
                                pi.params.domain_size(), rows, cols);
}

inline CosetSignature signature(const SmallPerm& pi, const BlockPartition& rows,
                                const BlockPartition& cols) {
  return detail::signature_impl([&](uint32_t w) { return uint32_t(pi[w]); }, pi.size(), rows,
                                cols);
}

inline bool same_double_coset(const PermutationTable& pi1, const PermutationTable& pi2,
                              const BlockPartition& rows, const BlockPartition& cols) {
  if (pi1.params.n != pi2.params.n)
    throw parameter_error("same_double_coset: mismatched domains");
  return signature(pi1, rows, cols) == signature(pi2, rows, cols);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration (desk scale: N <= 8).

// Calls fn(perm, rank) for every permutation of [0, n). Chunked over ranks so
// callers can parallelize externally via rank ranges instead.
template <typename Fn>
void enumerate_permutations(uint32_t n, Fn&& fn) {
  SmallPerm p = small_identity(n);
  uint64_t rank = 0;
  do {
    fn(p, rank);
    ++rank;
  } while (std::next_permutation(p.begin(), p.end()));
}

// All members of a Young subgroup, as an odometer over the per-block
// symmetric groups. Blocks beyond enumeration scale are rejected.
template <typename Fn>
void enumerate_young(const BlockPartition& part, Fn&& fn) {
  std::vector<SmallPerm> inner;
  inner.reserve(part.blocks.size());
  for (const auto& blk : part.blocks) {
    if (blk.size() > 12) throw guardrail_error("young enumeration: block too large");
    inner.push_back(small_identity(uint32_t(blk.size())));
  }
  const uint32_t n = uint32_t(part.params.domain_size());
  SmallPerm member(n);
  for (;;) {
    for (size_t b = 0; b < part.blocks.size(); ++b) {
      const auto& blk = part.blocks[b];
      for (size_t i = 0; i < blk.size(); ++i) member[blk[i]] = uint8_t(blk[inner[b][i]]);
    }
    fn(member);
    size_t b = 0;
    while (b < inner.size() && !std::next_permutation(inner[b].begin(), inner[b].end())) ++b;
    if (b == inner.size()) break;
  }
}

// ---------------------------------------------------------------------------
// Census of all double cosets at exhaustive scale.

struct CosetCensusEntry {
  CosetSignature signature;
  uint64_t size = 0;            // members in the coset
  uint64_t factorizations = 0;  // pairs (h, k) with h * x * k = x, any member x
  SmallPerm example;            // least-rank member
  std::vector<uint32_t> example_sponge;  // its sponge truth table
};

struct CosetCensus {
  SpongeParams params;
  uint64_t group_order = 0;
  uint64_t subgroup_h_order = 0;
  uint64_t subgroup_k_order = 0;
  std::vector<CosetCensusEntry> entries;  // sorted by signature
};

inline std::vector<uint32_t> small_sponge_table(const SmallPerm& pi, const SpongeParams& p) {
  std::vector<uint32_t> t(size_t(p.rate_size()));
  for (uint64_t x = 0; x < p.rate_size(); ++x)
    t[size_t(x)] = uint32_t(pi[size_t(x << p.c)]) >> p.c;
  return t;
}

inline CosetCensus coset_census(const SpongeParams& params) {
  const uint64_t domain = params.domain_size();
  if (domain > kMaxGroupEnumDomain)
    throw guardrail_error("coset census: exhaustive mode limited to 2^n <= " +
                          std::to_string(kMaxGroupEnumDomain));
  const uint32_t n_points = uint32_t(domain);
  const BlockPartition rows = BlockPartition::by_prefix(params);
  const BlockPartition cols = BlockPartition::by_input_points(params);

  struct Acc {
    uint64_t size = 0;
    uint64_t min_rank = UINT64_MAX;
    SmallPerm example;
  };
  std::map<CosetSignature, Acc> classes;

  // Parallel over rank ranges with an ordered merge keeps the example
  // (least rank) deterministic regardless of worker count.
  const uint64_t total = factorial(n_points);
  const uint64_t chunk = 4096;
  std::vector<std::map<CosetSignature, Acc>> partial((total + chunk - 1) / chunk);
  parallel_chunks(total, chunk, [&](uint64_t lo, uint64_t hi) {
    auto& local = partial[lo / chunk];
    SmallPerm p = perm_unrank(n_points, lo);
    for (uint64_t rank = lo; rank < hi; ++rank) {
      CosetSignature sig = signature(p, rows, cols);
      Acc& acc = local[sig];
      ++acc.size;
      if (rank < acc.min_rank) {
        acc.min_rank = rank;
        acc.example = p;
      }
      std::next_permutation(p.begin(), p.end());
    }
  });
  for (auto& local : partial)
    for (auto& [sig, acc] : local) {
      Acc& dst = classes[sig];
      dst.size += acc.size;
      if (acc.min_rank < dst.min_rank) {
        dst.min_rank = acc.min_rank;
        dst.example = acc.example;
      }
    }

  // Factorization counts by brute force over H x K.
  std::vector<SmallPerm> h_members, k_members;
  enumerate_young(rows, [&](const SmallPerm& h) { h_members.push_back(h); });
  enumerate_young(cols, [&](const SmallPerm& k) { k_members.push_back(k); });

  CosetCensus census;
  census.params = params;
  census.group_order = total;
  census.subgroup_h_order = h_members.size();
  census.subgroup_k_order = k_members.size();
  for (auto& [sig, acc] : classes) {
    CosetCensusEntry e;
    e.signature = sig;
    e.size = acc.size;
    e.example = acc.example;
    e.example_sponge = small_sponge_table(acc.example, params);
    for (const auto& h : h_members) {
      SmallPerm hx = small_compose(h, acc.example);
      for (const auto& k : k_members) {
        bool fixes = true;
        for (uint32_t pt = 0; pt < n_points && fixes; ++pt)
          fixes = hx[k[pt]] == acc.example[pt];
        if (fixes) ++e.factorizations;
      }
    }
    census.entries.push_back(std::move(e));
  }
  return census;
}

}  // namespace spongelab
