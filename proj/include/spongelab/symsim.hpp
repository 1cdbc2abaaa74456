#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "spongelab/bitdomain.hpp"
#include "spongelab/common.hpp"
#include "spongelab/rng.hpp"
#include "spongelab/young.hpp"

namespace spongelab {

// ---------------------------------------------------------------------------
// Transversal permutation pi_f: the canonical permutation whose sponge hash
// equals f. Forward rule maps x||g||y to (y ^ f(x))||g||x; the backward rule
// maps a||g||b to b||g||(a ^ f(b)). Either direction costs one f evaluation.

template <typename F>
uint32_t transversal_fwd(const SpongeParams& p, F&& f, uint32_t w) {
  const uint32_t shift = p.n - p.r;  // = c
  const uint32_t x = w >> shift;
  const uint32_t g = (w >> p.r) & uint32_t(mask_bits(p.n - 2 * p.r));
  const uint32_t y = w & uint32_t(mask_bits(p.r));
  return ((y ^ f(x)) << shift) | (g << p.r) | x;
}

template <typename F>
uint32_t transversal_inv(const SpongeParams& p, F&& f, uint32_t w) {
  const uint32_t shift = p.n - p.r;
  const uint32_t a = w >> shift;
  const uint32_t g = (w >> p.r) & uint32_t(mask_bits(p.n - 2 * p.r));
  const uint32_t b = w & uint32_t(mask_bits(p.r));
  return (b << shift) | (g << p.r) | (a ^ f(b));
}

struct Transversal {
  SpongeParams params;
  const FunctionTable* f = nullptr;

  Transversal(const SpongeParams& p, const FunctionTable& table) : params(p), f(&table) {
    if (table.params != p) throw parameter_error("transversal: params mismatch");
  }

  uint32_t fwd(uint32_t w) const {
    return transversal_fwd(params, [&](uint32_t x) { return f->eval(x); }, w);
  }
  uint32_t inv(uint32_t w) const {
    return transversal_inv(params, [&](uint32_t x) { return f->eval(x); }, w);
  }
};

inline PermutationTable transversal_table(const FunctionTable& f) {
  Transversal t(f.params, f);
  std::vector<uint32_t> fwd(size_t(f.params.domain_size()));
  for (uint64_t w = 0; w < f.params.domain_size(); ++w)
    fwd[size_t(w)] = t.fwd(uint32_t(w));
  return PermutationTable::from_forward(f.params, std::move(fwd));
}

// ---------------------------------------------------------------------------
// Shared randomness: one root seed, domain-separated into the sigma stream
// (inner symmetrizer, input-point blocks) and the omega stream (outer
// symmetrizer, prefix blocks). Offline and online consumers built from the
// same SharedRandomness see identical sigma and omega.

struct SharedRandomness {
  Seed256 seed;

  explicit SharedRandomness(const Seed256& s) : seed(s) {}

  // Enumerable 16-bit variant used where experiments must scan the whole
  // shared-randomness space.
  static SharedRandomness restricted16(uint16_t v) {
    return SharedRandomness(DetRng(Seed256::from_u64(v)).fork("sr16").state_seed());
  }

  Seed256 sigma_seed() const { return DetRng(seed).fork("sigma").state_seed(); }
  Seed256 omega_seed() const { return DetRng(seed).fork("omega").state_seed(); }
};

// ---------------------------------------------------------------------------
// Lazy pointwise evaluation of a uniform member of one of the two Young
// subgroups. Small blocks are materialized on demand (cached, capped);
// oversized blocks are evaluated through a keyed point permutation. Values
// are identical to sample_member() under the same role seed.

class BlockPermEvaluator {
 public:
  enum class Role { prefix_blocks, input_point_blocks };

  BlockPermEvaluator(const SpongeParams& p, Role role, const Seed256& role_seed,
                     uint64_t cache_cap_entries = pow2(22))
      : params_(p), role_(role), seed_(role_seed), cache_cap_(cache_cap_entries) {}

  const SpongeParams& params() const { return params_; }

  uint32_t fwd(uint32_t point) const { return eval(point, Dir::fwd); }
  uint32_t inv(uint32_t point) const { return eval(point, Dir::inv); }

  uint64_t block_size(uint64_t ordinal) const {
    if (role_ == Role::prefix_blocks) return pow2(params_.c);
    return ordinal < params_.rate_size() ? 1 : params_.domain_size() - params_.rate_size();
  }

  uint64_t block_count() const {
    return role_ == Role::prefix_blocks ? params_.rate_size() : params_.rate_size() + 1;
  }

  // Position-in-block transport: (ordinal, index) <-> domain point.
  uint64_t ordinal_of(uint32_t point) const {
    if (role_ == Role::prefix_blocks) return point >> params_.c;
    return (point & mask_bits(params_.c)) == 0 ? (point >> params_.c) : params_.rate_size();
  }

  uint64_t index_in_block(uint32_t point) const {
    if (role_ == Role::prefix_blocks) return point & mask_bits(params_.c);
    if ((point & mask_bits(params_.c)) == 0) return 0;
    const uint64_t a = point >> params_.c;
    const uint64_t b = point & mask_bits(params_.c);
    return a * (pow2(params_.c) - 1) + (b - 1);
  }

  uint32_t point_at(uint64_t ordinal, uint64_t idx) const {
    if (role_ == Role::prefix_blocks) return uint32_t((ordinal << params_.c) | idx);
    if (ordinal < params_.rate_size()) return uint32_t(ordinal << params_.c);
    const uint64_t span = pow2(params_.c) - 1;
    return uint32_t(((idx / span) << params_.c) | (idx % span + 1));
  }

  uint64_t point_evals() const { return evals_.load(std::memory_order_relaxed); }

  // In-block evaluation at one index; the primitive behind fwd/inv.
  uint64_t eval_in_block(uint64_t ordinal, uint64_t idx, Dir d) const {
    evals_.fetch_add(1, std::memory_order_relaxed);
    const uint64_t size = block_size(ordinal);
    if (idx >= size) throw parameter_error("block evaluation: index outside block");
    if (size == 1) return 0;
    if (size <= kMaxMaterializedBlock) {
      const CachedBlock& blk = cached(ordinal, size);
      return d == Dir::fwd ? blk.fwd[size_t(idx)] : blk.inv[size_t(idx)];
    }
    PointPermutation cipher = block_point_perm(seed_, ordinal, size);
    return d == Dir::fwd ? cipher.fwd(idx) : cipher.inv(idx);
  }

 private:
  struct CachedBlock {
    std::vector<uint32_t> fwd, inv;
  };

  uint32_t eval(uint32_t point, Dir d) const {
    if (point >= params_.domain_size())
      throw parameter_error("block evaluation: point outside domain");
    const uint64_t ordinal = ordinal_of(point);
    const uint64_t idx = index_in_block(point);
    return point_at(ordinal, eval_in_block(ordinal, idx, d));
  }

  const CachedBlock& cached(uint64_t ordinal, uint64_t size) const {
    auto it = cache_.find(ordinal);
    if (it != cache_.end()) return it->second;
    if (cached_entries_ + size > cache_cap_) {  // recomputation is cheap and deterministic
      cache_.clear();
      cached_entries_ = 0;
    }
    CachedBlock blk;
    blk.fwd = materialize_block_perm(seed_, ordinal, size);
    blk.inv.resize(blk.fwd.size());
    for (size_t i = 0; i < blk.fwd.size(); ++i) blk.inv[blk.fwd[i]] = uint32_t(i);
    cached_entries_ += size;
    return cache_.emplace(ordinal, std::move(blk)).first->second;
  }

  SpongeParams params_;
  Role role_;
  Seed256 seed_;
  uint64_t cache_cap_;
  mutable std::unordered_map<uint64_t, CachedBlock> cache_;
  mutable uint64_t cached_entries_ = 0;
  mutable std::atomic<uint64_t> evals_{0};
};

inline uint64_t point_eval_block_perm(const BlockPermEvaluator& ev, uint64_t block_ordinal,
                                      uint64_t index_in_block, Dir d) {
  return ev.eval_in_block(block_ordinal, index_in_block, d);
}

// ---------------------------------------------------------------------------
// Offline symmetrization: a full truth table for omega o pi_f o sigma with
// sigma uniform over the input-point stabilizer and omega uniform over the
// prefix stabilizer. The sponge hash of the output equals f exactly.

inline PermutationTable symmetrize_with(const FunctionTable& f, const PermutationTable& sigma,
                                        const PermutationTable& omega) {
  const SpongeParams& p = f.params;
  if (sigma.params != p || omega.params != p)
    throw parameter_error("symmetrize: params mismatch");
  Transversal t(p, f);
  std::vector<uint32_t> fwd(size_t(p.domain_size()));
  for (uint64_t w = 0; w < p.domain_size(); ++w)
    fwd[size_t(w)] = omega.fwd(t.fwd(sigma.fwd(uint32_t(w))));
  return PermutationTable::from_forward(p, std::move(fwd));
}

inline PermutationTable symmetrize(const FunctionTable& f, const SharedRandomness& sr) {
  const SpongeParams& p = f.params;
  YoungSubgroup k_group(BlockPartition::by_input_points(p));
  YoungSubgroup h_group(BlockPartition::by_prefix(p));
  PermutationTable sigma = sample_member(k_group, sr.sigma_seed());
  PermutationTable omega = sample_member(h_group, sr.omega_seed());
  return symmetrize_with(f, sigma, omega);
}

// ---------------------------------------------------------------------------
// Stateless query-access simulator. Answers forward queries as
// omega(pi_f(sigma(w))) and inverse queries as sigma^-1(pi_f^-1(omega^-1(w))),
// each with exactly one f query. Agrees pointwise with symmetrize() built
// from the same shared randomness.

class SimOracle {
 public:
  using FOracle = std::function<uint32_t(uint32_t)>;

  SimOracle(const SpongeParams& params, FOracle f, const SharedRandomness& sr,
            uint64_t cache_cap_entries = pow2(22))
      : params_(params),
        f_(std::move(f)),
        sigma_(params_, BlockPermEvaluator::Role::input_point_blocks, sr.sigma_seed(),
               cache_cap_entries),
        omega_(params_, BlockPermEvaluator::Role::prefix_blocks, sr.omega_seed(),
               cache_cap_entries) {}

  SimOracle(std::shared_ptr<const FunctionTable> f, const SharedRandomness& sr,
            uint64_t cache_cap_entries = pow2(22))
      : SimOracle(f->params, [f](uint32_t x) { return f->eval(x); }, sr, cache_cap_entries) {}

  const SpongeParams& params() const { return params_; }

  uint64_t f_queries() const { return f_queries_.load(std::memory_order_relaxed); }

  // Work spent evaluating the symmetrizers, reported separately from (and
  // never counted toward) the f-query budget.
  uint64_t block_point_evals() const {
    return sigma_.point_evals() + omega_.point_evals();
  }

  uint32_t query(Dir d, uint32_t w) const {
    f_queries_.fetch_add(1, std::memory_order_relaxed);
    return answer(d, w);
  }

  // Uncounted evaluation for unbounded offline phases.
  uint32_t peek(Dir d, uint32_t w) const { return answer(d, w); }

 private:
  uint32_t answer(Dir d, uint32_t w) const {
    if (w >= params_.domain_size()) throw parameter_error("sim query: input out of range");
    if (d == Dir::fwd) {
      uint32_t inner = sigma_.fwd(w);
      uint32_t mid = transversal_fwd(params_, f_, inner);
      return omega_.fwd(mid);
    }
    uint32_t inner = omega_.inv(w);
    uint32_t mid = transversal_inv(params_, f_, inner);
    return sigma_.inv(mid);
  }

  SpongeParams params_;
  FOracle f_;
  BlockPermEvaluator sigma_;
  BlockPermEvaluator omega_;
  mutable std::atomic<uint64_t> f_queries_{0};
};

inline uint32_t sim_query(const SimOracle& o, Dir d, uint32_t w) { return o.query(d, w); }

}  // namespace spongelab
