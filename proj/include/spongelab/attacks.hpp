#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "spongelab/common.hpp"
#include "spongelab/games.hpp"
#include "spongelab/parallel.hpp"
#include "spongelab/rng.hpp"
#include "spongelab/sponge.hpp"

namespace spongelab {

// ---------------------------------------------------------------------------
// The separation counterexample: a function {0,1}^2n -> {0,1}^n that is
// uniform except that inputs ending in the trapdoor s return their top half.
// Entries are evaluated lazily from a keyed hash; the foil is the same
// construction with no trapdoor.

struct TrapdoorFunction {
  uint32_t n = 0;
  bool has_trapdoor = false;
  uint32_t trapdoor = 0;
  Seed256 seed;

  static TrapdoorFunction with_trapdoor(uint32_t n, const Seed256& seed) {
    if (2 * n > 48) throw guardrail_error("trapdoor function: 2n too large");
    TrapdoorFunction g;
    g.n = n;
    g.seed = DetRng(seed).fork("table").state_seed();
    g.has_trapdoor = true;
    DetRng rng = DetRng(seed).fork("trapdoor");
    g.trapdoor = uint32_t(rng.below(pow2(n)));
    return g;
  }

  static TrapdoorFunction plain(uint32_t n, const Seed256& seed) {
    TrapdoorFunction h = with_trapdoor(n, seed);
    h.has_trapdoor = false;
    h.trapdoor = 0;
    return h;
  }

  uint32_t eval(uint64_t w) const {
    if (w >= pow2(2 * n)) throw parameter_error("trapdoor function: input out of range");
    if (has_trapdoor && uint32_t(w & mask_bits(n)) == trapdoor) return uint32_t(w >> n);
    uint64_t h = mix64(w * 0x9e3779b97f4a7c15ULL ^ seed.words[0]);
    h = mix64(h ^ seed.words[1]);
    h = mix64(h ^ seed.words[2]);
    return uint32_t(mix64(h ^ seed.words[3]) & mask_bits(n));
  }
};

class TrapdoorOracle {
 public:
  explicit TrapdoorOracle(const TrapdoorFunction& fn) : fn_(&fn) {}

  uint32_t query(uint64_t w) {
    ++queries_;
    return fn_->eval(w);
  }
  uint32_t peek(uint64_t w) const { return fn_->eval(w); }  // offline, uncounted
  uint64_t queries() const { return queries_; }

 private:
  const TrapdoorFunction* fn_;
  uint64_t queries_ = 0;
};

// Offline trapdoor recovery: scan suffix candidates, keep the one consistent
// with three probe inputs (false-positive rate 2^-3n per candidate). Against
// the plain function no candidate passes and the scan falls back to suffix 0.
inline uint32_t recover_trapdoor_offline(const TrapdoorFunction& fn) {
  const uint64_t space = pow2(fn.n);
  for (uint64_t u = 0; u < space; ++u) {
    bool hit = true;
    for (uint64_t probe = 1; probe <= 3 && hit; ++probe)
      hit = fn.eval(((probe % space) << fn.n) | u) == probe % space;
    if (hit) return uint32_t(u);
  }
  return 0;
}

// The advice-only inverter: given the challenge y and the trapdoor advice,
// propose y || s. Zero online queries by construction.
inline uint64_t trapdoor_attack(uint32_t n, uint32_t advice_trapdoor, uint32_t y) {
  return (uint64_t(y) << n) | advice_trapdoor;
}

struct TrapdoorSeparationResult {
  GameReport trapdoor_world;  // construction C: success rate 1
  GameReport random_world;    // construction R: success rate ~ 2^-n
  uint64_t online_queries = 0;
};

inline TrapdoorSeparationResult run_trapdoor_separation(uint32_t n, uint64_t trials,
                                                        const Seed256& seed) {
  TrapdoorSeparationResult out;
  for (int which = 0; which < 2; ++which) {
    GameReport rep;
    rep.world = which == 0 ? "trapdoor" : "random";
    rep.trials = trials;
    std::vector<uint8_t> wins(size_t(trials), 0);
    DetRng root = DetRng(seed).fork("separation").fork(rep.world);
    parallel_chunks(trials, 64, [&](uint64_t lo, uint64_t hi) {
      for (uint64_t t = lo; t < hi; ++t) {
        DetRng rng = root.fork(t);
        Seed256 fn_seed = rng.fork("fn").state_seed();
        TrapdoorFunction fn = which == 0 ? TrapdoorFunction::with_trapdoor(n, fn_seed)
                                         : TrapdoorFunction::plain(n, fn_seed);
        uint32_t advice = recover_trapdoor_offline(fn);  // unbounded offline stage
        TrapdoorOracle online(fn);
        uint32_t y = uint32_t(rng.below(pow2(n)));
        uint64_t cand = trapdoor_attack(n, advice, y);
        if (online.queries() != 0) throw contract_error("trapdoor attack made a query");
        // verification is the cryptosystem's query, not the adversary's
        wins[size_t(t)] = fn.eval(cand) == y ? 1 : 0;
      }
    });
    for (uint8_t w : wins) rep.successes += w;
    (which == 0 ? out.trapdoor_world : out.random_world) = rep;
  }
  return out;
}

struct TrapdoorDistinguishResult {
  uint64_t query_budget = 0;
  double advantage = 0;
  double sigma = 0;
  double analytic = 0;  // exact hit-probability advantage for this distinguisher
};

// Best-effort classical distinguisher: probe T random inputs x || u and
// report "trapdoor" when some probe returns exactly x.
inline TrapdoorDistinguishResult trapdoor_distinguish(uint32_t n, uint64_t query_budget,
                                                      uint64_t trials, const Seed256& seed) {
  TrapdoorDistinguishResult out;
  out.query_budget = query_budget;
  double rates[2] = {0, 0};
  for (int which = 0; which < 2; ++which) {
    std::vector<uint8_t> says(size_t(trials), 0);
    DetRng root = DetRng(seed).fork("distinguish").fork(uint64_t(which));
    parallel_chunks(trials, 64, [&](uint64_t lo, uint64_t hi) {
      for (uint64_t t = lo; t < hi; ++t) {
        DetRng rng = root.fork(t);
        Seed256 fn_seed = rng.fork("fn").state_seed();
        TrapdoorFunction fn = which == 0 ? TrapdoorFunction::with_trapdoor(n, fn_seed)
                                         : TrapdoorFunction::plain(n, fn_seed);
        TrapdoorOracle oracle(fn);
        uint8_t hit = 0;
        for (uint64_t q = 0; q < query_budget && !hit; ++q) {
          uint32_t x = uint32_t(rng.below(pow2(n)));
          uint32_t u = uint32_t(rng.below(pow2(n)));
          if (oracle.query((uint64_t(x) << n) | u) == x) hit = 1;
        }
        says[size_t(t)] = hit;
      }
    });
    uint64_t count = 0;
    for (uint8_t s : says) count += s;
    rates[which] = trials ? double(count) / double(trials) : 0;
  }
  out.advantage = rates[0] - rates[1];
  out.sigma = std::sqrt(binomial_sigma(rates[0], trials) * binomial_sigma(rates[0], trials) +
                        binomial_sigma(rates[1], trials) * binomial_sigma(rates[1], trials));
  const double ph = std::pow(0.5, double(n));
  const double pg = ph + (1.0 - ph) * ph;
  out.analytic = (1.0 - std::pow(1.0 - pg, double(query_budget))) -
                 (1.0 - std::pow(1.0 - ph, double(query_budget)));
  return out;
}

// ---------------------------------------------------------------------------
// Hellman time-memory trade-off tables against an r-bit function target.
// k tables of m chains of length t; per-table affine-xor reduction maps.
// Advice is the packed (start, end) list: k * m * 2r bits.

struct HellmanParams {
  uint32_t m = 0;  // chains per table
  uint32_t t = 0;  // chain length
  uint32_t k = 0;  // tables
};

struct HellmanTables {
  uint32_t r = 0;
  HellmanParams hp;
  Seed256 reduction_seed;
  uint64_t offline_queries = 0;
  // per table, sorted by endpoint: (endpoint, start)
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> tables;

  uint64_t advice_bits() const { return uint64_t(hp.k) * hp.m * 2 * r; }
  uint64_t walk_query_bound() const { return uint64_t(hp.k) * hp.t * (hp.t + 1) / 2; }
  // probe walks + capped candidate reconstructions and verifications
  uint64_t online_query_bound() const { return uint64_t(hp.k) * hp.t * (3 * hp.t - 1) / 2; }

  uint32_t reduction(uint32_t table, uint32_t y) const {
    uint64_t mask = DetRng(reduction_seed).fork(table).next_u64();
    return (y ^ uint32_t(mask)) & uint32_t(mask_bits(r));
  }
};

template <typename F>
HellmanTables build_tables(uint32_t r, F&& target, const HellmanParams& hp,
                           const Seed256& seed) {
  if (hp.m == 0 || hp.t == 0 || hp.k == 0)
    throw parameter_error("hellman: m, t, k must be positive");
  HellmanTables out;
  out.r = r;
  out.hp = hp;
  out.reduction_seed = DetRng(seed).fork("reduction").state_seed();
  DetRng starts_rng = DetRng(seed).fork("starts");
  out.tables.resize(hp.k);
  for (uint32_t table = 0; table < hp.k; ++table) {
    auto& rows = out.tables[table];
    rows.reserve(hp.m);
    for (uint32_t chain = 0; chain < hp.m; ++chain) {
      uint32_t start = uint32_t(starts_rng.below(pow2(r)));
      uint32_t x = start;
      for (uint32_t step = 0; step < hp.t; ++step) {
        x = out.reduction(table, target(x));
        ++out.offline_queries;
      }
      rows.emplace_back(x, start);
    }
    std::sort(rows.begin(), rows.end());
  }
  return out;
}

// Chain walking with verification; nullopt when no chain yields a preimage.
// Every target evaluation goes through the supplied (counted) oracle.
template <typename F>
std::optional<uint32_t> invert_with_tables(const HellmanTables& tables, F&& target,
                                           uint32_t y) {
  const uint64_t verify_cap = uint64_t(tables.hp.k) * tables.hp.t;
  uint64_t verifications = 0;
  for (uint32_t table = 0; table < tables.hp.k; ++table) {
    const auto& rows = tables.tables[table];
    for (uint32_t dist = 1; dist <= tables.hp.t; ++dist) {
      // if the preimage sits dist steps before the chain end, walking the
      // reduced image dist-1 steps lands on the stored endpoint
      uint32_t z = tables.reduction(table, y);
      for (uint32_t step = 1; step < dist; ++step) z = tables.reduction(table, target(z));
      auto lo = std::lower_bound(rows.begin(), rows.end(),
                                 std::make_pair(z, uint32_t(0)));
      for (auto it = lo; it != rows.end() && it->first == z; ++it) {
        uint32_t x = it->second;
        for (uint32_t step = 0; step + dist < tables.hp.t; ++step)
          x = tables.reduction(table, target(x));
        if (verifications++ >= verify_cap) return std::nullopt;
        if (target(x) == y) return x;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Trade-off measurement: one cell = one (m, t, k) configuration against one
// kind of target. Tables are built once per sampled instance (offline,
// unbounded); the measured epsilon is the challenge success rate, with a
// cluster-aware sigma across instances.

enum class TargetKind { function_oracle, sponge_public };

struct TradeoffCell {
  SpongeParams params;
  TargetKind kind = TargetKind::function_oracle;
  HellmanParams hp;
  uint64_t instances = 0;
  uint64_t trials = 0;  // total challenges
  uint64_t successes = 0;
  double eps = 0;
  double sigma = 0;  // max(binomial, cluster)
  uint64_t advice_bits = 0;
  double mean_online_queries = 0;
  uint64_t max_online_queries = 0;
};

inline TradeoffCell run_tradeoff_cell(const SpongeParams& params, TargetKind kind,
                                      const HellmanParams& hp, uint64_t instances,
                                      uint64_t challenges, const Seed256& seed) {
  TradeoffCell cell;
  cell.params = params;
  cell.kind = kind;
  cell.hp = hp;
  cell.instances = instances;
  cell.trials = instances * challenges;

  struct InstanceOut {
    uint64_t successes = 0;
    uint64_t online_queries = 0;
    uint64_t max_queries = 0;
  };
  std::vector<InstanceOut> per_instance(instances);
  DetRng root = DetRng(seed).fork("tradeoff-cell");
  parallel_chunks(instances, 1, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t inst = lo; inst < hi; ++inst) {
      DetRng inst_rng = root.fork(inst);
      Seed256 world_seed = inst_rng.fork("world").state_seed();
      World w = kind == TargetKind::sponge_public ? real_world(params, world_seed)
                                                  : function_world(params, world_seed);
      FunctionTable offline_target = w.priv_truth_table();
      HellmanTables tables = build_tables(
          params.r, [&](uint32_t x) { return offline_target.eval(x); }, hp,
          inst_rng.fork("tables").state_seed());

      InstanceOut& io = per_instance[size_t(inst)];
      DetRng challenge_rng = inst_rng.fork("challenges");
      for (uint64_t trial = 0; trial < challenges; ++trial) {
        uint32_t x = uint32_t(challenge_rng.below(params.rate_size()));
        uint32_t y = w.iface.priv_peek(x);
        Interface pub_view(params);
        Interface* world_iface = &w.iface;
        pub_view.bind_pub(
            [world_iface](Dir d, uint32_t v) { return world_iface->pub_peek(d, v); });
        auto online_eval = [&](uint32_t v) {
          if (kind == TargetKind::sponge_public)
            return sponge_eval([&](uint32_t s) { return pub_view.pub(Dir::fwd, s); }, v,
                               params);
          return pub_view.pub(Dir::fwd, v);
        };
        auto found = invert_with_tables(tables, online_eval, y);
        uint64_t used = pub_view.pub_queries();
        io.online_queries += used;
        io.max_queries = std::max(io.max_queries, used);
        if (found && offline_target.eval(*found) == y) ++io.successes;
      }
    }
  });

  uint64_t total_queries = 0;
  std::vector<double> inst_rates;
  for (const auto& io : per_instance) {
    cell.successes += io.successes;
    total_queries += io.online_queries;
    cell.max_online_queries = std::max(cell.max_online_queries, io.max_queries);
    inst_rates.push_back(double(io.successes) / double(challenges));
  }
  cell.eps = cell.trials ? double(cell.successes) / double(cell.trials) : 0;
  cell.mean_online_queries = cell.trials ? double(total_queries) / double(cell.trials) : 0;
  cell.advice_bits = uint64_t(hp.k) * hp.m * 2 * params.r;

  double binom = binomial_sigma(cell.eps, cell.trials);
  double cluster = 0;
  if (instances > 1) {
    double mean = 0;
    for (double v : inst_rates) mean += v;
    mean /= double(instances);
    double var = 0;
    for (double v : inst_rates) var += (v - mean) * (v - mean);
    var /= double(instances - 1);
    cluster = std::sqrt(var / double(instances));
  }
  cell.sigma = std::max(binom, cluster);
  return cell;
}

// A games-framework adversary running the same attack, for composition
// experiments. Reduction seeds are program constants, not advice.
inline Adversary hellman_adversary(const SpongeParams& params, TargetKind kind,
                                   const HellmanParams& hp, const Seed256& fixed_seed) {
  Adversary adv;
  adv.name = kind == TargetKind::sponge_public ? "hellman-sponge" : "hellman-function";
  adv.offline.advice_budget = uint64_t(hp.k) * hp.m * 2 * params.r;
  adv.offline.run = [params, hp, fixed_seed](const World& w, DetRng&) {
    FunctionTable target = w.priv_truth_table();  // unbounded offline access
    HellmanTables tables =
        build_tables(params.r, [&](uint32_t x) { return target.eval(x); }, hp, fixed_seed);
    Advice advice;
    for (const auto& rows : tables.tables)
      for (auto [end, start] : rows) {
        advice.push_bits(start, params.r);
        advice.push_bits(end, params.r);
      }
    return advice;
  };
  // probe walks plus capped candidate reconstructions and verifications;
  // one target evaluation is one pub query
  adv.online.query_budget = uint64_t(hp.k) * hp.t * (3 * hp.t - 1) / 2;
  adv.online.run = [params, hp, fixed_seed, kind](Interface& pub_view, const World&,
                                                  const Advice& advice, uint64_t challenge,
                                                  DetRng&) -> uint64_t {
    HellmanTables tables;
    tables.r = params.r;
    tables.hp = hp;
    tables.reduction_seed = DetRng(fixed_seed).fork("reduction").state_seed();
    tables.tables.resize(hp.k);
    uint64_t off = 0;
    for (uint32_t table = 0; table < hp.k; ++table) {
      auto& rows = tables.tables[table];
      rows.reserve(hp.m);
      for (uint32_t chain = 0; chain < hp.m; ++chain) {
        uint32_t start = uint32_t(advice.read_bits(off, params.r));
        uint32_t end = uint32_t(advice.read_bits(off + params.r, params.r));
        off += 2 * params.r;
        rows.emplace_back(end, start);
      }
      std::sort(rows.begin(), rows.end());
    }
    auto online_eval = [&](uint32_t v) {
      if (kind == TargetKind::sponge_public)
        return sponge_eval([&](uint32_t s) { return pub_view.pub(Dir::fwd, s); }, v, params);
      return pub_view.pub(Dir::fwd, v);
    };
    auto found = invert_with_tables(tables, online_eval, uint32_t(challenge));
    return found ? *found : 0;
  };
  return adv;
}

}  // namespace spongelab
