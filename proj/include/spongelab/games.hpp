#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spongelab/common.hpp"
#include "spongelab/parallel.hpp"
#include "spongelab/rng.hpp"
#include "spongelab/sponge.hpp"
#include "spongelab/stats.hpp"
#include "spongelab/symsim.hpp"

namespace spongelab {

// ---------------------------------------------------------------------------
// Advice passed from an unbounded offline stage to a bounded online stage.
// Stored as a packed little-endian bitstream so declared sizes are honest.

struct Advice {
  std::vector<uint8_t> bytes;
  uint64_t bits = 0;

  void push_bits(uint64_t value, uint32_t width) {
    for (uint32_t i = 0; i < width; ++i) {
      if (bits % 8 == 0) bytes.push_back(0);
      if ((value >> i) & 1) bytes[size_t(bits / 8)] |= uint8_t(1u << (bits % 8));
      ++bits;
    }
  }

  uint64_t read_bits(uint64_t offset, uint32_t width) const {
    uint64_t v = 0;
    for (uint32_t i = 0; i < width; ++i) {
      uint64_t b = offset + i;
      if (b >= bits) throw parameter_error("advice: read past end");
      v |= uint64_t((bytes[size_t(b / 8)] >> (b % 8)) & 1) << i;
    }
    return v;
  }
};

struct ResourceBudget {
  uint64_t advice_bits = 0;      // S
  uint64_t online_queries = 0;   // T
  uint64_t sim_advice_bits = 0;  // S_sim
  uint64_t sim_queries = 0;      // T_sim
  double epsilon = 0;            // target advantage
};

struct GameReport {
  std::string world;
  uint64_t trials = 0;
  uint64_t successes = 0;
  uint64_t flagged = 0;  // trials that violated a declared budget
  uint64_t max_priv_queries = 0;
  uint64_t max_pub_queries = 0;
  uint64_t max_advice_bits = 0;
  uint64_t max_sim_queries = 0;
  uint64_t max_sim_block_evals = 0;  // symmetrizer work, outside the query budgets

  double estimate() const { return trials ? double(successes) / double(trials) : 0.0; }
  // Reported radius convention: 3 * sqrt(ln(2/delta) / (2 * trials)), delta = 1e-6.
  double radius(double delta = 1e-6) const { return 3.0 * hoeffding_radius(trials, delta); }
  double sigma() const { return binomial_sigma(estimate(), trials); }
};

// ---------------------------------------------------------------------------
// Distinguishers: an unbounded offline procedure emitting at most S bits of
// advice, and an online procedure limited to T interface queries.

struct Distinguisher {
  std::string name;
  uint64_t advice_budget = 0;  // S, bits
  uint64_t query_budget = 0;   // T, online priv+pub queries
  std::function<Advice(const World&, DetRng&)> offline;            // may be empty
  std::function<int(Interface&, const Advice&, DetRng&)> online;   // emits one bit
};

using SimFactory =
    std::function<std::shared_ptr<const SimOracle>(const World& ideal, DetRng& trial_rng)>;

// The stock simulator: stateless, shared randomness drawn from the world.
inline SimFactory default_sim_factory() {
  return [](const World& ideal, DetRng&) {
    if (!ideal.shared_randomness)
      throw config_error("sim factory: world carries no shared randomness");
    return std::make_shared<const SimOracle>(ideal.f,
                                             SharedRandomness(*ideal.shared_randomness));
  };
}

inline void attach_simulator(World& w, std::shared_ptr<const SimOracle> sim) {
  if (w.real) throw config_error("attach simulator: ideal world only");
  w.iface.bind_pub([sim](Dir d, uint32_t v) { return sim->query(d, v); },
                   [sim](Dir d, uint32_t v) { return sim->peek(d, v); });
  w.sim_queries = [sim] { return sim->f_queries(); };
  w.sim_block_evals = [sim] { return sim->block_point_evals(); };
  w.sim = std::move(sim);
}

struct IndiffResult {
  GameReport real_report;
  GameReport ideal_report;
  double advantage = 0;
  double ci = 0;  // sum of the two per-world radii
  ResourceBudget declared;
  ResourceBudget measured;  // worst case over trials; epsilon = advantage
};

// Runs D against the real sponge world and against (random f, simulator),
// fresh seeds per trial. Budget violations abort (flag) the trial.
inline IndiffResult run_indiff_experiment(const SpongeParams& params, const Distinguisher& d,
                                          uint64_t trials, const Seed256& seed,
                                          SimFactory make_sim = nullptr) {
  if (!make_sim) make_sim = default_sim_factory();
  IndiffResult result;
  for (int which = 0; which < 2; ++which) {
    GameReport rep;
    rep.world = which == 0 ? "real" : "ideal";
    rep.trials = trials;
    struct Cell {
      uint8_t bit = 0, flag = 0;
      uint64_t priv = 0, pub = 0, advice = 0, sim_queries = 0, sim_block_evals = 0;
    };
    std::vector<Cell> cells(trials);
    DetRng root = DetRng(seed).fork("indiff").fork(rep.world);
    parallel_chunks(trials, 16, [&](uint64_t lo, uint64_t hi) {
      for (uint64_t t = lo; t < hi; ++t) {
        DetRng trial_rng = root.fork(t);
        DetRng world_rng = trial_rng.fork("world");
        World w = which == 0 ? real_world(params, world_rng.state_seed())
                             : random_oracle_world(params, world_rng.state_seed());
        if (which == 1) {
          w.shared_randomness = trial_rng.fork("shared-randomness").state_seed();
          attach_simulator(w, make_sim(w, trial_rng));
        }
        Cell& cell = cells[size_t(t)];
        Advice advice;
        if (d.offline) {
          DetRng rng = trial_rng.fork("offline");
          advice = d.offline(w, rng);
        }
        cell.advice = advice.bits;
        DetRng rng = trial_rng.fork("online");
        cell.bit = uint8_t(d.online(w.iface, advice, rng) & 1);
        cell.priv = w.iface.priv_queries();
        cell.pub = w.iface.pub_queries();
        cell.sim_queries = w.sim_queries ? w.sim_queries() : 0;
        cell.sim_block_evals = w.sim_block_evals ? w.sim_block_evals() : 0;
        if (advice.bits > d.advice_budget || cell.priv + cell.pub > d.query_budget) {
          cell.flag = 1;
          cell.bit = 0;
        }
      }
    });
    for (const Cell& cell : cells) {
      rep.successes += cell.bit;
      rep.flagged += cell.flag;
      rep.max_advice_bits = std::max(rep.max_advice_bits, cell.advice);
      rep.max_sim_queries = std::max(rep.max_sim_queries, cell.sim_queries);
      rep.max_sim_block_evals = std::max(rep.max_sim_block_evals, cell.sim_block_evals);
      rep.max_priv_queries = std::max(rep.max_priv_queries, cell.priv);
      rep.max_pub_queries = std::max(rep.max_pub_queries, cell.pub);
    }
    (which == 0 ? result.real_report : result.ideal_report) = rep;
  }
  result.advantage =
      std::fabs(result.real_report.estimate() - result.ideal_report.estimate());
  result.ci = result.real_report.radius() + result.ideal_report.radius();
  // the stock simulator is stateless and answers each public query with one
  // f query, so its declared budgets are S_sim = 0 and T_sim = T
  result.declared = ResourceBudget{d.advice_budget, d.query_budget, 0, d.query_budget, 0};
  for (const GameReport* rep : {&result.real_report, &result.ideal_report}) {
    result.measured.advice_bits = std::max(result.measured.advice_bits, rep->max_advice_bits);
    result.measured.online_queries = std::max(
        result.measured.online_queries, rep->max_priv_queries + rep->max_pub_queries);
  }
  result.measured.sim_advice_bits = 0;  // the stock simulator is stateless
  result.measured.sim_queries = result.ideal_report.max_sim_queries;
  result.measured.epsilon = result.advantage;
  return result;
}

// ---------------------------------------------------------------------------
// Lifting a stateless shared-randomness simulator to the pre-computation
// setting: the offline stage exposes (simulator, priv R) and forwards zero
// advice; the online stage is the same stateless simulator.

struct StatelessSimSpec {
  SpongeParams params;
  std::function<std::shared_ptr<const SimOracle>(std::shared_ptr<const FunctionTable>,
                                                 const SharedRandomness&)>
      make;
};

inline StatelessSimSpec sponge_sim_spec(const SpongeParams& params) {
  StatelessSimSpec spec;
  spec.params = params;
  spec.make = [](std::shared_ptr<const FunctionTable> f, const SharedRandomness& sr) {
    return std::make_shared<const SimOracle>(std::move(f), sr);
  };
  return spec;
}

using PubOracle = std::function<uint32_t(Dir, uint32_t)>;

struct PrecompSimulator {
  uint64_t advice_bits = 0;  // S_sim, a declared constant: also the advice split point
  std::function<Advice(const World& ideal, DetRng&)> offline;
  // Online stage: answers public-interface queries, making its own queries
  // through the counted pub_r it is handed.
  std::function<PubOracle(Interface& pub_r, const World& ideal, const Advice&)> make_online;
  // Uncounted exposure of the same interface for unbounded offline stages.
  std::function<PubOracle(const World& ideal, const Advice&)> make_offline_view;
};

// Degenerate simulator for R = C experiments: a pass-through to the model's
// own public interface.
inline PrecompSimulator identity_simulator() {
  PrecompSimulator out;
  out.advice_bits = 0;
  out.offline = [](const World&, DetRng&) { return Advice{}; };
  out.make_online = [](Interface& pub_r, const World&, const Advice&) {
    Interface* pub = &pub_r;
    return PubOracle([pub](Dir d, uint32_t w) { return pub->pub(d, w); });
  };
  out.make_offline_view = [](const World& ideal, const Advice&) {
    const Interface* iface = &ideal.iface;
    return PubOracle([iface](Dir d, uint32_t w) { return iface->pub_peek(d, w); });
  };
  return out;
}

// Replay check: answers must depend only on (input, direction, f, SR).
// Queries are issued in two interleavings with repeats; any mismatch is a
// statefulness witness.
inline void assert_stateless(const StatelessSimSpec& spec, const Seed256& probe_seed) {
  DetRng rng = DetRng(probe_seed).fork("stateless-probe");
  auto f = std::make_shared<const FunctionTable>(
      sample_function(spec.params, rng.fork("f").state_seed()));
  SharedRandomness sr(rng.fork("sr").state_seed());
  auto sim = spec.make(f, sr);
  auto sim_replay = spec.make(f, sr);
  const uint64_t domain = spec.params.domain_size();
  std::vector<std::pair<Dir, uint32_t>> script;
  for (int i = 0; i < 64; ++i)
    script.emplace_back(rng.below(2) ? Dir::inv : Dir::fwd, uint32_t(rng.below(domain)));
  std::vector<uint32_t> first;
  for (auto [dd, w] : script) first.push_back(sim->query(dd, w));
  // reversed order against a fresh instance, with an extra interleaved probe
  for (size_t i = script.size(); i-- > 0;) {
    sim_replay->query(Dir::fwd, uint32_t(rng.below(domain)));
    if (sim_replay->query(script[i].first, script[i].second) != first[i])
      throw contract_error("stateless lift: replay test detected state");
  }
  // repeated queries on the original instance
  for (size_t i = 0; i < script.size(); ++i)
    if (sim->query(script[i].first, script[i].second) != first[i])
      throw contract_error("stateless lift: repeated query changed answer");
}

inline PrecompSimulator lift_reset_to_precomp(const StatelessSimSpec& spec,
                                              const Seed256& probe_seed) {
  assert_stateless(spec, probe_seed);
  PrecompSimulator out;
  out.advice_bits = 0;  // stateless: nothing to pass between the stages
  out.offline = [](const World&, DetRng&) { return Advice{}; };
  out.make_online = [](Interface& pub_r, const World& ideal, const Advice&) {
    if (!ideal.shared_randomness)
      throw config_error("lifted simulator: world carries no shared randomness");
    Interface* pub = &pub_r;
    auto oracle = std::make_shared<const SimOracle>(
        ideal.params, [pub](uint32_t x) { return pub->pub(Dir::fwd, x); },
        SharedRandomness(*ideal.shared_randomness));
    return PubOracle([oracle](Dir d, uint32_t w) { return oracle->query(d, w); });
  };
  out.make_offline_view = [spec](const World& ideal, const Advice&) {
    if (!ideal.shared_randomness)
      throw config_error("lifted simulator: world carries no shared randomness");
    auto oracle = spec.make(ideal.f, SharedRandomness(*ideal.shared_randomness));
    return PubOracle([oracle](Dir d, uint32_t w) { return oracle->peek(d, w); });
  };
  return out;
}

// ---------------------------------------------------------------------------
// Removing shared randomness (enumerable-SR mode). Given the exact
// acceptance probability p(SR) of a distinguisher in the ideal world as a
// function of the shared randomness, either one SR value reproduces the
// average exactly (no extra advice) or two hard-coded values mixed by one
// advice bit do.

struct SrRemoval {
  bool ok = false;
  std::string failure;
  bool single = false;
  uint16_t sr0 = 0, sr1 = 0;
  Rational bias;  // probability of selecting sr1
  Rational p, p0, p1;
  uint32_t extra_advice_bits = 0;
};

inline SrRemoval remove_shared_randomness(const std::function<Rational(uint16_t)>& p_of_sr,
                                          uint32_t sr_space_bits, uint64_t search_budget) {
  if (sr_space_bits > 16) throw parameter_error("sr removal: enumerable mode is <= 16 bits");
  const uint64_t space = pow2(sr_space_bits);
  SrRemoval out;
  Rational sum{0};
  uint16_t argmin = 0, argmax = 0;
  Rational vmin, vmax;
  const uint64_t scan = std::min<uint64_t>(space, search_budget);
  for (uint64_t sr = 0; sr < scan; ++sr) {
    Rational v = p_of_sr(uint16_t(sr));
    sum = sum + v;
    if (sr == 0 || v < vmin) {
      vmin = v;
      argmin = uint16_t(sr);
    }
    if (sr == 0 || vmax < v) {
      vmax = v;
      argmax = uint16_t(sr);
    }
  }
  if (scan < space) {
    // partial scan: the average must still be computed over the full space
    for (uint64_t sr = scan; sr < space; ++sr) sum = sum + p_of_sr(uint16_t(sr));
  }
  out.p = sum / Rational{int64_t(space)};
  out.p0 = vmin;
  out.p1 = vmax;
  if (vmin == vmax && out.p == vmin) {
    out.ok = true;
    out.single = true;
    out.sr0 = out.sr1 = argmin;
    out.bias = Rational{0};
    out.extra_advice_bits = 0;
    return out;
  }
  if (out.p < vmin || vmax < out.p) {
    out.failure = "no pair of scanned shared-randomness values brackets the average";
    return out;
  }
  out.ok = true;
  out.sr0 = argmin;
  out.sr1 = argmax;
  out.bias = (out.p - out.p0) / (out.p1 - out.p0);
  out.extra_advice_bits = 1;
  return out;
}

// Monte Carlo variant: point estimates with confidence radii; bracketing
// must hold beyond the estimation error or a failure report is returned.
struct SrRemovalMc {
  bool ok = false;
  std::string failure;
  bool single = false;
  uint16_t sr0 = 0, sr1 = 0;
  double bias = 0;
  double p = 0, p0 = 0, p1 = 0;
  double estimation_error = 0;  // propagated radius on the reconstructed probability
  uint32_t extra_advice_bits = 0;
};

inline SrRemovalMc remove_shared_randomness_mc(
    const std::function<std::pair<double, double>(uint16_t)>& p_and_radius,
    uint32_t sr_space_bits, uint64_t search_budget) {
  if (sr_space_bits > 16) throw parameter_error("sr removal: enumerable mode is <= 16 bits");
  const uint64_t space = pow2(sr_space_bits);
  const uint64_t scan = std::min<uint64_t>(space, search_budget);
  SrRemovalMc out;
  double sum = 0, max_radius = 0;
  uint16_t argmin = 0, argmax = 0;
  double vmin = 0, vmax = 0;
  for (uint64_t sr = 0; sr < scan; ++sr) {
    auto [v, rad] = p_and_radius(uint16_t(sr));
    sum += v;
    max_radius = std::max(max_radius, rad);
    if (sr == 0 || v < vmin) {
      vmin = v;
      argmin = uint16_t(sr);
    }
    if (sr == 0 || v > vmax) {
      vmax = v;
      argmax = uint16_t(sr);
    }
  }
  out.p = sum / double(scan);
  out.p0 = vmin;
  out.p1 = vmax;
  if (vmax - vmin <= 2 * max_radius) {
    // indistinguishable from constant at this precision
    out.ok = true;
    out.single = true;
    out.sr0 = out.sr1 = argmin;
    out.estimation_error = max_radius;
    return out;
  }
  if (out.p < vmin || out.p > vmax) {
    out.failure = "scanned values do not bracket the average beyond estimation error";
    return out;
  }
  out.ok = true;
  out.sr0 = argmin;
  out.sr1 = argmax;
  out.bias = (out.p - out.p0) / (out.p1 - out.p0);
  out.extra_advice_bits = 1;
  out.estimation_error = 3 * max_radius;
  return out;
}

// ---------------------------------------------------------------------------
// Exact acceptance probabilities for truth-table readers (distinguishers
// that are deterministic functions of the two full truth tables), by
// exhaustive enumeration instead of sampling.

using TableReader = std::function<int(const FunctionTable& priv, const PermutationTable& pub)>;

// Ideal world with a fixed shared randomness: average over all functions f
// of reader(f, symmetrized permutation of f).
inline Rational exact_ideal_acceptance(const SpongeParams& params, const TableReader& reader,
                                       const SharedRandomness& sr) {
  const uint64_t functions = pow2(params.r * uint32_t(params.rate_size()));
  if (functions > pow2(20)) throw guardrail_error("exact acceptance: function space too large");
  int64_t hits = 0;
  for (uint64_t key = 0; key < functions; ++key) {
    FunctionTable f = FunctionTable::from_key(params, key);
    PermutationTable phi_hat = symmetrize(f, sr);
    hits += reader(f, phi_hat) ? 1 : 0;
  }
  return Rational{hits, int64_t(functions)};
}

// Real world: average over all permutations of reader(sponge of phi, phi).
inline Rational exact_real_acceptance(const SpongeParams& params, const TableReader& reader) {
  const uint64_t domain = params.domain_size();
  if (domain > kMaxGroupEnumDomain)
    throw guardrail_error("exact acceptance: permutation space too large");
  int64_t hits = 0;
  enumerate_permutations(uint32_t(domain), [&](const SmallPerm& pi, uint64_t) {
    std::vector<uint32_t> fwd(pi.begin(), pi.end());
    PermutationTable phi = PermutationTable::from_forward(params, std::move(fwd));
    hits += reader(sponge_table(phi), phi) ? 1 : 0;
  });
  return Rational{hits, int64_t(factorial(uint32_t(domain)))};
}

// ---------------------------------------------------------------------------
// Security games with pre-computation. The runner fixes a strict schedule:
// offline adversary -> cryptosystem challenge -> online adversary reply ->
// cryptosystem verdict -> environment outputs the verdict bit.

struct OfflineAdversary {
  uint64_t advice_budget = 0;  // S, bits
  std::function<Advice(const World&, DetRng&)> run;
};

struct OnlineAdversary {
  uint64_t query_budget = 0;  // T1, public-interface queries
  // pub_view is the adversary's only counted oracle; world is handed along
  // for constructions that must rebuild a simulator online.
  std::function<uint64_t(Interface& pub_view, const World&, const Advice&, uint64_t challenge,
                         DetRng&)>
      run;
};

struct Adversary {
  std::string name;
  OfflineAdversary offline;
  OnlineAdversary online;
};

struct SecurityGame {
  std::string name;
  uint64_t cryptosystem_queries = 0;  // declared T2
  std::function<uint64_t(Interface& priv_side, DetRng&)> challenge;
  std::function<bool(Interface& priv_side, uint64_t challenge, uint64_t reply)> verify;
};

// Challenge a uniform rate-word image under the private interface; verify
// the reply by one more private query. T2 = 2.
inline SecurityGame inversion_game(const SpongeParams& params) {
  SecurityGame g;
  g.name = "inversion";
  g.cryptosystem_queries = 2;
  g.challenge = [params](Interface& priv_side, DetRng& rng) {
    uint32_t x = uint32_t(rng.below(params.rate_size()));
    return uint64_t(priv_side.priv(x));
  };
  g.verify = [](Interface& priv_side, uint64_t challenge, uint64_t reply) {
    return priv_side.priv(uint32_t(reply)) == uint32_t(challenge);
  };
  return g;
}

using WorldFactory = std::function<World(const Seed256&)>;

inline GameReport run_security_game(const SecurityGame& game, const WorldFactory& make_world,
                                    const Adversary& adv, uint64_t trials,
                                    const Seed256& seed) {
  GameReport rep;
  rep.world = game.name;
  rep.trials = trials;
  struct Cell {
    uint8_t win = 0, flag = 0;
    uint64_t t1 = 0, t2 = 0, advice = 0;
  };
  std::vector<Cell> cells(trials);
  DetRng root = DetRng(seed).fork("security-game");
  parallel_chunks(trials, 16, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t t = lo; t < hi; ++t) {
      DetRng trial_rng = root.fork(t);
      World w = make_world(trial_rng.fork("world").state_seed());
      Cell& cell = cells[size_t(t)];

      Advice advice;
      if (adv.offline.run) {
        DetRng rng = trial_rng.fork("offline");
        advice = adv.offline.run(w, rng);
      }
      cell.advice = advice.bits;

      // adversary's pub-only view; separate counter from the cryptosystem's
      Interface pub_view(w.params);
      Interface* world_iface = &w.iface;
      pub_view.bind_pub([world_iface](Dir dd, uint32_t v) { return world_iface->pub_peek(dd, v); });

      DetRng p_rng = trial_rng.fork("cryptosystem");
      uint64_t challenge = game.challenge(w.iface, p_rng);
      DetRng a_rng = trial_rng.fork("online");
      uint64_t reply = adv.online.run(pub_view, w, advice, challenge, a_rng);
      bool win = game.verify(w.iface, challenge, reply);

      cell.win = win ? 1 : 0;
      cell.t1 = pub_view.pub_queries();
      cell.t2 = w.iface.priv_queries();
      if (cell.advice > adv.offline.advice_budget || cell.t1 > adv.online.query_budget ||
          cell.t2 != game.cryptosystem_queries) {
        cell.flag = 1;
        cell.win = 0;
      }
    }
  });
  for (const Cell& cell : cells) {
    rep.successes += cell.win;
    rep.flagged += cell.flag;
    rep.max_pub_queries = std::max(rep.max_pub_queries, cell.t1);
    rep.max_priv_queries = std::max(rep.max_priv_queries, cell.t2);
    rep.max_advice_bits = std::max(rep.max_advice_bits, cell.advice);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Composition: from an adversary written against the sponge model, build an
// adversary for the random-oracle model by routing its public queries
// through the online simulator. Advice grows by the simulator's advice; the
// online query count becomes the simulator's f-query count.

inline Adversary compose_adversary(const Adversary& a, const PrecompSimulator& sim,
                                   uint64_t declared_t_sim) {
  Adversary out;
  out.name = a.name + "+simulator";
  out.offline.advice_budget = a.offline.advice_budget + sim.advice_bits;
  // Joint advice is simulator advice (padded to its declared constant size)
  // followed by the adversary's own; the split point is not data.
  out.offline.run = [a, sim](const World& ideal, DetRng& rng) {
    DetRng sim_rng = rng.fork("simulator");
    Advice sim_advice = sim.offline(ideal, sim_rng);
    if (sim_advice.bits > sim.advice_bits)
      throw contract_error("composition: simulator exceeded its declared advice size");
    PubOracle oracle = sim.make_offline_view(ideal, sim_advice);
    // the simulated sponge-model view handed to the offline adversary
    World view = ideal;
    view.iface.bind_pub(oracle);
    DetRng adv_rng = rng.fork("adversary");
    Advice adv_advice = a.offline.run ? a.offline.run(view, adv_rng) : Advice{};
    Advice joint;
    for (uint64_t i = 0; i < sim.advice_bits; ++i)
      joint.push_bits(i < sim_advice.bits ? sim_advice.read_bits(i, 1) : 0, 1);
    for (uint64_t i = 0; i < adv_advice.bits; ++i)
      joint.push_bits(adv_advice.read_bits(i, 1), 1);
    return joint;
  };
  out.online.query_budget = declared_t_sim;
  out.online.run = [a, sim](Interface& pub_view, const World& ideal, const Advice& joint,
                            uint64_t challenge, DetRng& rng) {
    Advice sim_advice, adv_advice;
    for (uint64_t i = 0; i < sim.advice_bits && i < joint.bits; ++i)
      sim_advice.push_bits(joint.read_bits(i, 1), 1);
    for (uint64_t i = sim.advice_bits; i < joint.bits; ++i)
      adv_advice.push_bits(joint.read_bits(i, 1), 1);
    // rebuild the online simulator over the R-model public interface so its
    // queries land on the composed adversary's counter
    PubOracle oracle = sim.make_online(pub_view, ideal, sim_advice);
    Interface c_view(ideal.params);
    c_view.bind_pub(oracle);
    return a.online.run(c_view, ideal, adv_advice, challenge, rng);
  };
  return out;
}

}  // namespace spongelab
