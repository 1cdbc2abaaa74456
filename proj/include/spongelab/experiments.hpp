#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spongelab/attacks.hpp"
#include "spongelab/common.hpp"
#include "spongelab/games.hpp"
#include "spongelab/sponge.hpp"
#include "spongelab/stats.hpp"
#include "spongelab/symsim.hpp"
#include "spongelab/young.hpp"

namespace spongelab {

inline constexpr const char* kVersion = "1.0.0";

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Debug JSON forms for the table serialization formats.

inline ordered_json table_debug_json(const FunctionTable& t) {
  return ordered_json{{"kind", "function"},
                      {"r", t.params.r},
                      {"c", t.params.c},
                      {"entries", t.table}};
}

inline ordered_json table_debug_json(const PermutationTable& t) {
  return ordered_json{{"kind", "permutation"},
                      {"r", t.params.r},
                      {"c", t.params.c},
                      {"entries", t.forward}};
}

// ---------------------------------------------------------------------------
// Stock distinguishers for the indifferentiability runner.

inline Distinguisher constant_zero_distinguisher() {
  Distinguisher d;
  d.name = "constant-zero";
  d.advice_budget = 0;
  d.query_budget = 0;
  d.online = [](Interface&, const Advice&, DetRng&) { return 0; };
  return d;
}

// Checks that pub is an involutive-consistent permutation pair and that priv
// matches the sponge of pub at a few points. Holds in both worlds, so its
// advantage is zero up to sampling noise.
inline Distinguisher inverse_consistency_distinguisher(uint64_t points = 10) {
  Distinguisher d;
  d.name = "inverse-consistency";
  d.advice_budget = 0;
  d.query_budget = 4 * points;
  d.online = [points](Interface& iface, const Advice&, DetRng& rng) {
    const SpongeParams& p = iface.params();
    for (uint64_t i = 0; i < points; ++i) {
      uint32_t w = uint32_t(rng.below(p.domain_size()));
      if (iface.pub(Dir::inv, iface.pub(Dir::fwd, w)) != w) return 0;
      uint32_t x = uint32_t(rng.below(p.rate_size()));
      if (iface.priv(x) != iface.pub(Dir::fwd, x << p.c) >> p.c) return 0;
    }
    return 1;
  };
  return d;
}

// Unbounded truth-table reader: accepts when the public table lies in a
// small double coset (the likelihood-ratio test between the two worlds at
// enumeration scale). Its exact advantage equals the total variation
// distance between the symmetrized and uniform permutation laws.
inline TableReader likelihood_reader(const SpongeParams& params) {
  auto census = std::make_shared<CosetCensus>(coset_census(params));
  auto rows = std::make_shared<BlockPartition>(BlockPartition::by_prefix(params));
  auto cols = std::make_shared<BlockPartition>(BlockPartition::by_input_points(params));
  const uint64_t functions = pow2(params.r * uint32_t(params.rate_size()));
  return [census, rows, cols, functions](const FunctionTable&,
                                         const PermutationTable& pub) {
    CosetSignature sig = signature(pub, *rows, *cols);
    for (const auto& e : census->entries)
      if (e.signature == sig)
        // ideal weight 1/(F * |C|) beats real weight 1/N! iff N! > F * |C|
        return census->group_order > functions * e.size ? 1 : 0;
    throw contract_error("likelihood reader: unknown signature");
  };
}

inline Distinguisher reader_distinguisher(const std::string& name, TableReader reader) {
  Distinguisher d;
  d.name = name;
  d.advice_budget = UINT64_MAX;
  d.query_budget = UINT64_MAX;
  d.online = [reader](Interface& iface, const Advice&, DetRng&) {
    const SpongeParams& p = iface.params();
    p.require_table_mode();
    std::vector<uint32_t> fwd(size_t(p.domain_size()));
    for (uint64_t w = 0; w < p.domain_size(); ++w)
      fwd[size_t(w)] = iface.pub(Dir::fwd, uint32_t(w));
    PermutationTable pub = PermutationTable::from_forward(p, std::move(fwd));
    std::vector<uint32_t> priv(size_t(p.rate_size()));
    for (uint64_t x = 0; x < p.rate_size(); ++x) priv[size_t(x)] = iface.priv(uint32_t(x));
    return reader(FunctionTable(p, std::move(priv)), pub);
  };
  return d;
}

// Measured distinguishing advantage between the sponge truth-table law and
// a uniform function: the truncated-permutation collision statistic on the
// full 2^r-entry private table, threshold tuned on held-out trials. This is
// the desk-scale stand-in for the indifferentiability epsilon at parameters
// too large for exact enumeration.
inline TruncationPoint measured_indiff_advantage(const SpongeParams& params, uint64_t trials,
                                                 const Seed256& seed) {
  auto curve =
      truncation_advantage_curve(params.n, params.c, {params.rate_size()}, trials, seed);
  return curve.at(0);
}

// ---------------------------------------------------------------------------
// The exact shared-randomness removal fixture: a deterministic truth-table
// reader whose ideal-world acceptance depends on the shared randomness.
// Accepts iff the public table sends the all-low-bits point 0...01 to 0.

inline TableReader sr_sensitive_reader() {
  return [](const FunctionTable&, const PermutationTable& pub) {
    return pub.fwd(1) == 0 ? 1 : 0;
  };
}

struct SrRemovalExperiment {
  SrRemoval removal;
  Rational reconstructed;  // (1 - bias) * p(SR0) + bias * p(SR1)
  bool reproduces = false;
  uint64_t simulator_advice_bits = 0;
};

inline SrRemovalExperiment run_sr_removal(const SpongeParams& params, const TableReader& reader,
                                          uint32_t sr_bits, uint64_t search_budget) {
  auto p_of_sr = [&](uint16_t sr) {
    return exact_ideal_acceptance(params, reader, SharedRandomness::restricted16(sr));
  };
  SrRemovalExperiment out;
  out.removal = remove_shared_randomness(p_of_sr, sr_bits, search_budget);
  if (out.removal.ok) {
    Rational p0 = p_of_sr(out.removal.sr0);
    Rational p1 = p_of_sr(out.removal.sr1);
    out.reconstructed = (Rational{1} - out.removal.bias) * p0 + out.removal.bias * p1;
    out.reproduces = out.reconstructed == out.removal.p;
    out.simulator_advice_bits = out.removal.extra_advice_bits;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification suite: the exhaustive identities behind the construction,
// runnable from the command line for any small (r, c).

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckResult> verify_suite(const SpongeParams& params, const Seed256& seed) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, detail});
  };

  {  // sponge hash of the symmetrized permutation equals f, 100 seeds
    bool ok = true;
    for (uint64_t s = 0; s < 100 && ok; ++s) {
      auto f = sample_function(params, DetRng(seed).fork("verify-f").fork(s).state_seed());
      ok = sponge_table(symmetrize(
               f, SharedRandomness(DetRng(seed).fork("verify-sr").fork(s).state_seed()))) == f;
    }
    add("sponge-match", ok, "Sp(symmetrize(f)) == f over 100 seeded functions");
  }

  {  // one f query per simulator call, mixed directions
    auto f = std::make_shared<const FunctionTable>(
        sample_function(params, DetRng(seed).fork("sq-f").state_seed()));
    SimOracle sim(f, SharedRandomness(DetRng(seed).fork("sq-sr").state_seed()));
    DetRng rng = DetRng(seed).fork("sq-script");
    for (int i = 0; i < 1000; ++i)
      sim.query(rng.below(2) ? Dir::inv : Dir::fwd, uint32_t(rng.below(params.domain_size())));
    add("single-query", sim.f_queries() == 1000,
        "1000 mixed forward/inverse calls cost exactly 1000 f queries");
  }

  {  // lazy simulator agrees with the offline table on every point
    bool ok = true;
    for (uint64_t s = 0; s < 5 && ok; ++s) {
      auto f = std::make_shared<const FunctionTable>(
          sample_function(params, DetRng(seed).fork("cons-f").fork(s).state_seed()));
      SharedRandomness sr(DetRng(seed).fork("cons-sr").fork(s).state_seed());
      auto table = symmetrize(*f, sr);
      SimOracle sim(f, sr);
      for (uint64_t w = 0; w < params.domain_size() && ok; ++w)
        ok = sim.peek(Dir::fwd, uint32_t(w)) == table.fwd(uint32_t(w)) &&
             sim.peek(Dir::inv, uint32_t(w)) == table.inv(uint32_t(w));
    }
    add("sim-table-consistency", ok, "query access equals the dense table pointwise");
  }

  {  // transversal inverts exactly
    auto f = sample_function(params, DetRng(seed).fork("tr-f").state_seed());
    Transversal t(params, f);
    bool ok = true;
    for (uint64_t w = 0; w < params.domain_size() && ok; ++w)
      ok = t.inv(t.fwd(uint32_t(w))) == w;
    add("transversal-roundtrip", ok, "pi_f inverse round-trips on the whole domain");
  }

  if (params.domain_size() <= kMaxGroupEnumDomain) {
    auto census = coset_census(params);
    {
      uint64_t total = 0;
      bool ok = true;
      for (const auto& e : census.entries) {
        total += e.size;
        ok = ok && census.subgroup_h_order * census.subgroup_k_order ==
                       e.size * e.factorizations;
      }
      ok = ok && total == census.group_order;
      add("census-factorization", ok,
          "|H||K| = coset size x factorization count; cosets partition the group");
    }
    {
      // exhaustive symmetrizer sweep covers each coset member equally often
      std::vector<SmallPerm> h_members, k_members;
      enumerate_young(BlockPartition::by_prefix(params),
                      [&](const SmallPerm& h) { h_members.push_back(h); });
      enumerate_young(BlockPartition::by_input_points(params),
                      [&](const SmallPerm& k) { k_members.push_back(k); });
      bool ok = true;
      for (const auto& entry : census.entries) {
        std::map<SmallPerm, uint64_t> mult;
        for (const auto& h : h_members)
          for (const auto& k : k_members)
            ++mult[small_compose(small_compose(h, entry.example), k)];
        ok = ok && mult.size() == entry.size;
        for (auto& kv : mult)
          ok = ok && kv.second == h_members.size() * k_members.size() / entry.size;
      }
      add("fiber-uniformity", ok,
          "exhaustive (omega, sigma) pairs hit every coset member equally often");
    }
    {
      // same coset iff same sponge hash, sampled pairs
      auto rows = BlockPartition::by_prefix(params);
      auto cols = BlockPartition::by_input_points(params);
      DetRng rng = DetRng(seed).fork("pairs");
      bool ok = true;
      const uint32_t n_points = uint32_t(params.domain_size());
      const uint64_t group = factorial(n_points);
      for (int i = 0; i < 20000 && ok; ++i) {
        SmallPerm a = perm_unrank(n_points, rng.below(group));
        SmallPerm b = perm_unrank(n_points, rng.below(group));
        bool same_sig = signature(a, rows, cols) == signature(b, rows, cols);
        bool same_sp = small_sponge_table(a, params) == small_sponge_table(b, params);
        ok = same_sig == same_sp;
      }
      add("coset-iff-sponge", ok,
          "equal signatures exactly when the sponge truth tables agree");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment configuration and dispatch.

struct ExperimentConfig {
  std::string experiment;  // verify | coset-census | indiff | remove-sr |
                           // tradeoff | separation | truncation-curve
  uint32_t r = 1, c = 1;
  uint32_t n = 12;  // separation: input halves; truncation: domain bits
  uint32_t m = 8;   // truncation: discarded bits
  uint64_t trials = 10000;
  uint64_t seed = 1;
  uint64_t query_budget = 64;                   // separation distinguisher budget
  std::string distinguisher = "inverse-consistency";  // indiff
  uint32_t sr_bits = 16;                        // remove-sr space
  uint64_t search_budget = UINT64_MAX;          // remove-sr scan bound
  std::vector<HellmanParams> grid;              // tradeoff cells
  std::vector<uint32_t> capacities;             // tradeoff sponge capacities
  uint64_t instances = 16;                      // tradeoff instances per cell
  std::vector<uint64_t> q_grid;                 // truncation query grid
  std::string out;                              // report file; empty = stdout
  std::string format = "json";                  // json | csv

  void validate() const {
    static const std::vector<std::string> known{
        "verify",  "coset-census", "indiff", "remove-sr",
        "tradeoff", "separation",  "truncation-curve"};
    bool found = false;
    for (const auto& k : known) found = found || k == experiment;
    if (!found) throw parameter_error("unknown experiment: " + experiment);
    if (experiment == "truncation-curve") {
      if (m >= n) throw parameter_error("truncation-curve: need m < n");
      if (n > 24) throw guardrail_error("truncation-curve: n <= 24");
    } else if (experiment == "separation") {
      if (2 * n > 48) throw guardrail_error("separation: need 2n <= 48");
    } else {
      SpongeParams p(r, c);  // validates regime and enumeration guardrail
      if (experiment == "coset-census" && p.domain_size() > kMaxGroupEnumDomain)
        throw guardrail_error("coset-census: exhaustive mode limited to 2^n <= 8");
      if (experiment == "remove-sr" && p.domain_size() > kMaxGroupEnumDomain)
        throw guardrail_error("remove-sr: exact mode limited to 2^n <= 8");
      if ((experiment == "verify" || experiment == "indiff") && p.n > 14)
        throw guardrail_error(experiment + ": table-sweep mode limited to n <= 14");
      if (experiment == "tradeoff")
        for (uint32_t cap : capacities) SpongeParams(r, cap);
    }
    if (format != "json" && format != "csv")
      throw parameter_error("format must be json or csv");
    if (trials == 0) throw parameter_error("trials must be positive");
  }

  static ExperimentConfig from_json(const ordered_json& j) {
    ExperimentConfig cfg;
    cfg.experiment = j.value("experiment", cfg.experiment);
    cfg.r = j.value("r", cfg.r);
    cfg.c = j.value("c", cfg.c);
    cfg.n = j.value("n", cfg.n);
    cfg.m = j.value("m", cfg.m);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.query_budget = j.value("query_budget", cfg.query_budget);
    cfg.distinguisher = j.value("distinguisher", cfg.distinguisher);
    cfg.sr_bits = j.value("sr_bits", cfg.sr_bits);
    cfg.instances = j.value("instances", cfg.instances);
    if (j.contains("grid"))
      for (const auto& cell : j.at("grid"))
        cfg.grid.push_back(HellmanParams{cell.at("m"), cell.at("t"), cell.at("k")});
    if (j.contains("capacities"))
      cfg.capacities = j.at("capacities").get<std::vector<uint32_t>>();
    if (j.contains("q_grid")) cfg.q_grid = j.at("q_grid").get<std::vector<uint64_t>>();
    cfg.out = j.value("out", cfg.out);
    cfg.format = j.value("format", cfg.format);
    return cfg;
  }

  ordered_json resolved_json() const {
    ordered_json j{{"experiment", experiment}, {"r", r},         {"c", c},
                   {"n", n},                   {"m", m},         {"trials", trials},
                   {"seed", seed},             {"format", format}};
    j["query_budget"] = query_budget;
    j["distinguisher"] = distinguisher;
    j["sr_bits"] = sr_bits;
    j["instances"] = instances;
    if (!grid.empty()) {
      ordered_json cells = ordered_json::array();
      for (const auto& g : grid)
        cells.push_back(ordered_json{{"m", g.m}, {"t", g.t}, {"k", g.k}});
      j["grid"] = cells;
    }
    if (!capacities.empty()) j["capacities"] = capacities;
    if (!q_grid.empty()) j["q_grid"] = q_grid;
    return j;
  }
};

namespace detail {

inline std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

}  // namespace detail

inline Distinguisher make_distinguisher(const std::string& id, const SpongeParams& params) {
  if (id == "constant-zero") return constant_zero_distinguisher();
  if (id == "inverse-consistency") return inverse_consistency_distinguisher();
  if (id == "likelihood-reader")
    return reader_distinguisher(id, likelihood_reader(params));
  throw parameter_error("unknown distinguisher: " + id);
}

struct Report {
  ordered_json body;      // deterministic under (config, seed)
  std::string csv;        // deterministic rows; schema line first
  std::string timestamp;  // isolated: one header line / one JSON field

  std::string render_json(const ExperimentConfig& cfg) const {
    ordered_json j;
    j["generated_at"] = timestamp;
    j["library_version"] = kVersion;
    j["config"] = cfg.resolved_json();
    j["report"] = body;
    return j.dump(2) + "\n";
  }

  std::string render_csv(const ExperimentConfig& cfg) const {
    std::ostringstream os;
    os << "# generated_at=" << timestamp << "\n";
    os << "# library_version=" << kVersion << " config=" << cfg.resolved_json().dump()
       << "\n";
    os << csv;
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Experiment runners. Each produces both report forms; the dispatcher picks
// per the config. Return value is the process exit status.

inline int run_verify(const ExperimentConfig& cfg, Report& rep) {
  SpongeParams params(cfg.r, cfg.c);
  auto checks = verify_suite(params, Seed256::from_u64(cfg.seed));
  bool all = true;
  ordered_json arr = ordered_json::array();
  std::ostringstream csv;
  csv << "check,pass,detail\n";
  for (const auto& ck : checks) {
    all = all && ck.pass;
    arr.push_back(ordered_json{{"check", ck.name}, {"pass", ck.pass}, {"detail", ck.detail}});
    csv << ck.name << "," << (ck.pass ? 1 : 0) << "," << ck.detail << "\n";
  }
  rep.body = ordered_json{{"all_pass", all}, {"checks", arr}};
  rep.csv = csv.str();
  return all ? 0 : 1;
}

inline int run_census(const ExperimentConfig& cfg, Report& rep) {
  SpongeParams params(cfg.r, cfg.c);
  CosetCensus census = coset_census(params);
  ordered_json arr = ordered_json::array();
  std::ostringstream csv;
  csv << "signature,size,factorizations,example_f\n";
  for (const auto& e : census.entries) {
    ordered_json sig{{"rows", e.signature.rows},
                     {"cols", e.signature.cols},
                     {"counts", e.signature.counts}};
    arr.push_back(ordered_json{{"signature", sig},
                               {"size", e.size},
                               {"factorizations", e.factorizations},
                               {"example_f", e.example_sponge}});
    csv << "\"";
    for (size_t i = 0; i < e.signature.counts.size(); ++i)
      csv << (i ? " " : "") << e.signature.counts[i];
    csv << "\"," << e.size << "," << e.factorizations << ",\"";
    for (size_t i = 0; i < e.example_sponge.size(); ++i)
      csv << (i ? " " : "") << e.example_sponge[i];
    csv << "\"\n";
  }
  rep.body = ordered_json{{"group_order", census.group_order},
                          {"subgroup_h_order", census.subgroup_h_order},
                          {"subgroup_k_order", census.subgroup_k_order},
                          {"cosets", arr}};
  rep.csv = csv.str();
  return 0;
}

inline int run_indiff(const ExperimentConfig& cfg, Report& rep) {
  SpongeParams params(cfg.r, cfg.c);
  Distinguisher d = make_distinguisher(cfg.distinguisher, params);
  IndiffResult res =
      run_indiff_experiment(params, d, cfg.trials, Seed256::from_u64(cfg.seed));
  auto world_json = [](const GameReport& g) {
    return ordered_json{{"world", g.world},
                        {"trials", g.trials},
                        {"successes", g.successes},
                        {"estimate", g.estimate()},
                        {"radius", g.radius()},
                        {"flagged", g.flagged},
                        {"max_priv_queries", g.max_priv_queries},
                        {"max_pub_queries", g.max_pub_queries},
                        {"max_sim_queries", g.max_sim_queries},
                        {"max_sim_block_evals", g.max_sim_block_evals}};
  };
  rep.body = ordered_json{{"distinguisher", d.name},
                          {"advantage", res.advantage},
                          {"ci", res.ci},
                          {"worlds", ordered_json::array(
                                         {world_json(res.real_report),
                                          world_json(res.ideal_report)})}};
  std::ostringstream csv;
  csv << "world,trials,successes,estimate,radius,flagged,max_sim_queries,"
         "max_sim_block_evals\n";
  for (const GameReport* g : {&res.real_report, &res.ideal_report})
    csv << g->world << "," << g->trials << "," << g->successes << "," << g->estimate()
        << "," << g->radius() << "," << g->flagged << "," << g->max_sim_queries << ","
        << g->max_sim_block_evals << "\n";
  rep.csv = csv.str();
  return res.real_report.flagged + res.ideal_report.flagged == 0 ? 0 : 1;
}

inline int run_remove_sr(const ExperimentConfig& cfg, Report& rep) {
  SpongeParams params(cfg.r, cfg.c);
  SrRemovalExperiment exp =
      run_sr_removal(params, sr_sensitive_reader(), cfg.sr_bits, cfg.search_budget);
  const SrRemoval& rm = exp.removal;
  rep.body = ordered_json{{"ok", rm.ok},
                          {"case", rm.single ? "single" : "pair"},
                          {"sr0", rm.sr0},
                          {"sr1", rm.sr1},
                          {"p", rm.p.str()},
                          {"p0", rm.p0.str()},
                          {"p1", rm.p1.str()},
                          {"bias", rm.bias.str()},
                          {"extra_advice_bits", rm.extra_advice_bits},
                          {"reconstructed", exp.reconstructed.str()},
                          {"reproduces_exactly", exp.reproduces}};
  if (!rm.ok) rep.body["failure"] = rm.failure;
  std::ostringstream csv;
  csv << "ok,case,sr0,sr1,p,p0,p1,bias,extra_advice_bits,reproduces\n";
  csv << rm.ok << "," << (rm.single ? "single" : "pair") << "," << rm.sr0 << "," << rm.sr1
      << "," << rm.p.str() << "," << rm.p0.str() << "," << rm.p1.str() << ","
      << rm.bias.str() << "," << rm.extra_advice_bits << "," << exp.reproduces << "\n";
  rep.csv = csv.str();
  return rm.ok && exp.reproduces ? 0 : 1;
}

inline int run_tradeoff(const ExperimentConfig& cfg, Report& rep) {
  std::vector<HellmanParams> grid = cfg.grid;
  if (grid.empty()) grid.push_back(HellmanParams{64, 16, 8});
  std::vector<uint32_t> caps = cfg.capacities;
  if (caps.empty()) caps.push_back(cfg.c);
  const uint64_t instances = std::max<uint64_t>(1, cfg.instances);
  const uint64_t challenges = std::max<uint64_t>(1, cfg.trials / instances);

  ordered_json cells = ordered_json::array();
  std::ostringstream csv;
  csv << "r,c,S,T,trials,successes,eps,ci,world,m,t,k,max_T\n";
  auto emit = [&](const TradeoffCell& cell, const std::string& world) {
    double ci = 3.0 * cell.sigma;
    cells.push_back(ordered_json{{"r", cell.params.r},
                                 {"c", cell.params.c},
                                 {"S", cell.advice_bits},
                                 {"T", cell.mean_online_queries},
                                 {"trials", cell.trials},
                                 {"successes", cell.successes},
                                 {"eps", cell.eps},
                                 {"ci", ci},
                                 {"world", world},
                                 {"m", cell.hp.m},
                                 {"t", cell.hp.t},
                                 {"k", cell.hp.k},
                                 {"max_T", cell.max_online_queries}});
    csv << cell.params.r << "," << cell.params.c << "," << cell.advice_bits << ","
        << cell.mean_online_queries << "," << cell.trials << "," << cell.successes << ","
        << cell.eps << "," << ci << "," << world << "," << cell.hp.m << "," << cell.hp.t
        << "," << cell.hp.k << "," << cell.max_online_queries << "\n";
  };
  for (const auto& hp : grid) {
    SpongeParams fn_params(cfg.r, caps.front());
    emit(run_tradeoff_cell(fn_params, TargetKind::function_oracle, hp, instances, challenges,
                           Seed256::from_u64(cfg.seed)),
         "function");
    for (uint32_t cap : caps) {
      SpongeParams sp_params(cfg.r, cap);
      emit(run_tradeoff_cell(sp_params, TargetKind::sponge_public, hp, instances, challenges,
                             Seed256::from_u64(cfg.seed)),
           "sponge");
    }
  }
  rep.body = ordered_json{{"cells", cells}};
  rep.csv = csv.str();
  return 0;
}

inline int run_separation(const ExperimentConfig& cfg, Report& rep) {
  auto res = run_trapdoor_separation(cfg.n, cfg.trials, Seed256::from_u64(cfg.seed));
  auto dist =
      trapdoor_distinguish(cfg.n, cfg.query_budget, cfg.trials, Seed256::from_u64(cfg.seed));
  auto world_json = [](const GameReport& g) {
    return ordered_json{{"world", g.world},
                        {"trials", g.trials},
                        {"successes", g.successes},
                        {"rate", g.estimate()},
                        {"radius", g.radius()}};
  };
  rep.body = ordered_json{
      {"n", cfg.n},
      {"inversion",
       ordered_json::array({world_json(res.trapdoor_world), world_json(res.random_world)})},
      {"distinguisher", ordered_json{{"queries", dist.query_budget},
                                     {"advantage", dist.advantage},
                                     {"sigma", dist.sigma},
                                     {"analytic", dist.analytic}}}};
  std::ostringstream csv;
  csv << "world,trials,successes,rate\n";
  for (const GameReport* g : {&res.trapdoor_world, &res.random_world})
    csv << g->world << "," << g->trials << "," << g->successes << "," << g->estimate()
        << "\n";
  rep.csv = csv.str();
  return 0;
}

inline int run_truncation(const ExperimentConfig& cfg, Report& rep) {
  std::vector<uint64_t> grid = cfg.q_grid;
  if (grid.empty()) {
    const uint32_t mid = (cfg.n + cfg.m) / 2;
    grid = {0, pow2(mid) / 32, pow2(mid) / 8, pow2(mid)};
  }
  auto curve =
      truncation_advantage_curve(cfg.n, cfg.m, grid, cfg.trials, Seed256::from_u64(cfg.seed));
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "q,advantage,sigma\n";
  for (const auto& pt : curve) {
    rows.push_back(
        ordered_json{{"q", pt.q}, {"advantage", pt.advantage}, {"sigma", pt.sigma}});
    csv << pt.q << "," << pt.advantage << "," << pt.sigma << "\n";
  }
  rep.body = ordered_json{{"n", cfg.n}, {"m", cfg.m}, {"points", rows}};
  rep.csv = csv.str();
  return 0;
}

inline int run_experiment(const ExperimentConfig& cfg, std::ostream& status) {
  cfg.validate();
  Report rep;
  rep.timestamp = detail::timestamp_utc();
  int code = 0;
  if (cfg.experiment == "verify") code = run_verify(cfg, rep);
  else if (cfg.experiment == "coset-census") code = run_census(cfg, rep);
  else if (cfg.experiment == "indiff") code = run_indiff(cfg, rep);
  else if (cfg.experiment == "remove-sr") code = run_remove_sr(cfg, rep);
  else if (cfg.experiment == "tradeoff") code = run_tradeoff(cfg, rep);
  else if (cfg.experiment == "separation") code = run_separation(cfg, rep);
  else if (cfg.experiment == "truncation-curve") code = run_truncation(cfg, rep);
  else throw parameter_error("unknown experiment: " + cfg.experiment);

  std::string text = cfg.format == "csv" ? rep.render_csv(cfg) : rep.render_json(cfg);
  if (cfg.out.empty()) {
    status << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw config_error("cannot open output file: " + cfg.out);
    file << text;
    status << "wrote " << cfg.out << "\n";
  }
  return code;
}

}  // namespace spongelab
