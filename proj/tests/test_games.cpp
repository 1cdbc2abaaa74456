#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "spongelab/experiments.hpp"
#include "spongelab/games.hpp"

using namespace spongelab;

TEST_CASE("advice bitstream round-trips") {
  Advice a;
  a.push_bits(0b1011, 4);
  a.push_bits(0x3ff, 10);
  a.push_bits(0, 1);
  CHECK(a.bits == 15);
  CHECK(a.read_bits(0, 4) == 0b1011);
  CHECK(a.read_bits(4, 10) == 0x3ff);
  CHECK(a.read_bits(14, 1) == 0);
  CHECK_THROWS_AS(a.read_bits(14, 2), parameter_error);
}

TEST_CASE("constant distinguisher has advantage exactly zero") {
  SpongeParams p(1, 1);
  auto res = run_indiff_experiment(p, constant_zero_distinguisher(), 200,
                                   Seed256::from_u64(1));
  CHECK(res.advantage == 0.0);
  CHECK(res.real_report.successes == 0);
  CHECK(res.ideal_report.successes == 0);
}

TEST_CASE("consistency checks cannot tell the simulator apart") {
  SpongeParams p(1, 2);
  auto res = run_indiff_experiment(p, inverse_consistency_distinguisher(), 2000,
                                   Seed256::from_u64(2));
  // the simulated public interface is a genuine permutation pair whose
  // sponge equals priv, so the distinguisher accepts in both worlds
  CHECK(res.real_report.successes == 2000);
  CHECK(res.ideal_report.successes == 2000);
  CHECK(res.advantage == 0.0);
  CHECK(res.real_report.flagged == 0);
  CHECK(res.ideal_report.flagged == 0);
  // the simulator answered one f query per public query
  CHECK(res.ideal_report.max_sim_queries == res.ideal_report.max_pub_queries);
  // measured budgets stay within the declared ones
  CHECK(res.measured.advice_bits <= res.declared.advice_bits);
  CHECK(res.measured.online_queries <= res.declared.online_queries);
  CHECK(res.measured.sim_queries <= res.declared.sim_queries);
}

TEST_CASE("indiff trials over the query budget are aborted and flagged") {
  SpongeParams p(1, 1);
  Distinguisher greedy;
  greedy.name = "greedy";
  greedy.advice_budget = 0;
  greedy.query_budget = 2;
  greedy.online = [](Interface& iface, const Advice&, DetRng&) {
    for (uint32_t x = 0; x < 2; ++x) iface.priv(x);
    iface.pub(Dir::fwd, 0);
    return 1;
  };
  auto res = run_indiff_experiment(p, greedy, 40, Seed256::from_u64(17));
  CHECK(res.real_report.flagged == 40);
  CHECK(res.ideal_report.flagged == 40);
  CHECK(res.real_report.successes == 0);  // flagged trials do not score
}

TEST_CASE("likelihood reader's exact advantage equals the TV distance") {
  for (auto [r, c] : {std::pair{1u, 1u}, {1u, 2u}}) {
    SpongeParams p(r, c);
    TableReader reader = likelihood_reader(p);
    Rational real_acc = exact_real_acceptance(p, reader);
    // the ideal acceptance does not depend on the shared randomness
    Rational ideal_acc =
        exact_ideal_acceptance(p, reader, SharedRandomness(Seed256::from_u64(7)));
    CHECK(ideal_acc ==
          exact_ideal_acceptance(p, reader, SharedRandomness(Seed256::from_u64(8))));
    Rational tv = symmetrized_vs_uniform_tv(p);
    CHECK((ideal_acc - real_acc) == tv);
  }
}

TEST_CASE("priv-only readers are bounded by the truth-table law distance") {
  // a distinguisher that ignores the public interface sees a uniform
  // function in the ideal world and the sponge law in the real world; the
  // optimal such reader achieves exactly the law's TV from uniform
  SpongeParams p(1, 2);
  auto law = sponge_truthtable_law(p);
  const Rational uniform(1, int64_t(law.support()));
  TableReader priv_only = [law, uniform](const FunctionTable& f, const PermutationTable&) {
    return law.rational_weights[size_t(f.key())] < uniform ? 1 : 0;
  };
  Rational real_acc = exact_real_acceptance(p, priv_only);
  Rational ideal_acc =
      exact_ideal_acceptance(p, priv_only, SharedRandomness(Seed256::from_u64(31)));
  Rational tv = tv_distance_exact(law, Distribution::uniform_exact(law.support()));
  CHECK((ideal_acc - real_acc) == tv);
  CHECK(tv == Rational(1, 14));
}

TEST_CASE("table debug json carries shape and entries") {
  SpongeParams p(1, 1);
  auto f = sample_function(p, Seed256::from_u64(2));
  auto j = table_debug_json(f);
  CHECK(j["kind"] == "function");
  CHECK(j["r"] == 1);
  CHECK(j["entries"].size() == 2);
  auto phi = sample_permutation(p, Seed256::from_u64(2));
  auto jp = table_debug_json(phi);
  CHECK(jp["kind"] == "permutation");
  CHECK(jp["entries"].size() == 4);
}

TEST_CASE("likelihood reader's sampled advantage matches exact TV at (1,1)") {
  SpongeParams p(1, 1);
  auto d = reader_distinguisher("likelihood", likelihood_reader(p));
  auto res = run_indiff_experiment(p, d, 4000, Seed256::from_u64(3));
  double tv = symmetrized_vs_uniform_tv(p).to_double();
  CHECK(tv == doctest::Approx(1.0 / 6.0));
  CHECK(res.advantage < tv + res.ci);
  CHECK(res.advantage > tv - res.ci);
}

TEST_CASE("stateless lift: zero advice, preserved behavior, state detection") {
  SpongeParams p(1, 2);
  auto spec = sponge_sim_spec(p);
  auto lifted = lift_reset_to_precomp(spec, Seed256::from_u64(4));
  CHECK(lifted.advice_bits == 0);

  // the lifted online simulator answers exactly like the stateless one
  World ideal = random_oracle_world(p, Seed256::from_u64(5));
  ideal.shared_randomness = Seed256::from_u64(6);
  auto direct = spec.make(ideal.f, SharedRandomness(*ideal.shared_randomness));
  Interface pub_r(p);
  auto f = ideal.f;
  pub_r.bind_pub([f](Dir, uint32_t x) { return f->eval(x); });
  PubOracle lifted_oracle = lifted.make_online(pub_r, ideal, Advice{});
  for (uint32_t w = 0; w < p.domain_size(); ++w) {
    CHECK(lifted_oracle(Dir::fwd, w) == direct->peek(Dir::fwd, w));
    CHECK(lifted_oracle(Dir::inv, w) == direct->peek(Dir::inv, w));
  }
  // one f query per lifted query, measured on the handed interface
  CHECK(pub_r.pub_queries() == 2 * p.domain_size());

  // a "simulator" that draws fresh coins per instantiation is caught
  StatelessSimSpec crooked;
  crooked.params = p;
  auto counter = std::make_shared<uint64_t>(0);
  crooked.make = [counter](std::shared_ptr<const FunctionTable> fn, const SharedRandomness&) {
    return std::make_shared<const SimOracle>(
        std::move(fn), SharedRandomness(Seed256::from_u64((*counter)++)));
  };
  CHECK_THROWS_AS(lift_reset_to_precomp(crooked, Seed256::from_u64(4)), contract_error);
}

TEST_CASE("shared-randomness removal: synthetic two-point fixture") {
  auto p_of_sr = [](uint16_t sr) { return sr % 2 ? Rational(4, 5) : Rational(1, 5); };
  auto out = remove_shared_randomness(p_of_sr, 4, UINT64_MAX);
  REQUIRE(out.ok);
  CHECK_FALSE(out.single);
  CHECK(out.p == Rational(1, 2));
  CHECK(out.p0 == Rational(1, 5));
  CHECK(out.p1 == Rational(4, 5));
  CHECK(out.bias == Rational(1, 2));
  CHECK(out.extra_advice_bits == 1);
  // the mixture reproduces the average exactly
  CHECK(((Rational(1) - out.bias) * out.p0 + out.bias * out.p1) == out.p);
}

TEST_CASE("shared-randomness removal: constant case needs no advice") {
  auto out = remove_shared_randomness([](uint16_t) { return Rational(1, 3); }, 8, UINT64_MAX);
  REQUIRE(out.ok);
  CHECK(out.single);
  CHECK(out.extra_advice_bits == 0);
  CHECK(out.p == Rational(1, 3));
}

TEST_CASE("shared-randomness removal: bracketing failure is reported") {
  // scan only the two low-acceptance values; the full-space average escapes
  auto p_of_sr = [](uint16_t sr) { return sr < 2 ? Rational(0) : Rational(1); };
  auto out = remove_shared_randomness(p_of_sr, 4, 2);
  CHECK_FALSE(out.ok);
  CHECK_FALSE(out.failure.empty());
}

TEST_CASE("sponge fixture: removal yields one advice bit and exact reproduction") {
  SpongeParams p(1, 1);
  auto exp = run_sr_removal(p, sr_sensitive_reader(), 16, UINT64_MAX);
  REQUIRE(exp.removal.ok);
  CHECK_FALSE(exp.removal.single);
  CHECK(exp.simulator_advice_bits == 1);
  CHECK(exp.reproduces);
  // the reader accepts only when sigma fixes the probe point and omega keeps
  // the probe's block in place, so per-SR acceptance is 0 or 1/2
  CHECK(exp.removal.p0 == Rational(0));
  CHECK(exp.removal.p1 == Rational(1, 2));
}

TEST_CASE("monte-carlo removal variant propagates estimation error") {
  auto estimator = [](uint16_t sr) {
    return std::pair<double, double>(sr % 2 ? 0.8 : 0.2, 0.01);
  };
  auto out = remove_shared_randomness_mc(estimator, 4, UINT64_MAX);
  REQUIRE(out.ok);
  CHECK(out.bias == doctest::Approx(0.5));
  CHECK(out.estimation_error > 0);
}

namespace {

Adversary replay_adversary() {
  Adversary adv;
  adv.name = "replay";
  adv.offline.advice_budget = 0;
  adv.online.query_budget = 0;
  adv.online.run = [](Interface&, const World&, const Advice&, uint64_t challenge, DetRng&) {
    return challenge;
  };
  return adv;
}

Adversary full_advice_adversary(const SpongeParams& p) {
  Adversary adv;
  adv.name = "full-advice";
  adv.offline.advice_budget = uint64_t(p.r) * p.rate_size();
  adv.offline.run = [p](const World& w, DetRng&) {
    FunctionTable t = w.priv_truth_table();
    Advice a;
    for (uint32_t v : t.table) a.push_bits(v, p.r);
    return a;
  };
  adv.online.query_budget = 0;
  adv.online.run = [p](Interface&, const World&, const Advice& a, uint64_t challenge,
                       DetRng&) -> uint64_t {
    for (uint64_t x = 0; x < p.rate_size(); ++x)
      if (a.read_bits(x * p.r, p.r) == challenge) return x;
    return 0;
  };
  return adv;
}

}  // namespace

TEST_CASE("inversion game baselines") {
  SpongeParams p(4, 4);
  SecurityGame game = inversion_game(p);
  auto make_world = [p](const Seed256& s) { return function_world(p, s); };

  SUBCASE("challenge replay wins at the analytic fixed-point rate") {
    auto rep = run_security_game(game, make_world, replay_adversary(), 20000,
                                 Seed256::from_u64(11));
    CHECK(rep.flagged == 0);
    CHECK(rep.max_priv_queries == 2);  // the cryptosystem's challenge + verify
    CHECK(rep.max_pub_queries == 0);
    const double q = std::pow(2.0, -double(p.r));
    const double analytic = q + (1.0 - q) * q;
    CHECK(std::fabs(rep.estimate() - analytic) < 3 * rep.sigma() + 1e-3);
  }

  SUBCASE("full truth-table advice always inverts") {
    auto rep = run_security_game(game, make_world, full_advice_adversary(p), 2000,
                                 Seed256::from_u64(12));
    CHECK(rep.flagged == 0);
    CHECK(rep.successes == rep.trials);
    CHECK(rep.max_advice_bits == uint64_t(p.r) * p.rate_size());
  }
}

TEST_CASE("budget violations abort and flag the trial") {
  SpongeParams p(2, 2);
  SecurityGame game = inversion_game(p);
  auto make_world = [p](const Seed256& s) { return function_world(p, s); };
  Adversary greedy;
  greedy.name = "greedy";
  greedy.offline.advice_budget = 0;
  greedy.online.query_budget = 1;
  greedy.online.run = [](Interface& pub, const World&, const Advice&, uint64_t challenge,
                         DetRng&) -> uint64_t {
    for (int i = 0; i < 4; ++i) pub.pub(Dir::fwd, uint32_t(i));
    return challenge;
  };
  auto rep = run_security_game(game, make_world, greedy, 50, Seed256::from_u64(13));
  CHECK(rep.flagged == 50);
  CHECK(rep.successes == 0);
}

TEST_CASE("degenerate composition with the identity simulator changes nothing") {
  SpongeParams p(4, 4);
  SecurityGame game = inversion_game(p);
  auto make_world = [p](const Seed256& s) { return function_world(p, s); };
  Adversary base = full_advice_adversary(p);
  Adversary composed = compose_adversary(base, identity_simulator(), 0);
  auto rep_base = run_security_game(game, make_world, base, 500, Seed256::from_u64(14));
  auto rep_comp = run_security_game(game, make_world, composed, 500, Seed256::from_u64(14));
  CHECK(rep_base.successes == rep_comp.successes);
  CHECK(rep_comp.max_advice_bits == rep_base.max_advice_bits);  // S + S_sim, S_sim = 0
}

TEST_CASE("composed sponge adversary transfers to the function world") {
  // a sponge-inversion adversary composed with the lifted simulator plays
  // the function-inversion game at the same success rate, up to the
  // measured indifferentiability gap
  SpongeParams p(8, 8);
  HellmanParams hp{32, 8, 4};
  SecurityGame game = inversion_game(p);
  Adversary sponge_adv =
      hellman_adversary(p, TargetKind::sponge_public, hp, Seed256::from_u64(21));
  auto lifted = lift_reset_to_precomp(sponge_sim_spec(p), Seed256::from_u64(22));
  Adversary composed = compose_adversary(sponge_adv, lifted, UINT64_MAX);

  const uint64_t trials = 4000;
  auto sponge_world = [p](const Seed256& s) { return real_world(p, s); };
  auto function_world_sr = [p](const Seed256& s) {
    World w = function_world(p, s);
    w.shared_randomness = DetRng(s).fork("sim-sr").state_seed();
    return w;
  };
  auto rep_c =
      run_security_game(game, sponge_world, sponge_adv, trials, Seed256::from_u64(23));
  auto rep_r =
      run_security_game(game, function_world_sr, composed, trials, Seed256::from_u64(23));
  CHECK(rep_c.flagged == 0);
  CHECK(rep_r.flagged == 0);
  // budgets: advice grew by S_sim = 0, queries are the simulator's
  CHECK(rep_r.max_advice_bits == rep_c.max_advice_bits);
  double gap = std::fabs(rep_c.estimate() - rep_r.estimate());
  auto eps = measured_indiff_advantage(p, 4000, Seed256::from_u64(24));
  double joint_ci =
      3.0 * std::sqrt(rep_c.sigma() * rep_c.sigma() + rep_r.sigma() * rep_r.sigma());
  CHECK(gap <= eps.advantage + 3 * eps.sigma + joint_ci);
}
