#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "spongelab/bitdomain.hpp"
#include "spongelab/common.hpp"
#include "spongelab/rng.hpp"

namespace spongelab {

// One-round sponge: the image of x under phi(x || 0^c), keeping the first
// (most significant) r bits. Exactly one forward query to phi.
template <typename PhiFwd>
uint32_t sponge_eval(PhiFwd&& phi_forward, uint32_t x, const SpongeParams& p) {
  if (x >= p.rate_size()) throw parameter_error("sponge eval: input out of range");
  return phi_forward(x << p.c) >> p.c;
}

inline FunctionTable sponge_table(const PermutationTable& phi) {
  std::vector<uint32_t> t(size_t(phi.params.rate_size()));
  for (uint64_t x = 0; x < phi.params.rate_size(); ++x)
    t[size_t(x)] = sponge_eval([&](uint32_t w) { return phi.fwd(w); }, uint32_t(x), phi.params);
  return FunctionTable(phi.params, std::move(t));
}

// The query surface a game hands to a distinguisher or adversary: a private
// r-bit function and a public invertible n-bit pair, with per-oracle
// monotone query counters. Counting applies to online phases; offline
// (unbounded) code uses the _peek variants.
class Interface {
 public:
  using PrivFn = std::function<uint32_t(uint32_t)>;
  using PubFn = std::function<uint32_t(Dir, uint32_t)>;

  explicit Interface(const SpongeParams& p) : params_(p) {}

  const SpongeParams& params() const { return params_; }

  // The peek variant, when distinct, must evaluate the same map as the
  // counted one without advancing any downstream counter.
  void bind_priv(PrivFn fn, PrivFn peek = nullptr) {
    priv_ = std::move(fn);
    priv_peek_ = peek ? std::move(peek) : priv_;
  }
  void bind_pub(PubFn fn, PubFn peek = nullptr) {
    pub_ = std::move(fn);
    pub_peek_ = peek ? std::move(peek) : pub_;
  }
  bool pub_bound() const { return bool(pub_); }

  uint32_t priv(uint32_t x) {
    ++priv_queries_;
    if (!priv_) throw config_error("interface: private oracle unbound");
    return priv_(x);
  }

  uint32_t pub(Dir d, uint32_t w) {
    ++pub_queries_;
    if (!pub_) throw config_error("interface: public oracle unbound; attach a simulator");
    return pub_(d, w);
  }

  uint32_t priv_peek(uint32_t x) const {
    if (!priv_peek_) throw config_error("interface: private oracle unbound");
    return priv_peek_(x);
  }

  uint32_t pub_peek(Dir d, uint32_t w) const {
    if (!pub_peek_) throw config_error("interface: public oracle unbound; attach a simulator");
    return pub_peek_(d, w);
  }

  uint64_t priv_queries() const { return priv_queries_; }
  uint64_t pub_queries() const { return pub_queries_; }

 private:
  SpongeParams params_;
  PrivFn priv_, priv_peek_;
  PubFn pub_, pub_peek_;
  uint64_t priv_queries_ = 0;
  uint64_t pub_queries_ = 0;
};

// A sampled game world. Real: priv is the sponge of a uniform permutation
// phi, pub is (phi, phi^-1). Ideal: priv is a uniform function table and pub
// stays unbound until a simulator is attached.
struct World {
  SpongeParams params;
  bool real = false;
  std::shared_ptr<const PermutationTable> phi;  // real world only
  std::shared_ptr<const FunctionTable> f;       // ideal world only
  std::optional<Seed256> shared_randomness;     // set in shared-randomness games
  std::shared_ptr<const void> sim;              // keeps an attached simulator alive
  std::function<uint64_t()> sim_queries;        // its f-query counter, when attached
  std::function<uint64_t()> sim_block_evals;    // its symmetrizer-evaluation counter
  Interface iface;

  World(const SpongeParams& p) : params(p), iface(p) {}

  // Unbounded access for offline phases: the full private truth table.
  FunctionTable priv_truth_table() const {
    if (real) return sponge_table(*phi);
    return *f;
  }

  // Unbounded access for offline phases: the full public truth table.
  // In the ideal world this materializes the simulated permutation with
  // uncounted queries, so it is gated by the dense-table guardrail.
  PermutationTable pub_truth_table() const {
    if (real) return *phi;
    params.require_table_mode();
    std::vector<uint32_t> fwd(size_t(params.domain_size()));
    for (uint64_t w = 0; w < params.domain_size(); ++w)
      fwd[size_t(w)] = iface.pub_peek(Dir::fwd, uint32_t(w));
    return PermutationTable::from_forward(params, std::move(fwd));
  }
};

inline World real_world(const SpongeParams& params, const Seed256& seed) {
  World w(params);
  w.real = true;
  w.phi = std::make_shared<const PermutationTable>(
      sample_permutation(params, DetRng(seed).fork("real-phi").state_seed()));
  auto phi = w.phi;  // private side holds its own handle to phi
  w.iface.bind_priv(
      [phi, params](uint32_t x) { return sponge_eval([&](uint32_t v) { return phi->fwd(v); }, x, params); });
  w.iface.bind_pub(
      [phi](Dir d, uint32_t v) { return d == Dir::fwd ? phi->fwd(v) : phi->inv(v); });
  return w;
}

inline World random_oracle_world(const SpongeParams& params, const Seed256& seed) {
  World w(params);
  w.real = false;
  w.f = std::make_shared<const FunctionTable>(
      sample_function(params, DetRng(seed).fork("ideal-f").state_seed()));
  auto f = w.f;
  w.iface.bind_priv([f](uint32_t x) { return f->eval(x); });
  return w;
}

// Random-oracle model for security games: private and public interface are
// the same r-bit function oracle (no inverse direction exists).
inline World function_world(const SpongeParams& params, const Seed256& seed) {
  World w = random_oracle_world(params, seed);
  auto f = w.f;
  w.iface.bind_pub([f](Dir d, uint32_t x) {
    if (d != Dir::fwd) throw config_error("function world: oracle has no inverse");
    return f->eval(x);
  });
  return w;
}

}  // namespace spongelab
