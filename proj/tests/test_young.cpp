#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <unordered_map>

#include "spongelab/stats.hpp"
#include "spongelab/symsim.hpp"
#include "spongelab/young.hpp"

using namespace spongelab;

namespace {
PermutationTable from_small(const SpongeParams& p, const SmallPerm& pi) {
  return PermutationTable::from_forward(p, std::vector<uint32_t>(pi.begin(), pi.end()));
}
}  // namespace

TEST_CASE("partition shapes") {
  SpongeParams p(1, 2);
  auto rows = BlockPartition::by_prefix(p);
  CHECK(rows.blocks.size() == 2);
  CHECK(rows.blocks[0] == std::vector<uint32_t>{0, 1, 2, 3});
  CHECK(rows.blocks[1] == std::vector<uint32_t>{4, 5, 6, 7});

  auto cols = BlockPartition::by_input_points(p);
  CHECK(cols.blocks.size() == 3);
  CHECK(cols.blocks[0] == std::vector<uint32_t>{0});
  CHECK(cols.blocks[1] == std::vector<uint32_t>{4});
  CHECK(cols.blocks[2] == std::vector<uint32_t>{1, 2, 3, 5, 6, 7});

  CHECK_THROWS_AS(BlockPartition::custom_blocks(p, {{0, 1}, {1, 2}}), parameter_error);
}

TEST_CASE("subgroup orders are products of block factorials") {
  SpongeParams p(1, 2);
  CHECK(YoungSubgroup(BlockPartition::by_prefix(p)).order() == 24 * 24);
  CHECK(YoungSubgroup(BlockPartition::by_input_points(p)).order() == 720);
  SpongeParams q(1, 1);
  CHECK(YoungSubgroup(BlockPartition::by_prefix(q)).order() == 4);
  CHECK(YoungSubgroup(BlockPartition::by_input_points(q)).order() == 2);
}

TEST_CASE("signature of the identity at (1,1) by hand") {
  SpongeParams p(1, 1);
  auto rows = BlockPartition::by_prefix(p);
  auto cols = BlockPartition::by_input_points(p);
  auto sig = signature(from_small(p, small_identity(4)), rows, cols);
  CHECK(sig.rows == 2);
  CHECK(sig.cols == 3);
  CHECK(sig.counts == std::vector<uint32_t>{1, 0, 1, 0, 1, 1});
  // row sums equal block sizes 2^c
  for (uint32_t i = 0; i < sig.rows; ++i) {
    uint32_t sum = 0;
    for (uint32_t j = 0; j < sig.cols; ++j) sum += sig.at(i, j);
    CHECK(sum == 2);
  }
}

TEST_CASE("signatures are double-coset invariants, exhaustively at N=4") {
  SpongeParams p(1, 1);
  auto rows = BlockPartition::by_prefix(p);
  auto cols = BlockPartition::by_input_points(p);
  std::vector<SmallPerm> h_members, k_members;
  enumerate_young(rows, [&](const SmallPerm& h) { h_members.push_back(h); });
  enumerate_young(cols, [&](const SmallPerm& k) { k_members.push_back(k); });
  CHECK(h_members.size() == 4);
  CHECK(k_members.size() == 2);
  enumerate_permutations(4, [&](const SmallPerm& pi, uint64_t) {
    auto base = signature(pi, rows, cols);
    for (const auto& h : h_members)
      for (const auto& k : k_members) {
        auto moved = small_compose(small_compose(h, pi), k);
        CHECK(signature(moved, rows, cols) == base);
      }
  });
}

TEST_CASE("same coset iff same sponge hash, all S4 pairs") {
  SpongeParams p(1, 1);
  auto rows = BlockPartition::by_prefix(p);
  auto cols = BlockPartition::by_input_points(p);
  std::vector<PermutationTable> perms;
  enumerate_permutations(4, [&](const SmallPerm& pi, uint64_t) {
    perms.push_back(from_small(p, pi));
  });
  for (const auto& a : perms)
    for (const auto& b : perms) {
      bool same_hash = sponge_table(a) == sponge_table(b);
      CHECK(same_double_coset(a, b, rows, cols) == same_hash);
    }
}

TEST_CASE("identity vs a permutation moving a sponge input differ") {
  SpongeParams p(1, 1);
  auto rows = BlockPartition::by_prefix(p);
  auto cols = BlockPartition::by_input_points(p);
  // send 00 -> 10 and complete arbitrarily
  auto moved = from_small(p, SmallPerm{2, 1, 0, 3});
  CHECK_FALSE(same_double_coset(from_small(p, small_identity(4)), moved, rows, cols));
}

TEST_CASE("sampled members stay inside the subgroup") {
  SpongeParams p(1, 1);
  YoungSubgroup k_group(BlockPartition::by_input_points(p));
  YoungSubgroup h_group(BlockPartition::by_prefix(p));
  for (uint64_t s = 0; s < 200; ++s) {
    auto sigma = sample_member(k_group, Seed256::from_u64(s));
    CHECK(sigma.fwd(0) == 0);
    CHECK(sigma.fwd(2) == 2);
    bool is_id = sigma.fwd(1) == 1 && sigma.fwd(3) == 3;
    bool is_swap = sigma.fwd(1) == 3 && sigma.fwd(3) == 1;
    CHECK((is_id || is_swap));
    CHECK(k_group.contains(sigma));

    auto omega = sample_member(h_group, Seed256::from_u64(s));
    CHECK(h_group.contains(omega));
    // a member's signature against its own partition is diagonal
    auto sig = signature(omega, h_group.partition, h_group.partition);
    for (uint32_t i = 0; i < sig.rows; ++i)
      CHECK(sig.at(i, i) == omega.params.domain_size() / sig.rows);
  }
}

TEST_CASE("sample_member is uniform over the subgroup") {
  SpongeParams p(1, 1);
  const uint64_t draws = 100000;
  SUBCASE("prefix stabilizer, 4 members") {
    YoungSubgroup g(BlockPartition::by_prefix(p));
    std::unordered_map<uint64_t, uint64_t> counts;
    for (uint64_t s = 0; s < draws; ++s) {
      auto t = sample_member(g, Seed256::from_u64(s));
      ++counts[perm_rank(SmallPerm(t.forward.begin(), t.forward.end()))];
    }
    CHECK(counts.size() == 4);
    std::vector<uint64_t> cells;
    for (auto& kv : counts) cells.push_back(kv.second);
    CHECK(chi_square_uniformity(cells) > 1e-3);
  }
  SUBCASE("input-point stabilizer at (1,2), 720 members") {
    SpongeParams q(1, 2);
    YoungSubgroup g(BlockPartition::by_input_points(q));
    std::unordered_map<uint64_t, uint64_t> counts;
    for (uint64_t s = 0; s < draws; ++s) {
      auto t = sample_member(g, Seed256::from_u64(s));
      ++counts[perm_rank(SmallPerm(t.forward.begin(), t.forward.end()))];
    }
    CHECK(counts.size() == 720);
    std::vector<uint64_t> cells;
    for (auto& kv : counts) cells.push_back(kv.second);
    CHECK(chi_square_uniformity(cells) > 1e-3);
  }
}

TEST_CASE("census at (1,1): four cosets with the documented shape") {
  SpongeParams p(1, 1);
  auto census = coset_census(p);
  CHECK(census.entries.size() == 4);  // one per 1-bit function
  CHECK(census.group_order == 24);
  CHECK(census.subgroup_h_order == 4);
  CHECK(census.subgroup_k_order == 2);
  std::multiset<uint64_t> sizes;
  uint64_t total = 0;
  for (const auto& e : census.entries) {
    sizes.insert(e.size);
    total += e.size;
    CHECK(census.subgroup_h_order * census.subgroup_k_order ==
          e.size * e.factorizations);
    bool constant = e.example_sponge[0] == e.example_sponge[1];
    CHECK(e.size == (constant ? 4 : 8));
  }
  CHECK(total == 24);
  CHECK(sizes == std::multiset<uint64_t>{4, 4, 8, 8});
}

TEST_CASE("census at (1,2): cosets partition S8") {
  SpongeParams p(1, 2);
  auto census = coset_census(p);
  CHECK(census.entries.size() == 4);
  uint64_t total = 0;
  for (const auto& e : census.entries) {
    total += e.size;
    CHECK(census.subgroup_h_order * census.subgroup_k_order ==
          e.size * e.factorizations);
  }
  CHECK(total == 40320);
  CHECK_THROWS_AS(coset_census(SpongeParams(2, 2)), guardrail_error);
}

TEST_CASE("products h*x*k cover x's coset uniformly, exhaustively at N=4") {
  SpongeParams p(1, 1);
  auto rows = BlockPartition::by_prefix(p);
  auto cols = BlockPartition::by_input_points(p);
  std::vector<SmallPerm> h_members, k_members;
  enumerate_young(rows, [&](const SmallPerm& h) { h_members.push_back(h); });
  enumerate_young(cols, [&](const SmallPerm& k) { k_members.push_back(k); });
  auto census = coset_census(p);
  for (const auto& entry : census.entries) {
    std::map<SmallPerm, uint64_t> multiplicity;
    for (const auto& h : h_members)
      for (const auto& k : k_members)
        ++multiplicity[small_compose(small_compose(h, entry.example), k)];
    CHECK(multiplicity.size() == entry.size);
    for (auto& [perm, count] : multiplicity)
      CHECK(count == h_members.size() * k_members.size() / entry.size);
  }
}
