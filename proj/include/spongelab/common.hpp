#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spongelab {

// Resource guardrails. Exhaustive domain scans stop at 30 bits, dense
// truth tables at 28 bits, and full symmetric-group enumeration at
// domains of 8 points (8! = 40320 permutations).
inline constexpr uint32_t kMaxEnumDomainBits = 30;
inline constexpr uint32_t kMaxTableBits = 28;
inline constexpr uint32_t kMaxGroupEnumDomain = 8;

// Block permutations up to this size are realized as cached shuffle
// tables; larger blocks fall back to a pointwise cipher walk.
inline constexpr uint64_t kMaxMaterializedBlock = uint64_t(1) << 20;

class parameter_error : public std::invalid_argument {
 public:
  explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

class guardrail_error : public std::runtime_error {
 public:
  explicit guardrail_error(const std::string& msg) : std::runtime_error(msg) {}
};

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

inline constexpr uint64_t pow2(uint32_t bits) { return uint64_t(1) << bits; }

inline constexpr uint64_t mask_bits(uint32_t bits) {
  return bits >= 64 ? ~uint64_t(0) : (uint64_t(1) << bits) - 1;
}

inline constexpr uint32_t ceil_log2(uint64_t x) {
  uint32_t b = 0;
  while (pow2(b) < x) ++b;
  return b;
}

}  // namespace spongelab
