#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "spongelab/common.hpp"
#include "spongelab/rng.hpp"

namespace spongelab {

// Query direction for invertible public interfaces.
enum class Dir { fwd, inv };

// Sponge domain sizing: rate r, capacity c, state width n = r + c.
// Only the r <= c regime is supported; lambda = min(r, c) = r.
struct SpongeParams {
  uint32_t r = 0;
  uint32_t c = 0;
  uint32_t n = 0;
  uint32_t lambda = 0;

  SpongeParams() = default;
  SpongeParams(uint32_t rate, uint32_t capacity) : r(rate), c(capacity) {
    if (r < 1 || c < 1) throw parameter_error("sponge params: need r >= 1 and c >= 1");
    if (r > c) throw parameter_error("sponge params: unsupported regime, need r <= c");
    n = r + c;
    lambda = r;
    if (n > kMaxEnumDomainBits)
      throw guardrail_error("sponge params: n = " + std::to_string(n) +
                            " exceeds enumeration guardrail of " +
                            std::to_string(kMaxEnumDomainBits) + " bits");
  }

  uint64_t domain_size() const { return pow2(n); }
  uint64_t rate_size() const { return pow2(r); }

  void require_table_mode() const {
    if (n > kMaxTableBits)
      throw guardrail_error("dense tables limited to n <= " + std::to_string(kMaxTableBits));
  }

  friend bool operator==(const SpongeParams&, const SpongeParams&) = default;
};

// A bitstring of explicit width. Widths are checked on every concat,
// split and xor; the empty word (width 0) is legal.
struct Word {
  uint64_t value = 0;
  uint32_t width = 0;

  Word() = default;
  Word(uint64_t v, uint32_t w) : value(v), width(w) {
    if (w > 63) throw parameter_error("word width > 63");
    if (v > mask_bits(w)) throw parameter_error("word value does not fit declared width");
  }

  bool empty() const { return width == 0; }
  friend bool operator==(const Word&, const Word&) = default;
};

inline Word concat(const Word& hi, const Word& lo) {
  if (hi.width + lo.width > 63) throw parameter_error("concat: combined width > 63");
  return Word((hi.value << lo.width) | lo.value, hi.width + lo.width);
}

inline Word word_xor(const Word& a, const Word& b) {
  if (a.width != b.width) throw parameter_error("xor: width mismatch");
  return Word(a.value ^ b.value, a.width);
}

struct Split3 {
  Word top;     // first r bits (most significant)
  Word middle;  // n - 2r bits, empty when r == c
  Word bottom;  // last r bits
};

// Decompose an n-bit word as top-r || middle || bottom-r. The "first"
// bits of the written-left-to-right string are the most significant bits
// of the integer encoding.
inline Split3 split3(const Word& w, const SpongeParams& params) {
  if (w.width != params.n) throw parameter_error("split3: word width must equal n");
  const uint32_t mid = params.n - 2 * params.r;
  Split3 out;
  out.top = Word(w.value >> (params.n - params.r), params.r);
  out.middle = Word((w.value >> params.r) & mask_bits(mid), mid);
  out.bottom = Word(w.value & mask_bits(params.r), params.r);
  return out;
}

inline Word concat3(const Word& top, const Word& middle, const Word& bottom) {
  return concat(concat(top, middle), bottom);
}

// Dense truth table for an r-bit to r-bit function.
struct FunctionTable {
  SpongeParams params;
  std::vector<uint32_t> table;  // 2^r entries, each < 2^r

  FunctionTable() = default;
  FunctionTable(SpongeParams p, std::vector<uint32_t> t) : params(p), table(std::move(t)) {
    if (table.size() != params.rate_size())
      throw parameter_error("function table: wrong length");
    for (uint32_t v : table)
      if (v >= params.rate_size()) throw parameter_error("function table: entry out of range");
  }

  uint32_t eval(uint32_t x) const { return table[x]; }

  // Encodes the whole table as one integer, r * 2^r <= 48 bits.
  uint64_t key() const {
    uint64_t k = 0;
    for (size_t i = table.size(); i-- > 0;) k = (k << params.r) | table[i];
    return k;
  }

  static FunctionTable from_key(const SpongeParams& p, uint64_t key) {
    std::vector<uint32_t> t(size_t(p.rate_size()));
    for (auto& v : t) {
      v = uint32_t(key & mask_bits(p.r));
      key >>= p.r;
    }
    return FunctionTable(p, std::move(t));
  }

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

// Dense truth table for an n-bit permutation together with its inverse.
// Construction verifies bijectivity on every point.
struct PermutationTable {
  SpongeParams params;
  std::vector<uint32_t> forward;
  std::vector<uint32_t> backward;

  PermutationTable() = default;

  static PermutationTable from_forward(SpongeParams p, std::vector<uint32_t> fwd) {
    p.require_table_mode();
    const uint64_t size = p.domain_size();
    if (fwd.size() != size) throw parameter_error("permutation table: wrong length");
    std::vector<uint32_t> bwd(size, UINT32_MAX);
    for (uint64_t i = 0; i < size; ++i) {
      uint32_t img = fwd[size_t(i)];
      if (img >= size || bwd[img] != UINT32_MAX)
        throw parameter_error("permutation table: not a bijection");
      bwd[img] = uint32_t(i);
    }
    PermutationTable t;
    t.params = p;
    t.forward = std::move(fwd);
    t.backward = std::move(bwd);
    return t;
  }

  uint32_t fwd(uint32_t w) const { return forward[w]; }
  uint32_t inv(uint32_t w) const { return backward[w]; }

  friend bool operator==(const PermutationTable&, const PermutationTable&) = default;
};

// Uniform, seed-deterministic function table.
inline FunctionTable sample_function(const SpongeParams& params, const Seed256& seed) {
  DetRng rng = DetRng(seed).fork("function-table");
  std::vector<uint32_t> t(size_t(params.rate_size()));
  for (auto& v : t) v = uint32_t(rng.below(params.rate_size()));
  return FunctionTable(params, std::move(t));
}

// Uniform, seed-deterministic permutation table (unbiased shuffle).
inline PermutationTable sample_permutation(const SpongeParams& params, const Seed256& seed) {
  params.require_table_mode();
  DetRng rng = DetRng(seed).fork("permutation-table");
  std::vector<uint32_t> fwd = iota_u32(size_t(params.domain_size()));
  shuffle_vector(fwd, rng);
  return PermutationTable::from_forward(params, std::move(fwd));
}

// ---------------------------------------------------------------------------
// Serialization: 8-byte magic, u32 r, u32 c, then little-endian u32 entries
// (2^r for function tables, 2^n forward entries for permutations).

inline constexpr char kFunctionMagic[9] = "SPLABFN1";
inline constexpr char kPermutationMagic[9] = "SPLABPM1";

namespace detail {

inline void put_u32le(std::ostream& os, uint32_t v) {
  char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
               char((v >> 24) & 0xff)};
  os.write(b, 4);
}

inline uint32_t get_u32le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw parameter_error("table deserialize: truncated input");
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

inline void write_header(std::ostream& os, const char* magic, const SpongeParams& p) {
  os.write(magic, 8);
  put_u32le(os, p.r);
  put_u32le(os, p.c);
}

inline SpongeParams read_header(std::istream& is, const char* magic) {
  char m[8];
  is.read(m, 8);
  if (!is || std::memcmp(m, magic, 8) != 0)
    throw parameter_error("table deserialize: bad magic");
  uint32_t r = get_u32le(is);
  uint32_t c = get_u32le(is);
  return SpongeParams(r, c);
}

}  // namespace detail

inline void write_table(std::ostream& os, const FunctionTable& t) {
  detail::write_header(os, kFunctionMagic, t.params);
  for (uint32_t v : t.table) detail::put_u32le(os, v);
}

inline FunctionTable read_function_table(std::istream& is) {
  SpongeParams p = detail::read_header(is, kFunctionMagic);
  std::vector<uint32_t> t(size_t(p.rate_size()));
  for (auto& v : t) v = detail::get_u32le(is);
  return FunctionTable(p, std::move(t));
}

inline void write_table(std::ostream& os, const PermutationTable& t) {
  detail::write_header(os, kPermutationMagic, t.params);
  for (uint32_t v : t.forward) detail::put_u32le(os, v);
}

inline PermutationTable read_permutation_table(std::istream& is) {
  SpongeParams p = detail::read_header(is, kPermutationMagic);
  std::vector<uint32_t> fwd(size_t(p.domain_size()));
  for (auto& v : fwd) v = detail::get_u32le(is);
  return PermutationTable::from_forward(p, std::move(fwd));
}

}  // namespace spongelab
