#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "spongelab/common.hpp"
#include "spongelab/parallel.hpp"
#include "spongelab/rng.hpp"
#include "spongelab/sponge.hpp"
#include "spongelab/young.hpp"

namespace spongelab {

// ---------------------------------------------------------------------------
// Exact rational arithmetic for enumeration-mode laws. Overflow beyond
// int64 (after 128-bit intermediates and reduction) throws rather than
// silently degrading, since exact mode exists to remove all ambiguity.

struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n) : num(n), den(1) {}
  Rational(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

  static Rational from_i128(__int128 n, __int128 d) {
    if (d == 0) throw parameter_error("rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw guardrail_error("rational: overflow beyond 64 bits");
    Rational r;
    r.num = int64_t(n);
    r.den = int64_t(d);
    return r;
  }

  void normalize() {
    if (den == 0) throw parameter_error("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return double(num) / double(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  Rational abs() const { return num < 0 ? Rational{-num, den} : *this; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(__int128(a.num) * b.den + __int128(b.num) * a.den,
                     __int128(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(__int128(a.num) * b.den - __int128(b.num) * a.den,
                     __int128(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(__int128(a.num) * b.num, __int128(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw parameter_error("rational: division by zero");
    return from_i128(__int128(a.num) * b.den, __int128(a.den) * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return __int128(a.num) * b.den <=> __int128(b.num) * a.den;
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

// ---------------------------------------------------------------------------
// A distribution over an indexed finite support: exact rational weights in
// enumeration mode, floating point in Monte Carlo mode.

struct Distribution {
  bool exact = false;
  std::vector<Rational> rational_weights;
  std::vector<double> float_weights;

  static Distribution exact_from(std::vector<Rational> w) {
    Distribution d;
    d.exact = true;
    d.rational_weights = std::move(w);
    Rational sum{0};
    for (const auto& r : d.rational_weights) {
      if (r < Rational{0}) throw parameter_error("distribution: negative weight");
      sum = sum + r;
    }
    if (!(sum == Rational{1})) throw parameter_error("distribution: weights must sum to 1");
    return d;
  }

  static Distribution from_floats(std::vector<double> w) {
    Distribution d;
    d.float_weights = std::move(w);
    double sum = 0;
    for (double v : d.float_weights) {
      if (v < 0) throw parameter_error("distribution: negative weight");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 0x1.0p-40)
      throw parameter_error("distribution: weights must sum to 1 within 2^-40");
    return d;
  }

  static Distribution uniform_exact(size_t support) {
    return exact_from(std::vector<Rational>(support, Rational(1, int64_t(support))));
  }

  size_t support() const {
    return exact ? rational_weights.size() : float_weights.size();
  }

  double weight(size_t i) const {
    return exact ? rational_weights[i].to_double() : float_weights[i];
  }
};

inline Rational tv_distance_exact(const Distribution& p, const Distribution& q) {
  if (!p.exact || !q.exact) throw parameter_error("tv exact: need exact-mode distributions");
  if (p.support() != q.support()) throw parameter_error("tv: support mismatch");
  Rational acc{0};
  for (size_t i = 0; i < p.support(); ++i)
    acc = acc + (p.rational_weights[i] - q.rational_weights[i]).abs();
  return acc / Rational{2};
}

inline double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.exact && q.exact) return tv_distance_exact(p, q).to_double();
  if (p.support() != q.support()) throw parameter_error("tv: support mismatch");
  double acc = 0;
  for (size_t i = 0; i < p.support(); ++i) acc += std::fabs(p.weight(i) - q.weight(i));
  return acc / 2.0;
}

// ---------------------------------------------------------------------------
// Exhaustive laws (2^n <= 8): the distribution of the sponge truth table of
// a uniform permutation, and the distance of the symmetrized-permutation law
// from uniform.

// Law over all 2^(r*2^r) function tables, indexed by FunctionTable::key().
inline Distribution sponge_truthtable_law(const SpongeParams& params) {
  const uint64_t domain = params.domain_size();
  if (domain > kMaxGroupEnumDomain)
    throw guardrail_error("truth-table law: exhaustive mode limited to 2^n <= 8");
  const uint64_t table_count = pow2(params.r * uint32_t(params.rate_size()));
  std::vector<int64_t> counts(size_t(table_count), 0);
  enumerate_permutations(uint32_t(domain), [&](const SmallPerm& pi, uint64_t) {
    uint64_t key = 0;
    const auto t = small_sponge_table(pi, params);
    for (size_t i = t.size(); i-- > 0;) key = (key << params.r) | t[i];
    ++counts[size_t(key)];
  });
  const int64_t total = int64_t(factorial(uint32_t(domain)));
  std::vector<Rational> weights;
  weights.reserve(counts.size());
  for (int64_t c : counts) weights.emplace_back(c, total);
  return Distribution::exact_from(std::move(weights));
}

// TV between the law of a symmetrized permutation (uniform f, then uniform
// member of f's coset) and the uniform law on all permutations. Computed
// coset-by-coset from the census.
inline Rational symmetrized_vs_uniform_tv(const SpongeParams& params) {
  CosetCensus census = coset_census(params);
  const int64_t group = int64_t(census.group_order);
  const int64_t functions = int64_t(pow2(params.r * uint32_t(params.rate_size())));
  Rational acc{0};
  for (const auto& e : census.entries) {
    Rational per_member = Rational{1} / (Rational{functions} * Rational{int64_t(e.size)});
    Rational diff = (per_member - Rational{1, group}).abs();
    acc = acc + Rational{int64_t(e.size)} * diff;
  }
  return acc / Rational{2};
}

// ---------------------------------------------------------------------------
// Confidence radii.

inline double hoeffding_radius(uint64_t trials, double delta = 1e-6) {
  if (trials == 0) return 1.0;
  return std::sqrt(std::log(2.0 / delta) / (2.0 * double(trials)));
}

inline double binomial_sigma(double p, uint64_t trials) {
  if (trials == 0) return 1.0;
  return std::sqrt(p * (1.0 - p) / double(trials));
}

// ---------------------------------------------------------------------------
// Chi-square uniformity test: upper-tail p-value with k-1 degrees of
// freedom. Regularized incomplete gamma via series / continued fraction.

namespace detail {

inline double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw parameter_error("gamma_q: bad arguments");
  if (x == 0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {  // series for P(a,x), return 1 - P
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - gln);
    return std::max(0.0, 1.0 - p);
  }
  // continued fraction for Q(a,x)
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  double lq = -x + a * std::log(x) - gln + std::log(h);
  return lq < -700 ? 0.0 : std::exp(lq);
}

}  // namespace detail

inline double chi_square_uniformity(const std::vector<uint64_t>& counts) {
  if (counts.size() < 2) throw parameter_error("chi-square: need at least 2 cells");
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  const double expected = double(total) / double(counts.size());
  if (expected < 5.0)
    throw parameter_error("chi-square: expected count per cell below 5");
  double chi2 = 0;
  for (uint64_t c : counts) {
    double d = double(c) - expected;
    chi2 += d * d / expected;
  }
  return detail::gamma_q(double(counts.size() - 1) / 2.0, chi2 / 2.0);
}

// ---------------------------------------------------------------------------
// Truncated-permutation distinguishing curve. At each query count q the
// distinguisher queries q distinct points of either a random function
// {0,1}^n -> {0,1}^(n-m) or a random n-bit permutation with the last m
// output bits discarded, and thresholds the number of colliding output
// pairs. The threshold is tuned on a training half and the advantage is
// measured on a held-out half.

struct TruncationPoint {
  uint64_t q = 0;
  double advantage = 0;
  double sigma = 0;  // std error of the advantage estimate
};

inline std::vector<TruncationPoint> truncation_advantage_curve(
    uint32_t n, uint32_t m, const std::vector<uint64_t>& q_grid, uint64_t trials,
    const Seed256& seed) {
  if (m >= n) throw parameter_error("truncation curve: need m < n");
  if (n > 24) throw guardrail_error("truncation curve: sampling mode limited to n <= 24");
  const uint64_t out_space = pow2(n - m);
  std::vector<TruncationPoint> out;

  for (uint64_t q : q_grid) {
    if (q > pow2(n)) throw parameter_error("truncation curve: q exceeds domain");
    TruncationPoint pt;
    pt.q = q;
    if (q < 2 || trials < 8) {
      out.push_back(pt);  // no colliding pairs possible: advantage 0 exactly
      continue;
    }

    // statistic per trial per world; filled by index, thread-count independent
    const size_t n_trials = size_t(trials);
    std::vector<uint32_t> stat_fn(n_trials), stat_tp(n_trials);
    for (int world = 0; world < 2; ++world) {
      auto& stats = world == 0 ? stat_fn : stat_tp;
      DetRng world_root = DetRng(seed).fork("truncation").fork(uint64_t(world)).fork(q);
      parallel_chunks(trials, 64, [&](uint64_t lo, uint64_t hi) {
        std::vector<uint32_t> hist(size_t(out_space), 0);
        std::vector<uint32_t> touched;
        touched.reserve(size_t(q));
        SparseSampler sampler(pow2(n));
        for (uint64_t trial = lo; trial < hi; ++trial) {
          DetRng rng = world_root.fork(trial);
          sampler.reset();
          uint32_t collisions = 0;
          for (uint64_t i = 0; i < q; ++i) {
            uint64_t v = world == 0 ? rng.below(out_space) : (sampler.draw(rng) >> m);
            uint32_t& cell = hist[size_t(v)];
            collisions += cell;
            if (cell == 0) touched.push_back(uint32_t(v));
            ++cell;
          }
          stats[size_t(trial)] = collisions;
          for (uint32_t cell : touched) hist[cell] = 0;
          touched.clear();
        }
      });
    }

    // train on even indices, test on odd; rule: guess "function" iff stat >= theta
    uint32_t max_stat = 0;
    for (uint64_t i = 0; i < trials; ++i)
      max_stat = std::max({max_stat, stat_fn[size_t(i)], stat_tp[size_t(i)]});
    std::vector<uint32_t> cdf_fn(max_stat + 2, 0), cdf_tp(max_stat + 2, 0);
    uint64_t n_train = 0;
    for (uint64_t i = 0; i < trials; i += 2) {
      ++cdf_fn[stat_fn[size_t(i)]];
      ++cdf_tp[stat_tp[size_t(i)]];
      ++n_train;
    }
    // suffix counts: #train stats >= theta
    for (size_t t = max_stat + 1; t-- > 0;) {
      cdf_fn[t] += cdf_fn[t + 1];
      cdf_tp[t] += cdf_tp[t + 1];
    }
    uint32_t theta = 0;
    int64_t best_gap = -1;
    for (uint32_t t = 0; t <= max_stat + 1; ++t) {
      int64_t gap = int64_t(cdf_fn[t]) - int64_t(cdf_tp[t]);
      if (gap > best_gap) {
        best_gap = gap;
        theta = t;
      }
    }
    uint64_t hit_fn = 0, hit_tp = 0, n_test = 0;
    for (uint64_t i = 1; i < trials; i += 2) {
      hit_fn += stat_fn[size_t(i)] >= theta;
      hit_tp += stat_tp[size_t(i)] >= theta;
      ++n_test;
    }
    const double pf = double(hit_fn) / double(n_test);
    const double pp = double(hit_tp) / double(n_test);
    pt.advantage = pf - pp;
    pt.sigma = std::sqrt(binomial_sigma(pf, n_test) * binomial_sigma(pf, n_test) +
                         binomial_sigma(pp, n_test) * binomial_sigma(pp, n_test));
    out.push_back(pt);
  }
  return out;
}

}  // namespace spongelab
