#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace foamlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int floor_rat(const Rat& r) {
  Int q = rat_num(r) / rat_den(r);
  if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
  return q;
}

inline Int ceil_rat(const Rat& r) {
  Int q = rat_num(r) / rat_den(r);
  if (rat_num(r) > 0 && q * rat_den(r) != rat_num(r)) ++q;
  return q;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat rat_pow(const Rat& base, int e) {
  if (e < 0) throw std::invalid_argument("rat_pow: negative exponent");
  Rat acc(1), b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

/// Renders as "p/q", or just "p" when the denominator is 1.
inline std::string rat_str(const Rat& r) {
  std::string s = rat_num(r).str();
  if (rat_den(r) != 1) s += "/" + rat_den(r).str();
  return s;
}

/// Parses "p", "-p", or "p/q". Throws std::invalid_argument on malformed
/// input or a zero denominator.
Rat parse_rat(const std::string& text);

/// Deterministic rational sampler; all randomized checks in the project
/// derive their points from one of these, seeded explicitly.
class RatRng {
 public:
  explicit RatRng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform-ish rational in [lo, hi] on a 2^20 lattice.
  Rat between(const Rat& lo, const Rat& hi) {
    std::uniform_int_distribution<std::uint32_t> d(0, (1u << 20));
    return lo + (hi - lo) * Rat(d(eng_), 1u << 20);
  }

  /// Small rational with numerator in [-max_num, max_num] and denominator
  /// in {1..max_den}; handy for random constraint coefficients.
  Rat small(int max_num, int max_den) {
    std::uniform_int_distribution<int> dn(-max_num, max_num);
    std::uniform_int_distribution<int> dd(1, max_den);
    return Rat(dn(eng_), dd(eng_));
  }

  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(eng_);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace foamlab
