#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Small-integer references for key-agreement tests. Exponents here stay
// small enough for repeated multiplication; 128-bit products avoid overflow.
namespace nlos::testing {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

/// base^exp mod m by `exp` successive multiplications.
inline u64 naive_pow(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  for (u64 i = 0; i < exp; ++i) r = mulmod(r, base, m);
  return r;
}

/// Exponentiation by reduced exponent and repeated squaring over u128,
/// independent of the library's BigInt path; used where exponents are huge.
inline u64 ref_pow(u64 base, u128 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

inline u64 scan_inverse(u64 m, u64 modulus) {
  for (u64 x = 1; x < modulus; ++x)
    if (mulmod(m, x, modulus) == 1 % modulus) return x;
  return 0;
}

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_primitive_root(u64 g, u64 p) {
  for (u64 q : prime_factors(p - 1))
    if (ref_pow(g, (p - 1) / q, p) == 1) return false;
  return true;
}

}  // namespace nlos::testing
