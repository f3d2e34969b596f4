#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "qmf/rational.hpp"

namespace qmf {

// [b0; b_1, ..., b_r] with every b_j >= 1.
// canonical: r <= 1 or b_r != 1.
struct CFExpansion {
  mpz_class b0 = 0;
  std::vector<mpz_class> quotients;
  bool canonical = true;

  std::size_t length() const { return quotients.size(); }
  Rational value() const;
  std::string str() const;
};

CFExpansion cf_expand(const Rational& x);

// Odd-length expansion of x in (0, 1]; 1 is [0; 1].
CFExpansion cf_odd(const Rational& x);

struct GaussOrbit {
  // u_0 = den(x), ..., u_r = 1.
  std::vector<mpz_class> u;
  // T^j(x) = u_{j+1}/u_j for 0 <= j < r, followed by T^r(x) = 0.
  std::vector<Rational> iterates;
};

GaussOrbit gauss_orbit(const Rational& x);

// v_0 = 1, v_j = b_j v_{j-1} + v_{j-2}; the b0 entry is ignored.
std::vector<mpz_class> continuants(const CFExpansion& cf);

// Backward denominators u_0..u_r of [0; b_1..b_r], u_r = 1.
std::vector<mpz_class> backward_denominators(const std::vector<mpz_class>& quotients);

// abar/q with a * abar = 1 mod q and abar in (0, q]; 1/1 when q = 1.
Rational bar_invert(const Rational& x);

// Classical Dedekind sum s(b, q).
Rational dedekind_sum(const Rational& x);

// 3 + sum_j (-1)^j b_j over the odd-length expansion of x in (0, 1].
mpz_class sigma_phase(const Rational& x);

// b_j <= max(B, j (ln j)^2) for every j.
bool in_frak_T(const CFExpansion& cf, double B);
bool in_frak_T(const std::vector<std::int64_t>& quotients, double B);

// Least B for which the quotient prefix lies in T(B).
double frak_T_witness(const std::vector<std::int64_t>& quotients);

double frak_T_bound(std::size_t j, double B);

namespace fast {

// Partial quotients of a/q for 0 < a < q, machine integers.
void cf_quotients(std::int64_t a, std::int64_t q, std::vector<std::int64_t>& out);

// sigma_phase for a/q with 0 < a <= q, gcd(a, q) = 1.
std::int64_t sigma_phase(std::int64_t a, std::int64_t q);

// a^{-1} mod q in (0, q].
std::int64_t inverse_mod(std::int64_t a, std::int64_t q);

std::int64_t gcd(std::int64_t a, std::int64_t b);

}  // namespace fast

}  // namespace qmf
