#include "qmf/continued_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmf/errors.hpp"

namespace qmf {

Rational CFExpansion::value() const {
  if (quotients.empty()) return Rational(b0);
  // Backward evaluation: p/q = b_r, then b_j + 1/(p/q).
  mpz_class p = quotients.back(), q = 1;
  for (std::size_t i = quotients.size() - 1; i-- > 0;) {
    mpz_class np = quotients[i] * p + q;
    q = p;
    p = np;
  }
  return Rational(b0) + Rational(q, p);
}

std::string CFExpansion::str() const {
  std::ostringstream os;
  os << '[' << b0.get_str();
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    os << (i == 0 ? ";" : ",") << quotients[i].get_str();
  }
  os << ']';
  return os.str();
}

CFExpansion cf_expand(const Rational& x) {
  CFExpansion cf;
  cf.b0 = x.floor();
  mpz_class a = x.num() - cf.b0 * x.den();
  mpz_class q = x.den();
  while (a != 0) {
    mpz_class b, r;
    mpz_fdiv_qr(b.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t());
    cf.quotients.push_back(b);
    q = a;
    a = r;
  }
  return cf;
}

CFExpansion cf_odd(const Rational& x) {
  if (x.sign() <= 0 || x > Rational(1)) throw DomainError("cf_odd requires x in (0,1]");
  if (x == Rational(1)) {
    CFExpansion cf;
    cf.quotients.push_back(1);
    cf.canonical = true;
    return cf;
  }
  CFExpansion cf = cf_expand(x);
  if (cf.length() % 2 == 0) {
    cf.quotients.back() -= 1;
    cf.quotients.push_back(1);
    cf.canonical = false;
  }
  return cf;
}

GaussOrbit gauss_orbit(const Rational& x) {
  if (x.sign() <= 0 || x >= Rational(1)) throw DomainError("gauss_orbit requires x in (0,1)");
  GaussOrbit g;
  g.u.push_back(x.den());
  g.u.push_back(x.num());
  while (g.u.back() != 0) {
    const std::size_t n = g.u.size();
    g.u.push_back(g.u[n - 2] % g.u[n - 1]);
  }
  g.u.pop_back();
  for (std::size_t j = 0; j + 1 < g.u.size(); ++j) g.iterates.emplace_back(g.u[j + 1], g.u[j]);
  g.iterates.emplace_back(0);
  return g;
}

std::vector<mpz_class> continuants(const CFExpansion& cf) {
  std::vector<mpz_class> v;
  v.reserve(cf.length() + 1);
  v.push_back(1);
  mpz_class prev = 0;
  for (const auto& b : cf.quotients) {
    mpz_class next = b * v.back() + prev;
    prev = v.back();
    v.push_back(next);
  }
  return v;
}

std::vector<mpz_class> backward_denominators(const std::vector<mpz_class>& quotients) {
  const std::size_t r = quotients.size();
  std::vector<mpz_class> u(r + 1);
  u[r] = 1;
  if (r == 0) return u;
  u[r - 1] = quotients[r - 1];
  for (std::size_t j = r - 1; j-- > 0;) u[j] = quotients[j] * u[j + 1] + u[j + 2];
  return u;
}

Rational bar_invert(const Rational& x) {
  if (x.sign() <= 0 || x > Rational(1)) throw DomainError("bar_invert requires x in (0,1]");
  const mpz_class& q = x.den();
  if (q == 1) return Rational(1);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), x.num().get_mpz_t(), q.get_mpz_t());
  if (inv <= 0) inv += q;
  return Rational(inv, q);
}

Rational dedekind_sum(const Rational& x) {
  // Reciprocity descent: s(b,q) = -s(q mod b, b) - 1/4 + (b/q + q/b + 1/(bq))/12
  // for 0 < b < q, with s(0, 1) = 0 and s(-b, q) = -s(b, q).
  mpz_class q = x.den();
  mpz_class b = x.num() % q;
  if (b < 0) b += q;
  Rational acc(0);
  int sign = 1;
  while (q > 1 && b != 0) {
    Rational term = Rational(-1, 4) +
                    (Rational(b, q) + Rational(q, b) + Rational(mpz_class(1), b * q)) / Rational(12);
    acc += sign == 1 ? term : -term;
    mpz_class nb = q % b;
    q = b;
    b = nb;
    sign = -sign;
  }
  return acc;
}

mpz_class sigma_phase(const Rational& x) {
  CFExpansion cf = cf_odd(x);
  mpz_class s = 3;
  for (std::size_t j = 0; j < cf.length(); ++j) {
    if (j % 2 == 0) s -= cf.quotients[j]; else s += cf.quotients[j];
  }
  return s;
}

double frak_T_bound(std::size_t j, double B) {
  const double lj = std::log(static_cast<double>(j));
  return std::max(B, static_cast<double>(j) * lj * lj);
}

bool in_frak_T(const CFExpansion& cf, double B) {
  for (std::size_t j = 0; j < cf.length(); ++j) {
    if (cf.quotients[j].get_d() > frak_T_bound(j + 1, B)) return false;
  }
  return true;
}

bool in_frak_T(const std::vector<std::int64_t>& quotients, double B) {
  for (std::size_t j = 0; j < quotients.size(); ++j) {
    if (static_cast<double>(quotients[j]) > frak_T_bound(j + 1, B)) return false;
  }
  return true;
}

double frak_T_witness(const std::vector<std::int64_t>& quotients) {
  double B = 0.0;
  for (std::size_t j = 0; j < quotients.size(); ++j) {
    if (static_cast<double>(quotients[j]) > frak_T_bound(j + 1, 0.0)) {
      B = std::max(B, static_cast<double>(quotients[j]));
    }
  }
  return B;
}

namespace fast {

void cf_quotients(std::int64_t a, std::int64_t q, std::vector<std::int64_t>& out) {
  out.clear();
  while (a != 0) {
    out.push_back(q / a);
    const std::int64_t r = q % a;
    q = a;
    a = r;
  }
}

std::int64_t sigma_phase(std::int64_t a, std::int64_t q) {
  if (a == q) return 2;
  std::int64_t s = 3;
  std::size_t j = 0;
  std::int64_t last = 0;
  while (a != 0) {
    last = q / a;
    s += (j % 2 == 0) ? -last : last;
    const std::int64_t r = q % a;
    q = a;
    a = r;
    ++j;
  }
  // Even length: the odd rewrite [.., b_r - 1, 1] lowers the sum by 2.
  if (j % 2 == 0) s -= 2;
  return s;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t inverse_mod(std::int64_t a, std::int64_t q) {
  if (q == 1) return 1;
  std::int64_t r0 = q, r1 = ((a % q) + q) % q, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t t = r0 / r1;
    std::int64_t tmp = r0 - t * r1; r0 = r1; r1 = tmp;
    tmp = s0 - t * s1; s0 = s1; s1 = tmp;
  }
  if (r0 != 1) throw DomainError("inverse_mod of non-unit");
  s0 %= q;
  if (s0 <= 0) s0 += q;
  return s0;
}

}  // namespace fast

}  // namespace qmf
