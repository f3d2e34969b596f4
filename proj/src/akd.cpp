#include <cmath>

#include "qmf/compensated.hpp"
#include "qmf/errors.hpp"
#include "qmf/forms.hpp"

namespace qmf {

namespace {

void validate_akd(int k, std::int64_t D) {
  if (k < 5 || k % 2 == 0) throw DomainError("A_{k,D} requires odd k >= 5");
  if (D <= 0) throw DomainError("A_{k,D} requires D > 0");
  const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(D))));
  if (r * r == D) throw DomainError("A_{k,D} requires nonsquare D");
  if (D % 4 != 0 && D % 4 != 1) throw DomainError("A_{k,D} requires D = 0, 1 mod 4");
}

std::int64_t ceil_sqrt(std::int64_t D) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(D)));
  while (r * r < D) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= D) --r;
  return r;
}

}  // namespace

double a_kd_tail_bound(int k, std::int64_t D, std::int64_t depth_A) {
  validate_akd(k, D);
  if (depth_A < 1) throw DomainError("A_{k,D} requires depth_A >= 1");
  // sum_{A > d} 2 ceil(sqrt D) (D/(4A))^k <= 2 ceil(sqrt D) (D/4)^k d^{1-k} / (k - 1)
  const double c = 2.0 * static_cast<double>(ceil_sqrt(D));
  return c * std::pow(D / 4.0, k) * std::pow(static_cast<double>(depth_A), 1.0 - k) / (k - 1.0);
}

std::int64_t a_kd_depth_for(int k, std::int64_t D, double tol) {
  std::int64_t d = 1;
  while (a_kd_tail_bound(k, D, d) >= tol) d *= 2;
  std::int64_t lo = d / 2 + 1, hi = d;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (a_kd_tail_bound(k, D, mid) < tol) hi = mid; else lo = mid + 1;
  }
  return hi;
}

AkdValue a_kd(int k, std::int64_t D, const Rational& x, std::int64_t depth_A, BRange range) {
  validate_akd(k, D);
  if (depth_A < 1) throw DomainError("A_{k,D} requires depth_A >= 1");
  const double xv = x.to_double();
  const double sq = std::sqrt(static_cast<double>(D));
  CompensatedSum sum;
  for (std::int64_t A = 1; A <= depth_A; ++A) {
    // a = -A: (b + 2ax)^2 < D means |b - 2Ax| < sqrt(D).
    const double centre = 2.0 * static_cast<double>(A) * xv;
    const std::int64_t mod = 4 * A;
    auto lo = static_cast<std::int64_t>(std::ceil(centre - sq));
    const auto hi = static_cast<std::int64_t>(std::floor(centre + sq));
    if (range == BRange::nonnegative && lo < 0) lo = 0;
    const std::int64_t target = ((D % mod) + mod) % mod;
    for (std::int64_t b = lo; b <= hi; ++b) {
      std::int64_t br = b % mod;
      if (br < 0) br += mod;
      if ((br * br) % mod != target) continue;
      const double y = static_cast<double>(b) - centre;
      const double Q = (static_cast<double>(D) - y * y) / static_cast<double>(mod);
      if (Q > 0.0) sum += std::pow(Q, k);
    }
  }
  return {sum.value(), a_kd_tail_bound(k, D, depth_A)};
}

mpz_class a_kd_zero_identity(int k, std::int64_t D) {
  validate_akd(k, D);
  mpz_class acc = 0;
  for (std::int64_t b = 0; b * b < D; ++b) {
    if ((b * b - D) % 4 != 0) continue;
    acc += sigma_div(static_cast<unsigned>(k), static_cast<std::uint64_t>((D - b * b) / 4));
  }
  return acc;
}

std::optional<BRange> a_kd_matching_convention(int k, std::int64_t D) {
  const double target = a_kd_zero_identity(k, D).get_d();
  const std::int64_t depth = a_kd_depth_for(k, D, 1e-6);
  std::optional<BRange> match;
  int count = 0;
  for (BRange r : {BRange::all, BRange::nonnegative}) {
    const AkdValue v = a_kd(k, D, Rational(0), depth, r);
    if (std::fabs(v.value - target) <= v.tail_bound + 1e-9 * std::fabs(target)) {
      match = r;
      ++count;
    }
  }
  if (count != 1) return std::nullopt;
  return match;
}

QmfSpec akd_spec(int k, std::int64_t D, double tol, BRange range) {
  const std::int64_t depth = a_kd_depth_for(k, D, tol);
  auto f = [k, D, depth, range](const Rational& x) { return Complex(a_kd(k, D, x, depth, range).value, 0.0); };
  const double weight = -2.0 * k;
  auto h = [f, weight](const Rational& x) {
    if (x.is_zero()) throw DomainError("A_{k,D} period function is undefined at 0");
    return f(x) - std::exp(-weight * x.log_abs()) * f(-x.inverse());
  };
  QmfSpec spec = QmfSpec::full("akd", weight, RootOfUnity{}, h, f(Rational(0)));
  spec.direct = f;
  return spec;
}

}  // namespace qmf
