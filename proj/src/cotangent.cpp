#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>

#include "qmf/compensated.hpp"
#include "qmf/continued_fraction.hpp"
#include "qmf/errors.hpp"
#include "qmf/forms.hpp"

namespace qmf {

namespace {

constexpr std::int64_t kMaxKernelDenominator = 2'000'000'000;
constexpr std::int64_t kMaxCachedDenominator = 100'000;
constexpr std::int64_t kCacheBudget = 3'000'000;

std::int64_t checked_denominator(const Rational& x) {
  if (!x.den().fits_slong_p() || x.den().get_si() > kMaxKernelDenominator) {
    throw DomainError("denominator too large for the cotangent kernel: " + x.den().get_str());
  }
  return x.den().get_si();
}

std::int64_t residue(const mpz_class& n, std::int64_t q) {
  return static_cast<std::int64_t>(mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(q)));
}

}  // namespace

bool is_positive_odd_integer(Complex a) {
  return a.imag() == 0.0 && a.real() > 0.0 && std::floor(a.real()) == a.real() &&
         std::fmod(a.real(), 2.0) == 1.0;
}

CotangentKernel::CotangentKernel(Complex a, std::int64_t q) : a_(a), q_(q) {
  if (q < 1) throw DomainError("cotangent kernel requires q >= 1");
  zero_ = is_positive_odd_integer(a) || q <= 2;
  if (zero_) return;
  real_ = a.imag() == 0.0;
  scale_ = std::exp(a * std::log(static_cast<double>(q)));

  cot_.assign(static_cast<std::size_t>(q), 0.0);
  for (std::int64_t j = 1; 2 * j < q; ++j) {
    const double c = 1.0 / std::tan(kPi * static_cast<double>(j) / static_cast<double>(q));
    cot_[j] = c;
    cot_[q - j] = -c;
  }

  const std::int64_t half = (q - 1) / 2;
  const double qd = static_cast<double>(q);
  if (a == Complex(-1.0, 0.0)) {
    // zeta(1, x) replaced by -psi(x); the poles cancel because sum_m cot(pi m b/q) = 0.
    diff_re_.resize(static_cast<std::size_t>(half) + 1);
    for (std::int64_t m = 1; m <= half; ++m) {
      diff_re_[m] = digamma(1.0 - static_cast<double>(m) / qd) - digamma(static_cast<double>(m) / qd);
    }
    return;
  }
  const HurwitzOddDifference D(-a);
  if (real_) {
    diff_re_.resize(static_cast<std::size_t>(half) + 1);
    for (std::int64_t m = 1; m <= half; ++m) diff_re_[m] = D(static_cast<double>(m) / qd).real();
  } else {
    diff_.resize(static_cast<std::size_t>(half) + 1);
    for (std::int64_t m = 1; m <= half; ++m) diff_[m] = D(static_cast<double>(m) / qd);
  }
}

Complex CotangentKernel::operator()(std::int64_t b) const {
  if (fast::gcd(b, q_) != 1) throw DomainError("cotangent_c requires gcd(b, q) = 1");
  if (zero_) return 0.0;
  std::int64_t step = b % q_;
  if (step < 0) step += q_;
  const std::int64_t half = (q_ - 1) / 2;
  // m and q - m pair up: cot is odd under m -> q - m, so only D(m/q) survives.
  std::int64_t j = 0;
  if (real_ || a_ == Complex(-1.0, 0.0)) {
    CompensatedSum sum;
    for (std::int64_t m = 1; m <= half; ++m) {
      j += step;
      if (j >= q_) j -= q_;
      sum += cot_[j] * diff_re_[m];
    }
    return scale_ * sum.value();
  }
  CompensatedComplexSum sum;
  for (std::int64_t m = 1; m <= half; ++m) {
    j += step;
    if (j >= q_) j -= q_;
    sum += cot_[j] * diff_[m];
  }
  return scale_ * sum.value();
}

std::shared_ptr<const CotangentKernel> cotangent_kernel(Complex a, std::int64_t q) {
  if (q > kMaxCachedDenominator) return std::make_shared<const CotangentKernel>(a, q);
  static std::mutex mutex;
  static std::map<std::tuple<double, double, std::int64_t>, std::shared_ptr<const CotangentKernel>> cache;
  static std::int64_t used = 0;
  const auto key = std::make_tuple(a.real(), a.imag(), q);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto kernel = std::make_shared<const CotangentKernel>(a, q);
  std::lock_guard<std::mutex> lock(mutex);
  if (used + q > kCacheBudget) {
    cache.clear();
    used = 0;
  }
  if (cache.emplace(key, kernel).second) used += q;
  return kernel;
}

namespace {

// One residue of a large q without tables: same pairing as CotangentKernel, O(1) memory.
Complex cotangent_streaming(Complex a, std::int64_t b, std::int64_t q) {
  if (fast::gcd(b, q) != 1) throw DomainError("cotangent_c requires gcd(b, q) = 1");
  if (is_positive_odd_integer(a)) return 0.0;
  std::int64_t step = b % q;
  if (step < 0) step += q;
  const std::int64_t half = (q - 1) / 2;
  const double qd = static_cast<double>(q);
  const bool dedekind = a == Complex(-1.0, 0.0);
  std::optional<HurwitzOddDifference> D;
  if (!dedekind) D.emplace(-a);
  CompensatedComplexSum sum;
  std::int64_t j = 0;
  for (std::int64_t m = 1; m <= half; ++m) {
    j += step;
    if (j >= q) j -= q;
    const double jj = static_cast<double>(2 * j < q ? j : q - j);
    const double c = (2 * j < q ? 1.0 : -1.0) / std::tan(kPi * jj / qd);
    const double x = static_cast<double>(m) / qd;
    sum += c * (dedekind ? Complex(digamma(1.0 - x) - digamma(x)) : (*D)(x));
  }
  return std::exp(a * std::log(qd)) * sum.value();
}

Complex cotangent_value(Complex a, std::int64_t b, std::int64_t q) {
  if (q > kMaxCachedDenominator) return cotangent_streaming(a, b, q);
  return (*cotangent_kernel(a, q))(b);
}

}  // namespace

Complex cotangent_c(Complex a, std::int64_t b, std::int64_t q) {
  if (q < 1) throw DomainError("cotangent_c requires q >= 1");
  if (q > kMaxKernelDenominator) throw DomainError("denominator too large for the cotangent kernel: " + std::to_string(q));
  return cotangent_value(a, b, q);
}

Rational rho(const Rational& x) {
  if (x.is_integer()) return Rational(x.sign() > 0 ? 1 : 0);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), inv.get_mpz_t(), x.den().get_mpz_t());
  return Rational(r, x.den());
}

namespace {

struct TildeEvaluator {
  Complex a;
  Complex ak1;

  Complex operator()(const Rational& x) const {
    if (x.is_zero()) return 0.0;
    const std::int64_t q = checked_denominator(x);
    const Complex c = cotangent_value(a, residue(x.num(), q), q);
    const Rational r = rho(x);
    if (r.is_zero()) return c;
    return c + ak1 * std::exp((1.0 + a) * std::log(static_cast<double>(q))) * r.to_double();
  }
};

struct PeriodEvaluator {
  TildeEvaluator tilde;

  Complex operator()(const Rational& x) const {
    if (x.is_zero()) throw DomainError("cotangent_h is undefined at 0");
    return tilde(x) - std::exp(-(1.0 + tilde.a) * x.log_abs()) * tilde(-x.inverse());
  }
};

TildeEvaluator make_tilde(Complex a) { return {a, a_kappa1(a)}; }

}  // namespace

Complex cotangent_c_tilde(Complex a, const Rational& x) { return make_tilde(a)(x); }

Complex cotangent_h(Complex a, const Rational& x) { return PeriodEvaluator{make_tilde(a)}(x); }

QmfSpec cotangent_spec(Complex a) {
  const TildeEvaluator tilde = make_tilde(a);
  QmfSpec spec = QmfSpec::weak("cotangent", 1.0 + a, RootOfUnity{}, PeriodEvaluator{tilde}, tilde.ak1, 0.0, 0.0);
  spec.direct = tilde;
  return spec;
}

ExtensionResult cotangent_ext_pos(Complex a, const IrrationalStream& x, double tol, std::size_t max_depth) {
  if (!((1.0 + a).real() > 0.0)) throw DomainError("cotangent_ext_pos requires Re(a) > -1");
  if (is_positive_odd_integer(a)) return {0.0, true, 0, 0.0};
  const QmfSpec spec = cotangent_spec(a);
  ExtensionResult res = ext_pos(spec, x, tol, max_depth);
  // {x} from the convergent at the depth actually used.
  double xv = 0.0;
  for (std::size_t j = res.depth_used; j >= 1; --j) xv = 1.0 / (static_cast<double>(x.quotient(j)) + xv);
  res.value -= a_kappa1(a) * xv;
  return res;
}

}  // namespace qmf
