#include "qmf/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "qmf/compensated.hpp"
#include "qmf/errors.hpp"

namespace qmf {

void EulerMaclaurinConfig::validate() const {
  if (shift_K < 8) throw DomainError("Euler-Maclaurin shift K must be >= 8");
  if (order_M < 1 || order_M > 30) throw DomainError("Euler-Maclaurin order M must be in [1, 30]");
}

namespace {

std::mutex bernoulli_mutex;
std::vector<Rational> bernoulli_cache{Rational(1)};

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

const std::array<double, 31>& bernoulli_factorial_table() {
  static const std::array<double, 31> table = [] {
    std::array<double, 31> t{};
    for (unsigned m = 1; m <= 30; ++m) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), 2 * m);
      t[m] = (bernoulli(2 * m) / Rational(f)).to_double();
    }
    return t;
  }();
  return table;
}

}  // namespace

Rational bernoulli(unsigned n) {
  std::lock_guard<std::mutex> lock(bernoulli_mutex);
  while (bernoulli_cache.size() <= n) {
    const unsigned m = static_cast<unsigned>(bernoulli_cache.size());
    Rational acc(0);
    for (unsigned j = 0; j < m; ++j) acc += Rational(binomial(m + 1, j)) * bernoulli_cache[j];
    bernoulli_cache.push_back(-acc / Rational(static_cast<long>(m + 1)));
  }
  return bernoulli_cache[n];
}

double bernoulli_over_factorial(unsigned m) {
  if (m < 1 || m > 30) throw DomainError("bernoulli_over_factorial index out of range");
  return bernoulli_factorial_table()[m];
}

double bernoulli_polynomial(unsigned n, double x) {
  double acc = 0.0;
  for (unsigned k = n + 1; k-- > 0;) acc = acc * x + (Rational(binomial(n, k)) * bernoulli(n - k)).to_double();
  return acc;
}

Complex hurwitz_zeta(Complex s, double x, const EulerMaclaurinConfig& cfg) {
  cfg.validate();
  if (s == Complex(1.0, 0.0)) throw PoleError("hurwitz_zeta pole at s = 1");
  if (!(x > 0.0)) throw DomainError("hurwitz_zeta requires x > 0");
  if (s.real() <= cfg.min_real_s()) throw DomainError("hurwitz_zeta: Re(s) outside the Euler-Maclaurin window");
  if (s.imag() == 0.0) return hurwitz_zeta(s.real(), x, cfg);

  // Extended precision: for Re(s) < 0 the terms grow like (K + x)^{1 - Re s} and cancel.
  using LComplex = std::complex<long double>;
  const LComplex ls(s.real(), s.imag());
  const long double lx = x;
  LComplex sum = 0.0L;
  for (int n = 0; n < cfg.shift_K; ++n) sum += std::exp(-ls * std::log(n + lx));
  const long double y = cfg.shift_K + lx;
  const LComplex ys = std::exp(-ls * std::log(y));
  LComplex tail = y * ys / (ls - 1.0L) + 0.5L * ys;
  LComplex term = ls * ys / y;
  const long double inv_y2 = 1.0L / (y * y);
  for (int m = 1; m <= cfg.order_M; ++m) {
    tail += static_cast<long double>(bernoulli_over_factorial(m)) * term;
    term *= (ls + (2.0L * m - 1.0L)) * (ls + 2.0L * m) * inv_y2;
  }
  sum += tail;
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double hurwitz_zeta(double s, double x, const EulerMaclaurinConfig& cfg) {
  cfg.validate();
  if (s == 1.0) throw PoleError("hurwitz_zeta pole at s = 1");
  if (!(x > 0.0)) throw DomainError("hurwitz_zeta requires x > 0");
  if (s <= cfg.min_real_s()) throw DomainError("hurwitz_zeta: Re(s) outside the Euler-Maclaurin window");

  const long double ls = s;
  long double sum = 0.0L;
  for (int n = 0; n < cfg.shift_K; ++n) sum += std::pow(n + static_cast<long double>(x), -ls);
  const long double y = cfg.shift_K + static_cast<long double>(x);
  const long double ys = std::pow(y, -ls);
  long double tail = y * ys / (ls - 1.0L) + 0.5L * ys;
  long double term = ls * ys / y;
  const long double inv_y2 = 1.0L / (y * y);
  for (int m = 1; m <= cfg.order_M; ++m) {
    tail += static_cast<long double>(bernoulli_over_factorial(m)) * term;
    term *= (ls + (2.0L * m - 1.0L)) * (ls + 2.0L * m) * inv_y2;
  }
  return static_cast<double>(sum + tail);
}

namespace {

// Stirling series for log Gamma(z), Re(z) > 0, after shifting z past 15.
Complex log_gamma(Complex z) {
  Complex shift = 0.0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  Complex acc = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi);
  const Complex inv = 1.0 / z, inv2 = inv * inv;
  Complex p = inv;
  for (unsigned m = 1; m <= 10; ++m) {
    acc += bernoulli(2 * m).to_double() / (2.0 * m * (2.0 * m - 1.0)) * p;
    p *= inv2;
  }
  return acc - shift;
}

}  // namespace

Complex riemann_zeta(Complex s) {
  if (s.real() < 0.0) {
    // Reflection: direct Euler-Maclaurin at Re(s) < 0 cancels (K + 1)^{1 - Re s} sized terms.
    const Complex factor = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(1.0 - s));
    return factor * std::sin(kPi * s / 2.0) * riemann_zeta(1.0 - s);
  }
  return hurwitz_zeta(s, 1.0);
}

double digamma(double x, const EulerMaclaurinConfig& cfg) {
  cfg.validate();
  if (!(x > 0.0)) throw DomainError("digamma requires x > 0");
  CompensatedSum sum;
  for (int n = 0; n < cfg.shift_K; ++n) sum += -1.0 / (x + n);
  const double y = x + cfg.shift_K;
  sum += std::log(y);
  sum += -0.5 / y;
  const double inv_y2 = 1.0 / (y * y);
  double yp = inv_y2;
  for (int m = 1; m <= cfg.order_M; ++m) {
    // B_{2m} / (2m y^{2m}) = (B_{2m}/(2m)!) (2m-1)! / y^{2m}
    const double b = bernoulli(2 * m).to_double();
    sum += -b / (2.0 * m) * yp;
    yp *= inv_y2;
  }
  return sum.value();
}

KappaConstants kappa_constants(Complex a) {
  if (a == Complex(0.0, 0.0)) throw PoleError("kappa_constants: zeta(1 - a) has a pole at a = 0");
  KappaConstants k;
  k.kappa1 = riemann_zeta(1.0 - a) / kPi;
  if (a == Complex(-1.0, 0.0)) {
    k.kappa2 = -kPi / 2.0;
    return k;
  }
  const bool even_integer = a.imag() == 0.0 && std::fmod(a.real(), 2.0) == 0.0;
  if (even_integer) {
    k.kappa2 = Complex(std::numeric_limits<double>::infinity(), 0.0);
    k.kappa2_finite = false;
    return k;
  }
  const bool odd_integer = a.imag() == 0.0 && std::fabs(std::fmod(a.real(), 2.0)) == 1.0;
  if (odd_integer) {
    k.kappa2 = 0.0;
    return k;
  }
  const Complex z = kPi * a / 2.0;
  k.kappa2 = -riemann_zeta(-a) * std::cos(z) / std::sin(z);
  return k;
}

Complex a_kappa1(Complex a) {
  if (a == Complex(0.0, 0.0)) return -1.0 / kPi;
  return a * kappa_constants(a).kappa1;
}

mpz_class sigma_div(unsigned k, std::uint64_t n) {
  if (n == 0) throw DomainError("sigma_div requires n >= 1");
  mpz_class acc = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), d, k);
    acc += p;
    const std::uint64_t e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(p.get_mpz_t(), e, k);
      acc += p;
    }
  }
  return acc;
}

namespace {

std::mutex tau_mutex;
std::vector<mpz_class> tau_cache;

// c = a * b truncated to length n.
std::vector<mpz_class> truncated_product(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                         std::size_t n) {
  std::vector<mpz_class> c(n);
  for (std::size_t i = 0; i < std::min(a.size(), n); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < std::min(b.size(), n - i); ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return c;
}

}  // namespace

std::vector<mpz_class> ramanujan_tau(std::size_t N) {
  if (N == 0) throw DomainError("ramanujan_tau requires N >= 1");
  std::lock_guard<std::mutex> lock(tau_mutex);
  if (tau_cache.size() < N) {
    // prod (1 - q^n)^3 = sum_m (-1)^m (2m + 1) q^{m(m+1)/2}; Delta = q * (that)^8.
    std::vector<mpz_class> cube(N);
    for (std::size_t m = 0; m * (m + 1) / 2 < N; ++m) {
      const long c = static_cast<long>(2 * m + 1);
      cube[m * (m + 1) / 2] = (m % 2 == 0) ? c : -c;
    }
    auto p2 = truncated_product(cube, cube, N);
    auto p4 = truncated_product(p2, p2, N);
    tau_cache = truncated_product(p4, p4, N);
  }
  return std::vector<mpz_class>(tau_cache.begin(), tau_cache.begin() + static_cast<std::ptrdiff_t>(N));
}

HurwitzOddDifference::HurwitzOddDifference(Complex s) : s_(s) {
  if (s == Complex(1.0, 0.0)) throw PoleError("HurwitzOddDifference: use the digamma form at s = 1");
  if (s.imag() == 0.0 && s.real() <= 0.0 && std::floor(s.real()) == s.real()) {
    polynomial_ = true;
    poly_degree_ = static_cast<unsigned>(1.0 - s.real());
    for (unsigned k = 0; k <= poly_degree_; ++k) {
      poly_.push_back((Rational(binomial(poly_degree_, k)) * bernoulli(poly_degree_ - k)).to_double());
    }
    return;
  }
  // zeta(s, 3/2 + t) - zeta(s, 3/2 - t) = 2 sum_{n odd} c_n t^n,
  // c_n = (-1)^n (s)_n / n! zeta(s + n, 3/2); |t| < 1/2 gives ratio <= 1/3.
  EulerMaclaurinConfig cfg;
  cfg.order_M = 20;
  cfg.shift_K = 40;
  Complex rising_over_fact = 1.0;  // (s)_n / n!
  double scale = 0.0;
  for (unsigned n = 1; n <= 161; ++n) {
    rising_over_fact *= (s + static_cast<double>(n - 1)) / static_cast<double>(n);
    if (n % 2 == 0) continue;
    const Complex c = -2.0 * rising_over_fact * hurwitz_zeta(s + static_cast<double>(n), 1.5, cfg);
    coeff_.push_back(c);
    const double mag = std::abs(c) * std::pow(0.5, n);
    scale = std::max(scale, mag);
    if (n > 8 && mag < 1e-18 * scale) break;
  }
  if (s.imag() == 0.0) {
    for (const auto& c : coeff_) coeff_re_.push_back(c.real());
  }
}

Complex HurwitzOddDifference::operator()(double x) const {
  if (polynomial_) {
    auto eval = [this](double y) {
      double acc = 0.0;
      for (std::size_t k = poly_.size(); k-- > 0;) acc = acc * y + poly_[k];
      return acc;
    };
    return -(eval(x) - eval(1.0 - x)) / static_cast<double>(poly_degree_);
  }
  const double t = x - 0.5;
  const double t2 = t * t;
  if (!coeff_re_.empty()) {
    double gr = 0.0;
    for (std::size_t i = coeff_re_.size(); i-- > 0;) gr = gr * t2 + coeff_re_[i];
    return std::pow(x, -s_.real()) - std::pow(1.0 - x, -s_.real()) + gr * t;
  }
  Complex g = 0.0;
  for (std::size_t i = coeff_.size(); i-- > 0;) g = g * t2 + coeff_[i];
  g *= t;
  Complex direct;
  if (s_.imag() == 0.0) {
    direct = std::pow(x, -s_.real()) - std::pow(1.0 - x, -s_.real());
  } else {
    direct = std::exp(-s_ * std::log(x)) - std::exp(-s_ * std::log1p(-x));
  }
  return direct + g;
}

}  // namespace qmf
