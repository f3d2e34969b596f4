#include "qmf/engine.hpp"

#include <algorithm>
#include <cmath>

#include "qmf/compensated.hpp"
#include "qmf/continued_fraction.hpp"
#include "qmf/errors.hpp"

namespace qmf {

Complex unit_root(std::int64_t n, std::int64_t N) {
  n %= N;
  if (n < 0) n += N;
  if (2 * n > N) n -= N;
  const double angle = 2.0 * kPi * static_cast<double>(n) / static_cast<double>(N);
  return {std::cos(angle), std::sin(angle)};
}

Complex RootOfUnity::pow(std::int64_t e) const {
  const __int128 prod = static_cast<__int128>(t) * e;
  const std::int64_t r = static_cast<std::int64_t>(prod % N);
  return unit_root(r, N);
}

Complex RootOfUnity::pow(const mpz_class& e) const {
  mpz_class r = t * e;
  mpz_class m;
  mpz_fdiv_r(m.get_mpz_t(), r.get_mpz_t(), mpz_class(N).get_mpz_t());
  return unit_root(m.get_si(), N);
}

QmfSpec QmfSpec::full(std::string id, Complex k, RootOfUnity twist, std::function<Complex(const Rational&)> h,
                      Complex f0) {
  QmfSpec s;
  s.id = std::move(id);
  s.weight_k = k;
  s.twist = twist;
  s.period_h = std::move(h);
  s.periodicity = Periodicity::full;
  s.base_plus = s.base_minus = s.value_at_zero = f0;
  return s;
}

QmfSpec QmfSpec::weak(std::string id, Complex k, RootOfUnity twist, std::function<Complex(const Rational&)> h,
                      Complex f_plus_one, Complex f_minus_one, Complex f_zero) {
  QmfSpec s;
  s.id = std::move(id);
  s.weight_k = k;
  s.twist = twist;
  s.period_h = std::move(h);
  s.periodicity = Periodicity::weak;
  s.base_plus = f_plus_one;
  s.base_minus = f_minus_one;
  s.value_at_zero = f_zero;
  return s;
}

IrrationalStream IrrationalStream::constant(std::int64_t b) {
  return IrrationalStream([b](std::size_t) { return b; });
}

IrrationalStream IrrationalStream::periodic(std::vector<std::int64_t> period) {
  if (period.empty()) throw DomainError("periodic stream needs a nonempty period");
  return IrrationalStream([p = std::move(period)](std::size_t j) { return p[(j - 1) % p.size()]; });
}

IrrationalStream IrrationalStream::finite(std::vector<std::int64_t> quotients) {
  return IrrationalStream([q = std::move(quotients)](std::size_t j) -> std::int64_t {
    if (j > q.size()) throw DomainError("quotient stream exhausted");
    return q[j - 1];
  });
}

IrrationalStream IrrationalStream::with_prefix(std::vector<std::int64_t> prefix, IrrationalStream tail) {
  return IrrationalStream([p = std::move(prefix), t = std::move(tail)](std::size_t j) {
    return j <= p.size() ? p[j - 1] : t.quotient(j - p.size());
  });
}

std::int64_t IrrationalStream::quotient(std::size_t j) const {
  if (j == 0) throw DomainError("stream quotients are indexed from 1");
  const std::int64_t b = gen_(j);
  if (b < 1) throw DomainError("stream emitted a partial quotient < 1");
  return b;
}

std::vector<std::int64_t> IrrationalStream::prefix(std::size_t n) const {
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) out.push_back(quotient(j));
  return out;
}

double IrrationalStream::approximate_value(std::size_t n) const {
  const auto b = prefix(n);
  double v = 0.0;
  for (std::size_t i = b.size(); i-- > 0;) v = 1.0 / (static_cast<double>(b[i]) + v);
  return v;
}

std::int64_t theta_exponent(const std::vector<mpz_class>& quotients, std::size_t j, std::int64_t N) {
  if (j > quotients.size()) throw DomainError("theta_exponent index beyond the quotient list");
  mpz_class e = 0;
  for (std::size_t i = 1; i <= j; ++i) {
    if (i % 2 == 1) e -= quotients[i - 1]; else e += quotients[i - 1];
  }
  if (j % 2 == 1) e += 3;
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), e.get_mpz_t(), mpz_class(N).get_mpz_t());
  return r.get_si();
}

namespace {

// Running exponent sum_{i<=j} (-1)^i b_i modulo N.
class ExponentTracker {
 public:
  explicit ExponentTracker(std::int64_t N) : N_(N) {}
  void push(const mpz_class& b, std::size_t i) {
    const std::int64_t r = static_cast<std::int64_t>(mpz_fdiv_ui(b.get_mpz_t(), static_cast<unsigned long>(N_)));
    s_ = (i % 2 == 1) ? (s_ - r + N_) % N_ : (s_ + r) % N_;
  }
  std::int64_t e(std::size_t j) const { return (j % 2 == 1) ? (s_ + 3) % N_ : s_; }

 private:
  std::int64_t N_;
  std::int64_t s_ = 0;
};

Complex scaled_power(Complex k, double log_base) { return std::exp(k * log_base); }

Complex f_base_zero(const QmfSpec& spec) {
  return spec.periodicity == Periodicity::full ? spec.base_plus : spec.value_at_zero;
}

// Constant of the Psi series: f(0) (full) or theta f(-1) (weak).
Complex psi_constant(const QmfSpec& spec) {
  return spec.periodicity == Periodicity::full ? spec.base_plus : spec.twist.pow(1) * spec.base_minus;
}

}  // namespace

Complex eval_f_quotients(const QmfSpec& spec, const std::vector<mpz_class>& b) {
  const std::size_t n = b.size();
  if (n == 0) return f_base_zero(spec);
  const auto u = backward_denominators(b);
  const double log_u0 = log_abs(u[0]);
  const Complex k = spec.weight_k;
  ExponentTracker track(spec.twist.N);
  CompensatedComplexSum sum;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) track.push(b[j - 1], j);
    const Rational arg((j % 2 == 0) ? mpz_class(u[j + 1]) : mpz_class(-u[j + 1]), u[j]);
    const Complex weight = scaled_power(-k, log_abs(u[j]) - log_u0);
    sum += spec.twist.pow(track.e(j)) * weight * spec.period_h(arg);
  }
  track.push(b[n - 1], n);
  // Trailing term theta_n u_0^k f((-1)^n); weak mode moves f(+-1) past one extra shift.
  Complex tail;
  std::int64_t e = track.e(n);
  if (spec.periodicity == Periodicity::full) {
    tail = spec.base_plus;
  } else if (n % 2 == 1) {
    tail = spec.base_minus;
    e += 1;
  } else {
    tail = spec.base_plus;
    e -= 1;
  }
  sum += spec.twist.pow(e) * scaled_power(k, log_u0) * tail;
  return sum.value();
}

namespace {

Complex eval_unit_interval(const QmfSpec& spec, const Rational& t) {
  return eval_f_quotients(spec, cf_expand(t).quotients);
}

}  // namespace

Complex eval_f(const QmfSpec& spec, const Rational& x) {
  if (x.is_zero()) return f_base_zero(spec);
  if (spec.periodicity == Periodicity::full) {
    const mpz_class m = x.floor();
    const Rational t = x - Rational(m);
    const Complex ft = t.is_zero() ? spec.base_plus : eval_unit_interval(spec, t);
    return spec.twist.pow(m) * ft;
  }
  if (x.sign() > 0) {
    // x = n + t with t in (0, 1]; f(t + n) = theta^n f(t) because t > 0 stays outside [-1, 0].
    const mpz_class n = x.ceil() - 1;
    const Rational t = x - Rational(n);
    const Complex ft = (t == Rational(1)) ? spec.base_plus : eval_unit_interval(spec, t);
    return spec.twist.pow(n) * ft;
  }
  // x < 0: shift up into s in [-1, 0) by n steps, each from a point below -1.
  const mpz_class n = (-x).ceil() - 1;
  const Rational s = x + Rational(n);
  Complex fs;
  if (s == Rational(-1)) {
    fs = spec.base_minus;
  } else {
    // Reciprocity at s in (-1, 0): f(s) = h(s) + theta^{-3} |s|^{-k} f(-1/s), with -1/s > 1.
    const Rational y = -s.inverse();
    fs = spec.period_h(s) + spec.twist.pow(-3) * scaled_power(-spec.weight_k, s.log_abs()) * eval_f(spec, y);
  }
  return spec.twist.pow(mpz_class(-n)) * fs;
}

Complex eval_psi(const QmfSpec& spec, const Rational& y) {
  const CFExpansion cf = cf_odd(y);
  const auto v = continuants(cf);
  const Complex k = spec.weight_k;
  ExponentTracker track(spec.twist.N);
  CompensatedComplexSum sum;
  for (std::size_t j = 1; j <= cf.length(); ++j) {
    track.push(cf.quotients[j - 1], j);
    const Rational arg((j % 2 == 1) ? mpz_class(v[j - 1]) : mpz_class(-v[j - 1]), v[j]);
    sum += spec.twist.pow(-track.e(j)) * scaled_power(-k, log_abs(v[j])) * spec.period_h(arg);
  }
  sum += psi_constant(spec);
  return sum.value();
}

Complex reciprocity_residual(const QmfSpec& spec, const Rational& x) {
  if (x.is_zero()) throw DomainError("reciprocity is undefined at 0");
  const int sgn = x.sign();
  const Complex fx = eval_f(spec, x);
  const Complex finv = eval_f(spec, -x.inverse());
  return fx - spec.twist.pow(3 * sgn) * scaled_power(-spec.weight_k, x.log_abs()) * finv - spec.period_h(x);
}

ExtensionResult ext_neg(const QmfSpec& spec, const IrrationalStream& x, double tol, std::size_t max_depth) {
  if (spec.weight_k.real() >= 0.0) throw DomainError("ext_neg requires Re(k) < 0");
  ExtensionResult res;
  std::vector<std::int64_t> used;
  mpz_class p_prev = 1, p = 0, q_prev = 0, q = 1;
  Complex last;
  int hits = 0;
  for (std::size_t j = 1; j <= max_depth; ++j) {
    const std::int64_t b = x.quotient(j);
    used.push_back(b);
    mpz_class np = b * p + p_prev, nq = b * q + q_prev;
    p_prev = p; p = np;
    q_prev = q; q = nq;
    const Rational xj(p, q);
    const Complex value = spec.direct ? spec.direct(xj) : eval_f(spec, xj);
    res.value = value;
    res.depth_used = j;
    if (j >= 2 && std::abs(value - last) < tol) {
      if (++hits >= 2) {
        res.converged = true;
        break;
      }
    } else {
      hits = 0;
    }
    last = value;
  }
  res.frak_T_witness = frak_T_witness(used);
  return res;
}

ExtensionResult ext_pos(const QmfSpec& spec, const IrrationalStream& x, double tol, std::size_t max_depth) {
  const double rk = spec.weight_k.real();
  if (rk <= 0.0) throw DomainError("ext_pos requires Re(k) > 0");
  ExtensionResult res;
  std::vector<std::int64_t> used;
  ExponentTracker track(spec.twist.N);
  CompensatedComplexSum sum;
  sum += psi_constant(spec);
  mpz_class v_prev = 0, v = 1;
  double sampled = 0.0;
  // Tail over j' > J: |term_j'| <= C v_{j'-1}^{-Re k} and v_{J+m} >= 2^{floor(m/2)} v_J.
  const double geometric = 2.0 / (1.0 - std::pow(2.0, -rk));
  for (std::size_t j = 1; j <= max_depth; ++j) {
    const std::int64_t b = x.quotient(j);
    used.push_back(b);
    mpz_class nv = b * v + v_prev;
    v_prev = v;
    v = nv;
    const mpz_class bj(static_cast<long>(b));
    track.push(bj, j);
    const Rational y(v_prev, v);
    const Rational arg = (j % 2 == 1) ? y : -y;
    const Complex hy = spec.period_h(arg);
    const double log_v = log_abs(v);
    sum += spec.twist.pow(-track.e(j)) * scaled_power(-spec.weight_k, log_v) * hy;
    sampled = std::max(sampled, std::abs(hy) * std::exp(rk * y.log_abs()));
    res.value = sum.value();
    res.depth_used = j;
    if (j >= 3 && 2.0 * sampled * std::exp(-rk * log_v) * geometric < tol) {
      res.converged = true;
      break;
    }
  }
  res.frak_T_witness = frak_T_witness(used);
  return res;
}

Complex w_eval(std::size_t j, double lambda, const std::function<Complex(const Rational&)>& g, const Rational& x) {
  if (!(lambda > 0.0)) throw DomainError("w_eval requires lambda > 0");
  if (x.sign() < 0 || x >= Rational(1)) throw DomainError("w_eval requires x in [0, 1)");
  if (x.is_zero()) return j == 0 ? g(x) : Complex(0.0);
  const GaussOrbit orbit = gauss_orbit(x);
  const std::size_t r = orbit.u.size() - 1;
  if (j > r) return 0.0;
  const double log_prod = log_abs(orbit.u[j]) - log_abs(orbit.u[0]);
  return std::exp(lambda * log_prod) * g(orbit.iterates[j]);
}

}  // namespace qmf
