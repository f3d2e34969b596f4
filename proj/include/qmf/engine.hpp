#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmf/rational.hpp"
#include "qmf/special_functions.hpp"

namespace qmf {

// theta = e(t/N), e(z) = exp(2 pi i z).
struct RootOfUnity {
  std::int64_t t = 0;
  std::int64_t N = 1;

  Complex value() const { return pow(1); }
  Complex pow(std::int64_t e) const;
  Complex pow(const mpz_class& e) const;
};

// e(n/N) with the fraction reduced in integers before the trigonometric call.
Complex unit_root(std::int64_t n, std::int64_t N);

enum class Periodicity { full, weak };

// One quantum modular form: f(x) - theta^{3 sgn x} |x|^{-k} f(-1/x) = h(x).
// full: f(x + 1) = theta f(x) on Q, base_plus = base_minus = f(0).
// weak: f(x + 1) = theta f(x) for x outside [-1, 0]; base_plus = f(1), base_minus = f(-1),
//       value_at_zero is returned for x = 0 only.
// direct, when set, evaluates f on Q without the iteration; extension operators prefer it.
struct QmfSpec {
  std::string id;
  Complex weight_k;
  RootOfUnity twist;
  std::function<Complex(const Rational&)> period_h;
  Periodicity periodicity = Periodicity::full;
  Complex base_plus;
  Complex base_minus;
  Complex value_at_zero;
  std::function<Complex(const Rational&)> direct;

  static QmfSpec full(std::string id, Complex k, RootOfUnity twist, std::function<Complex(const Rational&)> h,
                      Complex f0);
  static QmfSpec weak(std::string id, Complex k, RootOfUnity twist, std::function<Complex(const Rational&)> h,
                      Complex f_plus_one, Complex f_minus_one, Complex f_zero);
};

// Generator of partial quotients b_1, b_2, ... of an irrational in (0, 1).
class IrrationalStream {
 public:
  using Generator = std::function<std::int64_t(std::size_t)>;

  explicit IrrationalStream(Generator gen) : gen_(std::move(gen)) {}

  static IrrationalStream constant(std::int64_t b);
  static IrrationalStream periodic(std::vector<std::int64_t> period);
  // Explicit quotients; reading past the end throws DomainError.
  static IrrationalStream finite(std::vector<std::int64_t> quotients);
  static IrrationalStream with_prefix(std::vector<std::int64_t> prefix, IrrationalStream tail);

  // j >= 1.
  std::int64_t quotient(std::size_t j) const;
  std::vector<std::int64_t> prefix(std::size_t n) const;
  // [0; b_1, ..., b_n] as a double.
  double approximate_value(std::size_t n) const;

 private:
  Generator gen_;
};

// e_j = sum_{i<=j} (-1)^i b_i, plus 3 when j is odd, reduced into [0, N).
std::int64_t theta_exponent(const std::vector<mpz_class>& quotients, std::size_t j, std::int64_t N);

// f on Q; x = 0 returns the base value of the spec.
Complex eval_f(const QmfSpec& spec, const Rational& x);

// f([0; b_1, ..., b_n]) for an explicit, possibly non-canonical quotient list.
Complex eval_f_quotients(const QmfSpec& spec, const std::vector<mpz_class>& quotients);

// Psi(y) over an odd-length expansion of y in (0, 1].
Complex eval_psi(const QmfSpec& spec, const Rational& y);

// f(x) - theta^{3 sgn x} |x|^{-k} f(-1/x) - h(x).
Complex reciprocity_residual(const QmfSpec& spec, const Rational& x);

struct ExtensionResult {
  Complex value;
  bool converged = false;
  std::size_t depth_used = 0;
  // Least B with the used quotient prefix inside T(B).
  double frak_T_witness = 0.0;
};

ExtensionResult ext_neg(const QmfSpec& spec, const IrrationalStream& x, double tol, std::size_t max_depth);
ExtensionResult ext_pos(const QmfSpec& spec, const IrrationalStream& x, double tol, std::size_t max_depth);

// 1(j <= r(x)) (prod_{i<j} T^i x)^lambda g(T^j x) for x in [0, 1).
Complex w_eval(std::size_t j, double lambda, const std::function<Complex(const Rational&)>& g, const Rational& x);

}  // namespace qmf
