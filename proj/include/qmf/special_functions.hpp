#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "qmf/rational.hpp"

namespace qmf {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

// Direct terms K and Bernoulli correction order M; K >= 8, 1 <= M <= 30.
struct EulerMaclaurinConfig {
  int shift_K = 32;
  int order_M = 12;

  void validate() const;
  // Smallest admissible Re(s) is strictly greater than this.
  double min_real_s() const { return 1.0 - 2.0 * order_M; }
};

// Exact B_n with B_1 = -1/2.
Rational bernoulli(unsigned n);

// B_{2m} / (2m)! as binary64, m = 1..30.
double bernoulli_over_factorial(unsigned m);

// Bernoulli polynomial B_n(x) in binary64.
double bernoulli_polynomial(unsigned n, double x);

// Euler–Maclaurin Hurwitz zeta; x > 0 (the summation shift handles x > 1 as well).
Complex hurwitz_zeta(Complex s, double x, const EulerMaclaurinConfig& cfg = {});
double hurwitz_zeta(double s, double x, const EulerMaclaurinConfig& cfg = {});

// zeta(s) with the Bernoulli order raised as needed for Re(s) << 0.
Complex riemann_zeta(Complex s);

double digamma(double x, const EulerMaclaurinConfig& cfg = {});

struct KappaConstants {
  Complex kappa1;
  Complex kappa2;
  bool kappa2_finite = true;
};

// kappa1 = zeta(1-a)/pi, kappa2 = -zeta(-a) cot(pi a/2); a = -1 takes the limit -pi/2.
KappaConstants kappa_constants(Complex a);

// a * kappa1(a), continuous at a = 0 with value -1/pi.
Complex a_kappa1(Complex a);

mpz_class sigma_div(unsigned k, std::uint64_t n);

// tau(1..N); element i holds tau(i + 1).
std::vector<mpz_class> ramanujan_tau(std::size_t N);

// D(x) = zeta(s, x) - zeta(s, 1 - x) on (0, 1/2] for a fixed s != 1.
// Uses x^{-s} - (1-x)^{-s} plus an odd Taylor series of zeta(s, 3/2 + t) - zeta(s, 3/2 - t).
class HurwitzOddDifference {
 public:
  explicit HurwitzOddDifference(Complex s);
  Complex operator()(double x) const;
  std::size_t terms() const { return coeff_.size(); }

 private:
  Complex s_;
  bool polynomial_ = false;  // s a nonpositive integer: zeta(s, x) = -B_{1-s}(x)/(1-s)
  unsigned poly_degree_ = 0;
  std::vector<double> poly_;    // B_n(x) coefficients, increasing powers
  std::vector<Complex> coeff_;  // coefficient of t^{2i+1}
  std::vector<double> coeff_re_;  // real copy when s is real
};

}  // namespace qmf
