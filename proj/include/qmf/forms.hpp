#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmf/engine.hpp"
#include "qmf/rational.hpp"
#include "qmf/special_functions.hpp"

namespace qmf {

// ---- cotangent sums ------------------------------------------------------

bool is_positive_odd_integer(Complex a);

// c_a(b/q) for every b coprime to a fixed q.
// Per-q tables: cot(pi j/q) and D(m/q) = zeta(-a, m/q) - zeta(-a, 1 - m/q), m <= (q-1)/2.
class CotangentKernel {
 public:
  CotangentKernel(Complex a, std::int64_t q);
  Complex operator()(std::int64_t b) const;
  std::int64_t q() const { return q_; }
  Complex a() const { return a_; }

 private:
  Complex a_;
  std::int64_t q_;
  bool zero_ = false;
  bool real_ = false;
  Complex scale_;
  std::vector<double> cot_;
  std::vector<double> diff_re_;
  std::vector<Complex> diff_;
};

std::shared_ptr<const CotangentKernel> cotangent_kernel(Complex a, std::int64_t q);

Complex cotangent_c(Complex a, std::int64_t b, std::int64_t q);

// rho(b/q) = {bbar/q}; rho(n) = 1 for n > 0 and 0 for n <= 0.
Rational rho(const Rational& x);

// c_a(x) + a kappa1(a) den(x)^{1+a} rho(x); 0 at x = 0.
Complex cotangent_c_tilde(Complex a, const Rational& x);

// c~_a(x) - |x|^{-1-a} c~_a(-1/x).
Complex cotangent_h(Complex a, const Rational& x);

// Weight 1 + a, trivial twist, weak periodicity, f(1) = a kappa1(a), f(-1) = 0.
QmfSpec cotangent_spec(Complex a);

// ext_pos of cotangent_spec(a) minus a kappa1(a) {x}; identically 0 for positive odd a.
ExtensionResult cotangent_ext_pos(Complex a, const IrrationalStream& x, double tol, std::size_t max_depth);

// ---- Kontsevich function -------------------------------------------------

// phi(b/q) = e(b/(24q)) F(b mod q) with
// F(b) = 3q sum_{n <= 12q, (n,6)=1} chi12(n) B_2(n/(12q)) e(b ((n^2-1)/24)/q).
class KontsevichKernel {
 public:
  explicit KontsevichKernel(std::int64_t q);
  // phi(b/q), any integer b.
  Complex operator()(std::int64_t b) const;
  std::int64_t q() const { return q_; }

 private:
  std::int64_t q_;
  std::vector<Complex> roots_;
  std::vector<std::int64_t> index_;
  std::vector<double> weight_;
};

std::shared_ptr<const KontsevichKernel> kontsevich_kernel(std::int64_t q);

Complex kontsevich_phi(const Rational& x);

// Product-sum definition; loses all accuracy beyond den(x) of a few dozen.
Complex kontsevich_phi_direct(const Rational& x);

// e(-sigma(x)/24) den(x)^{-3/2} phi(xbar), x in (0, 1].
Complex kontsevich_phistar(const Rational& x);

Complex kontsevich_h(const Rational& x);

// k = 3/2, theta = e(1/24), full periodicity, f(0) = 1.
QmfSpec kontsevich_spec();

// ---- Eichler integrals ---------------------------------------------------

inline constexpr std::size_t kDefaultDeltaTerms = 2048;

struct CuspForm {
  int weight = 12;
  // a_1..a_N.
  std::vector<mpz_class> coefficients;
  std::string label;
};

CuspForm delta_cusp_form(std::size_t terms = kDefaultDeltaTerms);

// One integer a_n per line, 1-indexed; blank lines and '#' comments skipped.
CuspForm read_cusp_form(const std::string& path, int weight);

// Deligne bound with d(n) <= 2 sqrt(n): sum_{n>N} d(n) n^{-(k-1)/2} <= 4 N^{-(k-4)/2} / (k - 4).
double eichler_tail_bound(int weight, std::size_t terms);

struct EichlerValue {
  Complex value;
  double tail_bound = 0.0;
};

// g~(x) = sum_{n<=N} a_n n^{1-k} e(nx).
class EichlerIntegral {
 public:
  explicit EichlerIntegral(const CuspForm& form);
  EichlerValue operator()(const Rational& x) const;
  int weight() const { return weight_; }
  std::size_t terms() const { return scaled_.size(); }
  double tail_bound() const { return tail_; }

 private:
  int weight_;
  std::vector<double> scaled_;
  double tail_;
};

// Throws TruncationError when the coefficient list cannot certify tol.
EichlerValue eichler_tilde(const CuspForm& form, const Rational& x, double tol);

// g~(x) - |x|^{k-2} g~(-1/x).
Complex eichler_h(const EichlerIntegral& g, const Rational& x);

// Weight 2 - k, trivial twist, full periodicity.
QmfSpec eichler_spec(std::shared_ptr<const EichlerIntegral> g);

// ---- A_{k,D} -------------------------------------------------------------

// all: every integer b; nonnegative: b >= 0 only.
enum class BRange { all, nonnegative };

struct AkdValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// sum over a = -1..-depth_A and b with (b + 2ax)^2 < D, b^2 = D mod 4|a| of ((D - (b + 2ax)^2)/(4|a|))^k.
AkdValue a_kd(int k, std::int64_t D, const Rational& x, std::int64_t depth_A, BRange range = BRange::all);

double a_kd_tail_bound(int k, std::int64_t D, std::int64_t depth_A);
std::int64_t a_kd_depth_for(int k, std::int64_t D, double tol);

// sum_{0 <= b < sqrt(D), b^2 = D mod 4} sigma_k((D - b^2)/4).
mpz_class a_kd_zero_identity(int k, std::int64_t D);

// The unique convention under which the x = 0 enumeration equals a_kd_zero_identity; empty if not unique.
std::optional<BRange> a_kd_matching_convention(int k, std::int64_t D);

// Weight -2k, trivial twist, full periodicity; h from the relation.
QmfSpec akd_spec(int k, std::int64_t D, double tol, BRange range = BRange::all);

// ---- catalog -------------------------------------------------------------

struct FormParams {
  Complex a{-2.0, 0.0};
  int akd_k = 5;
  std::int64_t akd_D = 5;
  BRange akd_range = BRange::all;
  std::string coefficient_file;
  int cusp_weight = 12;
  double tol = 1e-10;
};

class Form {
 public:
  virtual ~Form() = default;
  virtual std::string id() const = 0;
  virtual std::string describe() const = 0;
  virtual Complex weight() const = 0;
  virtual RootOfUnity twist() const { return {}; }
  // f(b/q) for residues b of one q; the returned callable is safe for concurrent use.
  virtual std::function<Complex(std::int64_t)> residue_evaluator(std::int64_t q) const = 0;
  virtual const QmfSpec& spec() const = 0;
  // f-dagger for Re k < 0, f-star for Re k > 0.
  virtual ExtensionResult extension(const IrrationalStream& x, double tol, std::size_t max_depth) const;
};

// Unknown ids throw DomainError.
std::unique_ptr<Form> make_form(const std::string& id, const FormParams& params = {});
std::vector<std::string> form_ids();

}  // namespace qmf
