#include <cmath>
#include <fstream>
#include <sstream>

#include "qmf/compensated.hpp"
#include "qmf/errors.hpp"
#include "qmf/forms.hpp"

namespace qmf {

CuspForm delta_cusp_form(std::size_t terms) {
  CuspForm f;
  f.weight = 12;
  f.coefficients = ramanujan_tau(terms);
  f.label = "delta";
  return f;
}

CuspForm read_cusp_form(const std::string& path, int weight) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open coefficient file: " + path);
  CuspForm f;
  f.weight = weight;
  f.label = path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;
    try {
      f.coefficients.emplace_back(token, 10);
    } catch (const std::invalid_argument&) {
      throw DomainError("coefficient file " + path + ": bad integer on line " + std::to_string(lineno));
    }
  }
  if (f.coefficients.empty()) throw DomainError("coefficient file " + path + " is empty");
  return f;
}

double eichler_tail_bound(int weight, std::size_t terms) {
  if (weight < 12 || weight % 2 != 0) throw DomainError("cusp form weight must be even and >= 12");
  const double k = weight;
  return 4.0 * std::pow(static_cast<double>(terms), -(k - 4.0) / 2.0) / (k - 4.0);
}

EichlerIntegral::EichlerIntegral(const CuspForm& form) : weight_(form.weight) {
  tail_ = eichler_tail_bound(form.weight, form.coefficients.size());
  scaled_.reserve(form.coefficients.size());
  for (std::size_t i = 0; i < form.coefficients.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    // a_n / n^{k-1} via exponent arithmetic, safe for huge a_n.
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, form.coefficients[i].get_mpz_t());
    scaled_.push_back(mant == 0.0 ? 0.0
                                  : std::copysign(std::exp(std::log(std::fabs(mant)) + e * std::log(2.0) -
                                                           (weight_ - 1) * std::log(n)),
                                                  mant));
  }
}

EichlerValue EichlerIntegral::operator()(const Rational& x) const {
  const mpz_class& den = x.den();
  if (!den.fits_slong_p()) throw DomainError("denominator too large for the Eichler evaluator");
  const std::int64_t q = den.get_si();
  const std::int64_t b = static_cast<std::int64_t>(mpz_fdiv_ui(x.num().get_mpz_t(), static_cast<unsigned long>(q)));
  CompensatedComplexSum sum;
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < scaled_.size(); ++i) {
    idx += b;
    if (idx >= q) idx -= q;
    sum += scaled_[i] * unit_root(idx, q);
  }
  return {sum.value(), tail_};
}

EichlerValue eichler_tilde(const CuspForm& form, const Rational& x, double tol) {
  const double tail = eichler_tail_bound(form.weight, form.coefficients.size());
  if (!(tail < tol)) {
    std::ostringstream os;
    os << "Eichler truncation: tail bound " << tail << " with " << form.coefficients.size()
       << " coefficients exceeds tol " << tol;
    throw TruncationError(os.str());
  }
  return EichlerIntegral(form)(x);
}

Complex eichler_h(const EichlerIntegral& g, const Rational& x) {
  if (x.is_zero()) throw DomainError("eichler_h is undefined at 0");
  return g(x).value - std::exp((g.weight() - 2) * x.log_abs()) * g(-x.inverse()).value;
}

QmfSpec eichler_spec(std::shared_ptr<const EichlerIntegral> g) {
  const Complex f0 = (*g)(Rational(0)).value;
  const double k = 2.0 - g->weight();
  QmfSpec spec = QmfSpec::full(
      "eichler", k, RootOfUnity{}, [g](const Rational& x) { return eichler_h(*g, x); }, f0);
  spec.direct = [g](const Rational& x) { return (*g)(x).value; };
  return spec;
}

}  // namespace qmf
