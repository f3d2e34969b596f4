#include <cmath>
#include <map>
#include <mutex>

#include "qmf/compensated.hpp"
#include "qmf/continued_fraction.hpp"
#include "qmf/errors.hpp"
#include "qmf/forms.hpp"

namespace qmf {

namespace {

constexpr std::int64_t kMaxDenominator = 20'000'000;
constexpr std::int64_t kMaxCachedDenominator = 100'000;
constexpr std::int64_t kCacheBudget = 2'000'000;

std::int64_t checked_denominator(const Rational& x) {
  if (!x.den().fits_slong_p() || x.den().get_si() > kMaxDenominator) {
    throw DomainError("denominator too large for the Kontsevich kernel: " + x.den().get_str());
  }
  return x.den().get_si();
}

}  // namespace

KontsevichKernel::KontsevichKernel(std::int64_t q) : q_(q) {
  if (q < 1) throw DomainError("Kontsevich kernel requires q >= 1");
  roots_.resize(static_cast<std::size_t>(q));
  for (std::int64_t j = 0; j < q; ++j) roots_[j] = unit_root(j, q);
  const std::int64_t M = 12 * q;
  const double Md = static_cast<double>(M);
  index_.reserve(static_cast<std::size_t>(4 * q));
  weight_.reserve(static_cast<std::size_t>(4 * q));
  for (std::int64_t n = 1; n <= M; ++n) {
    const std::int64_t r12 = n % 12;
    if (r12 != 1 && r12 != 5 && r12 != 7 && r12 != 11) continue;
    const double chi = (r12 == 1 || r12 == 11) ? 1.0 : -1.0;
    const double t = static_cast<double>(n) / Md;
    const double b2 = t * t - t + 1.0 / 6.0;
    const unsigned __int128 sq = static_cast<unsigned __int128>(n) * static_cast<unsigned __int128>(n);
    index_.push_back(static_cast<std::int64_t>(((sq - 1) / 24) % static_cast<unsigned __int128>(q)));
    weight_.push_back(chi * b2 * (Md / 4.0));
  }
}

Complex KontsevichKernel::operator()(std::int64_t b) const {
  std::int64_t br = b % q_;
  if (br < 0) br += q_;
  CompensatedComplexSum sum;
  // q < 2^31 keeps br * index below 2^62.
  const std::uint64_t bu = static_cast<std::uint64_t>(br), qu = static_cast<std::uint64_t>(q_);
  for (std::size_t i = 0; i < index_.size(); ++i) {
    const std::size_t j = static_cast<std::size_t>((bu * static_cast<std::uint64_t>(index_[i])) % qu);
    sum += weight_[i] * roots_[j];
  }
  std::int64_t b24 = b % (24 * q_);
  if (b24 < 0) b24 += 24 * q_;
  return unit_root(b24, 24 * q_) * sum.value();
}

std::shared_ptr<const KontsevichKernel> kontsevich_kernel(std::int64_t q) {
  if (q > kMaxCachedDenominator) return std::make_shared<const KontsevichKernel>(q);
  static std::mutex mutex;
  static std::map<std::int64_t, std::shared_ptr<const KontsevichKernel>> cache;
  static std::int64_t used = 0;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
  }
  auto kernel = std::make_shared<const KontsevichKernel>(q);
  std::lock_guard<std::mutex> lock(mutex);
  if (used + q > kCacheBudget) {
    cache.clear();
    used = 0;
  }
  if (cache.emplace(q, kernel).second) used += q;
  return kernel;
}

Complex kontsevich_phi(const Rational& x) {
  const std::int64_t q = checked_denominator(x);
  const std::int64_t b = static_cast<std::int64_t>(mpz_fdiv_ui(x.num().get_mpz_t(), static_cast<unsigned long>(24 * q)));
  return (*kontsevich_kernel(q))(b);
}

Complex kontsevich_phi_direct(const Rational& x) {
  const std::int64_t q = checked_denominator(x);
  const std::int64_t b = static_cast<std::int64_t>(mpz_fdiv_ui(x.num().get_mpz_t(), static_cast<unsigned long>(24 * q)));
  Complex prod = 1.0;
  CompensatedComplexSum sum;
  sum += prod;
  for (std::int64_t n = 1; n < q; ++n) {
    const std::int64_t idx = static_cast<std::int64_t>((static_cast<__int128>(n) * b) % q);
    prod *= 1.0 - unit_root(idx, q);
    sum += prod;
  }
  return unit_root(b, 24 * q) * sum.value();
}

Complex kontsevich_phistar(const Rational& x) {
  if (x.sign() <= 0 || x > Rational(1)) throw DomainError("kontsevich_phistar requires x in (0, 1]");
  const mpz_class sigma = sigma_phase(x);
  const std::int64_t s24 = static_cast<std::int64_t>(mpz_fdiv_ui(sigma.get_mpz_t(), 24));
  return unit_root(-s24, 24) * std::exp(-1.5 * log_abs(x.den())) * kontsevich_phi(bar_invert(x));
}

Complex kontsevich_h(const Rational& x) {
  if (x.is_zero()) throw DomainError("kontsevich_h is undefined at 0");
  const Complex twist = unit_root(x.sign() > 0 ? 1 : -1, 8);
  return kontsevich_phi(x) - twist * std::exp(-1.5 * x.log_abs()) * kontsevich_phi(-x.inverse());
}

QmfSpec kontsevich_spec() {
  QmfSpec spec = QmfSpec::full("kontsevich", 1.5, RootOfUnity{1, 24}, kontsevich_h, 1.0);
  spec.direct = kontsevich_phi;
  return spec;
}

}  // namespace qmf
