#include "qmf/distribution.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmf/continued_fraction.hpp"
#include "qmf/errors.hpp"

namespace qmf {

std::string to_string(Normalization n) { return n == Normalization::raw ? "raw" : "qk"; }

Normalization parse_normalization(const std::string& text) {
  if (text == "raw") return Normalization::raw;
  if (text == "qk" || text == "q_pow_minus_k") return Normalization::q_pow_minus_k;
  throw DomainError("unknown normalization: " + text);
}

std::vector<double> EmpiricalSample::project(double xi) const {
  const Complex rot = std::polar(1.0, xi);
  std::vector<double> out;
  out.reserve(values.size());
  for (const Complex& z : values) out.push_back(xi == 0.0 ? z.real() : (rot * z).real());
  return out;
}

Ecdf::Ecdf(std::vector<double> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
}

double Ecdf::operator()(double t) const {
  if (points_.empty()) return 0.0;
  const auto it = std::upper_bound(points_.begin(), points_.end(), t);
  return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
}

std::int64_t euler_phi(std::int64_t q) {
  if (q < 1) throw DomainError("euler_phi requires q >= 1");
  std::int64_t result = q, n = q;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

EmpiricalSample scan_form(const Form& form, std::int64_t q, Normalization norm, ExecPolicy policy) {
  if (q < 2) throw DomainError("scan_form requires q >= 2");
  std::vector<std::int64_t> residues;
  residues.reserve(static_cast<std::size_t>(euler_phi(q)));
  for (std::int64_t a = 1; a < q; ++a) {
    if (fast::gcd(a, q) == 1) residues.push_back(a);
  }
  const auto eval = form.residue_evaluator(q);
  const Complex k = form.weight();
  const RootOfUnity twist = form.twist();
  const Complex qk = std::exp(-k * std::log(static_cast<double>(q)));
  const bool normalize = norm == Normalization::q_pow_minus_k;

  EmpiricalSample sample;
  sample.values.resize(residues.size());
  const auto n = static_cast<std::int64_t>(residues.size());
  auto body = [&](std::int64_t i) {
    const std::int64_t a = residues[i];
    Complex v = eval(a);
    if (normalize) {
      v *= qk;
      if (twist.N != 1) v *= twist.pow(-fast::sigma_phase(a, q));
    }
    sample.values[i] = v;
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  sample.meta.form = form.id();
  sample.meta.params = form.describe();
  sample.meta.q = q;
  sample.meta.size = sample.values.size();
  sample.meta.normalization = to_string(norm);
  return sample;
}

Ecdf ecdf(const EmpiricalSample& sample, double xi) { return Ecdf(sample.project(xi)); }

double ecdf_eval(const Ecdf& F, double t) { return F(t); }

double ks_distance(const Ecdf& F, const Ecdf& G) {
  const auto& a = F.points();
  const auto& b = G.points();
  if (a.empty() || b.empty()) throw DomainError("ks_distance needs nonempty samples");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Both functions are constant between consecutive merged jump points; evaluate after each tie group.
  while (i < a.size() || j < b.size()) {
    double t;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) t = a[i]; else t = b[j];
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double max_atom(std::vector<double> projected, double eps) {
  if (!(eps > 0.0)) throw DomainError("max_atom requires eps > 0");
  if (projected.empty()) throw DomainError("max_atom needs a nonempty sample");
  std::sort(projected.begin(), projected.end());
  std::size_t best = 0, hi = 0;
  for (std::size_t lo = 0; lo < projected.size(); ++lo) {
    if (hi < lo) hi = lo;
    while (hi < projected.size() && projected[hi] - projected[lo] <= eps) ++hi;
    best = std::max(best, hi - lo);
  }
  return static_cast<double>(best) / static_cast<double>(projected.size());
}

std::vector<std::int64_t> uniform_quotients(std::mt19937_64& rng, std::size_t n) {
  // x = R / 2^512; its first digits agree with those of the underlying uniform real
  // as long as the convergent denominators stay far below 2^256.
  mpz_class R = 0;
  for (int i = 0; i < 8; ++i) {
    R <<= 64;
    R += static_cast<unsigned long>(rng());
  }
  if (R == 0) R = 1;
  mpz_class q = 1;
  q <<= 512;
  std::vector<std::int64_t> out;
  out.reserve(n);
  mpz_class a = R;
  while (out.size() < n && a != 0) {
    mpz_class b, r;
    mpz_fdiv_qr(b.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t());
    out.push_back(b.fits_slong_p() ? b.get_si() : std::numeric_limits<std::int64_t>::max());
    q = a;
    a = r;
  }
  if (out.size() < n) throw DomainError("random expansion terminated early");
  return out;
}

EmpiricalSample sample_pushforward(const ExtensionFn& extension, const PushforwardOptions& opt) {
  if (opt.n < 1) throw DomainError("sample_pushforward requires n >= 1");
  std::vector<Complex> values(opt.n);
  std::vector<char> ok(opt.n, 0);
  std::vector<std::size_t> rejected(opt.n, 0);
  const auto n = static_cast<std::int64_t>(opt.n);
  auto body = [&](std::int64_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::int64_t> digits;
    do {
      digits = uniform_quotients(rng, opt.max_depth);
      if (in_frak_T(digits, opt.B)) break;
      ++rejected[i];
    } while (true);
    try {
      const ExtensionResult r = extension(IrrationalStream::finite(digits), opt.tol, opt.max_depth);
      values[i] = r.value;
      ok[i] = r.converged ? 1 : 0;
    } catch (const DomainError&) {
      // Denominators beyond the kernels' range count as non-convergence.
      ok[i] = 0;
    }
  };
  if (opt.policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  EmpiricalSample sample;
  std::size_t dropped = 0, rej = 0;
  for (std::size_t i = 0; i < opt.n; ++i) {
    rej += rejected[i];
    if (ok[i]) sample.values.push_back(values[i]); else ++dropped;
  }
  if (static_cast<double>(dropped) > opt.drop_budget * static_cast<double>(opt.n)) {
    throw ConvergenceError("pushforward: " + std::to_string(dropped) + " of " + std::to_string(opt.n) +
                           " streams did not converge");
  }
  sample.meta.size = sample.values.size();
  sample.meta.seed = opt.seed;
  sample.meta.dropped = dropped;
  sample.meta.rejected = rej;
  sample.meta.normalization = "extension";
  return sample;
}

EmpiricalSample sample_pushforward(const Form& form, const PushforwardOptions& opt) {
  EmpiricalSample s = sample_pushforward(
      [&form](const IrrationalStream& x, double tol, std::size_t d) { return form.extension(x, tol, d); }, opt);
  s.meta.form = form.id();
  s.meta.params = form.describe();
  return s;
}

EmpiricalSample sample_pushforward(const QmfSpec& spec, const PushforwardOptions& opt) {
  EmpiricalSample s = sample_pushforward(
      [&spec](const IrrationalStream& x, double tol, std::size_t d) {
        return spec.weight_k.real() < 0.0 ? ext_neg(spec, x, tol, d) : ext_pos(spec, x, tol, d);
      },
      opt);
  s.meta.form = spec.id;
  return s;
}

double frak_A_fraction(std::int64_t q, ExecPolicy policy) {
  if (q < 3) throw DomainError("frak_A_fraction requires q >= 3");
  const double lq = std::log(static_cast<double>(q));
  const double llq = std::log(lq);
  const double B = lq * llq * llq;
  std::int64_t good = 0, total = 0;
  auto test = [&](std::int64_t a, std::vector<std::int64_t>& buf) {
    fast::cf_quotients(a, q, buf);
    return in_frak_T(buf, B);
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel reduction(+ : good, total)
    {
      std::vector<std::int64_t> buf;
#pragma omp for schedule(static)
      for (std::int64_t a = 1; a < q; ++a) {
        if (fast::gcd(a, q) != 1) continue;
        ++total;
        if (test(a, buf)) ++good;
      }
    }
  } else {
    std::vector<std::int64_t> buf;
    for (std::int64_t a = 1; a < q; ++a) {
      if (fast::gcd(a, q) != 1) continue;
      ++total;
      if (test(a, buf)) ++good;
    }
  }
  return static_cast<double>(good) / static_cast<double>(total);
}

}  // namespace qmf
