#include "qmf/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <functional>
#include <random>
#include <sstream>

#include "qmf/continued_fraction.hpp"
#include "qmf/distribution.hpp"
#include "qmf/engine.hpp"
#include "qmf/errors.hpp"
#include "qmf/forms.hpp"
#include "qmf/special_functions.hpp"

namespace qmf {

namespace {

using Check = std::function<std::pair<bool, std::string>()>;

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

template <class F>
void for_reduced(long max_den, F&& f) {
  for (long q = 2; q <= max_den; ++q) {
    for (long a = 1; a < q; ++a) {
      if (std::gcd(a, q) == 1) f(Rational(a) / Rational(q));
    }
  }
}

std::vector<std::pair<std::string, Check>> cf_checks() {
  return {
      {"reconstruction and reversal, den <= 200",
       [] {
         long bad = 0;
         for_reduced(200, [&](const Rational& x) {
           if (cf_expand(x).value() != x || cf_odd(x).value() != x) ++bad;
           CFExpansion rev = cf_odd(x);
           std::reverse(rev.quotients.begin(), rev.quotients.end());
           if (rev.value() != bar_invert(x)) ++bad;
         });
         return std::make_pair(bad == 0, std::to_string(bad) + " failures");
       }},
      {"sigma identity, den <= 200",
       [] {
         long bad = 0;
         for_reduced(200, [&](const Rational& x) {
           if (Rational(sigma_phase(x)) != x + bar_invert(x) - Rational(12) * dedekind_sum(x)) ++bad;
         });
         return std::make_pair(bad == 0, std::to_string(bad) + " failures");
       }},
  };
}

std::vector<std::pair<std::string, Check>> special_checks() {
  return {
      {"zeta(2) = pi^2/6",
       [] {
         const double e = std::abs(hurwitz_zeta(Complex(2.0, 0.0), 1.0) - kPi * kPi / 6.0);
         return std::make_pair(e < 1e-12, "error " + num(e));
       }},
      {"digamma(1) = -gamma",
       [] {
         const double e = std::fabs(digamma(1.0) + kEulerGamma);
         return std::make_pair(e < 1e-12, "error " + num(e));
       }},
      {"tau congruence mod 691, n <= 200",
       [] {
         const auto tau = ramanujan_tau(200);
         long bad = 0;
         for (std::uint64_t n = 1; n <= 200; ++n) {
           const mpz_class d = tau[n - 1] - sigma_div(11, n);
           if (d % 691 != 0) ++bad;
         }
         return std::make_pair(bad == 0, std::to_string(bad) + " failures");
       }},
  };
}

Complex synthetic_g(const Rational& t) {
  const double u = t.to_double();
  return Complex(1.0 / (1.0 + u * u), 0.25 * u);
}

// Full mode: h is the coboundary of f(x) = theta^floor(x) g(frac x), so eval_f must return f.
Complex synthetic_full_f(const RootOfUnity& theta, const Rational& x) {
  return theta.pow(x.floor()) * synthetic_g(x.frac());
}

QmfSpec synthetic_spec(Periodicity p) {
  if (p == Periodicity::full) {
    const RootOfUnity theta{2, 7};
    const Complex k(-1.3, 0.4);
    auto h = [theta, k](const Rational& x) {
      const int sgn = x.sign();
      return synthetic_full_f(theta, x) -
             theta.pow(3 * sgn) * std::exp(-k * x.log_abs()) * synthetic_full_f(theta, -x.inverse());
    };
    return QmfSpec::full("synthetic-full", k, theta, h, synthetic_g(Rational(0)));
  }
  // Weak mode: f(1) is pinned by h(1) = f(1) - theta^3 f(-1).
  const RootOfUnity theta{3, 5};
  auto h = [](const Rational& x) { return synthetic_g(x); };
  const Complex f_minus(-0.3, 0.5);
  const Complex f_plus = synthetic_g(Rational(1)) + theta.pow(3) * f_minus;
  return QmfSpec::weak("synthetic-weak", Complex(1.7, 0.3), theta, h, f_plus, f_minus, 0.0);
}

std::vector<std::pair<std::string, Check>> engine_checks() {
  std::vector<std::pair<std::string, Check>> out;
  for (Periodicity p : {Periodicity::full, Periodicity::weak}) {
    const std::string tag = p == Periodicity::full ? "full" : "weak";
    out.emplace_back("reciprocity residual (" + tag + "), den <= 60", [p] {
      const QmfSpec spec = synthetic_spec(p);
      double worst = 0.0;
      for_reduced(60, [&](const Rational& x) { worst = std::max(worst, std::abs(reciprocity_residual(spec, x))); });
      return std::make_pair(worst < 1e-10, "max residual " + num(worst));
    });
    out.emplace_back("f/Psi duality (" + tag + "), den <= 60", [p] {
      const QmfSpec spec = synthetic_spec(p);
      double worst = 0.0;
      for_reduced(60, [&](const Rational& x) {
        const mpz_class e = sigma_phase(x);
        const Complex lhs = spec.twist.pow(mpz_class(-e)) * std::exp(-spec.weight_k * log_abs(x.den())) * eval_f(spec, x);
        worst = std::max(worst, std::abs(lhs - eval_psi(spec, bar_invert(x))));
      });
      return std::make_pair(worst < 1e-10, "max deviation " + num(worst));
    });
  }
  out.emplace_back("twist composition, random odd tuples", [] {
    std::mt19937_64 rng(7);
    long bad = 0;
    for (int t = 0; t < 200; ++t) {
      const std::size_t r = 2 * (rng() % 6) + 1;
      std::vector<mpz_class> b(r), rev;
      for (auto& x : b) x = static_cast<long>(1 + rng() % 30);
      rev.assign(b.rbegin(), b.rend());
      const std::int64_t N = 24;
      for (std::size_t j = 0; j <= r; ++j) {
        if ((theta_exponent(b, r - j, N) + theta_exponent(rev, j, N)) % N != theta_exponent(b, r, N)) ++bad;
      }
    }
    return std::make_pair(bad == 0, std::to_string(bad) + " failures");
  });
  return out;
}

std::vector<std::pair<std::string, Check>> forms_checks() {
  return {
      {"phi(1/2) = 3 e(1/48)",
       [] {
         const double e = std::abs(kontsevich_phi(Rational(1) / Rational(2)) - 3.0 * unit_root(1, 48));
         return std::make_pair(e < 1e-12, "error " + num(e));
       }},
      {"c_0(1/3) = sqrt(3)/9",
       [] {
         const double e = std::abs(cotangent_c(0.0, 1, 3) - std::sqrt(3.0) / 9.0);
         return std::make_pair(e < 1e-12, "error " + num(e));
       }},
      {"c~_a reciprocity a = 0.5, den <= 60",
       [] {
         const QmfSpec spec = cotangent_spec(0.5);
         double worst = 0.0;
         for_reduced(60, [&](const Rational& x) { worst = std::max(worst, std::abs(reciprocity_residual(spec, x))); });
         return std::make_pair(worst < 1e-9, "max residual " + num(worst));
       }},
      {"A_{5,5}(0) convention",
       [] {
         const auto c = a_kd_matching_convention(5, 5);
         return std::make_pair(c.has_value(), c ? (*c == BRange::all ? "all b" : "b >= 0") : "no unique match");
       }},
  };
}

std::vector<std::pair<std::string, Check>> distribution_checks() {
  return {
      {"scan size equals phi(q)",
       [] {
         const auto form = make_form("kontsevich");
         const auto s = scan_form(*form, 360, Normalization::q_pow_minus_k);
         return std::make_pair(static_cast<std::int64_t>(s.values.size()) == euler_phi(360),
                               std::to_string(s.values.size()) + " values");
       }},
      {"serial and parallel scans agree",
       [] {
         FormParams p;
         p.a = 0.5;
         const auto form = make_form("cotangent", p);
         const auto a = scan_form(*form, 499, Normalization::q_pow_minus_k, ExecPolicy::serial);
         const auto b = scan_form(*form, 499, Normalization::q_pow_minus_k, ExecPolicy::parallel);
         return std::make_pair(a.values == b.values, "bitwise comparison");
       }},
      {"ks {0} vs {0,1} = 1/2",
       [] {
         const double d = ks_distance(Ecdf({0.0}), Ecdf({0.0, 1.0}));
         return std::make_pair(d == 0.5, "distance " + num(d));
       }},
  };
}

}  // namespace

std::vector<std::string> check_suites() { return {"cf", "special", "engine", "forms", "distribution"}; }

std::vector<CheckResult> run_checks(const std::string& suite) {
  std::vector<CheckResult> out;
  auto run = [&](const std::string& name, const std::vector<std::pair<std::string, Check>>& checks) {
    for (const auto& [label, fn] : checks) {
      CheckResult r{name, label, false, ""};
      try {
        std::tie(r.passed, r.detail) = fn();
      } catch (const std::exception& e) {
        r.detail = std::string("exception: ") + e.what();
      }
      out.push_back(r);
    }
  };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "cf") { run("cf", cf_checks()); known = true; }
  if (all || suite == "special") { run("special", special_checks()); known = true; }
  if (all || suite == "engine") { run("engine", engine_checks()); known = true; }
  if (all || suite == "forms") { run("forms", forms_checks()); known = true; }
  if (all || suite == "distribution") { run("distribution", distribution_checks()); known = true; }
  if (!known) throw DomainError("unknown check suite: " + suite);
  return out;
}

}  // namespace qmf
