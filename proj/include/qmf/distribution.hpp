#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qmf/engine.hpp"
#include "qmf/forms.hpp"

namespace qmf {

enum class Normalization { raw, q_pow_minus_k };
enum class ExecPolicy { serial, parallel };

std::string to_string(Normalization n);
Normalization parse_normalization(const std::string& text);

struct SampleMeta {
  std::string form;
  std::string params;
  std::int64_t q = 0;
  std::size_t size = 0;
  std::string normalization;
  std::optional<double> angle;
  std::optional<std::uint64_t> seed;
  std::size_t dropped = 0;
  std::size_t rejected = 0;
};

struct EmpiricalSample {
  std::vector<Complex> values;
  SampleMeta meta;

  // Re(e^{i xi} z) for every value.
  std::vector<double> project(double xi) const;
};

// Right-continuous step function over sorted points.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> points);
  double operator()(double t) const;
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<double> points_;
};

std::int64_t euler_phi(std::int64_t q);

// One value per a in [1, q) coprime to q, ordered by a.
// q_pow_minus_k multiplies by theta^{-sigma(a/q)} q^{-k}, which is Psi(abar/q) for the form.
EmpiricalSample scan_form(const Form& form, std::int64_t q, Normalization norm,
                          ExecPolicy policy = ExecPolicy::parallel);

Ecdf ecdf(const EmpiricalSample& sample, double xi = 0.0);
double ecdf_eval(const Ecdf& F, double t);

// sup |F - G| over the union of jump points.
double ks_distance(const Ecdf& F, const Ecdf& G);

// Largest fraction of points in a closed window of length eps.
double max_atom(std::vector<double> projected, double eps);

struct PushforwardOptions {
  std::size_t n = 2000;
  std::size_t max_depth = 80;
  double tol = 1e-3;
  double B = 1e4;
  std::uint64_t seed = 1;
  // Fraction of non-convergent streams that may be dropped before failing.
  double drop_budget = 0.01;
  ExecPolicy policy = ExecPolicy::parallel;
};

// Quotient prefix of length n of a uniform random real in (0, 1), from 512 random bits.
std::vector<std::int64_t> uniform_quotients(std::mt19937_64& rng, std::size_t n);

using ExtensionFn = std::function<ExtensionResult(const IrrationalStream&, double, std::size_t)>;

// Values of the extension at Lebesgue-random irrationals restricted to T(B).
// Throws ConvergenceError when more than drop_budget of the streams fail to converge.
EmpiricalSample sample_pushforward(const ExtensionFn& extension, const PushforwardOptions& opt);
EmpiricalSample sample_pushforward(const Form& form, const PushforwardOptions& opt);
EmpiricalSample sample_pushforward(const QmfSpec& spec, const PushforwardOptions& opt);

// |{a coprime to q : a/q in T((ln q)(ln ln q)^2)}| / phi(q).
double frak_A_fraction(std::int64_t q, ExecPolicy policy = ExecPolicy::parallel);

}  // namespace qmf
