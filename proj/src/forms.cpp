#include <sstream>

#include "qmf/errors.hpp"
#include "qmf/forms.hpp"

namespace qmf {

ExtensionResult Form::extension(const IrrationalStream& x, double tol, std::size_t max_depth) const {
  const double rk = weight().real();
  if (rk < 0.0) return ext_neg(spec(), x, tol, max_depth);
  if (rk > 0.0) return ext_pos(spec(), x, tol, max_depth);
  throw DomainError("no extension operator for Re(k) = 0");
}

namespace {

std::string complex_str(Complex z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

class CotangentForm final : public Form {
 public:
  explicit CotangentForm(Complex a) : a_(a), spec_(cotangent_spec(a)) {}
  std::string id() const override { return "cotangent"; }
  std::string describe() const override { return "cotangent a=" + complex_str(a_); }
  Complex weight() const override { return 1.0 + a_; }
  std::function<Complex(std::int64_t)> residue_evaluator(std::int64_t q) const override {
    auto kernel = cotangent_kernel(a_, q);
    return [kernel](std::int64_t b) { return (*kernel)(b); };
  }
  const QmfSpec& spec() const override { return spec_; }
  ExtensionResult extension(const IrrationalStream& x, double tol, std::size_t max_depth) const override {
    if (weight().real() > 0.0) return cotangent_ext_pos(a_, x, tol, max_depth);
    return Form::extension(x, tol, max_depth);
  }

 private:
  Complex a_;
  QmfSpec spec_;
};

class KontsevichForm final : public Form {
 public:
  KontsevichForm() : spec_(kontsevich_spec()) {}
  std::string id() const override { return "kontsevich"; }
  std::string describe() const override { return "kontsevich"; }
  Complex weight() const override { return 1.5; }
  RootOfUnity twist() const override { return {1, 24}; }
  std::function<Complex(std::int64_t)> residue_evaluator(std::int64_t q) const override {
    auto kernel = kontsevich_kernel(q);
    return [kernel](std::int64_t b) { return (*kernel)(b); };
  }
  const QmfSpec& spec() const override { return spec_; }

 private:
  QmfSpec spec_;
};

class EichlerForm final : public Form {
 public:
  explicit EichlerForm(const FormParams& p) {
    CuspForm form = p.coefficient_file.empty() ? delta_cusp_form() : read_cusp_form(p.coefficient_file, p.cusp_weight);
    label_ = form.label;
    g_ = std::make_shared<const EichlerIntegral>(form);
    if (!(g_->tail_bound() < p.tol)) {
      std::ostringstream os;
      os << "Eichler truncation: tail bound " << g_->tail_bound() << " exceeds tol " << p.tol;
      throw TruncationError(os.str());
    }
    spec_ = eichler_spec(g_);
  }
  std::string id() const override { return "eichler"; }
  std::string describe() const override { return "eichler " + label_ + " k=" + std::to_string(g_->weight()); }
  Complex weight() const override { return 2.0 - g_->weight(); }
  std::function<Complex(std::int64_t)> residue_evaluator(std::int64_t q) const override {
    auto g = g_;
    return [g, q](std::int64_t b) { return (*g)(Rational(b, q)).value; };
  }
  const QmfSpec& spec() const override { return spec_; }

 private:
  std::string label_;
  std::shared_ptr<const EichlerIntegral> g_;
  QmfSpec spec_;
};

class AkdForm final : public Form {
 public:
  explicit AkdForm(const FormParams& p)
      : k_(p.akd_k), D_(p.akd_D), range_(p.akd_range), depth_(a_kd_depth_for(p.akd_k, p.akd_D, p.tol)),
        spec_(akd_spec(p.akd_k, p.akd_D, p.tol, p.akd_range)) {}
  std::string id() const override { return "akd"; }
  std::string describe() const override { return "akd k=" + std::to_string(k_) + " D=" + std::to_string(D_); }
  Complex weight() const override { return -2.0 * k_; }
  std::function<Complex(std::int64_t)> residue_evaluator(std::int64_t q) const override {
    return [k = k_, D = D_, depth = depth_, range = range_, q](std::int64_t b) {
      return Complex(a_kd(k, D, Rational(b, q), depth, range).value, 0.0);
    };
  }
  const QmfSpec& spec() const override { return spec_; }

 private:
  int k_;
  std::int64_t D_;
  BRange range_;
  std::int64_t depth_;
  QmfSpec spec_;
};

}  // namespace

std::vector<std::string> form_ids() { return {"cotangent", "kontsevich", "eichler", "akd"}; }

std::unique_ptr<Form> make_form(const std::string& id, const FormParams& params) {
  if (id == "cotangent") return std::make_unique<CotangentForm>(params.a);
  if (id == "kontsevich") return std::make_unique<KontsevichForm>();
  if (id == "eichler") return std::make_unique<EichlerForm>(params);
  if (id == "akd") return std::make_unique<AkdForm>(params);
  throw DomainError("unknown form id: " + id);
}

}  // namespace qmf
