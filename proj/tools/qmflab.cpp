// qmflab: command-line front end for the qmflab library.
#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qmf/checks.hpp"
#include "qmf/continued_fraction.hpp"
#include "qmf/distribution.hpp"
#include "qmf/engine.hpp"
#include "qmf/errors.hpp"
#include "qmf/forms.hpp"
#include "qmf/io.hpp"

namespace fs = std::filesystem;
using namespace qmf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Machine-readable error line on stderr.
int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << "error\tkind=" << kind << "\tmessage=" << message << "\n";
  return code;
}

std::string join_ints(const std::vector<mpz_class>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i].get_str();
  return s;
}

void apply_param(FormParams& p, const std::string& key, const std::string& value) {
  if (key == "a") p.a = parse_complex(value);
  else if (key == "k") p.akd_k = std::stoi(value);
  else if (key == "D") p.akd_D = std::stoll(value);
  else if (key == "range") {
    if (value == "all") p.akd_range = BRange::all;
    else if (value == "nonnegative") p.akd_range = BRange::nonnegative;
    else throw DomainError("range must be all or nonnegative");
  } else if (key == "coefficients") p.coefficient_file = value;
  else if (key == "weight") p.cusp_weight = std::stoi(value);
  else if (key == "tol") p.tol = std::stod(value);
  else throw DomainError("unknown form parameter: " + key);
}

// Parameters come from an optional config file, then key=value arguments.
FormParams build_params(const std::string& config, const std::vector<std::string>& kv) {
  FormParams p;
  if (!config.empty()) {
    for (const auto& [k, v] : read_config(config)) {
      if (k.rfind("fig4.", 0) != 0) apply_param(p, k, v);
    }
  }
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("expected key=value parameter, got " + item);
    apply_param(p, item.substr(0, eq), item.substr(eq + 1));
  }
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << text;
}

void write_sample(const fs::path& path, const EmpiricalSample& s) {
  std::ostringstream os;
  write_sample_csv(os, s);
  write_text(path, os.str());
  write_text(path.string() + ".json", sidecar_json(s.meta));
}

void write_ecdf_figure(const fs::path& dir, const std::string& name, const EmpiricalSample& s, const std::string& title) {
  const Ecdf F = ecdf(s, 0.0);
  std::ostringstream os;
  write_ecdf_csv(os, F);
  write_text(dir / (name + ".csv"), os.str());
  std::vector<double> xs, ys;
  const auto& p = F.points();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i + 1 < p.size() && p[i + 1] == p[i]) continue;
    xs.push_back(p[i]);
    ys.push_back(static_cast<double>(i + 1) / static_cast<double>(p.size()));
  }
  SvgPlot plot(title, "t", "F(t)");
  plot.add_step(xs, ys);
  write_text(dir / (name + ".svg"), plot.render());
}

void figure_fig1(const fs::path& dir) {
  std::vector<double> xs, re, im;
  std::ostringstream os;
  os << "# schema=qmflab-fig1/1\nx,re,im\n";
  for (long q = 1; q <= 101; ++q) {
    for (long b = 1; b <= q; ++b) {
      if (std::gcd(b, q) != 1) continue;
      const Rational x{mpz_class(b), mpz_class(q)};
      const Complex v = kontsevich_phistar(x);
      xs.push_back(x.to_double());
      re.push_back(v.real());
      im.push_back(v.imag());
    }
  }
  // Sort by x for a stable column order.
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> sx, sre, sim;
  for (auto i : idx) {
    os << format_double(xs[i]) << ',' << format_double(re[i]) << ',' << format_double(im[i]) << '\n';
    sx.push_back(xs[i]);
    sre.push_back(re[i]);
    sim.push_back(im[i]);
  }
  write_text(dir / "fig1.csv", os.str());
  SvgPlot pr("Re phi-star, den <= 101", "x", "Re");
  pr.add_scatter(sx, sre);
  write_text(dir / "fig1_re.svg", pr.render());
  SvgPlot pi("Im phi-star, den <= 101", "x", "Im");
  pi.add_scatter(sx, sim);
  write_text(dir / "fig1_im.svg", pi.render());
}

struct Panel {
  Complex a;
  std::int64_t q;
  std::int64_t N;
};

std::map<std::string, Panel> default_panels() {
  return {{"a", {Complex(-0.7), 24001, 10000}},        {"b", {Complex(-3.2), 2001, 2000}},
          {"c", {Complex(-0.5), 24001, 3000}},         {"d", {Complex(-0.5, 0.51), 24001, 3000}},
          {"e", {Complex(0.0), 24001, 3000}},          {"f", {Complex(0.5), 24001, 3000}},
          {"g", {Complex(0.5, 1.39), 24001, 3000}},    {"h", {Complex(1.5), 24001, 3000}}};
}

// Config keys fig4.<panel> = a,q,N override the built-in panels.
std::map<std::string, Panel> load_panels(const std::string& config) {
  auto panels = default_panels();
  if (config.empty()) return panels;
  for (const auto& [k, v] : read_config(config)) {
    if (k.rfind("fig4.", 0) != 0) continue;
    std::vector<std::string> parts;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3) throw DomainError("fig4 panel " + k + " needs a,q,N");
    panels[k.substr(5)] = {parse_complex(parts[0]), std::stoll(parts[1]), std::stoll(parts[2])};
  }
  return panels;
}

// N residues spread over (0, q); for Re(a) > -1 the point is placed at bar(b)/q with value q^{-1-a} c_a(b/q).
void figure_fig4(const fs::path& dir, const std::string& name, const Panel& p) {
  if (p.q < 2 || p.N < 1) throw DomainError("fig4 panel needs q >= 2 and N >= 1");
  const bool positive = (1.0 + p.a).real() > 0.0;
  const auto kernel = cotangent_kernel(p.a, p.q);
  const Complex scale = positive ? std::exp(-(1.0 + p.a) * std::log(static_cast<double>(p.q))) : Complex(1.0);
  std::vector<std::int64_t> residues;
  std::int64_t last = 0;
  for (std::int64_t i = 1; i <= p.N; ++i) {
    std::int64_t b = std::max(last + 1, (i * p.q) / (p.N + 1));
    while (b < p.q && fast::gcd(b, p.q) != 1) ++b;
    if (b >= p.q) break;
    residues.push_back(b);
    last = b;
  }
  std::vector<double> xs(residues.size()), ys(residues.size()), yi(residues.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const std::int64_t b = residues[i];
    const Complex v = scale * (*kernel)(b);
    const std::int64_t pos = positive ? fast::inverse_mod(b, p.q) : b;
    xs[i] = static_cast<double>(pos) / static_cast<double>(p.q);
    ys[i] = v.real();
    yi[i] = v.imag();
  }
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  auto permute = [&](std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (auto i : order) out.push_back(v[i]);
    v.swap(out);
  };
  permute(xs);
  permute(ys);
  permute(yi);
  std::ostringstream os;
  os << "# schema=qmflab-fig4/1 a=" << format_complex(p.a) << " q=" << p.q << " N=" << p.N << "\nx,re,im\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << format_double(xs[i]) << ',' << format_double(ys[i]) << ',' << format_double(yi[i]) << '\n';
  }
  write_text(dir / (name + ".csv"), os.str());
  SvgPlot plot("c_a sample points, a=" + format_complex(p.a) + ", q=" + std::to_string(p.q), "x", "Re");
  plot.add_scatter(xs, ys);
  write_text(dir / (name + ".svg"), plot.render());
}

void set_threads_from_env() {
  if (const char* env = std::getenv("QMFLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  set_threads_from_env();
  CLI::App app{"qmflab: periodic quantum modular forms laboratory"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "key=value file with form parameters and fig4 panels")->check(CLI::ExistingFile);

  std::string cf_arg;
  auto* cf = app.add_subcommand("cf", "continued fraction data of a rational");
  cf->add_option("x", cf_arg, "p/q")->required();

  std::string eval_form, eval_x;
  std::vector<std::string> eval_params;
  auto* eval = app.add_subcommand("eval", "evaluate a form at a rational");
  eval->add_option("form", eval_form)->required();
  eval->add_option("x", eval_x, "p/q")->required();
  eval->add_option("params", eval_params, "key=value form parameters, e.g. a=-0.5+0.51i");

  std::string scan_form_id, scan_norm = "raw", scan_out;
  std::int64_t scan_q = 0;
  std::vector<std::string> scan_params;
  auto* scan = app.add_subcommand("scan", "values at all reduced b/q");
  scan->add_option("form", scan_form_id)->required();
  scan->add_option("params", scan_params, "key=value form parameters");
  scan->add_option("--q", scan_q)->required();
  scan->add_option("--norm", scan_norm)->check(CLI::IsMember({"raw", "qk"}));
  scan->add_option("--out", scan_out)->required();

  std::string ecdf_in, ecdf_out;
  double angle = 0.0;
  auto* ecdf_cmd = app.add_subcommand("ecdf", "empirical CDF of a projected sample");
  ecdf_cmd->add_option("--in", ecdf_in)->required()->check(CLI::ExistingFile);
  ecdf_cmd->add_option("--angle", angle, "projection angle xi");
  ecdf_cmd->add_option("--out", ecdf_out)->required();

  std::string fig_name, fig_out;
  auto* figure = app.add_subcommand("figure", "regenerate figure data");
  figure->add_option("name", fig_name, "fig1 | fig3a | fig3b | fig4:<panel>")->required();
  figure->add_option("--out", fig_out)->required();

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "run invariant suites");
  check->add_option("suite", suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    if (*cf) {
      const Rational x = Rational::parse(cf_arg);
      const CFExpansion e = cf_expand(x);
      std::cout << "x = " << x << "\nexpansion = " << e.str() << "\n";
      if (x.sign() > 0 && x <= Rational(1)) {
        const CFExpansion odd = cf_odd(x);
        std::cout << "odd expansion = " << odd.str() << "\n"
                  << "u = " << join_ints(backward_denominators(odd.quotients)) << "\n"
                  << "v = " << join_ints(continuants(odd)) << "\n"
                  << "bar = " << bar_invert(x) << "\n"
                  << "sigma = " << sigma_phase(x).get_str() << "\n";
      }
      std::cout << "dedekind_sum = " << dedekind_sum(x) << "\n";
      return kExitOk;
    }
    if (*eval) {
      const FormParams params = build_params(config, eval_params);
      const auto form = make_form(eval_form, params);
      const Rational x = Rational::parse(eval_x);
      const Complex engine = eval_f(form->spec(), x);
      std::cout << "form = " << form->describe() << "\nx = " << x << "\nengine = " << format_complex(engine) << "\n";
      if (form->spec().direct) std::cout << "direct = " << format_complex(form->spec().direct(x)) << "\n";
      // The cotangent engine runs on the completed c~_a; report the plain sum as well.
      if (form->id() == "cotangent" && x.den().fits_slong_p()) {
        const std::int64_t q = x.den().get_si();
        const std::int64_t b = mpz_class(x.num() % x.den()).get_si();
        std::cout << "c_a = " << format_complex(cotangent_c(params.a, b, q)) << "\n";
      }
      std::cout << "re = " << format_double(engine.real()) << "\nim = " << format_double(engine.imag()) << "\n";
      return kExitOk;
    }
    if (*scan) {
      const auto form = make_form(scan_form_id, build_params(config, scan_params));
      const auto s = scan_form(*form, scan_q, parse_normalization(scan_norm));
      write_sample(scan_out, s);
      std::cout << "wrote " << s.values.size() << " values to " << scan_out << "\n";
      return kExitOk;
    }
    if (*ecdf_cmd) {
      std::ifstream in(ecdf_in);
      const EmpiricalSample s = read_sample_csv(in);
      std::ostringstream os;
      write_ecdf_csv(os, ecdf(s, angle));
      write_text(ecdf_out, os.str());
      return kExitOk;
    }
    if (*figure) {
      const fs::path dir(fig_out);
      fs::create_directories(dir);
      if (fig_name == "fig1") {
        figure_fig1(dir);
      } else if (fig_name == "fig3a" || fig_name == "fig3b") {
        FormParams p;
        p.a = fig_name == "fig3a" ? Complex(-2.0) : Complex(0.5);
        const auto form = make_form("cotangent", p);
        const auto norm = fig_name == "fig3a" ? Normalization::raw : Normalization::q_pow_minus_k;
        const auto s = scan_form(*form, 5000, norm);
        write_sample(dir / (fig_name + "_sample.csv"), s);
        write_ecdf_figure(dir, fig_name, s, "ECDF, " + form->describe() + ", q = 5000");
      } else if (fig_name.rfind("fig4:", 0) == 0) {
        const auto panels = load_panels(config);
        const std::string key = fig_name.substr(5);
        if (key == "all") {
          for (const auto& [k, p] : panels) figure_fig4(dir, "fig4_" + k, p);
        } else {
          const auto it = panels.find(key);
          if (it == panels.end()) return fail("usage", "unknown fig4 panel: " + key, kExitUsage);
          figure_fig4(dir, "fig4_" + key, it->second);
        }
      } else {
        return fail("usage", "unknown figure: " + fig_name, kExitUsage);
      }
      std::cout << "wrote " << fig_name << " to " << dir.string() << "\n";
      return kExitOk;
    }
    if (*check) {
      const auto results = run_checks(suite);
      std::size_t failed = 0;
      for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
        std::cout << (r.passed ? "PASS" : "FAIL") << "\t" << r.suite << "\t" << r.name << "\t" << r.detail << "\n";
      }
      std::cout << (results.size() - failed) << "/" << results.size() << " checks passed\n";
      return failed == 0 ? kExitOk : kExitCheckFailed;
    }
  } catch (const DomainError& e) {
    return fail("domain", e.what(), kExitUsage);
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), kExitCheckFailed);
  }
  return kExitUsage;
}
