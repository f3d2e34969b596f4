#include "qmf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qmf/errors.hpp"

namespace qmf {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw DomainError("malformed number: " + s);
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Complex parse_complex(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw DomainError("empty complex literal");
  if (text.back() != 'i') return {parse_double(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not the leading one and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_double(body.substr(0, split)), imag_of(body.substr(split))};
}

std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  if (z.imag() != 0.0) {
    if (!std::signbit(z.imag())) s += "+";
    s += format_double(z.imag()) + "i";
  }
  return s;
}

void write_sample_csv(std::ostream& os, const EmpiricalSample& sample) {
  os << kSampleSchema << '\n' << "index,re,im\n";
  for (std::size_t i = 0; i < sample.values.size(); ++i) {
    os << i << ',' << format_double(sample.values[i].real()) << ',' << format_double(sample.values[i].imag()) << '\n';
  }
}

EmpiricalSample read_sample_csv(std::istream& is) {
  EmpiricalSample s;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "index,re,im") throw DomainError("sample CSV: expected header index,re,im");
      header = true;
      continue;
    }
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw DomainError("sample CSV: malformed row");
    s.values.emplace_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1)), parse_double(line.substr(c2 + 1)));
  }
  if (!header) throw DomainError("sample CSV: missing header");
  s.meta.size = s.values.size();
  return s;
}

std::string sidecar_json(const SampleMeta& meta) {
  nlohmann::ordered_json j;
  j["schema"] = "qmflab-sample/1";
  j["form"] = meta.form;
  j["params"] = meta.params;
  j["q"] = meta.q;
  j["size"] = meta.size;
  j["normalization"] = meta.normalization;
  j["angle"] = meta.angle ? nlohmann::ordered_json(*meta.angle) : nlohmann::ordered_json(nullptr);
  j["seed"] = meta.seed ? nlohmann::ordered_json(*meta.seed) : nlohmann::ordered_json(nullptr);
  j["dropped"] = meta.dropped;
  j["rejected"] = meta.rejected;
  return j.dump(2) + "\n";
}

void write_ecdf_csv(std::ostream& os, const Ecdf& F) {
  os << kEcdfSchema << '\n' << "t,F\n";
  const auto& p = F.points();
  const double n = static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i + 1 < p.size() && p[i + 1] == p[i]) continue;
    os << format_double(p[i]) << ',' << format_double(static_cast<double>(i + 1) / n) << '\n';
  }
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void SvgPlot::add_scatter(std::vector<double> xs, std::vector<double> ys, std::string colour) {
  series_.push_back({false, std::move(xs), std::move(ys), std::move(colour)});
}

void SvgPlot::add_step(std::vector<double> xs, std::vector<double> ys, std::string colour) {
  series_.push_back({true, std::move(xs), std::move(ys), std::move(colour)});
}

namespace {

std::string fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string SvgPlot::render(int width, int height) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (double x : s.xs) { xmin = std::min(xmin, x); xmax = std::max(xmax, x); }
    for (double y : s.ys) { ymin = std::min(ymin, y); ymax = std::max(ymax, y); }
  }
  if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
  if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
  const double ml = 60, mr = 20, mt = 36, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(title_) << "</text>\n"
     << "<rect x=\"" << fixed(ml) << "\" y=\"" << fixed(mt) << "\" width=\"" << fixed(pw) << "\" height=\""
     << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0, fy = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << fixed(X(fx)) << "\" y=\"" << fixed(mt + ph + 16)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(fx)
       << "</text>\n";
    os << "<text x=\"" << fixed(ml - 6) << "\" y=\"" << fixed(Y(fy) + 3)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(fy) << "</text>\n";
  }
  os << "<text x=\"" << fixed(ml + pw / 2) << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(xlabel_) << "</text>\n"
     << "<text x=\"14\" y=\"" << fixed(mt + ph / 2) << "\" transform=\"rotate(-90 14 " << fixed(mt + ph / 2)
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(ylabel_) << "</text>\n";
  for (const auto& s : series_) {
    const std::size_t n = std::min(s.xs.size(), s.ys.size());
    if (s.step) {
      os << "<path fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1\" d=\"";
      for (std::size_t i = 0; i < n; ++i) {
        const double prev = i == 0 ? ymin : s.ys[i - 1];
        os << (i == 0 ? "M" : " L") << fixed(X(s.xs[i])) << ',' << fixed(Y(prev)) << " L" << fixed(X(s.xs[i]))
           << ',' << fixed(Y(s.ys[i]));
      }
      os << "\"/>\n";
    } else {
      os << "<g fill=\"" << s.colour << "\">\n";
      for (std::size_t i = 0; i < n; ++i) {
        os << "<circle cx=\"" << fixed(X(s.xs[i])) << "\" cy=\"" << fixed(Y(s.ys[i])) << "\" r=\"1\"/>\n";
      }
      os << "</g>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qmf
