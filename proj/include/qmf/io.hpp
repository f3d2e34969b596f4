#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qmf/distribution.hpp"
#include "qmf/special_functions.hpp"

namespace qmf {

// Shortest decimal text that parses back to the same binary64.
std::string format_double(double x);

// "1.5", "-0.5+0.51i", "2i", "-i".
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

inline constexpr const char* kSampleSchema = "# schema=qmflab-sample/1";
inline constexpr const char* kEcdfSchema = "# schema=qmflab-ecdf/1";

void write_sample_csv(std::ostream& os, const EmpiricalSample& sample);
EmpiricalSample read_sample_csv(std::istream& is);
std::string sidecar_json(const SampleMeta& meta);

void write_ecdf_csv(std::ostream& os, const Ecdf& F);

// key=value lines; '#' starts a comment; surrounding blanks are trimmed.
std::map<std::string, std::string> read_config(const std::string& path);

// Minimal SVG 1.1 plot with scatter and step series.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel);
  void add_scatter(std::vector<double> xs, std::vector<double> ys, std::string colour = "#1f4e9c");
  // Right-continuous step function through (xs[i], ys[i]), xs sorted.
  void add_step(std::vector<double> xs, std::vector<double> ys, std::string colour = "#b03a2e");
  std::string render(int width = 640, int height = 480) const;

 private:
  struct Series {
    bool step;
    std::vector<double> xs, ys;
    std::string colour;
  };
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

}  // namespace qmf
