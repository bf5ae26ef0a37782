#include "blt/signal.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace blt::signal {

void write_csv(std::ostream& out, const SampledSignal& f) {
  out << "t,re,im\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << f.position(i) << ',' << f.samples[i].real() << ',' << f.samples[i].imag() << '\n';
  }
}

SampledSignal read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("signal csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,re,im") throw std::invalid_argument("signal csv: expected header 't,re,im'");

  std::vector<double> ts;
  std::vector<Complex> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    double t = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> t >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw std::invalid_argument("signal csv: malformed row at line " + std::to_string(lineno));
    }
    if (!std::isfinite(t) || !std::isfinite(re) || !std::isfinite(im)) {
      throw std::invalid_argument("signal csv: non-finite value at line " + std::to_string(lineno));
    }
    ts.push_back(t);
    values.emplace_back(re, im);
  }
  if (values.size() < 2) throw std::invalid_argument("signal csv: need at least two samples");

  const double step = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  if (!(step > 0.0)) throw GridError("signal csv: t must be increasing");
  for (std::size_t i = 1; i < ts.size(); ++i) {
    // Relative 1e-12 in the spacing, plus the rounding already present in the printed abscissae.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(ts[i]), std::abs(ts[i - 1]));
    if (std::abs((ts[i] - ts[i - 1]) - step) > 1e-12 * step + slack) {
      throw GridError("signal csv: non-constant spacing at row " + std::to_string(i + 1));
    }
  }
  SampledSignal out;
  out.start = ts.front();
  out.step = step;
  out.samples = std::move(values);
  return out;
}

}  // namespace blt::signal
