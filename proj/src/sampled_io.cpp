#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "orbis/error.hpp"
#include "orbis/io.hpp"

namespace orbis {

double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

std::string format15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void write_csv(std::ostream& out, const SampledFunction& f) {
  out << f.variable << ",value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << format15(f.x(i)) << ',' << format15(f.values[i]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const LengthSpectrum& spectrum) {
  out << "length,multiplicity,word,primitive\n";
  for (const auto& e : spectrum.entries) {
    out << format15(e.length) << ',' << e.multiplicity << ',' << e.word << ",true\n";
  }
}

SampledFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidInput, "empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto comma = line.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::InvalidInput, "CSV header needs two columns");
  std::string variable = line.substr(0, comma);
  if (variable != "r" && variable != "t") {
    throw Error(ErrorCode::InvalidInput, "CSV variable must be r or t, got '" + variable + "'");
  }
  std::vector<double> xs, ys;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c = line.find(',');
    if (c == std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "CSV line " + std::to_string(lineno) + " has one column");
    }
    char* end = nullptr;
    const std::string a = line.substr(0, c), b = line.substr(c + 1);
    const double x = std::strtod(a.c_str(), &end);
    if (end == a.c_str() || *end != '\0') {
      throw Error(ErrorCode::InvalidInput, "bad number on CSV line " + std::to_string(lineno));
    }
    const double y = std::strtod(b.c_str(), &end);
    if (end == b.c_str() || *end != '\0') {
      throw Error(ErrorCode::InvalidInput, "bad number on CSV line " + std::to_string(lineno));
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  return from_samples(std::move(variable), xs, std::move(ys));
}

}  // namespace orbis
