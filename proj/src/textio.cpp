#include "nusim/textio.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace nusim {

std::string format_real(Real v) {
  char buf[40];
  // shortest representation that parses back to the same double
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

std::vector<std::string> split_line(std::istream& is, const char* what) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) break;
  }
  if (line.empty()) throw ConfigError(std::string("unexpected end of input reading ") + what);
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

std::vector<std::string> strip_prefix(std::vector<std::string> toks, const char* prefix) {
  if (toks.empty() || toks.front() != prefix) {
    throw ConfigError(std::string("expected line starting with ") + prefix);
  }
  toks.erase(toks.begin());
  return toks;
}

Real parse_real(const std::string& s) {
  char* end = nullptr;
  const Real v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError("bad number: " + s);
  return v;
}

}  // namespace

void write_pmf(std::ostream& os, const Pmf& p) {
  for (Index i = 0; i < p.size(); ++i) os << (i ? " " : "") << p.alphabet().label(i);
  os << "\n";
  for (Index i = 0; i < p.size(); ++i) os << (i ? " " : "") << format_real(p(i));
  os << "\n";
}

Pmf read_pmf(std::istream& is) {
  const auto symbols = split_line(is, "pmf symbols");
  const auto values = split_line(is, "pmf values");
  if (symbols.size() != values.size()) throw ConfigError("pmf: symbol/value count mismatch");
  Vec mass(Index(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) mass(Index(i)) = parse_real(values[i]);
  return Pmf(Alphabet(symbols), std::move(mass));
}

void write_channel(std::ostream& os, const Channel& ch) {
  os << "in:";
  for (const auto& s : ch.input_alphabet().labels()) os << " " << s;
  os << "\nout:";
  for (const auto& s : ch.output_alphabet().labels()) os << " " << s;
  os << "\n";
  for (Index i = 0; i < ch.input_alphabet().size(); ++i) {
    for (Index j = 0; j < ch.output_alphabet().size(); ++j) {
      os << (j ? " " : "") << format_real(ch(j, i));
    }
    os << "\n";
  }
}

Channel read_channel(std::istream& is) {
  const auto in_syms = strip_prefix(split_line(is, "channel inputs"), "in:");
  const auto out_syms = strip_prefix(split_line(is, "channel outputs"), "out:");
  Mat rows(Index(in_syms.size()), Index(out_syms.size()));
  for (std::size_t i = 0; i < in_syms.size(); ++i) {
    const auto values = split_line(is, "channel row");
    if (values.size() != out_syms.size()) throw ConfigError("channel: row width mismatch");
    for (std::size_t j = 0; j < values.size(); ++j) {
      rows(Index(i), Index(j)) = parse_real(values[j]);
    }
  }
  return Channel(Alphabet(in_syms), Alphabet(out_syms), std::move(rows));
}

void write_joint(std::ostream& os, const JointPmf& j) {
  for (Index v = 0; v < j.num_vars(); ++v) {
    os << "var:";
    for (const auto& s : j.axis(v).labels()) os << " " << s;
    os << "\n";
  }
  if (j.num_vars() == 2) {
    for (Index a = 0; a < j.dim(0); ++a) {
      for (Index b = 0; b < j.dim(1); ++b) os << (b ? " " : "") << format_real(j.at2(a, b));
      os << "\n";
    }
  } else {
    for (Index a = 0; a < j.dim(0); ++a) {
      if (a) os << "\n";
      for (Index b = 0; b < j.dim(1); ++b) {
        for (Index c = 0; c < j.dim(2); ++c) os << (c ? " " : "") << format_real(j.at3(a, b, c));
        os << "\n";
      }
    }
  }
}

JointPmf read_joint(std::istream& is) {
  // gather var: lines first
  std::vector<Alphabet> axes;
  std::string line;
  std::streampos mark;
  std::vector<std::vector<Real>> rows;
  while (true) {
    mark = is.tellg();
    if (!std::getline(is, line)) break;
    if (line.rfind("var:", 0) == 0) {
      std::istringstream ss(line.substr(4));
      std::vector<std::string> syms;
      std::string t;
      while (ss >> t) syms.push_back(t);
      axes.emplace_back(syms);
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<Real> vals;
    std::string t;
    while (ss >> t) vals.push_back(parse_real(t));
    rows.push_back(std::move(vals));
  }
  if (axes.size() < 2 || axes.size() > 3) throw ConfigError("joint: need 2 or 3 var lines");
  Index cells = 1;
  for (const auto& a : axes) cells *= a.size();
  Vec mass(cells);
  Index k = 0;
  for (const auto& r : rows) {
    for (Real v : r) {
      if (k >= cells) throw ConfigError("joint: too many values");
      mass(k++) = v;
    }
  }
  if (k != cells) throw ConfigError("joint: value count mismatch");
  return JointPmf(std::move(axes), std::move(mass));
}

void write_codebook(std::ostream& os, const Codebook& cb) {
  for (Index r = 0; r < cb.rows(); ++r) {
    for (Index c = 0; c < cb.cols(); ++c) {
      os << r << " " << c;
      for (Symbol s : cb.word(r, c)) os << " " << cb.alphabet().label(s);
      os << "\n";
    }
  }
}

void write_emulator(std::ostream& os, const ConditionalEmulator& em) {
  for (Index c = 0; c < em.num_conditions(); ++c) {
    const SeededSampler& s = em.sampler(c);
    for (Index seed = 0; seed < em.seed_bins(); ++seed) {
      os << c << " " << seed << " " << s.target().alphabet().label(s.sample(seed)) << "\n";
    }
  }
}

}  // namespace nusim
