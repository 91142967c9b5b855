#include <fstream>
#include <algorithm>
#include <optional>
#include <sstream>

#include "cardcsp/errors.hpp"
#include "cardcsp/poly.hpp"

namespace cardcsp {
namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

long parse_integer(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + token + "'");
  }
}

Rational parse_value(const std::string& token, std::size_t line) {
  try {
    return rational_from_string(token);
  } catch (const InputError& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

MultilinearPoly parse_polynomial(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::optional<MultilinearPoly> f;
  while (std::getline(in, raw)) {
    ++line;
    const auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    if (!f) {
      if (tokens[0] != "poly" || tokens.size() < 3) {
        throw ParseError(line, "header must read 'poly <n> chi' or 'poly <n> phi <p>'");
      }
      const long n = parse_integer(tokens[1], line);
      if (n <= 0) throw ParseError(line, "n must be positive");
      if (tokens[2] == "chi" && tokens.size() == 3) {
        f.emplace(static_cast<std::uint32_t>(n), Basis::chi());
      } else if (tokens[2] == "phi" && tokens.size() == 4) {
        const Rational p = parse_value(tokens[3], line);
        if (p <= 0 || p >= 1) throw ParseError(line, "p must lie strictly between 0 and 1");
        f.emplace(static_cast<std::uint32_t>(n), Basis::phi(p));
      } else {
        throw ParseError(line, "basis must be 'chi' or 'phi <p>'");
      }
      continue;
    }
    if (tokens[0] != "t" || tokens.size() < 2) throw ParseError(line, "expected 't <coeff> [var ...]'");
    const Rational coeff = parse_value(tokens[1], line);
    Subset set;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const long var = parse_integer(tokens[i], line);
      if (var <= 0 || var > static_cast<long>(f->n())) throw ParseError(line, "variable out of range");
      set.push_back(static_cast<std::uint32_t>(var));
    }
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw ParseError(line, "repeated variable in a term");
    }
    f->add_term(set, coeff);
  }
  if (!f) throw ParseError(line == 0 ? 1 : line, "missing header");
  return *f;
}

MultilinearPoly read_polynomial_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open polynomial file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_polynomial(buffer.str());
}

std::string format_polynomial(const MultilinearPoly& f) {
  std::ostringstream out;
  out << "poly " << f.n();
  if (f.basis().kind() == BasisKind::chi) {
    out << " chi\n";
  } else {
    out << " phi " << to_string(f.basis().bias()) << '\n';
  }
  for (const auto& [set, coeff] : f.terms()) {
    if (!coeff.is_rational()) throw InputError("cannot write an irrational coefficient");
    out << "t " << to_string(coeff.rational_part());
    for (std::uint32_t var : set) out << ' ' << var;
    out << '\n';
  }
  return out.str();
}

}  // namespace cardcsp
