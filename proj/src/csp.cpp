#include "cardcsp/csp.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "cardcsp/errors.hpp"

namespace cardcsp {

bool Constraint::satisfied_by(const Assignment& a) const {
  for (const auto& pattern : patterns) {
    bool match = true;
    for (std::size_t j = 0; j < vars.size() && match; ++j) match = a[vars[j]] == pattern[j];
    if (match) return true;
  }
  return false;
}

CspInstance::CspInstance(std::uint32_t n, std::uint32_t max_arity)
    : n_(n), max_arity_(max_arity) {
  if (n == 0) throw InputError("instance needs at least one variable");
}

void CspInstance::add_constraint(Constraint constraint) {
  const auto& vars = constraint.vars;
  if (vars.empty()) throw InputError("constraint has no variables");
  if (vars.size() > max_arity_) throw InputError("constraint arity exceeds the declared maximum");
  std::set<std::uint32_t> seen;
  for (std::uint32_t v : vars) {
    if (v == 0 || v > n_) throw InputError("variable index out of range");
    if (!seen.insert(v).second) throw InputError("duplicate variable in constraint");
  }
  if (constraint.patterns.empty()) throw InputError("constraint has no satisfying pattern");
  std::set<std::vector<int>> distinct;
  for (const auto& pattern : constraint.patterns) {
    if (pattern.size() != vars.size()) throw InputError("pattern arity mismatch");
    for (int value : pattern) {
      if (value != 1 && value != -1) throw InputError("pattern entries must be +1 or -1");
    }
    if (!distinct.insert(pattern).second) throw InputError("duplicate pattern in constraint");
  }
  constraints_.push_back(std::move(constraint));
}

GlobalCardinality::GlobalCardinality(std::uint32_t n, const Rational& p) : n_(n), p_(p) {
  p_.canonicalize();
  if (p <= 0 || p >= 1) throw InputError("p must lie strictly between 0 and 1");
  Rational minus = p * n;
  if (minus.get_den() != 1) throw InputError("p*n is not an integer");
  minus_ = static_cast<std::uint32_t>(minus.get_num().get_ui());
}

bool GlobalCardinality::admits(const Assignment& a) const {
  return a.size() == n_ && a.count(-1) == minus_;
}

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
    long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + token + "'");
  }
}

}  // namespace

ParsedInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = tokenize(raw);
    if (!tokens.empty()) lines.emplace_back(line_no, std::move(tokens));
  }
  if (lines.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing header");

  const auto& [header_line, header] = lines.front();
  if (header.size() != 5 || header[0] != "csp") {
    throw ParseError(header_line, "header must read 'csp <n> <m> <d> <p_num>/<p_den>'");
  }
  const long n = parse_integer(header[1], header_line);
  const long m = parse_integer(header[2], header_line);
  const long d = parse_integer(header[3], header_line);
  if (n <= 0 || m < 0 || d <= 0) throw ParseError(header_line, "n and d must be positive, m >= 0");
  if (header[4].find('/') == std::string::npos) {
    throw ParseError(header_line, "p must be written as <num>/<den>");
  }
  Rational p;
  try {
    p = rational_from_string(header[4]);
  } catch (const InputError& e) {
    throw ParseError(header_line, e.what());
  }
  std::optional<GlobalCardinality> card;
  try {
    card.emplace(static_cast<std::uint32_t>(n), p);
  } catch (const InputError& e) {
    throw ParseError(header_line, e.what());
  }
  CspInstance instance(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(d));

  std::size_t pos = 1;
  while (pos < lines.size()) {
    const auto& [c_line, c_tokens] = lines[pos];
    if (c_tokens[0] != "c") throw ParseError(c_line, "expected a constraint line 'c <arity> ...'");
    if (c_tokens.size() < 2) throw ParseError(c_line, "constraint line lacks an arity");
    const long arity = parse_integer(c_tokens[1], c_line);
    if (arity <= 0 || arity > d) throw ParseError(c_line, "arity must lie in [1, d]");
    if (c_tokens.size() != static_cast<std::size_t>(arity) + 2) {
      throw ParseError(c_line, "constraint lists " + std::to_string(c_tokens.size() - 2) +
                                   " variables but declares arity " + std::to_string(arity));
    }
    Constraint constraint;
    for (long j = 0; j < arity; ++j) {
      const long v = parse_integer(c_tokens[2 + j], c_line);
      if (v <= 0 || v > n) throw ParseError(c_line, "variable index out of range");
      constraint.vars.push_back(static_cast<std::uint32_t>(v));
    }
    ++pos;
    while (pos < lines.size() && lines[pos].second[0] == "s") {
      const auto& [s_line, s_tokens] = lines[pos];
      if (s_tokens.size() != static_cast<std::size_t>(arity) + 1) {
        throw ParseError(s_line, "pattern arity mismatch");
      }
      std::vector<int> pattern;
      for (long j = 0; j < arity; ++j) {
        const long value = parse_integer(s_tokens[1 + j], s_line);
        if (value != 1 && value != -1) throw ParseError(s_line, "pattern entries must be +1 or -1");
        pattern.push_back(static_cast<int>(value));
      }
      constraint.patterns.push_back(std::move(pattern));
      ++pos;
    }
    try {
      instance.add_constraint(std::move(constraint));
    } catch (const InputError& e) {
      throw ParseError(c_line, e.what());
    }
  }
  if (instance.size() != static_cast<std::size_t>(m)) {
    throw ParseError(lines.back().first, "header declares " + std::to_string(m) +
                                             " constraints but the file has " +
                                             std::to_string(instance.size()));
  }
  return ParsedInstance{std::move(instance), *card};
}

ParsedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string format_instance(const CspInstance& instance, const GlobalCardinality& cardinality) {
  std::ostringstream out;
  out << "csp " << instance.n() << ' ' << instance.size() << ' ' << instance.max_arity() << ' '
      << cardinality.p().get_num() << '/' << cardinality.p().get_den() << '\n';
  for (const auto& c : instance.constraints()) {
    out << "c " << c.vars.size();
    for (auto v : c.vars) out << ' ' << v;
    out << '\n';
    for (const auto& pattern : c.patterns) {
      out << 's';
      for (int value : pattern) out << ' ' << value;
      out << '\n';
    }
  }
  return out.str();
}

MultilinearPoly to_polynomial(const CspInstance& instance) {
  MultilinearPoly f(instance.n(), Basis::chi());
  for (const auto& c : instance.constraints()) {
    const std::size_t arity = c.vars.size();
    const Rational scale(1, mpz_class(1) << static_cast<mp_bitcnt_t>(arity));
    // prod_j (1 + sigma_j x_j) expands to sum over positions R of prod_{j in R} sigma_j.
    for (std::uint32_t mask = 0; mask < (1U << arity); ++mask) {
      Rational coeff;
      for (const auto& pattern : c.patterns) {
        int sign = 1;
        for (std::size_t j = 0; j < arity; ++j) {
          if (mask & (1U << j)) sign *= pattern[j];
        }
        coeff += sign;
      }
      if (coeff == 0) continue;
      Subset set;
      for (std::size_t j = 0; j < arity; ++j) {
        if (mask & (1U << j)) set.push_back(c.vars[j]);
      }
      std::sort(set.begin(), set.end());
      f.add_term(set, QuadScalar(coeff * scale));
    }
  }
  return f;
}

std::uint64_t constraint_count(const CspInstance& instance, const Assignment& a) {
  if (a.size() != instance.n()) throw InputError("assignment length does not match instance");
  std::uint64_t count = 0;
  for (const auto& c : instance.constraints()) count += c.satisfied_by(a) ? 1 : 0;
  return count;
}

Constraint cut_constraint(std::uint32_t u, std::uint32_t v) {
  return Constraint{{u, v}, {{-1, 1}, {1, -1}}};
}

}  // namespace cardcsp
