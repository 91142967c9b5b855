#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cardcsp/poly.hpp"

namespace cardcsp {

struct Constraint {
  std::vector<std::uint32_t> vars;
  // Satisfying patterns, each of length vars.size(), entries +1 / -1.
  std::vector<std::vector<int>> patterns;

  bool satisfied_by(const Assignment& a) const;
};

class CspInstance {
 public:
  CspInstance(std::uint32_t n, std::uint32_t max_arity);

  std::uint32_t n() const { return n_; }
  std::uint32_t max_arity() const { return max_arity_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t size() const { return constraints_.size(); }

  // Validates and appends. Duplicate constraints are allowed.
  void add_constraint(Constraint constraint);

 private:
  std::uint32_t n_;
  std::uint32_t max_arity_;
  std::vector<Constraint> constraints_;
};

// Requires sum_i x_i = (1 - 2p) n, i.e. exactly p n variables set to -1.
class GlobalCardinality {
 public:
  GlobalCardinality(std::uint32_t n, const Rational& p);

  std::uint32_t n() const { return n_; }
  const Rational& p() const { return p_; }
  std::uint32_t minus_count() const { return minus_; }
  std::uint32_t plus_count() const { return n_ - minus_; }
  std::int64_t target_sum() const {
    return static_cast<std::int64_t>(n_) - 2 * static_cast<std::int64_t>(minus_);
  }
  bool admits(const Assignment& a) const;

 private:
  std::uint32_t n_;
  Rational p_;
  std::uint32_t minus_;
};

struct ParsedInstance {
  CspInstance instance;
  GlobalCardinality cardinality;
};

ParsedInstance parse_instance(const std::string& text);
ParsedInstance read_instance_file(const std::string& path);
std::string format_instance(const CspInstance& instance, const GlobalCardinality& cardinality);

// Chi-basis polynomial whose value is the number of satisfied constraints.
MultilinearPoly to_polynomial(const CspInstance& instance);
std::uint64_t constraint_count(const CspInstance& instance, const Assignment& a);

// Cut constraint x_u != x_v.
Constraint cut_constraint(std::uint32_t u, std::uint32_t v);

}  // namespace cardcsp
