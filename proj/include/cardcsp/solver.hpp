#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/csp.hpp"
#include "cardcsp/errors.hpp"
#include "cardcsp/rounding.hpp"

namespace cardcsp {

struct SolverConfig {
  std::uint64_t enum_cap = 10'000'000;  // brute-force oracle cap
  std::size_t dense_cap = 5000;         // dense spectra matrices
  double float_tol = 1e-9;
  Rational p0 = Rational(1, 100);
  std::size_t kernel_cap = 40;
  std::size_t rational_cap = 400;  // exact projection unknowns
  std::size_t threads = 1;
  std::optional<Rational> gamma;  // defaults to 2^-d
};

// key = value lines; '#' starts a comment. Keys are the SolverConfig fields.
SolverConfig parse_config(const std::string& text);
SolverConfig read_config_file(const std::string& path);

enum class Answer { certified_above, solved_exactly, trivial };
enum class Branch { trivial, large_variance, small_variance };

const char* to_string(Answer answer);
const char* to_string(Branch branch);

struct KernelReport {
  std::string path;  // "bisection" or "global"
  RoundingOutcome rounding;
  bool projection_exact = true;
  Rational blowup_bound;
  std::optional<bool> blowup_within_bound;
  bool h_on_lattice = true;
  Rational kernel_bound;
  bool kernel_within_bound = true;
  std::vector<std::string> warnings;
};

struct Verdict {
  bool yes = false;
  Answer answer = Answer::trivial;
  Branch branch = Branch::trivial;
  Rational t;
  Rational avg;
  Rational variance;
  QuadScalar threshold;
  std::optional<Rational> opt;
  std::optional<Assignment> witness;
  std::optional<std::vector<std::uint32_t>> kernel;
  std::optional<KernelReport> kernel_report;
  std::vector<std::string> warnings;
};

// Thrown when the kernel exceeds the enumeration cap; carries the kernel so
// callers can process it elsewhere.
class KernelTooLarge : public ResourceError {
 public:
  KernelTooLarge(const std::string& message, std::vector<std::uint32_t> kernel)
      : ResourceError(message), kernel_(std::move(kernel)) {}
  const std::vector<std::uint32_t>& kernel() const { return kernel_; }

 private:
  std::vector<std::uint32_t> kernel_;
};

Rational average(const CspInstance& instance, const GlobalCardinality& card);

// Fourth-moment constant b: 12 d 9^{2d} at p = 1/2, and
// 12 d^{3/2} (256 (((1-p)/p)^2 + (p/(1-p))^2)^2)^d otherwise.
QuadScalar fourth_moment_constant(std::size_t d, const Rational& p);
// 4 b t^2, the variance above which some slice point reaches the mean + t.
QuadScalar certification_threshold(std::size_t d, const Rational& p, const Rational& t);

// Active-variable bound of the bisection path at the given variance:
// d nonzero-coefficient variables times 7^d * 2 Var / (gamma / (d! ... 2!))^2.
Rational bisection_kernel_bound(std::size_t d, const Rational& variance, const Rational& gamma);

struct KernelOptimum {
  Rational opt;
  // Values of the kernel variables, in kernel order.
  std::vector<int> kernel_values;
  Assignment witness;
};

// Exact maximum of reduced + offset over assignments to the kernel variables
// that extend to the slice; ties go to the lexicographically smallest kernel
// assignment with -1 < +1. The witness fills the remaining +1 budget on the
// lowest-index non-kernel variables first.
KernelOptimum enumerate_kernel(const MultilinearPoly& reduced,
                               const std::vector<std::uint32_t>& kernel,
                               const GlobalCardinality& card, const Rational& offset,
                               const SolverConfig& config = {});

// Small-variance pipeline up to the kernel: null-space projection and
// bisection rounding at p = 1/2, the subset scan otherwise. Hypotheses of the
// rounding bounds that fail become warnings; the reduced polynomial is
// slice-equivalent to f regardless.
KernelReport extract_kernel(const MultilinearPoly& f, const GlobalCardinality& card,
                            const SolverConfig& config = {});

// Variance dichotomy on an arbitrary chi-basis polynomial f of degree <= d.
Verdict decide_polynomial(const MultilinearPoly& f, const GlobalCardinality& card,
                          const Rational& t, const SolverConfig& config = {});

// Decides OPT >= AVG + t for the instance; witnesses are checked against the
// constraint count.
Verdict decide(const CspInstance& instance, const GlobalCardinality& card, const Rational& t,
               const SolverConfig& config = {});

}  // namespace cardcsp
