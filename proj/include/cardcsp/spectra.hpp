#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/poly.hpp"

namespace cardcsp {

enum class FormKind { second_moment, variance };
enum class EntryMode { exact, simplified };

// Matrix indexed by sets of size <= d whose entries depend only on
// (|S|, |T|, |S cap T|). The second-moment form has E[phi_S phi_T]; the
// variance form subtracts delta_|S| delta_|T| and drops the empty set.
class SetSymmetricForm {
 public:
  SetSymmetricForm(std::uint32_t n, std::size_t d, const Rational& p, FormKind kind,
                   EntryMode mode = EntryMode::exact);

  std::uint32_t n() const { return dist_.n(); }
  std::size_t d() const { return d_; }
  const Rational& p() const { return dist_.p(); }
  FormKind kind() const { return kind_; }
  EntryMode mode() const { return mode_; }
  const CardinalDist& dist() const { return dist_; }

  QuadScalar entry(std::size_t s, std::size_t t, std::size_t common) const;
  // Row/column labels: sets ordered by size, then lexicographically.
  std::vector<Subset> index() const;

 private:
  CardinalDist dist_;
  std::size_t d_;
  FormKind kind_;
  EntryMode mode_;
};

class DenseForm {
 public:
  DenseForm(std::vector<Subset> index, std::vector<QuadScalar> entries);

  std::size_t size() const { return index_.size(); }
  const std::vector<Subset>& index() const { return index_; }
  const QuadScalar& at(std::size_t row, std::size_t col) const {
    return entries_[row * index_.size() + col];
  }
  Eigen::MatrixXd to_double() const;

  // Coefficient vector of f over the index (entries outside it must vanish).
  std::vector<QuadScalar> coefficients(const MultilinearPoly& f) const;
  std::vector<QuadScalar> apply(const std::vector<QuadScalar>& vec) const;
  // v^T M v for the coefficient vector of f.
  QuadScalar quadratic_form(const MultilinearPoly& f) const;

 private:
  std::vector<Subset> index_;
  std::vector<QuadScalar> entries_;
};

DenseForm build_dense(const SetSymmetricForm& form, std::size_t cap = 5000);

// alpha(k, j) for 0 <= k <= d and k <= j <= d, the coefficients that extend a
// homogeneous degree-k vector into the k-th eigenspace.
class AlphaTable {
 public:
  AlphaTable(std::uint32_t n, const Rational& p, std::size_t d);
  const QuadScalar& at(std::size_t k, std::size_t j) const;
  std::size_t d() const { return d_; }
  std::uint32_t n() const { return n_; }

 private:
  std::uint32_t n_;
  std::size_t d_;
  std::vector<std::vector<QuadScalar>> table_;
};

AlphaTable alpha_table(std::uint32_t n, const Rational& p, std::size_t d);

// sum over even i <= d - k of ((i-1)!!)^2 / i!
Rational eigenvalue_closed_form(std::size_t d, std::size_t k);

// Eigenvalue of the k-th eigenspace computed from the alpha table with
// delta_{|S xor T|} entries. Exact at p = 1/2. At other p the extended vectors
// are still eigenvectors of the exact-entry matrix, but only the k = 0 value
// agrees with it.
QuadScalar space_eigenvalue(std::uint32_t n, const Rational& p, std::size_t d, std::size_t k);

// Extends g (homogeneous of degree k, in the phi basis of p) to the vector
// with coefficients alpha(k, |T|) * sum_{S in T, |S| = k} g(S) for |T| <= d.
MultilinearPoly extend_to_eigenspace(const MultilinearPoly& g, const AlphaTable& alpha);

// Eigenvalue of the form on the k-th extended eigenspace, read off by applying
// it to prod_i (phi_{2i-1} - phi_{2i}) extended. Requires n > 2d; k = 0 is not
// an eigenspace of the variance form.
QuadScalar form_space_eigenvalue(const SetSymmetricForm& form, std::size_t k);

struct EigenCluster {
  double value = 0;  // mean of the member eigenvalues
  std::size_t multiplicity = 0;
  double closed_form = 0;  // nearest per-space closed form
  double gap = 0;          // |value - closed_form|
};

struct SpaceEigenvalue {
  std::size_t k = 0;
  std::uint64_t dimension = 0;
  Rational closed_form;
  double predicted = 0;  // space_eigenvalue
  double measured = 0;   // form_space_eigenvalue
};

struct EigenSummary {
  std::size_t dimension = 0;
  std::size_t null_dim = 0;
  std::vector<double> nonzero;  // ascending
  std::vector<EigenCluster> clusters;
  std::vector<SpaceEigenvalue> spaces;
  double residual = 0;  // max |M v - lambda v| over eigenpairs, relative to ||M||
};

EigenSummary eigen_summary(const SetSymmetricForm& form, std::size_t cap = 5000);

struct ProjectionOptions {
  std::size_t rational_cap = 400;  // unknowns solved exactly
  double float_tol = 1e-9;
};

struct ProjectionResult {
  MultilinearPoly h;
  // Non-constant part of f - (sum_i phi_i) h. Its constant term is dropped
  // because the variance does not see constants.
  MultilinearPoly residual;
  QuadScalar residual_norm_sq;
  bool exact = true;
};

// Least-squares fit of f - f(empty) by (sum_i phi_i) h with deg h <= d - 1,
// measured on non-constant coefficients. Chi-basis inputs at p = 1/2 stay in
// the chi basis; otherwise the computation is in the phi basis of dist.
ProjectionResult project_null(const MultilinearPoly& f, const CardinalDist& dist,
                              const ProjectionOptions& options = {});

// Exact Gaussian elimination for a symmetric positive semidefinite system;
// free variables of a singular but consistent system are set to zero.
std::vector<QuadScalar> solve_psd_system(std::vector<std::vector<QuadScalar>> matrix,
                                         std::vector<QuadScalar> rhs);

}  // namespace cardcsp
