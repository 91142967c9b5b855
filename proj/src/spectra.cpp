#include "cardcsp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "cardcsp/errors.hpp"

namespace cardcsp {

SetSymmetricForm::SetSymmetricForm(std::uint32_t n, std::size_t d, const Rational& p,
                                   FormKind kind, EntryMode mode)
    : dist_(n, p), d_(d), kind_(kind), mode_(mode) {
  if (d > n) throw InputError("degree exceeds the number of variables");
}

QuadScalar SetSymmetricForm::entry(std::size_t s, std::size_t t, std::size_t common) const {
  if (kind_ == FormKind::variance && (s == 0 || t == 0)) return {};
  QuadScalar value = mode_ == EntryMode::exact ? dist_.pair_moment(s, t, common)
                                               : dist_.pair_moment_simplified(s, t, common);
  if (kind_ == FormKind::variance) value -= dist_.delta(s) * dist_.delta(t);
  return value;
}

std::vector<Subset> SetSymmetricForm::index() const {
  std::vector<Subset> sets = subsets_up_to(n(), d_);
  if (kind_ == FormKind::variance) sets.erase(sets.begin());
  return sets;
}

DenseForm::DenseForm(std::vector<Subset> index, std::vector<QuadScalar> entries)
    : index_(std::move(index)), entries_(std::move(entries)) {}

Eigen::MatrixXd DenseForm::to_double() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = at(i, j).to_double();
  }
  return m;
}

std::vector<QuadScalar> DenseForm::coefficients(const MultilinearPoly& f) const {
  std::map<Subset, std::size_t> position;
  for (std::size_t i = 0; i < index_.size(); ++i) position.emplace(index_[i], i);
  std::vector<QuadScalar> vec(index_.size());
  for (const auto& [set, coeff] : f.terms()) {
    auto it = position.find(set);
    if (it == position.end()) {
      if (set.empty()) continue;  // the variance form ignores constants
      throw InputError("polynomial has a term outside the matrix index");
    }
    vec[it->second] = coeff;
  }
  return vec;
}

std::vector<QuadScalar> DenseForm::apply(const std::vector<QuadScalar>& vec) const {
  if (vec.size() != size()) throw InputError("vector length does not match the matrix");
  std::vector<QuadScalar> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (!vec[j].is_zero()) out[i] += at(i, j) * vec[j];
    }
  }
  return out;
}

QuadScalar DenseForm::quadratic_form(const MultilinearPoly& f) const {
  const auto vec = coefficients(f);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (!vec[i].is_zero()) support.push_back(i);
  }
  QuadScalar total;
  for (auto i : support) {
    for (auto j : support) total += vec[i] * at(i, j) * vec[j];
  }
  return total;
}

namespace {

// Entry values keyed by (|S|, |T|, |S cap T|).
std::map<std::tuple<std::size_t, std::size_t, std::size_t>, QuadScalar> entry_table(
    const SetSymmetricForm& form) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, QuadScalar> table;
  for (std::size_t s = 0; s <= form.d(); ++s) {
    for (std::size_t t = 0; t <= form.d(); ++t) {
      for (std::size_t c = 0; c <= std::min(s, t); ++c) table[{s, t, c}] = form.entry(s, t, c);
    }
  }
  return table;
}

void check_dense_cap(const SetSymmetricForm& form, std::size_t cap) {
  const std::uint64_t rows = count_up_to(form.n(), form.d());
  if (rows > cap) {
    throw ResourceError("dense matrix with " + std::to_string(rows) +
                        " rows exceeds the cap of " + std::to_string(cap));
  }
}

}  // namespace

DenseForm build_dense(const SetSymmetricForm& form, std::size_t cap) {
  check_dense_cap(form, cap);
  const auto index = form.index();
  const auto table = entry_table(form);
  std::vector<QuadScalar> entries;
  entries.reserve(index.size() * index.size());
  for (const auto& s : index) {
    for (const auto& t : index) {
      entries.push_back(table.at({s.size(), t.size(), intersection_size(s, t)}));
    }
  }
  return DenseForm(index, std::move(entries));
}

AlphaTable::AlphaTable(std::uint32_t n, const Rational& p, std::size_t d) : n_(n), d_(d) {
  if (n <= 2 * d) throw InputError("alpha table needs n > 2d");
  const QuadScalar q = Basis::phi(p).q();
  for (std::size_t k = 0; k <= d; ++k) {
    std::vector<QuadScalar> row{QuadScalar(1)};
    // i alpha_{k,k+i-1} + (k+i) q alpha_{k,k+i} + (n-2k-i) alpha_{k,k+i+1} = 0
    for (std::size_t i = 0; k + i < d; ++i) {
      QuadScalar next = QuadScalar(static_cast<long>(k + i)) * q * row[i];
      if (i > 0) next += QuadScalar(static_cast<long>(i)) * row[i - 1];
      next /= QuadScalar(-static_cast<long>(n - 2 * k - i));
      row.push_back(std::move(next));
    }
    table_.push_back(std::move(row));
  }
}

const QuadScalar& AlphaTable::at(std::size_t k, std::size_t j) const {
  if (k > d_ || j < k || j > d_) throw InputError("alpha index out of range");
  return table_[k][j - k];
}

AlphaTable alpha_table(std::uint32_t n, const Rational& p, std::size_t d) {
  return AlphaTable(n, p, d);
}

Rational eigenvalue_closed_form(std::size_t d, std::size_t k) {
  if (k > d) throw InputError("k exceeds d");
  Rational total;
  Rational double_fact = 1;  // (i-1)!!
  for (std::size_t i = 0; i <= d - k; i += 2) {
    if (i >= 2) double_fact *= static_cast<unsigned long>(i - 1);
    total += double_fact * double_fact / factorial(i);
  }
  return total;
}

QuadScalar space_eigenvalue(std::uint32_t n, const Rational& p, std::size_t d, std::size_t k) {
  const AlphaTable alpha(n, p, d);
  const CardinalDist dist(n, p);
  // tau(l): contribution of a degree-k set S with |S \ S0| = l to row S0.
  auto tau = [&](std::size_t l) {
    QuadScalar total;
    for (std::size_t i = 0; i <= d - k; ++i) {
      QuadScalar inner;
      for (std::size_t t = 0; t <= std::min(i, l); ++t) {
        inner += QuadScalar(binomial_exact(l, t) * binomial_exact(n - k - l, i - t)) *
                 dist.delta(2 * l + i - 2 * t);
      }
      total += alpha.at(k, k + i) * inner;
    }
    return total;
  };
  QuadScalar value;
  for (std::size_t l = 0; l <= k; ++l) {
    QuadScalar term = QuadScalar(binomial_exact(k, l)) * tau(l);
    if (l % 2 == 0) {
      value += term;
    } else {
      value -= term;
    }
  }
  return value;
}

MultilinearPoly extend_to_eigenspace(const MultilinearPoly& g, const AlphaTable& alpha) {
  const std::size_t k = g.degree();
  const std::size_t d = alpha.d();
  MultilinearPoly out(g.n(), g.basis());
  Subset all(g.n());
  for (std::uint32_t i = 0; i < g.n(); ++i) all[i] = i + 1;
  for (const auto& [set, coeff] : g.terms()) {
    if (set.size() != k) throw InputError("expected a homogeneous polynomial");
    const Subset rest = set_difference(all, set);
    for (std::size_t extra = 0; k + extra <= d; ++extra) {
      const QuadScalar scaled = coeff * alpha.at(k, k + extra);
      for_each_combination(rest, extra, [&](const Subset& u) {
        out.add_term(set_union(set, u), scaled);
        return true;
      });
    }
  }
  return out;
}

QuadScalar form_space_eigenvalue(const SetSymmetricForm& form, std::size_t k) {
  if (k > form.d()) throw InputError("eigenspace index exceeds the degree");
  if (form.kind() == FormKind::variance && k == 0) {
    throw InputError("the variance form has no k = 0 eigenspace");
  }
  const Basis& phi = form.dist().basis();
  MultilinearPoly g = MultilinearPoly::constant(form.n(), phi, 1);
  Subset row;
  for (std::uint32_t i = 0; i < k; ++i) {
    MultilinearPoly diff = MultilinearPoly::monomial(form.n(), phi, {2 * i + 1}, 1);
    diff.add_term({2 * i + 2}, -1);
    g = multiply(g, diff);
    row.push_back(2 * i + 1);
  }
  const auto v = extend_to_eigenspace(g, AlphaTable(form.n(), form.p(), form.d()));
  // The coefficient of the row set in v is 1.
  QuadScalar value;
  for (const auto& [set, coeff] : v.terms()) {
    value += form.entry(row.size(), set.size(), intersection_size(row, set)) * coeff;
  }
  return value;
}

EigenSummary eigen_summary(const SetSymmetricForm& form, std::size_t cap) {
  check_dense_cap(form, cap);
  const auto index = form.index();
  const auto table = entry_table(form);
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> approx;
  for (const auto& [key, value] : table) approx[key] = value.to_double();
  const auto size = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      m(i, j) = approx.at({index[i].size(), index[j].size(), intersection_size(index[i], index[j])});
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");

  EigenSummary out;
  out.dimension = index.size();
  const double norm = std::max(1.0, m.norm());
  const Eigen::MatrixXd residual =
      m * solver.eigenvectors() - solver.eigenvectors() * solver.eigenvalues().asDiagonal();
  out.residual = residual.cwiseAbs().maxCoeff() / norm;
  const double null_tol = 1e-7 * norm;
  for (Eigen::Index i = 0; i < size; ++i) {
    const double value = solver.eigenvalues()(i);
    if (std::abs(value) <= null_tol) {
      ++out.null_dim;
    } else {
      out.nonzero.push_back(value);
    }
  }
  std::sort(out.nonzero.begin(), out.nonzero.end());

  const std::size_t first_space = form.kind() == FormKind::variance ? 1 : 0;
  for (std::size_t k = first_space; k <= form.d(); ++k) {
    SpaceEigenvalue space;
    space.k = k;
    space.dimension = binomial(form.n(), k) - (k == 0 ? 0 : binomial(form.n(), k - 1));
    space.closed_form = eigenvalue_closed_form(form.d(), k);
    if (form.n() > 2 * form.d()) {
      space.predicted = space_eigenvalue(form.n(), form.p(), form.d(), k).to_double();
      space.measured = form_space_eigenvalue(form, k).to_double();
    }
    out.spaces.push_back(space);
  }

  const double link = 10.0 / form.n();
  for (double value : out.nonzero) {
    if (out.clusters.empty() ||
        value - out.clusters.back().value > link + 1e-12 * std::abs(value)) {
      out.clusters.emplace_back();
    }
    auto& c = out.clusters.back();
    // running mean
    c.value = (c.value * static_cast<double>(c.multiplicity) + value) /
              static_cast<double>(c.multiplicity + 1);
    ++c.multiplicity;
  }
  for (auto& c : out.clusters) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& space : out.spaces) {
      const double candidate = to_long_double(space.closed_form);
      if (std::abs(candidate - c.value) < std::abs(best - c.value)) best = candidate;
    }
    c.closed_form = best;
    c.gap = std::abs(c.value - best);
  }
  return out;
}

std::vector<QuadScalar> solve_psd_system(std::vector<std::vector<QuadScalar>> matrix,
                                         std::vector<QuadScalar> rhs) {
  const std::size_t n = rhs.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t pivot = row;
    while (pivot < n && matrix[pivot][col].is_zero()) ++pivot;
    if (pivot == n) continue;
    std::swap(matrix[pivot], matrix[row]);
    std::swap(rhs[pivot], rhs[row]);
    const QuadScalar inv = QuadScalar(1) / matrix[row][col];
    for (std::size_t c = col; c < n; ++c) matrix[row][c] *= inv;
    rhs[row] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || matrix[r][col].is_zero()) continue;
      const QuadScalar factor = matrix[r][col];
      for (std::size_t c = col; c < n; ++c) {
        if (!matrix[row][c].is_zero()) matrix[r][c] -= factor * matrix[row][c];
      }
      rhs[r] -= factor * rhs[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r) {
    if (!rhs[r].is_zero()) throw NumericalError("linear system is inconsistent");
  }
  std::vector<QuadScalar> solution(n);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) solution[pivot_col[r]] = rhs[r];
  return solution;
}

namespace {

struct NullGenerators {
  std::vector<Subset> sets;
  // Non-constant coefficient set -> (generator, coefficient) pairs.
  std::map<Subset, std::vector<std::pair<std::size_t, QuadScalar>>> by_coefficient;
};

NullGenerators null_generators(std::uint32_t n, std::size_t degree, const QuadScalar& q) {
  NullGenerators gens;
  gens.sets = subsets_up_to(n, degree);
  for (std::size_t a = 0; a < gens.sets.size(); ++a) {
    const Subset& s = gens.sets[a];
    // (sum_i phi_i) phi_S = sum_{j in S} phi_{S-j} + q|S| phi_S + sum_{j not in S} phi_{S+j}
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.size() == 1) break;
      Subset smaller = s;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(j));
      gens.by_coefficient[smaller].emplace_back(a, QuadScalar(1));
    }
    if (!s.empty() && !q.is_zero()) {
      gens.by_coefficient[s].emplace_back(a, q * QuadScalar(static_cast<long>(s.size())));
    }
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (contains(s, v)) continue;
      Subset larger = s;
      larger.insert(std::upper_bound(larger.begin(), larger.end(), v), v);
      gens.by_coefficient[larger].emplace_back(a, QuadScalar(1));
    }
  }
  return gens;
}

std::vector<QuadScalar> solve_float(const std::vector<std::vector<QuadScalar>>& gram,
                                    const std::vector<QuadScalar>& rhs, double tol) {
  const auto n = static_cast<Eigen::Index>(rhs.size());
  Eigen::MatrixXd g(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b(i) = rhs[i].to_double();
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gram[i][j].to_double();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g);
  Eigen::VectorXd y = cod.solve(b);
  for (int iter = 0; iter < 3; ++iter) y += cod.solve(b - g * y);
  const double err = (g * y - b).norm();
  if (err > tol * std::max(1.0, b.norm())) {
    throw NumericalError("normal equations did not converge: residual " + std::to_string(err) +
                         ", rank " + std::to_string(cod.rank()) + " of " + std::to_string(n));
  }
  std::vector<QuadScalar> out;
  for (Eigen::Index i = 0; i < n; ++i) out.emplace_back(Rational(y(i)));
  return out;
}

}  // namespace

ProjectionResult project_null(const MultilinearPoly& f, const CardinalDist& dist,
                              const ProjectionOptions& options) {
  if (f.n() != dist.n()) throw InputError("polynomial and distribution differ in n");
  const bool stay_chi = f.basis().kind() == BasisKind::chi && dist.p() == Rational(1, 2);
  const MultilinearPoly g = stay_chi ? f : to_dist_basis(f, dist);
  const Basis& basis = g.basis();
  const std::size_t degree = std::max<std::size_t>(g.degree(), 1);
  const NullGenerators gens = null_generators(f.n(), degree - 1, basis.q());
  const std::size_t count = gens.sets.size();

  std::vector<std::vector<QuadScalar>> gram(count, std::vector<QuadScalar>(count));
  std::vector<QuadScalar> rhs(count);
  for (const auto& [set, entries] : gens.by_coefficient) {
    const QuadScalar target = g.coefficient(set);
    for (const auto& [a, ca] : entries) {
      if (!target.is_zero()) rhs[a] += ca * target;
      for (const auto& [b, cb] : entries) gram[a][b] += ca * cb;
    }
  }

  ProjectionResult out{MultilinearPoly(f.n(), basis), MultilinearPoly(f.n(), basis), {}, true};
  std::vector<QuadScalar> weights;
  if (count <= options.rational_cap) {
    weights = solve_psd_system(gram, rhs);
  } else {
    weights = solve_float(gram, rhs, options.float_tol);
    out.exact = false;
  }
  for (std::size_t a = 0; a < count; ++a) out.h.add_term(gens.sets[a], weights[a]);
  out.residual =
      (g - multiply(MultilinearPoly::variable_sum(f.n(), basis), out.h)).without_constant();
  out.residual_norm_sq = l2_norm_sq(out.residual);
  return out;
}

}  // namespace cardcsp
