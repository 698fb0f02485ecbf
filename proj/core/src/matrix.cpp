#include "recur/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "recur/error.hpp"

namespace recur {

Matrix::Matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorKind::parse, "matrix must be non-empty");
  rows_ = rows.size();
  cols_ = rows.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::parse, "matrix rows must have equal length");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

Matrix Matrix::hadamard(const Matrix& other) const {
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * other.data_[i];
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  }
  return out;
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> Matrix::apply_left(std::span<const double> v) const {
  std::vector<double> out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (v[i] == 0.0) continue;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += v[i] * (*this)(i, j);
  }
  return out;
}

Matrix Matrix::power(std::size_t exponent) const {
  Matrix result = identity(rows_);
  Matrix base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

namespace {

std::vector<bool> reachable(const Matrix& m, std::size_t start, bool reversed) {
  const std::size_t n = m.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = reversed ? m(j, i) : m(i, j);
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<std::size_t> unreachable_states(const Matrix& m) {
  if (!m.square() || m.rows() == 0) return {};
  const auto forward = reachable(m, 0, false);
  const auto backward = reachable(m, 0, true);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!forward[i] || !backward[i]) out.push_back(i);
  }
  return out;
}

bool is_irreducible(const Matrix& m) { return m.square() && unreachable_states(m).empty(); }

PerronResult perron_root(const Matrix& m, double rel_tol, std::size_t max_iterations) {
  PerronResult result;
  const std::size_t n = m.rows();
  std::vector<double> v(n, 1.0);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    const auto u = m.apply(v);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = u[i] / v[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      norm = std::max(norm, u[i]);
    }
    result.lower = lo;
    result.upper = hi;
    result.root = 0.5 * (lo + hi);
    result.vector = v;
    result.iterations = it;
    if (hi == 0.0 || !(lo > 0.0)) return result;  // not irreducible
    if (hi - lo <= rel_tol * hi) {
      result.converged = true;
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / norm;
  }
  return result;
}

}  // namespace recur
