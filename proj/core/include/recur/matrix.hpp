#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace recur {

/// Small dense row-major matrix; alphabets here have a handful of symbols.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws parse if rows are ragged or empty.
  explicit Matrix(const std::vector<std::vector<double>>& rows);

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  [[nodiscard]] std::vector<std::vector<double>> to_rows() const;

  /// Entrywise (Hadamard) product.
  [[nodiscard]] Matrix hadamard(const Matrix& other) const;
  [[nodiscard]] Matrix operator*(const Matrix& other) const;
  /// M v.
  [[nodiscard]] std::vector<double> apply(std::span<const double> v) const;
  /// v^T M.
  [[nodiscard]] std::vector<double> apply_left(std::span<const double> v) const;

  [[nodiscard]] Matrix power(std::size_t exponent) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// True when the directed graph with an edge i->j for every positive entry is
/// strongly connected.
bool is_irreducible(const Matrix& m);

/// States not reachable from state 0 or unable to reach it; empty iff
/// irreducible.
std::vector<std::size_t> unreachable_states(const Matrix& m);

/// Perron root of a nonnegative irreducible matrix by power iteration from the
/// all-ones vector, stopped when the Collatz-Wielandt bounds agree to
/// `rel_tol`. `upper` is a certified upper bound for the root, `vector` the
/// positive iterate that certifies it.
struct PerronResult {
  double root = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> vector;
  std::size_t iterations = 0;
  bool converged = false;
};

PerronResult perron_root(const Matrix& m, double rel_tol = 1e-13,
                         std::size_t max_iterations = 100000);

}  // namespace recur
