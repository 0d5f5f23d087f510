#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gbsk {

/// Dense row-major real matrix with value semantics.
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const Matrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(const Matrix &a, const Matrix &b);
Matrix operator-(const Matrix &a, const Matrix &b);
Matrix operator*(const Matrix &a, const Matrix &b);
Matrix operator*(double s, const Matrix &a);
std::vector<double> operator*(const Matrix &a, std::span<const double> v);

Matrix transpose(const Matrix &a);
Matrix direct_sum(const Matrix &a, const Matrix &b);

/// Submatrix with rows and columns taken from `index` (repeats allowed).
Matrix select(const Matrix &a, std::span<const std::size_t> index);

double max_abs(const Matrix &a);
double max_abs_diff(const Matrix &a, const Matrix &b);
bool is_symmetric(const Matrix &a, double tol);

/// The 2M x 2M exchange matrix [[0, I], [I, 0]].
Matrix exchange_matrix(std::size_t m);

/// LU factorization with partial pivoting. Throws SingularMatrix when a pivot
/// falls below 1e-14 in magnitude.
class LuDecomposition {
   public:
    explicit LuDecomposition(const Matrix &a);

    Matrix inverse() const;
    std::vector<double> solve(std::span<const double> rhs) const;
    /// log|det A|
    double log_abs_det() const;
    int det_sign() const noexcept { return sign_; }

   private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
};

Matrix inverse(const Matrix &a);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Iterates until the
/// off-diagonal Frobenius norm drops below tol * max(1, ||A||_F).
SymmetricEigen jacobi_eigen(const Matrix &a, double tol = 1e-12, int max_sweeps = 100);

/// Largest |eigenvalue| of a symmetric matrix (its largest singular value).
double spectral_radius(const Matrix &a);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix &a);

/// Lower-triangular Cholesky factor. Throws NotPositiveDefinite.
Matrix cholesky(const Matrix &a);

}  // namespace gbsk
