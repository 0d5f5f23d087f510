#include "gbsk/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "gbsk/error.hpp"

namespace gbsk {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw Error(ErrorKind::DimensionMismatch, "ragged matrix initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

namespace {
void require_same_shape(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
    }
}
}  // namespace

Matrix operator+(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b);
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(i, j) = a(i, j) + b(i, j);
        }
    }
    return out;
}

Matrix operator-(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b);
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(i, j) = a(i, j) - b(i, j);
        }
    }
    return out;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); j++) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix operator*(double s, const Matrix &a) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (double &x : out.row(i)) {
            x *= s;
        }
    }
    return out;
}

std::vector<double> operator*(const Matrix &a, std::span<const double> v) {
    if (a.cols() != v.size()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix-vector dimensions differ");
    }
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); i++) {
        auto r = a.row(i);
        out[i] = std::inner_product(r.begin(), r.end(), v.begin(), 0.0);
    }
    return out;
}

Matrix transpose(const Matrix &a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(j, i) = a(i, j);
        }
    }
    return out;
}

Matrix direct_sum(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(i, j) = a(i, j);
        }
    }
    for (std::size_t i = 0; i < b.rows(); i++) {
        for (std::size_t j = 0; j < b.cols(); j++) {
            out(a.rows() + i, a.cols() + j) = b(i, j);
        }
    }
    return out;
}

Matrix select(const Matrix &a, std::span<const std::size_t> index) {
    Matrix out(index.size(), index.size());
    for (std::size_t i = 0; i < index.size(); i++) {
        for (std::size_t j = 0; j < index.size(); j++) {
            out(i, j) = a(index[i], index[j]);
        }
    }
    return out;
}

double max_abs(const Matrix &a) {
    double m = 0.0;
    for (double x : a.data()) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b);
    double m = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); i++) {
        m = std::max(m, std::abs(da[i] - db[i]));
    }
    return m;
}

bool is_symmetric(const Matrix &a, double tol) {
    if (!a.is_square()) {
        return false;
    }
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = i + 1; j < a.cols(); j++) {
            if (std::abs(a(i, j) - a(j, i)) > tol) {
                return false;
            }
        }
    }
    return true;
}

Matrix exchange_matrix(std::size_t m) {
    Matrix x(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; i++) {
        x(i, m + i) = 1.0;
        x(m + i, i) = 1.0;
    }
    return x;
}

LuDecomposition::LuDecomposition(const Matrix &a) : lu_(a), perm_(a.rows()) {
    if (!a.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "LU requires a square matrix");
    }
    const std::size_t n = a.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; k++) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; i++) {
            if (std::abs(lu_(i, k)) > std::abs(lu_(pivot, k))) {
                pivot = i;
            }
        }
        if (std::abs(lu_(pivot, k)) < 1e-14) {
            throw Error(ErrorKind::SingularMatrix, "pivot below 1e-14 at column " + std::to_string(k));
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; j++) {
                std::swap(lu_(k, j), lu_(pivot, j));
            }
            std::swap(perm_[k], perm_[pivot]);
            sign_ = -sign_;
        }
        double inv_pivot = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; i++) {
            double f = lu_(i, k) * inv_pivot;
            lu_(i, k) = f;
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; j++) {
                lu_(i, j) -= f * lu_(k, j);
            }
        }
    }
    for (std::size_t k = 0; k < n; k++) {
        if (lu_(k, k) < 0) {
            sign_ = -sign_;
        }
    }
}

std::vector<double> LuDecomposition::solve(std::span<const double> rhs) const {
    const std::size_t n = lu_.rows();
    assert(rhs.size() == n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; i++) {
        double s = rhs[perm_[i]];
        for (std::size_t j = 0; j < i; j++) {
            s -= lu_(i, j) * x[j];
        }
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; j++) {
            s -= lu_(i, j) * x[j];
        }
        x[i] = s / lu_(i, i);
    }
    return x;
}

Matrix LuDecomposition::inverse() const {
    const std::size_t n = lu_.rows();
    Matrix out(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t c = 0; c < n; c++) {
        e[c] = 1.0;
        auto col = solve(e);
        e[c] = 0.0;
        for (std::size_t r = 0; r < n; r++) {
            out(r, c) = col[r];
        }
    }
    return out;
}

double LuDecomposition::log_abs_det() const {
    double s = 0.0;
    for (std::size_t k = 0; k < lu_.rows(); k++) {
        s += std::log(std::abs(lu_(k, k)));
    }
    return s;
}

Matrix inverse(const Matrix &a) { return LuDecomposition(a).inverse(); }

SymmetricEigen jacobi_eigen(const Matrix &a, double tol, int max_sweeps) {
    if (!a.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "eigendecomposition requires a square matrix");
    }
    const std::size_t n = a.rows();
    Matrix m = a;
    Matrix v = Matrix::identity(n);

    double frob = 0.0;
    for (double x : a.data()) {
        frob += x * x;
    }
    const double threshold = tol * std::max(1.0, std::sqrt(frob));

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = i + 1; j < n; j++) {
                s += 2.0 * m(i, j) * m(i, j);
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() >= threshold) {
        if (sweep++ >= max_sweeps) {
            throw Error(ErrorKind::EigenFailure, "Jacobi iteration did not converge");
        }
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double apq = m(p, q);
                if (apq == 0.0) {
                    continue;
                }
                double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; k++) {
                    double mkp = m(k, p);
                    double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    double mpk = m(p, k);
                    double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; k++) {
                    double vkp = v(k, p);
                    double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });
    SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; k++) {
        out.values[k] = m(order[k], order[k]);
        for (std::size_t r = 0; r < n; r++) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

double spectral_radius(const Matrix &a) {
    if (a.empty()) {
        return 0.0;
    }
    auto eig = jacobi_eigen(a);
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double min_eigenvalue(const Matrix &a) {
    if (a.empty()) {
        return 0.0;
    }
    return jacobi_eigen(a).values.front();
}

Matrix cholesky(const Matrix &a) {
    if (!a.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "Cholesky requires a square matrix");
    }
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; j++) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; k++) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot at index " + std::to_string(j));
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; i++) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; k++) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

}  // namespace gbsk
