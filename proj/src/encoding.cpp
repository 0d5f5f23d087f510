#include "gbsk/encoding.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "gbsk/error.hpp"

namespace gbsk {

namespace {

void symmetrize(Matrix &m) {
    for (std::size_t i = 0; i < m.rows(); i++) {
        for (std::size_t j = i + 1; j < m.cols(); j++) {
            double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
}

void check_loss(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) {
        throw Error(ErrorKind::OutOfRange, "loss parameter must lie in [0, 1], got " + std::to_string(nu));
    }
}

}  // namespace

double GbsEncoding::det_q() const { return std::exp(log_det_q_); }

void GbsEncoding::set_displacement(double d) {
    d_ = d;
    const std::size_t n = 2 * m_modes_;
    b_.assign(n, 0.0);
    alpha_exp_ = 0.0;
    if (d == 0.0) {
        return;
    }
    // b = d^T Q^{-1} for the uniform vector d = (d, ..., d)
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            b_[j] += d * q_inv_(i, j);
        }
    }
    double s = 0.0;
    for (double bj : b_) {
        s += bj * d;
    }
    alpha_exp_ = -0.5 * s;
}

GbsEncoding encode(const ScaledGraph &g, double d) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw Error(ErrorKind::OutOfRange, "displacement must be a non-negative real");
    }
    double bound = g.spectral_product();
    if (!(bound < 1.0)) {
        throw Error(ErrorKind::SpectralBoundViolated, "c * s_max = " + std::to_string(bound) + " >= 1");
    }
    const std::size_t m = g.num_nodes();
    GbsEncoding e;
    e.m_modes_ = m;
    e.a_tilde_ = doubled_adjacency(g);
    e.q_inv_ = Matrix::identity(2 * m) - exchange_matrix(m) * e.a_tilde_;
    std::optional<LuDecomposition> factor;
    try {
        factor.emplace(e.q_inv_);
    } catch (const Error &err) {
        if (err.kind() != ErrorKind::SingularMatrix) {
            throw;
        }
        throw Error(ErrorKind::SpectralBoundViolated, "I - X A~ is singular (c * s_max = " + std::to_string(bound) + ")");
    }
    const LuDecomposition &lu = *factor;
    if (lu.det_sign() <= 0) {
        throw Error(ErrorKind::SpectralBoundViolated, "I - X A~ is not positive definite");
    }
    e.q_ = lu.inverse();
    symmetrize(e.q_);
    e.log_det_q_ = -lu.log_abs_det();
    e.sigma_ = e.q_ - 0.5 * Matrix::identity(2 * m);
    e.nu_ = 0.0;
    e.set_displacement(d);
    return e;
}

GbsEncoding apply_loss(const GbsEncoding &e, double nu) {
    check_loss(nu);
    const std::size_t n = 2 * e.m_modes_;
    const Matrix id = Matrix::identity(n);
    GbsEncoding out;
    out.m_modes_ = e.m_modes_;
    out.sigma_ = (1.0 - nu) * e.sigma_ + (0.5 * nu) * id;
    out.q_ = out.sigma_ + 0.5 * id;
    LuDecomposition lu(out.q_);
    out.q_inv_ = lu.inverse();
    symmetrize(out.q_inv_);
    out.log_det_q_ = lu.log_abs_det();
    out.a_tilde_ = exchange_matrix(e.m_modes_) * (id - out.q_inv_);
    symmetrize(out.a_tilde_);
    out.nu_ = e.nu_ == 0.0 ? nu : 1.0 - (1.0 - e.nu_) * (1.0 - nu);
    out.set_displacement(e.d_);
    return out;
}

Matrix lossy_a_via_eigen(const GbsEncoding &e, double nu) {
    check_loss(nu);
    const std::size_t n = 2 * e.modes();
    const Matrix x = exchange_matrix(e.modes());
    Matrix t = x * e.a_tilde();
    symmetrize(t);
    SymmetricEigen eig = jacobi_eigen(t);
    // W = V^T, so W^{-1} diag(f) W = V diag(f) V^T
    Matrix inner(n, n);
    for (std::size_t k = 0; k < n; k++) {
        double lambda = eig.values[k];
        double denom = lambda * nu - 1.0;
        if (std::abs(denom) < 1e-14) {
            throw Error(ErrorKind::EigenFailure, "eigenvalue makes the loss map singular");
        }
        double f = (lambda - 1.0) / denom;
        for (std::size_t i = 0; i < n; i++) {
            double vik = eig.vectors(i, k) * f;
            if (vik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n; j++) {
                inner(i, j) += vik * eig.vectors(j, k);
            }
        }
    }
    Matrix c = x * (Matrix::identity(n) - inner);
    symmetrize(c);
    return c;
}

}  // namespace gbsk
