#pragma once

#include <cstddef>
#include <vector>

#include "gbsk/graph.hpp"
#include "gbsk/linalg.hpp"

namespace gbsk {

/// Gaussian-state parameters derived from a scaled graph, in the convention
/// sigma = Q - I/2 with Q = (I - X A~)^{-1}.
///
/// The displacement is a single real amplitude d applied to every mode, so
/// the 2M displacement vector is (d, ..., d). b = d^T Q^{-1} fills the loop
/// Hafnian diagonal and alpha_exp = -1/2 d^T Q^{-1} d.
class GbsEncoding {
   public:
    std::size_t modes() const noexcept { return m_modes_; }
    /// A~, the 2M x 2M matrix whose Hafnians give event probabilities.
    const Matrix &a_tilde() const noexcept { return a_tilde_; }
    const Matrix &q() const noexcept { return q_; }
    const Matrix &q_inverse() const noexcept { return q_inv_; }
    const Matrix &sigma() const noexcept { return sigma_; }
    double log_det_q() const noexcept { return log_det_q_; }
    double det_q() const;
    double displacement() const noexcept { return d_; }
    const std::vector<double> &b() const noexcept { return b_; }
    double alpha_exp() const noexcept { return alpha_exp_; }
    double loss() const noexcept { return nu_; }
    bool is_pure() const noexcept { return nu_ == 0.0; }

   private:
    friend GbsEncoding encode(const ScaledGraph &g, double d);
    friend GbsEncoding apply_loss(const GbsEncoding &e, double nu);
    GbsEncoding() = default;
    void set_displacement(double d);

    std::size_t m_modes_ = 0;
    Matrix a_tilde_;
    Matrix q_;
    Matrix q_inv_;
    Matrix sigma_;
    double log_det_q_ = 0.0;
    double d_ = 0.0;
    std::vector<double> b_;
    double alpha_exp_ = 0.0;
    double nu_ = 0.0;
};

/// Pure encoding of g with uniform displacement d >= 0. Throws
/// SpectralBoundViolated when c * s_max >= 1.
GbsEncoding encode(const ScaledGraph &g, double d = 0.0);

/// Lossy bosonic channel sigma -> (1 - nu) sigma + (nu / 2) I. Losses compose:
/// the returned encoding reports the total loss 1 - (1 - nu_old)(1 - nu).
GbsEncoding apply_loss(const GbsEncoding &e, double nu);

/// The lossy A-matrix computed from the eigendecomposition of X A~:
/// X (I - W^T diag[(L_i - 1)/(L_i nu - 1)] W). Independent of apply_loss().
Matrix lossy_a_via_eigen(const GbsEncoding &e, double nu);

}  // namespace gbsk
