#include "dwcl/loss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dwcl/kernels.hpp"

namespace dwcl {

namespace {

// Adds to grad_s_xy and grad_s_xx the derivatives of the one-direction
// anchor losses sum_i [-s_xy(i,i)/tau + log D_i], where D_i sums
// exp(s_xx(i,j)/tau) over j != i and exp(s_xy(i,j)/tau) over all j.
// Returns the summed anchor losses.
double direction_loss(const Matrix& s_xy, const Matrix& s_xx, double tau, double coeff,
                      Matrix& grad_s_xy, Matrix& grad_s_xx, bool transpose_xy_grad) {
    const std::size_t n = s_xy.rows();
    const double inv_tau = 1.0 / tau;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) m = std::max(m, s_xx(i, j) * inv_tau);
            m = std::max(m, s_xy(i, j) * inv_tau);
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) denom += std::exp(s_xx(i, j) * inv_tau - m);
            denom += std::exp(s_xy(i, j) * inv_tau - m);
        }
        const double log_d = m + std::log(denom);
        total += -s_xy(i, i) * inv_tau + log_d;

        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                grad_s_xx(i, j) += coeff * inv_tau * std::exp(s_xx(i, j) * inv_tau - log_d);
            }
            double g = coeff * inv_tau * std::exp(s_xy(i, j) * inv_tau - log_d);
            if (j == i) g -= coeff * inv_tau;
            if (transpose_xy_grad) {
                grad_s_xy(j, i) += g;
            } else {
                grad_s_xy(i, j) += g;
            }
        }
    }
    return total;
}

// Chain rule through s = xn * yn^T for unit rows xn, yn with original norms.
// Accumulates into grad_x and grad_y, which may alias when x == y.
void cosine_backward(const Matrix& xn, const Matrix& yn, const std::vector<double>& norm_x,
                     const std::vector<double>& norm_y, const Matrix& s, const Matrix& g,
                     Matrix& grad_x, Matrix& grad_y) {
    const std::size_t n = xn.rows();
    const std::size_t mcols = xn.cols();
    const Matrix t_rows = matmul_nn(g, yn);  // n x d
    for (std::size_t i = 0; i < n; ++i) {
        double rd = 0.0;
        for (std::size_t j = 0; j < yn.rows(); ++j) rd += g(i, j) * s(i, j);
        const double inv = 1.0 / norm_x[i];
        double* gx = grad_x.row(i);
        const double* tr = t_rows.row(i);
        const double* xi = xn.row(i);
        for (std::size_t c = 0; c < mcols; ++c) {
            gx[c] += (tr[c] - rd * xi[c]) * inv;
        }
    }
    const Matrix t_cols = matmul_tn(g, xn);  // m x d
    for (std::size_t j = 0; j < yn.rows(); ++j) {
        double cd = 0.0;
        for (std::size_t i = 0; i < n; ++i) cd += g(i, j) * s(i, j);
        const double inv = 1.0 / norm_y[j];
        double* gy = grad_y.row(j);
        const double* tc = t_cols.row(j);
        const double* yj = yn.row(j);
        for (std::size_t c = 0; c < mcols; ++c) {
            gy[c] += (tc[c] - cd * yj[c]) * inv;
        }
    }
}

}  // namespace

InfoNceResult info_nce(const Matrix& hhat_a, const Matrix& hhat_b, double tau) {
    if (hhat_a.rows() != hhat_b.rows() || hhat_a.cols() != hhat_b.cols()) {
        throw std::invalid_argument("info_nce: shape mismatch");
    }
    if (hhat_a.rows() < 2) {
        throw std::invalid_argument("info_nce: need a batch of at least 2 for negatives");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("info_nce: temperature must be positive");

    const std::size_t n = hhat_a.rows();
    std::vector<double> norm_a, norm_b;
    const Matrix an = normalize_rows(hhat_a, &norm_a);
    const Matrix bn = normalize_rows(hhat_b, &norm_b);
    const Matrix s_ab = matmul_nt(an, bn);
    const Matrix s_aa = matmul_nt(an, an);
    const Matrix s_bb = matmul_nt(bn, bn);

    const double coeff = 1.0 / (2.0 * static_cast<double>(n));
    Matrix g_ab(n, n, 0.0), g_aa(n, n, 0.0), g_bb(n, n, 0.0);

    const double loss_ab = direction_loss(s_ab, s_aa, tau, coeff, g_ab, g_aa, false);
    // the b-side anchors read s_ba(i, j) = s_ab(j, i)
    Matrix s_ba(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) s_ba(i, j) = s_ab(j, i);
    }
    const double loss_ba = direction_loss(s_ba, s_bb, tau, coeff, g_ab, g_bb, true);

    InfoNceResult out;
    out.loss = coeff * (loss_ab + loss_ba);
    out.grad_a = Matrix(n, hhat_a.cols(), 0.0);
    out.grad_b = Matrix(n, hhat_b.cols(), 0.0);
    cosine_backward(an, bn, norm_a, norm_b, s_ab, g_ab, out.grad_a, out.grad_b);
    cosine_backward(an, an, norm_a, norm_a, s_aa, g_aa, out.grad_a, out.grad_a);
    cosine_backward(bn, bn, norm_b, norm_b, s_bb, g_bb, out.grad_b, out.grad_b);
    return out;
}

ReconResult reconstruction_loss(const Matrix& x, const Matrix& xrec) {
    if (x.rows() != xrec.rows() || x.cols() != xrec.cols()) {
        throw std::invalid_argument("reconstruction_loss: shape mismatch");
    }
    if (x.rows() == 0) throw std::invalid_argument("reconstruction_loss: empty batch");
    const double inv_b = 1.0 / static_cast<double>(x.rows());
    ReconResult out;
    out.grad = Matrix(x.rows(), x.cols());
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = xrec.data()[i] - x.data()[i];
        total += diff * diff;
        out.grad.data()[i] = 2.0 * inv_b * diff;
    }
    out.loss = total * inv_b;
    return out;
}

LossBreakdown assemble_total(const CrossViewPlan& plan, WeightMode mode,
                             const std::vector<double>& per_pair_losses,
                             const std::vector<double>& per_view_rec_losses,
                             const LossConfig& cfg) {
    if (per_pair_losses.size() != plan.pairs.size()) {
        throw std::invalid_argument("assemble_total: missing contrastive term");
    }
    LossBreakdown out;
    for (std::size_t p = 0; p < plan.pairs.size(); ++p) {
        out.weighted_contrastive.push_back(effective_weight(plan.pairs[p], mode) *
                                           per_pair_losses[p]);
        out.contrastive_sum += out.weighted_contrastive.back();
    }
    out.reconstruction = per_view_rec_losses;
    for (double r : per_view_rec_losses) out.reconstruction_sum += r;
    out.total = cfg.gamma * out.contrastive_sum + cfg.lambda * out.reconstruction_sum;
    return out;
}

}  // namespace dwcl
