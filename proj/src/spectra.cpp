#include "sbp/spectra.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "sbp/stencil.hpp"

namespace sbp {
namespace {

double symbol_modulus(const InteriorStencil& s, double theta) {
    std::complex<double> sum = 0.0;
    for (std::size_t k = 0; k < s.offsets.size(); ++k) {
        sum += s.coeffs[k] * std::polar(1.0, s.offsets[k] * theta);
    }
    return std::abs(sum);
}

}  // namespace

double lambda_full(const OperatorSet& set) {
    const Eigen::VectorXd sq = set.H.cwiseSqrt();
    const Eigen::MatrixXd dp(set.Dplus);
    // B = H^{1/2} D+ H^{-1/2};  B^T B is the symmetric reduction of the pencil.
    const Eigen::MatrixXd b = sq.asDiagonal() * dp * sq.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd btb = b.transpose() * b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(btb, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double lambda_int(int p) {
    const InteriorStencil s = interior_forward_coeffs(p);
    constexpr int samples = 4096;
    const double step = 2.0 * std::numbers::pi / samples;
    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k < samples; ++k) {
        const double v = symbol_modulus(s, k * step);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    // golden-section refinement on the bracketing interval
    double a = (best - 1) * step;
    double b = (best + 1) * step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = symbol_modulus(s, c);
    double fd = symbol_modulus(s, d);
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = symbol_modulus(s, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = symbol_modulus(s, d);
        }
    }
    return std::max({best_val, fc, fd});
}

SpectralReport spectral_report(const OperatorSet& set) {
    SpectralReport r;
    r.lambda_full = lambda_full(set) * set.grid.h;
    r.lambda_int = lambda_int(set.p());
    r.ratio = r.lambda_int / r.lambda_full;
    r.courant_interior = 2.0 / r.lambda_int;
    return r;
}

}  // namespace sbp
