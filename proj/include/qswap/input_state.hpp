// input_state.hpp - broadband Gaussian input states of the two fields.

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qswap {

// Minimal-uncertainty squeezed (or coherent, r = 0) broadband input. The
// squeeze angle is measured from the field's own mean amplitude, so
// phi = 0 is amplitude squeezing.
struct GaussianInputState {
    double r = 0.0;
    double phi = 0.0;

    static GaussianInputState coherent() { return {}; }
    // S_min = 10^(-db/10) on the squeezed quadrature.
    static GaussianInputState squeezed_db(double db, double phi = 0.0);
    // Squeezed quadrature variance S_min in (0, 1].
    static GaussianInputState squeezed_variance(double s_min, double phi = 0.0);

    // S_theta = cosh 2r - sinh 2r cos 2(theta - phi)
    double quadrature_spectrum(double theta) const;
};

// Gram block of the sideband pair (a, a^dag): entries are the coefficients of
// 2 pi delta(omega - omega') in <x_k(omega) x_l(omega')^dag>, i.e.
// [[<a a^dag>, <a a>], [<a^dag a^dag>, <a^dag a>]]. mean_phase rotates the
// squeezing ellipse onto the field's mean amplitude.
Eigen::Matrix2cd input_correlation(const GaussianInputState& s, double mean_phase = 0.0);

// Block-diagonal 4x4 version for (a1, a1^dag, a2, a2^dag); fields are independent.
Eigen::Matrix4cd input_correlation(const GaussianInputState& s1, const GaussianInputState& s2,
                                   double phase1 = 0.0, double phase2 = 0.0);

} // namespace qswap
