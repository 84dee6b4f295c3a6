#include "qswap/input_state.hpp"

#include <cmath>
#include <stdexcept>

namespace qswap {

GaussianInputState GaussianInputState::squeezed_db(double db, double phi) {
    if (!(db >= 0.0) || !std::isfinite(db)) throw std::invalid_argument("squeezing in dB must be >= 0");
    return squeezed_variance(std::pow(10.0, -db / 10.0), phi);
}

GaussianInputState GaussianInputState::squeezed_variance(double s_min, double phi) {
    if (!(s_min > 0.0 && s_min <= 1.0)) {
        throw std::invalid_argument("squeezed variance must lie in (0, 1]");
    }
    return {-0.5 * std::log(s_min), phi};
}

double GaussianInputState::quadrature_spectrum(double theta) const {
    return std::cosh(2.0 * r) - std::sinh(2.0 * r) * std::cos(2.0 * (theta - phi));
}

Eigen::Matrix2cd input_correlation(const GaussianInputState& s, double mean_phase) {
    if (!(s.r >= 0.0)) throw std::invalid_argument("squeeze factor r must be >= 0");
    const double ch = std::cosh(s.r), sh = std::sinh(s.r);
    const std::complex<double> aa = -std::polar(sh * ch, 2.0 * (s.phi + mean_phase));
    Eigen::Matrix2cd g;
    g << ch * ch, aa, std::conj(aa), sh * sh;
    return g;
}

Eigen::Matrix4cd input_correlation(const GaussianInputState& s1, const GaussianInputState& s2,
                                   double phase1, double phase2) {
    Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
    g.topLeftCorner<2, 2>() = input_correlation(s1, phase1);
    g.bottomRightCorner<2, 2>() = input_correlation(s2, phase2);
    return g;
}

} // namespace qswap
