#include "qswap/spectra.hpp"
#include "qswap/errors.hpp"
#include "qswap/parallel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qswap::spectra {

namespace {

double phase_of(cd z) { return std::abs(z) > 0.0 ? std::arg(z) : 0.0; }

} // namespace

Mat12 response_matrix(const model::DriftMatrix& drift, double omega) {
    const Mat12 a = cd(0.0, -omega) * Mat12::Identity() - drift.M;
    const Eigen::PartialPivLU<Mat12> lu(a);
    const double rc = lu.rcond();
    if (!(rc >= 1e-12)) {
        // locate the closest pole to report it
        const Eigen::ComplexEigenSolver<Mat12> es(drift.M);
        cd nearest = es.eigenvalues()(0);
        for (int k = 1; k < model::basis::kDim; ++k) {
            const cd ev = es.eigenvalues()(k);
            if (std::abs(ev + cd(0.0, omega)) < std::abs(nearest + cd(0.0, omega))) nearest = ev;
        }
        std::ostringstream os;
        os << "response matrix singular at omega = " << omega << " (rcond " << rc
           << "), nearest drift eigenvalue " << nearest;
        throw NumericError(os.str());
    }
    return lu.inverse();
}

TransferSet output_transfer(const model::SystemParams& p, const model::DriftMatrix& drift, double omega) {
    using namespace model::basis;
    const Mat12 r = response_matrix(drift, omega);
    // A_out = sqrt(2 kappa) A - A_in
    Eigen::Matrix<cd, 4, kDim> c = Eigen::Matrix<cd, 4, kDim>::Zero();
    c(0, dA1) = c(1, dA1d) = std::sqrt(2.0 * p.kappa1);
    c(2, dA2) = c(3, dA2d) = std::sqrt(2.0 * p.kappa2);
    TransferSet t;
    t.T_at = c * r;
    t.T_in = t.T_at * drift.input_coupling - Eigen::Matrix4cd::Identity();
    return t;
}

double quadrature_from_gram(const Eigen::Matrix2cd& g, double theta) {
    return (g(0, 0) + g(1, 1)).real() + 2.0 * (std::polar(1.0, -2.0 * theta) * g(0, 1)).real();
}

SpectrumEngine::SpectrumEngine(const model::SystemParams& p, const model::SteadyState& ss,
                               const InputPair& inputs)
    : params_(p), inputs_(inputs), drift_(model::build_drift_matrix(p, ss)),
      diffusion_(noise::diffusion_matrix(p, ss)) {
    for (int f = 1; f <= 2; ++f) {
        in_phase_[static_cast<std::size_t>(f - 1)] = phase_of(ss.A_in(f));
        out_phase_[static_cast<std::size_t>(f - 1)] = phase_of(ss.A_out(p, f));
    }
    input_gram_ = input_correlation(inputs[0], inputs[1], in_phase_[0], in_phase_[1]);
}

Eigen::Matrix4cd SpectrumEngine::output_gram(double omega) const {
    const TransferSet t = output_transfer(params_, drift_, omega);
    return t.T_in * input_gram_ * t.T_in.adjoint() + t.T_at * diffusion_.Gamma * t.T_at.adjoint();
}

std::array<double, 2> SpectrumEngine::output_spectra(double omega, double theta) const {
    const Eigen::Matrix4cd g = output_gram(omega);
    return {quadrature_from_gram(g.topLeftCorner<2, 2>(), theta + out_phase_[0]),
            quadrature_from_gram(g.bottomRightCorner<2, 2>(), theta + out_phase_[1])};
}

std::array<double, 2> SpectrumEngine::input_spectra(double theta) const {
    return {inputs_[0].quadrature_spectrum(theta), inputs_[1].quadrature_spectrum(theta)};
}

SpectrumResult quadrature_spectrum(const model::SystemParams& p, const model::SteadyState& ss,
                                   const InputPair& inputs, const std::vector<double>& omega_grid,
                                   double theta, int threads) {
    const SpectrumEngine engine(p, ss, inputs);
    const auto s_in = engine.input_spectra(theta);
    SpectrumResult out;
    out.omega = omega_grid;
    out.theta = theta;
    out.S1.resize(omega_grid.size());
    out.S2.resize(omega_grid.size());
    out.sum_residual.resize(omega_grid.size());
    parallel_for(omega_grid.size(), threads, [&](std::size_t i) {
        const auto s = engine.output_spectra(omega_grid[i], theta);
        out.S1[i] = s[0];
        out.S2[i] = s[1];
        out.sum_residual[i] = (s[0] + s[1]) - (s_in[0] + s_in[1]);
    });
    return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw std::invalid_argument("invalid log grid");
    std::vector<double> g(static_cast<std::size_t>(points));
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    if (!(hi >= lo) || points < 1) throw std::invalid_argument("invalid linear grid");
    std::vector<double> g(static_cast<std::size_t>(points));
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return g;
}

std::vector<double> default_grid() { return log_grid(1e-4, 1e3, 400); }

} // namespace qswap::spectra
