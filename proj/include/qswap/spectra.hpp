// spectra.hpp - frequency response of the linearized system and output
// quadrature noise spectra.
//
// Fourier convention x(omega) = int x(t) e^{i omega t} dt, so a cavity pole
// reads 1/(kappa - i omega). Spectra are in shot-noise units (vacuum = 1).

#pragma once

#include "qswap/input_state.hpp"
#include "qswap/model.hpp"
#include "qswap/noise.hpp"

#include <array>
#include <vector>

namespace qswap::spectra {

using model::Mat12;

using InputPair = std::array<GaussianInputState, 2>;

// R(omega) = (-i omega I - M)^{-1}. Throws NumericError if the system is
// numerically singular at omega (reciprocal condition below 1e-12).
Mat12 response_matrix(const model::DriftMatrix& drift, double omega);

// Output sidebands (dA1_out, dA1_out^dag, dA2_out, dA2_out^dag) as
// T_in * inputs + T_at * atomic forces.
struct TransferSet {
    Eigen::Matrix4cd T_in;
    Eigen::Matrix<cd, 4, model::basis::kDim> T_at;
};

TransferSet output_transfer(const model::SystemParams& p, const model::DriftMatrix& drift, double omega);

// S = G_aa + G_a+a+ + 2 Re(e^{-2 i theta} G_a,a+) for a 2x2 Gram block.
double quadrature_from_gram(const Eigen::Matrix2cd& g, double theta);

// Precomputed drift, diffusion and input correlations of one operating point.
class SpectrumEngine {
public:
    SpectrumEngine(const model::SystemParams& p, const model::SteadyState& ss, const InputPair& inputs);

    // Output Gram matrix of (a1, a1^dag, a2, a2^dag) at omega.
    Eigen::Matrix4cd output_gram(double omega) const;

    // Output quadrature spectra of both fields; theta is measured from each
    // field's output mean phase.
    std::array<double, 2> output_spectra(double omega, double theta) const;

    // Input quadrature spectra at the same angle.
    std::array<double, 2> input_spectra(double theta) const;

    const model::DriftMatrix& drift() const { return drift_; }
    const noise::DiffusionMatrix& diffusion() const { return diffusion_; }
    const Eigen::Matrix4cd& input_gram() const { return input_gram_; }
    double output_phase(int field) const { return out_phase_[static_cast<std::size_t>(field - 1)]; }
    double input_phase(int field) const { return in_phase_[static_cast<std::size_t>(field - 1)]; }
    const model::SystemParams& params() const { return params_; }

private:
    model::SystemParams params_;
    InputPair inputs_;
    model::DriftMatrix drift_;
    noise::DiffusionMatrix diffusion_;
    Eigen::Matrix4cd input_gram_;
    std::array<double, 2> in_phase_{};
    std::array<double, 2> out_phase_{};
};

struct SpectrumResult {
    std::vector<double> omega;
    double theta = 0.0;
    std::vector<double> S1;
    std::vector<double> S2;
    // (S1 + S2)_out - (S1 + S2)_in
    std::vector<double> sum_residual;
};

SpectrumResult quadrature_spectrum(const model::SystemParams& p, const model::SteadyState& ss,
                                   const InputPair& inputs, const std::vector<double>& omega_grid,
                                   double theta, int threads = 1);

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> linear_grid(double lo, double hi, int points);
// 400 log-spaced points over [1e-4, 1e3].
std::vector<double> default_grid();

} // namespace qswap::spectra
