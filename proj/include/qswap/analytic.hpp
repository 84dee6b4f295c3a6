// analytic.hpp - closed-form solution of the balanced configuration.
//
// With g1 = g2, kappa1 = kappa2, gamma1 = gamma2 and Omega1 = Omega2 the atoms
// are pumped into the dark state (|1> - |2>)/sqrt(2). The dark field mode
// A_- = (A1 - A2)/sqrt(2) then couples to the medium through
//
//   beta(w) = g^2 N (gamma0 - i w) / ((gamma - i w)(gamma0 - i w) + Omega'^2)
//
// and is reflected with lambda_- = (kappa + i w - beta)/(kappa - i w + beta),
// while the bright mode A_+ sees an empty cavity, lambda_+ = (kappa + i w)/(kappa - i w).
// For gamma0 > 0 these expressions neglect the ground-coherence noise and are
// approximate; the full numerical model is authoritative there.

#pragma once

#include "qswap/input_state.hpp"
#include "qswap/model.hpp"

#include <array>
#include <string>
#include <vector>

namespace qswap::analytic {

struct SymmetricCase {
    double gN2 = 0.0;  // g^2 N
    double gamma = 0.0;
    double gamma0 = 0.0;
    double kappa = 1.0;
    double Omega_prime = 0.0;

    // Throws std::invalid_argument unless the parameters and drive are balanced.
    static SymmetricCase from(const model::SystemParams& p, const model::DriveSpec& d);
    // Direct construction from rates; Omega is the per-field Rabi frequency.
    static SymmetricCase from_rates(double g_sqrtN, double gamma, double Omega, double gamma0,
                                    double kappa = 1.0);

    double cooperativity() const { return gN2 / (2.0 * kappa * gamma); }
    std::vector<std::string> warnings() const;
};

cd beta(const SymmetricCase& c, double omega);

struct Lambdas {
    cd plus;
    cd minus;
};
Lambdas lambdas(const SymmetricCase& c, double omega);

// Output quadrature spectra (S_X1, S_X2) for broadband inputs.
std::array<double, 2> symmetric_spectra(const SymmetricCase& c,
                                        const std::array<GaussianInputState, 2>& inputs, double omega,
                                        double theta);

// kappa_CPT = gamma0 + kappa Omega'^2 / (g^2 N)
double kappa_cpt(const SymmetricCase& c);

struct Efficiency {
    double exact;   // |lambda_+ - lambda_-|^2 / 4
    double approx;  // kappa^2/(kappa^2 + w^2) * w^2/(w^2 + kappa_CPT^2)
};
Efficiency efficiency(const SymmetricCase& c, double omega);

// (1/(1 + kappa_CPT/kappa))^2, the plateau estimate at w = sqrt(kappa kappa_CPT).
double plateau_efficiency(const SymmetricCase& c);

// Atom-cavity normal mode frequency g sqrt(N).
double normal_mode_frequency(const SymmetricCase& c);

enum class Regime { Transparency, Swapping, Reflection, Crossover };
const char* to_string(Regime r);

struct RegimeLabel {
    Regime regime;
    double kappa_cpt;
    double kappa;
};

// Transparency: w < kappa_CPT/3; swapping: 3 kappa_CPT < w < kappa/3;
// reflection: w > 3 kappa; crossover otherwise.
RegimeLabel classify_regime(double kappa_cpt, double kappa, double omega);
RegimeLabel classify_regime(const SymmetricCase& c, double omega);

} // namespace qswap::analytic
