// model.hpp - atom-cavity parameters, mean-field steady state and the
// linearized drift matrix of the quantum fluctuations.
//
// N three-level Lambda atoms sit in a single-ended cavity supporting two
// modes A1 (|1>-|3>) and A2 (|2>-|3>). All rates are expressed in units of a
// reference cavity decay rate. The system is parametrized by the intracavity
// Rabi frequencies Omega_i = g_i <A_i>; the input amplitudes that produce
// them are back-solved from the cavity equations.

#pragma once

#include "qswap/atomic_algebra.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qswap::model {

enum class GroundDephasing {
    // gamma0 damps only the coherence between the drive's dark and bright states
    DarkBright,
    // Lindblad dephasing of P12 in the {|1>,|2>} basis at gamma0 (optical
    // coherences broadened by gamma0/4)
    Bare,
};

const char* to_string(GroundDephasing d);
GroundDephasing ground_dephasing_from_string(const std::string& s);

struct SystemParams {
    double g1 = 1.0;
    double g2 = 1.0;
    double N = 1.0;
    double gamma1 = 0.5;
    double gamma2 = 0.5;
    double gamma0 = 0.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    GroundDephasing dephasing = GroundDephasing::DarkBright;

    double gamma() const { return 0.5 * (gamma1 + gamma2); }
    double g1_squared_N() const { return g1 * g1 * N; }
    double g2_squared_N() const { return g2 * g2 * N; }
    // C = g^2 N / (2 kappa gamma), taken on transition 1.
    double cooperativity() const;
    bool symmetric() const;
};

// Unvalidated parameter record, as read from a config file.
struct RawParams {
    double g_sqrtN = 0.0;
    double gamma = 0.0;
    double gamma0 = 0.0;
    double kappa = 1.0;
    double N = 1.0;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    GroundDephasing dephasing = GroundDephasing::DarkBright;
};

struct ValidatedParams {
    SystemParams params;
    std::vector<std::string> warnings;
};

// Hard errors (std::invalid_argument): non-positive kappa or gamma, negative
// gamma0 or N, non-finite values. Soft violations come back as warnings.
ValidatedParams validate_params(const RawParams& raw);

// Symmetric configuration g1 = g2, gamma1 = gamma2, kappa1 = kappa2.
SystemParams symmetric_params(double g_sqrtN, double gamma, double gamma0, double kappa = 1.0,
                              double N = 1.0);

struct DriveSpec {
    double Omega1 = 0.0;
    double Omega2 = 0.0;
    // Common phase of both intracavity fields (gauge); 0 means real positive.
    double phase = 0.0;

    double Omega_prime() const;
};

std::vector<std::string> check_drive(const SystemParams& p, const DriveSpec& d);

struct SteadyState {
    double N = 0.0;
    Op3 rho = Op3::Zero();  // single-atom density matrix
    cd A1{};
    cd A2{};
    cd A1_in{};
    cd A2_in{};
    GroundFrame frame = GroundFrame::bare();
    double residual = 0.0;
    int iterations = 0;

    // Collective mean <P_ij> = N rho_ji, levels 1..3.
    cd P(int i, int j) const;
    cd A(int field) const { return field == 1 ? A1 : A2; }
    cd A_in(int field) const { return field == 1 ? A1_in : A2_in; }
    cd A_out(const SystemParams& p, int field) const;
};

// Dark state (Omega2|1> - Omega1|2>)/Omega' of the given drive, as a frame
// (dark, bright).
GroundFrame dark_bright_frame(const SystemParams& p, const DriveSpec& d);

struct SolverOptions {
    double tolerance = 1e-12;
    int max_iterations = 200;
};

// Mean-field steady state. Throws std::invalid_argument if Omega' = 0 with
// N > 0, NumericError on non-convergence.
SteadyState solve_steady_state(const SystemParams& p, const DriveSpec& d,
                               const SolverOptions& opt = {});

// Residuals of every mean-value equation at ss (atomic and cavity), in rate
// units; used by tests and by the solver itself.
double mean_field_residual(const SystemParams& p, const SteadyState& ss);

// --------------------------------------------------------------------------
// Fluctuation basis

namespace basis {
constexpr int kDim = 12;
constexpr int kAtomic = 8;
enum Index : int {
    dP13 = 0, dP31, dP23, dP32, dP12, dP21, dP11, dP22,
    dA1, dA1d, dA2, dA2d,
};

// Conjugation partner (involution). dP11 and dP22 are self-paired.
constexpr int conjugate(int k) {
    constexpr std::array<int, kDim> perm{1, 0, 3, 2, 5, 4, 6, 7, 9, 8, 11, 10};
    return perm[static_cast<std::size_t>(k)];
}

// Matrix unit (i, j) behind an atomic index (k < kAtomic).
std::pair<int, int> levels(int k);

// Coefficients of a fluctuation delta(x) of a single-atom operator x
// expressed in the atomic part of the basis, eliminating dP33 = -dP11 - dP22.
Eigen::Matrix<cd, kAtomic, 1> decompose(const Op3& x);

const char* name(int k);
} // namespace basis

using Mat12 = Eigen::Matrix<cd, basis::kDim, basis::kDim>;
using Vec12 = Eigen::Matrix<cd, basis::kDim, 1>;

struct DriftMatrix {
    // d(dv)/dt = M dv + input_coupling * (dA1_in, dA1_in^dag, dA2_in, dA2_in^dag) + F
    Mat12 M;
    Eigen::Matrix<cd, basis::kDim, 4> input_coupling;
};

DriftMatrix build_drift_matrix(const SystemParams& p, const SteadyState& ss);

AtomicDissipator dissipator(const SystemParams& p, const SteadyState& ss);

} // namespace qswap::model
