// oracle.hpp - time-domain Monte-Carlo estimate of the output quadrature
// spectra, independent of the frequency-domain solve.
//
// The linearized fluctuations are integrated as a real c-number Ornstein-
// Uhlenbeck process driven by white noise with the symmetrized covariance of
// the atomic forces and the input fields. Each step uses the exact discrete
// propagator and noise covariance (Van Loan), so the step size only sets the
// sampling rate. Output quadratures are integrated over each step and
// demodulated on a comb of frequency bins around every probe.

#pragma once

#include "qswap/spectra.hpp"

#include <cstdint>
#include <vector>

namespace qswap::oracle {

struct OracleOptions {
    std::vector<double> probes{0.0707, 0.2, 0.5, 1.0, 2.0};
    double duration = 1.0e6;                   // total simulated time, summed over chains
    double step = 0.05;
    double segment = 400.0 * 3.14159265358979323846;  // periodogram segment length
    int bins = 8;                              // frequency bins averaged per probe and segment
    int chains = 8;                            // independent realizations
    std::uint64_t seed = 1;
    double theta = 0.0;
    int threads = 1;
};

struct ProbeEstimate {
    double omega;
    double S1;
    double S1_error;  // standard error of the mean
    double S2;
    double S2_error;
    double S1_reference;  // frequency-domain result at omega
    double S2_reference;
};

struct OracleResult {
    std::vector<ProbeEstimate> probes;
    long segments = 0;
    long steps = 0;
};

// Throws std::invalid_argument if the duration covers fewer than 50 periods of
// the lowest probe or a probe's bin comb reaches omega <= 0; NumericError if
// the drift is not strictly stable.
OracleResult stochastic_oracle(const model::SystemParams& p, const model::SteadyState& ss,
                               const spectra::InputPair& inputs, const OracleOptions& opt);

} // namespace qswap::oracle
