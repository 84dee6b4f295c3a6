// noise.hpp - Langevin diffusion matrix of the atomic noise forces.
//
// The forces are delta-correlated, <F_mu(t) F_nu(t')^dag> = Gamma_{mu nu} delta(t - t'),
// equivalently Gamma_{mu nu} is the coefficient of 2 pi delta(omega - omega') in
// <F_mu(omega) F_nu(omega')^dag>. Gamma follows from the generalized Einstein
// relation applied to the single-atom damping superoperator and is scaled by N
// (independent, identically prepared atoms). Field rows and columns are zero:
// vacuum noise enters through the cavity inputs.

#pragma once

#include "qswap/model.hpp"

#include <vector>

namespace qswap::noise {

using model::Mat12;
using model::Vec12;

struct DiffusionMatrix {
    Mat12 Gamma;
};

// Einstein-relation Gram matrix for an arbitrary list of single-atom
// operators: G_ab = N <D(x_a x_b^dag) - D(x_a) x_b^dag - x_a D(x_b^dag)>.
Eigen::MatrixXcd einstein_gram(const AtomicDissipator& dis, const Op3& rho, double N,
                               const std::vector<Op3>& ops);

// Throws NumericError if Gamma fails positivity by more than 1e-10 of its
// largest eigenvalue.
DiffusionMatrix diffusion_matrix(const model::SystemParams& p, const model::SteadyState& ss);

// <(sum_mu w_mu F_mu)(sum_nu w_nu F_nu)^dag>
cd correlation(const DiffusionMatrix& d, const Vec12& w);

// Noise-force weights of the dark dipole P_- = (P13 - P23)/sqrt(2) and of the
// ground coherence Q = |-><+| in the balanced dark/bright basis.
Vec12 dark_dipole_weights();
Vec12 dark_coherence_weights();

} // namespace qswap::noise
