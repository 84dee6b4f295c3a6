// atomic_algebra.hpp - single-atom operator algebra for a three-level Lambda atom.
//
// Levels are numbered 1..3 (ground states 1 and 2, excited state 3). An
// operator on one atom is a 3x3 complex matrix; unit(i, j) is |i><j|.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace qswap {

using cd = std::complex<double>;
using Op3 = Eigen::Matrix3cd;

Op3 unit(int i, int j);

struct ProductTerm {
    int i;
    int j;
    double coefficient;
};

// Structure constants of the matrix units: P_ij P_kl = delta_jk P_il.
// Returns nullopt when the product vanishes. Throws std::out_of_range for
// indices outside {1,2,3}.
std::optional<ProductTerm> atomic_product(int i, int j, int k, int l);

// Orthonormal basis of the ground manifold span{|1>,|2>} used by the
// ground-coherence damping term.
struct GroundFrame {
    Eigen::Vector3cd first;
    Eigen::Vector3cd second;

    static GroundFrame bare();
};

// How gamma0 acts on the ground manifold.
enum class DephasingForm {
    // Only the coherence between the two frame states decays (rate gamma0);
    // optical coherences and populations are untouched.
    CoherenceOnly,
    // Lindblad dephasing sqrt(gamma0/2)(|a><a| - |b><b|): same ground
    // coherence decay, optical coherences pick up an extra gamma0/4.
    Lindblad,
};

// Heisenberg-picture damping superoperator of one atom:
// spontaneous decay 3->1 at gamma1 and 3->2 at gamma2 (Lindblad form), and
// ground-state dephasing at gamma0 in the given frame.
class AtomicDissipator {
public:
    AtomicDissipator(double gamma1, double gamma2, double gamma0, const GroundFrame& frame,
                     DephasingForm form = DephasingForm::CoherenceOnly);

    Op3 operator()(const Op3& x) const;

private:
    double gamma1_;
    double gamma2_;
    double gamma0_;
    DephasingForm form_;
    Op3 proj_first_;
    Op3 proj_second_;
};

} // namespace qswap
