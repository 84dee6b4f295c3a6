#include "qswap/noise.hpp"
#include "qswap/errors.hpp"

#include <cmath>
#include <sstream>

namespace qswap::noise {

namespace {

// Expand the product of two matrix-unit expansions with the atomic structure
// constants.
Op3 product(const Op3& x, const Op3& y) {
    Op3 out = Op3::Zero();
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const cd xij = x(i - 1, j - 1);
            if (xij == 0.0) continue;
            for (int k = 1; k <= 3; ++k)
                for (int l = 1; l <= 3; ++l) {
                    const cd ykl = y(k - 1, l - 1);
                    if (ykl == 0.0) continue;
                    if (const auto t = atomic_product(i, j, k, l)) {
                        out(t->i - 1, t->j - 1) += t->coefficient * xij * ykl;
                    }
                }
        }
    return out;
}

} // namespace

Eigen::MatrixXcd einstein_gram(const AtomicDissipator& dis, const Op3& rho, double N,
                               const std::vector<Op3>& ops) {
    const auto n = static_cast<Eigen::Index>(ops.size());
    Eigen::MatrixXcd g(n, n);
    std::vector<Op3> damped;
    damped.reserve(ops.size());
    for (const auto& x : ops) damped.push_back(dis(x));
    for (Eigen::Index a = 0; a < n; ++a) {
        const Op3& x = ops[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < n; ++b) {
            const Op3 yd = ops[static_cast<std::size_t>(b)].adjoint();
            const Op3 dyd = dis(yd);
            const Op3 term = dis(product(x, yd)) - product(damped[static_cast<std::size_t>(a)], yd) -
                             product(x, dyd);
            g(a, b) = N * (rho * term).trace();
        }
    }
    return g;
}

DiffusionMatrix diffusion_matrix(const model::SystemParams& p, const model::SteadyState& ss) {
    using namespace model::basis;
    DiffusionMatrix out;
    out.Gamma.setZero();
    if (ss.N == 0.0) return out;

    std::vector<Op3> ops;
    for (int k = 0; k < kAtomic; ++k) {
        const auto [i, j] = levels(k);
        ops.push_back(unit(i, j));
    }
    const Eigen::MatrixXcd g = einstein_gram(model::dissipator(p, ss), ss.rho, ss.N, ops);
    const Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -1e-10 * std::max(hi, 0.0) && lo < -1e-300) {
        std::ostringstream os;
        os << "diffusion matrix is not positive semidefinite: min eigenvalue " << lo << ", max " << hi;
        throw NumericError(os.str());
    }
    out.Gamma.topLeftCorner<kAtomic, kAtomic>() = h;
    return out;
}

cd correlation(const DiffusionMatrix& d, const Vec12& w) {
    // sum_mu sum_nu w_mu conj(w_nu) Gamma_{mu nu}
    return (w.transpose() * d.Gamma * w.conjugate())(0, 0);
}

Vec12 dark_dipole_weights() {
    using namespace model::basis;
    Vec12 w = Vec12::Zero();
    w(dP13) = 1.0 / std::sqrt(2.0);
    w(dP23) = -1.0 / std::sqrt(2.0);
    return w;
}

Vec12 dark_coherence_weights() {
    // |-><+| = (P11 - P22 + P12 - P21)/2 ; P33 does not appear.
    using namespace model::basis;
    Vec12 w = Vec12::Zero();
    w(dP11) = 0.5;
    w(dP22) = -0.5;
    w(dP12) = 0.5;
    w(dP21) = -0.5;
    return w;
}

} // namespace qswap::noise
