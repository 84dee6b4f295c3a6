#include "qswap/atomic_algebra.hpp"

#include <stdexcept>

namespace qswap {

namespace {
void check_level(int i) {
    if (i < 1 || i > 3) {
        throw std::out_of_range("atomic level index must be 1, 2 or 3, got " + std::to_string(i));
    }
}
} // namespace

Op3 unit(int i, int j) {
    check_level(i);
    check_level(j);
    Op3 m = Op3::Zero();
    m(i - 1, j - 1) = 1.0;
    return m;
}

std::optional<ProductTerm> atomic_product(int i, int j, int k, int l) {
    check_level(i);
    check_level(j);
    check_level(k);
    check_level(l);
    if (j != k) return std::nullopt;
    return ProductTerm{i, l, 1.0};
}

GroundFrame GroundFrame::bare() {
    return {Eigen::Vector3cd(1.0, 0.0, 0.0), Eigen::Vector3cd(0.0, 1.0, 0.0)};
}

AtomicDissipator::AtomicDissipator(double gamma1, double gamma2, double gamma0,
                                   const GroundFrame& frame, DephasingForm form)
    : gamma1_(gamma1), gamma2_(gamma2), gamma0_(gamma0), form_(form),
      proj_first_(frame.first * frame.first.adjoint()),
      proj_second_(frame.second * frame.second.adjoint()) {}

Op3 AtomicDissipator::operator()(const Op3& x) const {
    // L_k = sqrt(gamma_k) |k><3|:  L^dag x L - {L^dag L, x}/2
    const Op3 e31 = unit(3, 1), e13 = unit(1, 3);
    const Op3 e32 = unit(3, 2), e23 = unit(2, 3);
    const Op3 e33 = unit(3, 3);
    const Op3 anti = e33 * x + x * e33;
    Op3 out = gamma1_ * (e31 * x * e13) + gamma2_ * (e32 * x * e23) - 0.5 * (gamma1_ + gamma2_) * anti;
    if (gamma0_ == 0.0) return out;
    if (form_ == DephasingForm::CoherenceOnly) {
        out -= gamma0_ * (proj_first_ * x * proj_second_ + proj_second_ * x * proj_first_);
    } else {
        const Op3 sigma = proj_first_ - proj_second_;
        const Op3 ground = proj_first_ + proj_second_;
        out += 0.5 * gamma0_ * (sigma * x * sigma - 0.5 * (ground * x + x * ground));
    }
    return out;
}

} // namespace qswap
