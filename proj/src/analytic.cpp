#include "qswap/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qswap::analytic {

SymmetricCase SymmetricCase::from(const model::SystemParams& p, const model::DriveSpec& d) {
    if (!p.symmetric()) {
        throw std::invalid_argument("closed form requires g1 = g2, gamma1 = gamma2 and kappa1 = kappa2");
    }
    if (d.Omega1 != d.Omega2) throw std::invalid_argument("closed form requires Omega1 = Omega2");
    SymmetricCase c;
    c.gN2 = p.g1_squared_N();
    c.gamma = p.gamma();
    c.gamma0 = p.gamma0;
    c.kappa = p.kappa1;
    c.Omega_prime = d.Omega_prime();
    if (c.gN2 > 0.0 && !(c.Omega_prime > 0.0)) throw std::invalid_argument("closed form requires Omega' > 0");
    return c;
}

SymmetricCase SymmetricCase::from_rates(double g_sqrtN, double gamma, double Omega, double gamma0,
                                        double kappa) {
    if (!(gamma > 0.0) || !(kappa > 0.0) || gamma0 < 0.0 || Omega < 0.0 || g_sqrtN < 0.0) {
        throw std::invalid_argument("invalid symmetric-case rates");
    }
    if (g_sqrtN > 0.0 && !(Omega > 0.0)) throw std::invalid_argument("closed form requires Omega' > 0");
    return {g_sqrtN * g_sqrtN, gamma, gamma0, kappa, Omega * std::sqrt(2.0)};
}

std::vector<std::string> SymmetricCase::warnings() const {
    std::vector<std::string> w;
    if (gN2 > 0.0 && Omega_prime * Omega_prime > 0.1 * gN2) {
        w.push_back("Omega' is not small compared to g sqrt(N); kappa_CPT estimate is unreliable");
    }
    const double kc = kappa_cpt(*this);
    if (!(kc > 0.0 && kc < kappa)) {
        std::ostringstream os;
        os << "kappa_CPT = " << kc << " lies outside (0, kappa)";
        w.push_back(os.str());
    }
    return w;
}

cd beta(const SymmetricCase& c, double omega) {
    const cd iw(0.0, omega);
    return c.gN2 * (c.gamma0 - iw) / ((c.gamma - iw) * (c.gamma0 - iw) + c.Omega_prime * c.Omega_prime);
}

Lambdas lambdas(const SymmetricCase& c, double omega) {
    const cd iw(0.0, omega);
    const cd b = beta(c, omega);
    return {(c.kappa + iw) / (c.kappa - iw), (c.kappa + iw - b) / (c.kappa - iw + b)};
}

std::array<double, 2> symmetric_spectra(const SymmetricCase& c,
                                        const std::array<GaussianInputState, 2>& inputs, double omega,
                                        double theta) {
    const Lambdas l = lambdas(c, omega);
    const double keep = std::norm(l.plus + l.minus) / 4.0;
    const double swap = std::norm(l.plus - l.minus) / 4.0;
    const double added = (1.0 - std::norm(l.minus)) / 2.0;
    const double s1 = inputs[0].quadrature_spectrum(theta);
    const double s2 = inputs[1].quadrature_spectrum(theta);
    return {keep * s1 + swap * s2 + added, keep * s2 + swap * s1 + added};
}

double kappa_cpt(const SymmetricCase& c) {
    if (c.gN2 == 0.0) return c.gamma0;
    return c.gamma0 + c.kappa * c.Omega_prime * c.Omega_prime / c.gN2;
}

Efficiency efficiency(const SymmetricCase& c, double omega) {
    const Lambdas l = lambdas(c, omega);
    const double kc = kappa_cpt(c);
    const double w2 = omega * omega;
    const double k2 = c.kappa * c.kappa;
    const double approx = w2 == 0.0 ? 0.0 : k2 / (k2 + w2) * w2 / (w2 + kc * kc);
    return {std::norm(l.plus - l.minus) / 4.0, approx};
}

double plateau_efficiency(const SymmetricCase& c) {
    const double x = 1.0 / (1.0 + kappa_cpt(c) / c.kappa);
    return x * x;
}

double normal_mode_frequency(const SymmetricCase& c) { return std::sqrt(c.gN2); }

const char* to_string(Regime r) {
    switch (r) {
    case Regime::Transparency: return "transparency";
    case Regime::Swapping: return "swapping";
    case Regime::Reflection: return "reflection";
    case Regime::Crossover: return "crossover";
    }
    return "crossover";
}

RegimeLabel classify_regime(double kappa_cpt, double kappa, double omega) {
    const double w = std::abs(omega);
    Regime r = Regime::Crossover;
    if (w < kappa_cpt / 3.0) {
        r = Regime::Transparency;
    } else if (w > 3.0 * kappa_cpt && w < kappa / 3.0) {
        r = Regime::Swapping;
    } else if (w > 3.0 * kappa) {
        r = Regime::Reflection;
    }
    return {r, kappa_cpt, kappa};
}

RegimeLabel classify_regime(const SymmetricCase& c, double omega) {
    return classify_regime(kappa_cpt(c), c.kappa, omega);
}

} // namespace qswap::analytic
