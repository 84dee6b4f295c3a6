#include "qswap/model.hpp"
#include "qswap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qswap::model {

const char* to_string(GroundDephasing d) {
    return d == GroundDephasing::Bare ? "bare" : "dark_bright";
}

GroundDephasing ground_dephasing_from_string(const std::string& s) {
    if (s == "dark_bright") return GroundDephasing::DarkBright;
    if (s == "bare") return GroundDephasing::Bare;
    throw std::invalid_argument("unknown ground dephasing frame '" + s +
                                "' (expected 'dark_bright' or 'bare')");
}

double SystemParams::cooperativity() const {
    return g1_squared_N() / (2.0 * kappa1 * gamma());
}

bool SystemParams::symmetric() const {
    return g1 == g2 && gamma1 == gamma2 && kappa1 == kappa2;
}

ValidatedParams validate_params(const RawParams& raw) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(raw.g_sqrtN) || !finite(raw.gamma) || !finite(raw.gamma0) || !finite(raw.kappa) ||
        !finite(raw.N)) {
        throw std::invalid_argument("parameters must be finite");
    }
    if (raw.kappa <= 0.0) throw std::invalid_argument("kappa must be > 0");
    if (raw.N < 0.0) throw std::invalid_argument("N must be >= 0");
    if (raw.g_sqrtN < 0.0) throw std::invalid_argument("g_sqrtN must be >= 0");
    if (raw.gamma0 < 0.0) throw std::invalid_argument("gamma0 must be >= 0");

    double gamma1 = raw.gamma;
    double gamma2 = raw.gamma;
    if (raw.gamma1 || raw.gamma2) {
        if (!raw.gamma1 || !raw.gamma2) {
            throw std::invalid_argument("gamma1 and gamma2 must be given together");
        }
        gamma1 = *raw.gamma1;
        gamma2 = *raw.gamma2;
        if (raw.gamma != 0.0 && std::abs(0.5 * (gamma1 + gamma2) - raw.gamma) > 1e-12 * raw.gamma) {
            throw std::invalid_argument("gamma must equal (gamma1 + gamma2)/2 when both are given");
        }
    }
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) {
        throw std::invalid_argument("excited-state decay rates must be > 0");
    }

    ValidatedParams out;
    SystemParams& p = out.params;
    p.N = raw.N;
    if (raw.N > 0.0) {
        p.g1 = p.g2 = raw.g_sqrtN / std::sqrt(raw.N);
    } else {
        p.g1 = p.g2 = 1.0;  // irrelevant without atoms
    }
    p.gamma1 = gamma1;
    p.gamma2 = gamma2;
    p.gamma0 = raw.gamma0;
    p.kappa1 = p.kappa2 = raw.kappa;
    p.dephasing = raw.dephasing;

    if (raw.N > 0.0 && raw.g_sqrtN == 0.0) {
        throw std::invalid_argument("g_sqrtN must be > 0 when N > 0");
    }
    if (raw.N == 0.0) {
        out.warnings.push_back("N = 0: empty cavity, atomic medium disabled");
    }
    if (p.gamma0 >= p.gamma()) {
        std::ostringstream os;
        os << "gamma0 = " << p.gamma0 << " is not small compared to gamma = " << p.gamma();
        out.warnings.push_back(os.str());
    }
    return out;
}

SystemParams symmetric_params(double g_sqrtN, double gamma, double gamma0, double kappa, double N) {
    RawParams raw;
    raw.g_sqrtN = g_sqrtN;
    raw.gamma = gamma;
    raw.gamma0 = gamma0;
    raw.kappa = kappa;
    raw.N = N;
    return validate_params(raw).params;
}

double DriveSpec::Omega_prime() const { return std::hypot(Omega1, Omega2); }

std::vector<std::string> check_drive(const SystemParams& p, const DriveSpec& d) {
    if (!(d.Omega1 >= 0.0) || !(d.Omega2 >= 0.0)) {
        throw std::invalid_argument("Rabi frequencies must be >= 0");
    }
    std::vector<std::string> warnings;
    const double op2 = d.Omega1 * d.Omega1 + d.Omega2 * d.Omega2;
    if (op2 == 0.0 && p.N > 0.0) {
        throw std::invalid_argument("at least one Rabi frequency must be > 0");
    }
    if (p.N > 0.0 && p.gamma0 > 0.0 && op2 <= 10.0 * p.gamma() * p.gamma0) {
        std::ostringstream os;
        os << "Omega'^2 = " << op2 << " does not saturate the two-photon transition (gamma*gamma0 = "
           << p.gamma() * p.gamma0 << ")";
        warnings.push_back(os.str());
    }
    return warnings;
}

cd SteadyState::P(int i, int j) const { return N * rho(j - 1, i - 1); }

cd SteadyState::A_out(const SystemParams& p, int field) const {
    const double kappa = field == 1 ? p.kappa1 : p.kappa2;
    return std::sqrt(2.0 * kappa) * A(field) - A_in(field);
}

GroundFrame dark_bright_frame(const SystemParams&, const DriveSpec& d) {
    const double op = d.Omega_prime();
    if (op == 0.0) return GroundFrame::bare();
    const cd ph = std::polar(1.0, d.phase);
    // g_i <A_i> = Omega_i e^{i phase}
    const cd w1 = d.Omega1 * ph;
    const cd w2 = d.Omega2 * ph;
    GroundFrame f;
    f.first = Eigen::Vector3cd(w2, -w1, 0.0) / op;
    f.second = Eigen::Vector3cd(std::conj(w1), std::conj(w2), 0.0) / op;
    return f;
}

namespace {

using Mat9 = Eigen::Matrix<cd, 9, 9>;
using Vec9 = Eigen::Matrix<cd, 9, 1>;

int flat(int i, int j) { return 3 * (i - 1) + (j - 1); }

DephasingForm dephasing_form(const SystemParams& p) {
    return p.dephasing == GroundDephasing::Bare ? DephasingForm::Lindblad : DephasingForm::CoherenceOnly;
}

GroundFrame frame_for(const SystemParams& p, const DriveSpec& d) {
    return p.dephasing == GroundDephasing::DarkBright ? dark_bright_frame(p, d) : GroundFrame::bare();
}

Op3 mean_field_hamiltonian(const SystemParams& p, cd a1, cd a2) {
    // H = -(g1 A1 P31 + g2 A2 P32 + h.c.)
    Op3 h = -(p.g1 * a1 * unit(3, 1) + p.g2 * a2 * unit(3, 2));
    return h + h.adjoint().eval();
}

// Row (ab), column (cd): coefficient of E_cd in G(E_ab), with G the
// single-atom Heisenberg generator in the mean field.
Mat9 generator(const Op3& h, const AtomicDissipator& dis) {
    Mat9 k;
    const cd I(0.0, 1.0);
    for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
            const Op3 x = unit(a, b);
            const Op3 gx = I * (h * x - x * h) + dis(x);
            for (int c = 1; c <= 3; ++c)
                for (int e = 1; e <= 3; ++e) k(flat(a, b), flat(c, e)) = gx(c - 1, e - 1);
        }
    }
    return k;
}

Vec9 means_from_rho(const Op3& rho) {
    Vec9 s;
    for (int c = 1; c <= 3; ++c)
        for (int e = 1; e <= 3; ++e) s(flat(c, e)) = rho(e - 1, c - 1);
    return s;
}

Op3 rho_from_means(const Vec9& s) {
    Op3 rho;
    for (int c = 1; c <= 3; ++c)
        for (int e = 1; e <= 3; ++e) rho(e - 1, c - 1) = s(flat(c, e));
    return rho;
}

double rate_scale(const SystemParams& p, cd a1, cd a2) {
    return std::max({p.gamma1, p.gamma2, p.gamma0, p.kappa1, p.kappa2, p.g1 * std::abs(a1),
                     p.g2 * std::abs(a2)});
}

} // namespace

double mean_field_residual(const SystemParams& p, const SteadyState& ss) {
    const AtomicDissipator dis(p.gamma1, p.gamma2, p.gamma0, ss.frame, dephasing_form(p));
    const Op3 h = mean_field_hamiltonian(p, ss.A1, ss.A2);
    const Mat9 k = generator(h, dis);
    double res = (k * means_from_rho(ss.rho)).cwiseAbs().maxCoeff() * ss.N;
    res = std::max(res, std::abs(ss.rho.trace() - 1.0) * ss.N);
    const cd I(0.0, 1.0);
    const cd c1 = -p.kappa1 * ss.A1 + I * p.g1 * ss.P(1, 3) + std::sqrt(2.0 * p.kappa1) * ss.A1_in;
    const cd c2 = -p.kappa2 * ss.A2 + I * p.g2 * ss.P(2, 3) + std::sqrt(2.0 * p.kappa2) * ss.A2_in;
    return std::max({res, std::abs(c1), std::abs(c2)});
}

SteadyState solve_steady_state(const SystemParams& p, const DriveSpec& d, const SolverOptions& opt) {
    check_drive(p, d);

    SteadyState ss;
    ss.N = p.N;
    const cd ph = std::polar(1.0, d.phase);
    ss.A1 = d.Omega1 / p.g1 * ph;
    ss.A2 = d.Omega2 / p.g2 * ph;
    ss.frame = frame_for(p, d);

    // Seed: the dark state of the drive.
    const GroundFrame db = dark_bright_frame(p, d);
    ss.rho = d.Omega_prime() > 0.0 ? Op3(db.first * db.first.adjoint()) : unit(1, 1);

    if (p.N > 0.0) {
        const AtomicDissipator dis(p.gamma1, p.gamma2, p.gamma0, ss.frame, dephasing_form(p));
        const Op3 h = mean_field_hamiltonian(p, ss.A1, ss.A2);

        // Stationarity of all nine means plus normalization, J x = b.
        Eigen::Matrix<cd, 10, 9> jac;
        jac.topRows<9>() = generator(h, dis);
        jac.row(9).setZero();
        jac(9, flat(1, 1)) = jac(9, flat(2, 2)) = jac(9, flat(3, 3)) = 1.0;
        Eigen::Matrix<cd, 10, 1> rhs = Eigen::Matrix<cd, 10, 1>::Zero();
        rhs(9) = 1.0;

        const double scale = rate_scale(p, ss.A1, ss.A2);
        auto residual = [&](const Vec9& s) { return (jac * s - rhs).cwiseAbs().maxCoeff() / scale; };

        const Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<cd, 10, 9>> cod(jac);
        Vec9 s = means_from_rho(ss.rho);
        double res = residual(s);
        int it = 0;
        while (res > opt.tolerance && it < opt.max_iterations) {
            const Vec9 step = cod.solve(rhs - jac * s);
            double lambda = 1.0;
            Vec9 trial = s + step;
            double trial_res = residual(trial);
            while (trial_res > res && lambda > 1e-4) {
                lambda *= 0.5;
                trial = s + lambda * step;
                trial_res = residual(trial);
            }
            ++it;
            if (trial_res >= res && lambda <= 1e-4) break;
            // keep rho Hermitian
            Op3 r = rho_from_means(trial);
            r = 0.5 * (r + r.adjoint().eval());
            s = means_from_rho(r);
            res = residual(s);
        }
        if (res > opt.tolerance) {
            std::ostringstream os;
            os << "steady state did not converge after " << it << " iterations, residual " << res;
            throw NumericError(os.str());
        }
        ss.rho = rho_from_means(s);
        ss.residual = res;
        ss.iterations = it;
    }

    const cd I(0.0, 1.0);
    ss.A1_in = (p.kappa1 * ss.A1 - I * p.g1 * ss.P(1, 3)) / std::sqrt(2.0 * p.kappa1);
    ss.A2_in = (p.kappa2 * ss.A2 - I * p.g2 * ss.P(2, 3)) / std::sqrt(2.0 * p.kappa2);
    return ss;
}

AtomicDissipator dissipator(const SystemParams& p, const SteadyState& ss) {
    return AtomicDissipator(p.gamma1, p.gamma2, p.gamma0, ss.frame, dephasing_form(p));
}

// --------------------------------------------------------------------------

namespace basis {

std::pair<int, int> levels(int k) {
    static constexpr std::array<std::pair<int, int>, kAtomic> lv{
        {{1, 3}, {3, 1}, {2, 3}, {3, 2}, {1, 2}, {2, 1}, {1, 1}, {2, 2}}};
    if (k < 0 || k >= kAtomic) throw std::out_of_range("not an atomic fluctuation index");
    return lv[static_cast<std::size_t>(k)];
}

Eigen::Matrix<cd, kAtomic, 1> decompose(const Op3& x) {
    Eigen::Matrix<cd, kAtomic, 1> c;
    for (int k = 0; k < dP11; ++k) {
        const auto [i, j] = levels(k);
        c(k) = x(i - 1, j - 1);
    }
    c(dP11) = x(0, 0) - x(2, 2);
    c(dP22) = x(1, 1) - x(2, 2);
    return c;
}

const char* name(int k) {
    static constexpr std::array<const char*, kDim> n{"dP13", "dP31", "dP23", "dP32", "dP12", "dP21",
                                                     "dP11", "dP22", "dA1",  "dA1+", "dA2",  "dA2+"};
    return n.at(static_cast<std::size_t>(k));
}

} // namespace basis

DriftMatrix build_drift_matrix(const SystemParams& p, const SteadyState& ss) {
    using namespace basis;
    const cd I(0.0, 1.0);
    const AtomicDissipator dis = dissipator(p, ss);
    const std::array<double, 2> g{p.g1, p.g2};
    const std::array<cd, 2> alpha{ss.A1, ss.A2};
    const std::array<double, 2> kappa{p.kappa1, p.kappa2};
    const std::array<int, 2> field{dA1, dA2};

    DriftMatrix out;
    out.M.setZero();
    out.input_coupling.setZero();

    auto mean = [&](const Op3& x) { return ss.N * (ss.rho * x).trace(); };

    for (int mu = 0; mu < kAtomic; ++mu) {
        const auto [i, j] = levels(mu);
        const Op3 x = unit(i, j);
        // i[H, x] with H = -sum_k g_k (A_k P3k + A_k^dag Pk3), linearized.
        for (int k = 0; k < 2; ++k) {
            const Op3 up = unit(3, k + 1);
            const Op3 down = unit(k + 1, 3);
            const Op3 c_up = up * x - x * up;
            const Op3 c_down = down * x - x * down;
            out.M.row(mu).head<kAtomic>() +=
                (-I * g[k] * alpha[k] * decompose(c_up) - I * g[k] * std::conj(alpha[k]) * decompose(c_down))
                    .transpose();
            out.M(mu, field[k]) += -I * g[k] * mean(c_up);
            out.M(mu, field[k] + 1) += -I * g[k] * mean(c_down);
        }
        out.M.row(mu).head<kAtomic>() += decompose(dis(x)).transpose();
    }

    // cavity: dA_k/dt = -kappa_k A_k + i g_k P_k3 + sqrt(2 kappa_k) A_k^in
    // no atoms, no back-action on the field
    const std::array<int, 2> lower{dP13, dP23};
    for (int k = 0; k < 2; ++k) {
        const int a = field[k];
        const double gk = ss.N > 0.0 ? g[k] : 0.0;
        out.M(a, a) = -kappa[k];
        out.M(a + 1, a + 1) = -kappa[k];
        out.M(a, lower[k]) = I * gk;
        out.M(a + 1, conjugate(lower[k])) = -I * gk;
        out.input_coupling(a, 2 * k) = std::sqrt(2.0 * kappa[k]);
        out.input_coupling(a + 1, 2 * k + 1) = std::sqrt(2.0 * kappa[k]);
    }
    return out;
}

} // namespace qswap::model
