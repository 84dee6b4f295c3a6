#include "qswap/oracle.hpp"
#include "qswap/errors.hpp"
#include "qswap/parallel.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace qswap::oracle {

namespace {

using namespace model::basis;

constexpr int kNoise = kDim + 4;  // atomic forces, then (a1_in, a1_in^dag, a2_in, a2_in^dag)
constexpr int kState = kDim + 2;  // real fluctuations plus the two integrated output quadratures

using RealState = Eigen::Matrix<double, kState, 1>;

// Complex vector with conjugation-paired entries from real coordinates: a pair
// (k, partner) holds (x_k + i x_partner, x_k - i x_partner), self-paired
// entries are real.
template <int n>
Eigen::Matrix<cd, n, n> realification(const std::array<int, n>& partner) {
    Eigen::Matrix<cd, n, n> t = Eigen::Matrix<cd, n, n>::Zero();
    for (int k = 0; k < n; ++k) {
        const int q = partner[static_cast<std::size_t>(k)];
        if (q == k) {
            t(k, k) = 1.0;
        } else if (k < q) {
            t(k, k) = 1.0;
            t(k, q) = cd(0.0, 1.0);
            t(q, k) = 1.0;
            t(q, q) = cd(0.0, -1.0);
        }
    }
    return t;
}

std::array<int, kDim> state_partners() {
    std::array<int, kDim> a{};
    for (int k = 0; k < kDim; ++k) a[static_cast<std::size_t>(k)] = conjugate(k);
    return a;
}

std::array<int, kNoise> noise_partners() {
    std::array<int, kNoise> a{};
    for (int k = 0; k < kDim; ++k) a[static_cast<std::size_t>(k)] = conjugate(k);
    a[kDim] = kDim + 1;
    a[kDim + 1] = kDim;
    a[kDim + 2] = kDim + 3;
    a[kDim + 3] = kDim + 2;
    return a;
}

template <class M>
Eigen::MatrixXd real_part_checked(const M& m, const char* what) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (m.imag().cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw NumericError(std::string("oracle: ") + what + " is not real in the real coordinates");
    }
    return m.real();
}

// Exact discretization of ds = A s dt + dW, <dW dW^T> = Q dt, over one step.
struct Discrete {
    Eigen::Matrix<double, kState, kDim> propagator;  // acting on (x, Y = 0)
    Eigen::Matrix<double, kState, kState> noise_root;
};

Discrete van_loan(const Eigen::Matrix<double, kState, kState>& a, const Eigen::Matrix<double, kState, kState>& q,
                  double h) {
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * kState, 2 * kState);
    big.topLeftCorner(kState, kState) = -a * h;
    big.topRightCorner(kState, kState) = q * h;
    big.bottomRightCorner(kState, kState) = a.transpose() * h;
    const Eigen::MatrixXd e = big.exp();
    const Eigen::Matrix<double, kState, kState> phi = e.bottomRightCorner(kState, kState).transpose();
    Eigen::Matrix<double, kState, kState> qd = phi * e.topRightCorner(kState, kState);
    qd = 0.5 * (qd + qd.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kState, kState>> es(qd);
    const Eigen::Matrix<double, kState, 1> root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Discrete d;
    d.propagator = phi.leftCols<kDim>();
    d.noise_root = es.eigenvectors() * root.asDiagonal();
    return d;
}

// Stationary covariance: A P + P A^T + Q = 0.
Eigen::Matrix<double, kDim, kDim> lyapunov(const Eigen::Matrix<double, kDim, kDim>& a,
                                           const Eigen::Matrix<double, kDim, kDim>& q) {
    constexpr int n2 = kDim * kDim;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(kDim, kDim);
    const Eigen::MatrixXd ad = a;
    const Eigen::MatrixXd k = Eigen::kroneckerProduct(id, ad).eval() + Eigen::kroneckerProduct(ad, id).eval();
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n2);
    const Eigen::VectorXd sol = k.partialPivLu().solve(rhs);
    Eigen::Matrix<double, kDim, kDim> p = Eigen::Map<const Eigen::Matrix<double, kDim, kDim>>(sol.data());
    return 0.5 * (p + p.transpose());
}

struct ChainPlan {
    long segments;
    std::uint64_t index;
};

} // namespace

OracleResult stochastic_oracle(const model::SystemParams& p, const model::SteadyState& ss,
                               const spectra::InputPair& inputs, const OracleOptions& opt) {
    if (opt.probes.empty()) throw std::invalid_argument("oracle needs at least one probe frequency");
    if (!(opt.step > 0.0) || !(opt.segment > opt.step) || opt.bins < 1 || opt.chains < 1) {
        throw std::invalid_argument("oracle step, segment, bins and chains must be positive");
    }
    const long steps_per_segment = std::lround(opt.segment / opt.step);
    const double seg_len = static_cast<double>(steps_per_segment) * opt.step;
    const double bin_spacing = 2.0 * M_PI / seg_len;
    double lowest = opt.probes.front();
    for (double w : opt.probes) lowest = std::min(lowest, w);
    if (!(lowest > 0.0)) throw std::invalid_argument("oracle probes must be > 0");
    if (opt.duration < 50.0 * 2.0 * M_PI / lowest) {
        throw std::invalid_argument("oracle duration covers fewer than 50 periods of the lowest probe");
    }
    if (lowest - 0.5 * (opt.bins - 1) * bin_spacing <= 0.0) {
        throw std::invalid_argument("oracle segment too short to resolve the lowest probe");
    }
    const long total_segments = static_cast<long>(opt.duration / seg_len);
    if (total_segments < 2) throw std::invalid_argument("oracle duration shorter than two segments");

    const spectra::SpectrumEngine engine(p, ss, inputs);
    const auto& drift = engine.drift();
    {
        const Eigen::ComplexEigenSolver<model::Mat12> es(drift.M);
        if (es.eigenvalues().real().maxCoeff() >= 0.0) throw NumericError("oracle: drift matrix is not strictly stable");
    }

    // Real coordinates.
    const auto t_state = realification<kDim>(state_partners());
    const auto t_noise = realification<kNoise>(noise_partners());
    const model::Mat12 t_state_inv = t_state.inverse();

    Eigen::Matrix<cd, kNoise, kNoise> gram = Eigen::Matrix<cd, kNoise, kNoise>::Zero();
    gram.topLeftCorner<kDim, kDim>() = engine.diffusion().Gamma;
    gram.bottomRightCorner<4, 4>() = engine.input_gram();
    // symmetrized ordering: (<w_a w_b^dag> + <w_b^dag w_a>)/2
    const auto partner = noise_partners();
    Eigen::Matrix<cd, kNoise, kNoise> sym;
    for (int a = 0; a < kNoise; ++a)
        for (int b = 0; b < kNoise; ++b)
            sym(a, b) = 0.5 * (gram(a, b) + gram(partner[static_cast<std::size_t>(b)], partner[static_cast<std::size_t>(a)]));
    const Eigen::Matrix<cd, kNoise, kNoise> t_noise_inv = t_noise.inverse();
    const Eigen::MatrixXd noise_cov = real_part_checked(t_noise_inv * sym * t_noise_inv.adjoint(), "noise covariance");

    Eigen::Matrix<cd, kDim, kNoise> couple;
    couple.leftCols<kDim>() = model::Mat12::Identity();
    couple.rightCols<4>() = drift.input_coupling;
    const Eigen::MatrixXd a_x = real_part_checked(t_state_inv * drift.M * t_state, "drift");
    const Eigen::MatrixXd g_x = real_part_checked(t_state_inv * couple * t_noise, "noise coupling");

    // Output quadratures X_f = 2 Re(e^{-i theta_f}(sqrt(2 kappa_f) a_f - a_f,in)).
    Eigen::Matrix<double, kState, kState> a_s = Eigen::Matrix<double, kState, kState>::Zero();
    Eigen::Matrix<double, kState, kNoise> g_s = Eigen::Matrix<double, kState, kNoise>::Zero();
    a_s.topLeftCorner<kDim, kDim>() = a_x;
    g_s.topRows<kDim>() = g_x;
    for (int f = 0; f < 2; ++f) {
        const cd rot = std::polar(1.0, -(opt.theta + engine.output_phase(f + 1)));
        const double root = std::sqrt(2.0 * (f == 0 ? p.kappa1 : p.kappa2));
        const int field = f == 0 ? dA1 : dA2;
        a_s.row(kDim + f).head<kDim>() = (2.0 * rot * root * t_state.row(field)).real();
        g_s.row(kDim + f) = (-2.0 * rot * t_noise.row(kDim + 2 * f)).real();
    }
    const Eigen::Matrix<double, kState, kState> q_s = g_s * noise_cov * g_s.transpose();
    const Discrete disc = van_loan(a_s, q_s, opt.step);

    const Eigen::Matrix<double, kDim, kDim> p_stat =
        lyapunov(a_x, q_s.topLeftCorner<kDim, kDim>());
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kDim, kDim>> pes(p_stat);
    const Eigen::Matrix<double, kDim, kDim> init_root =
        pes.eigenvectors() * pes.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    // Frequency comb: probe-major, bins inner.
    const std::size_t n_probe = opt.probes.size();
    const std::size_t n_bin = static_cast<std::size_t>(opt.bins);
    std::vector<cd> rotation;
    for (double w : opt.probes)
        for (std::size_t q = 0; q < n_bin; ++q)
            rotation.push_back(std::polar(1.0, (w + (static_cast<double>(q) - 0.5 * (opt.bins - 1)) * bin_spacing) *
                                                   opt.step));

    std::vector<ChainPlan> plan;
    for (int c = 0; c < opt.chains; ++c) {
        const long share = total_segments / opt.chains + (c < total_segments % opt.chains ? 1 : 0);
        if (share > 0) plan.push_back({share, static_cast<std::uint64_t>(c)});
    }

    // per chain: segment-major, then field, then probe
    std::vector<std::vector<double>> chain_values(plan.size());
    parallel_for(plan.size(), opt.threads, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(plan[c].index)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        auto draw = [&]<int n>(std::integral_constant<int, n>) {
            Eigen::Matrix<double, n, 1> z;
            for (int k = 0; k < n; ++k) z(k) = normal(rng);
            return z;
        };

        Eigen::Matrix<double, kDim, 1> x = init_root * draw(std::integral_constant<int, kDim>{});
        std::vector<cd> acc(2 * rotation.size());
        std::vector<cd> phasor(rotation.size());
        auto& out = chain_values[c];
        out.reserve(static_cast<std::size_t>(plan[c].segments) * 2 * n_probe);
        for (long s = 0; s < plan[c].segments; ++s) {
            std::fill(acc.begin(), acc.end(), cd(0.0));
            std::fill(phasor.begin(), phasor.end(), cd(1.0));
            for (long k = 0; k < steps_per_segment; ++k) {
                const RealState next = disc.propagator * x + disc.noise_root * draw(std::integral_constant<int, kState>{});
                x = next.head<kDim>();
                const double y1 = next(kDim), y2 = next(kDim + 1);
                for (std::size_t b = 0; b < rotation.size(); ++b) {
                    acc[b] += y1 * phasor[b];
                    acc[rotation.size() + b] += y2 * phasor[b];
                    phasor[b] *= rotation[b];
                }
            }
            for (int f = 0; f < 2; ++f) {
                for (std::size_t pi = 0; pi < n_probe; ++pi) {
                    double mean = 0.0;
                    for (std::size_t q = 0; q < n_bin; ++q)
                        mean += std::norm(acc[static_cast<std::size_t>(f) * rotation.size() + pi * n_bin + q]);
                    out.push_back(mean / (static_cast<double>(n_bin) * seg_len));
                }
            }
        }
    });

    OracleResult res;
    std::vector<double> sum(2 * n_probe, 0.0), sum_sq(2 * n_probe, 0.0);
    for (const auto& values : chain_values) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            sum[k % (2 * n_probe)] += values[k];
            sum_sq[k % (2 * n_probe)] += values[k] * values[k];
        }
        res.segments += static_cast<long>(values.size() / (2 * n_probe));
    }
    res.steps = res.segments * steps_per_segment;
    const double n = static_cast<double>(res.segments);
    auto stats = [&](std::size_t k) {
        const double mean = sum[k] / n;
        const double var = std::max(0.0, (sum_sq[k] - n * mean * mean) / (n - 1.0));
        return std::pair{mean, std::sqrt(var / n)};
    };
    for (std::size_t pi = 0; pi < n_probe; ++pi) {
        const auto [s1, e1] = stats(pi);
        const auto [s2, e2] = stats(n_probe + pi);
        const auto ref = engine.output_spectra(opt.probes[pi], opt.theta);
        res.probes.push_back({opt.probes[pi], s1, e1, s2, e2, ref[0], ref[1]});
    }
    return res;
}

} // namespace qswap::oracle
