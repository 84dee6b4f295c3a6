#include "qswap/experiments.hpp"
#include "qswap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qswap::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double squeezed_reference(const spectra::InputPair& inputs) {
    const double s2 = inputs[1].quadrature_spectrum(0.0);
    if (std::abs(1.0 - s2) < 1e-12) {
        throw std::invalid_argument("efficiency needs a squeezed (or anti-squeezed) field 2 input at theta = 0");
    }
    return s2;
}

double engine_efficiency(const spectra::SpectrumEngine& e, double s2_in, double omega) {
    return (1.0 - e.output_spectra(omega, 0.0)[0]) / (1.0 - s2_in);
}

template <class Eta>
double first_crossing(Eta&& eta, double level, double lo, double hi) {
    constexpr int scan = 2000;
    const double a = std::log(lo), b = std::log(hi);
    double prev_x = a;
    double prev = eta(lo) - level;
    for (int k = 1; k <= scan; ++k) {
        const double x = a + (b - a) * k / scan;
        const double cur = eta(std::exp(x)) - level;
        if (prev < 0.0 && cur >= 0.0) {
            double l = prev_x, r = x;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (l + r);
                if (eta(std::exp(m)) - level < 0.0) l = m; else r = m;
            }
            return std::exp(0.5 * (l + r));
        }
        prev = cur;
        prev_x = x;
    }
    return kNaN;
}

} // namespace

std::vector<double> AxisSpec::values() const {
    if (points < 1) throw std::invalid_argument("axis '" + name + "' needs at least one point");
    return spacing == Spacing::Log ? spectra::log_grid(min, max, points) : spectra::linear_grid(min, max, points);
}

int EfficiencyMap::invalid_cells() const {
    return static_cast<int>(std::count_if(eta.begin(), eta.end(), [](double v) { return std::isnan(v); }));
}

OperatingPoint fig2_caption() {
    return {model::symmetric_params(10.0, 0.25, 0.0), {0.5, 0.5, 0.0},
            {GaussianInputState::coherent(), GaussianInputState::squeezed_variance(0.5)}};
}

OperatingPoint fig2_text() {
    // kappa = 2 gamma, C = g^2 N / (2 kappa gamma) = 100, Omega' = gamma / sqrt(2)
    const double gamma = 0.5;
    const double Omega = gamma / 2.0;
    return {model::symmetric_params(std::sqrt(2.0 * gamma * 100.0), gamma, 0.0), {Omega, Omega, 0.0},
            {GaussianInputState::coherent(), GaussianInputState::squeezed_variance(0.5)}};
}

spectra::SpectrumResult analytic_spectrum(const analytic::SymmetricCase& c, const spectra::InputPair& inputs,
                                          const std::vector<double>& omega, double theta) {
    spectra::SpectrumResult out;
    out.omega = omega;
    out.theta = theta;
    const double in_sum = inputs[0].quadrature_spectrum(theta) + inputs[1].quadrature_spectrum(theta);
    for (double w : omega) {
        const auto s = analytic::symmetric_spectra(c, inputs, w, theta);
        out.S1.push_back(s[0]);
        out.S2.push_back(s[1]);
        out.sum_residual.push_back(s[0] + s[1] - in_sum);
    }
    return out;
}

SpectrumRun run_fig2(const SpectrumConfig& cfg) {
    const auto& op = cfg.point;
    SpectrumRun run;
    run.steady_state = model::solve_steady_state(op.params, op.drive);
    run.numeric = spectra::quadrature_spectrum(op.params, run.steady_state, op.inputs, cfg.omega, cfg.theta,
                                               cfg.threads);
    if (cfg.conjugate_quadrature) {
        run.numeric_conjugate = spectra::quadrature_spectrum(op.params, run.steady_state, op.inputs, cfg.omega,
                                                             cfg.theta + M_PI / 2.0, cfg.threads);
    }
    if (op.params.symmetric() && op.drive.Omega1 == op.drive.Omega2) {
        run.analytic = analytic_spectrum(analytic::SymmetricCase::from(op.params, op.drive), op.inputs, cfg.omega,
                                         cfg.theta);
    }
    return run;
}

double numeric_efficiency(const OperatingPoint& op, double omega) {
    const double s2 = squeezed_reference(op.inputs);
    const auto ss = model::solve_steady_state(op.params, op.drive);
    const spectra::SpectrumEngine e(op.params, ss, op.inputs);
    return engine_efficiency(e, s2, omega);
}

double efficiency_crossing(const analytic::SymmetricCase& c, double level, double lo, double hi) {
    return first_crossing([&](double w) { return analytic::efficiency(c, w).exact; }, level, lo, hi);
}

double numeric_efficiency_crossing(const OperatingPoint& op, double level, double lo, double hi) {
    const double s2 = squeezed_reference(op.inputs);
    const auto ss = model::solve_steady_state(op.params, op.drive);
    const spectra::SpectrumEngine e(op.params, ss, op.inputs);
    return first_crossing([&](double w) { return engine_efficiency(e, s2, w); }, level, lo, hi);
}

// --------------------------------------------------------------------------

Fig3Result run_fig3(const Fig3Grid& grid) {
    if (!(grid.C.min > 0.0)) throw std::invalid_argument("cooperativity axis must be positive");
    const auto omega = grid.omega.values();
    const auto coop = grid.C.values();
    const double s2 = squeezed_reference(grid.inputs);

    Fig3Result out;
    EfficiencyMap& map = out.map;
    map.first = grid.omega;
    map.second = grid.C;
    map.fixed = {{"gamma", grid.gamma}, {"Omega", grid.Omega}, {"gamma0", grid.gamma0}, {"kappa", grid.kappa}};
    map.eta.assign(omega.size() * coop.size(), kNaN);

    auto g_sqrtN = [&](double C) { return std::sqrt(2.0 * grid.kappa * grid.gamma * C); };
    parallel_for(coop.size(), grid.threads, [&](std::size_t j) {
        const auto c = analytic::SymmetricCase::from_rates(g_sqrtN(coop[j]), grid.gamma, grid.Omega, grid.gamma0,
                                                           grid.kappa);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            map.eta[i * coop.size() + j] = analytic::efficiency(c, omega[i]).exact;
        }
    });

    std::mt19937_64 rng(grid.seed);
    std::uniform_int_distribution<std::size_t> pick_w(0, omega.size() - 1), pick_c(0, coop.size() - 1);
    for (int k = 0; k < grid.spot_checks; ++k) out.spot_cells.emplace_back(static_cast<int>(pick_w(rng)),
                                                                           static_cast<int>(pick_c(rng)));
    std::vector<double> dev(out.spot_cells.size(), 0.0);
    parallel_for(out.spot_cells.size(), grid.threads, [&](std::size_t k) {
        const auto [i, j] = out.spot_cells[k];
        const auto p = model::symmetric_params(g_sqrtN(coop[static_cast<std::size_t>(j)]), grid.gamma, grid.gamma0,
                                               grid.kappa);
        const auto ss = model::solve_steady_state(p, {grid.Omega, grid.Omega, 0.0});
        const spectra::SpectrumEngine e(p, ss, grid.inputs);
        dev[k] = std::abs(engine_efficiency(e, s2, omega[static_cast<std::size_t>(i)]) - map.at(i, j));
    });
    for (double d : dev) out.spot_check_deviation = std::max(out.spot_check_deviation, d);
    return out;
}

EfficiencyMap run_fig4(const Fig4Grid& grid) {
    const auto o1 = grid.Omega1.values();
    const auto o2 = grid.Omega2.values();
    if (!(o1.front() >= 0.0) || !(o2.front() >= 0.0)) {
        throw std::invalid_argument("Rabi frequency axes must be non-negative");
    }
    const double s2 = squeezed_reference(grid.inputs);

    model::SystemParams p = model::symmetric_params(grid.g_sqrtN, grid.gamma, grid.gamma0, grid.kappa);
    p.dephasing = grid.dephasing;

    EfficiencyMap map;
    map.first = grid.Omega1;
    map.second = grid.Omega2;
    map.fixed = {{"g_sqrtN", grid.g_sqrtN}, {"gamma", grid.gamma}, {"gamma0", grid.gamma0},
                 {"kappa", grid.kappa}, {"omega", grid.omega}};
    const std::size_t n2 = o2.size();
    map.eta.assign(o1.size() * n2, kNaN);
    std::vector<std::string> cell_error(map.eta.size());

    parallel_for(map.eta.size(), grid.threads, [&](std::size_t k) {
        const std::size_t i = k / n2, j = k % n2;
        try {
            const auto ss = model::solve_steady_state(p, {o1[i], o2[j], 0.0});
            const spectra::SpectrumEngine e(p, ss, grid.inputs);
            map.eta[k] = engine_efficiency(e, s2, grid.omega);
        } catch (const std::exception& ex) {
            std::ostringstream os;
            os << "cell (" << i << ", " << j << ") Omega1 = " << o1[i] << ", Omega2 = " << o2[j] << ": " << ex.what();
            cell_error[k] = os.str();
        }
    });
    for (auto& e : cell_error)
        if (!e.empty()) map.errors.push_back(std::move(e));
    return map;
}

std::vector<CircleMaximum> circle_maxima(const EfficiencyMap& map) {
    const auto o1 = map.first.values();
    const auto o2 = map.second.values();
    const int n1 = static_cast<int>(o1.size()), n2 = static_cast<int>(o2.size());
    if (n2 < 2) return {};
    const bool log_axis = map.second.spacing == Spacing::Log;
    auto coord = [&](double v) { return log_axis ? std::log(v) : v; };
    const double half_step = 0.5 * (coord(o2[1]) - coord(o2[0]));

    std::vector<CircleMaximum> out;
    for (int k = 0; k < std::min(n1, n2); ++k) {
        const double r = std::hypot(o1[static_cast<std::size_t>(k)], o2[static_cast<std::size_t>(k)]);
        CircleMaximum c{k, r, -1, -1, -1.0, 0};
        for (int i = 0; i < n1; ++i) {
            const double rest = r * r - o1[static_cast<std::size_t>(i)] * o1[static_cast<std::size_t>(i)];
            if (rest <= 0.0) continue;
            const double target = coord(std::sqrt(rest));
            int best = -1;
            double best_d = 0.0;
            for (int j = 0; j < n2; ++j) {
                const double d = std::abs(coord(o2[static_cast<std::size_t>(j)]) - target);
                if (best < 0 || d < best_d) {
                    best = j;
                    best_d = d;
                }
            }
            if (best_d > half_step * (1.0 + 1e-9)) continue;
            const double v = map.at(i, best);
            if (std::isnan(v)) continue;
            ++c.cells;
            if (v > c.best_eta) {
                c.best_eta = v;
                c.best_i = i;
                c.best_j = best;
            }
        }
        if (c.cells > 0) out.push_back(c);
    }
    return out;
}

// --------------------------------------------------------------------------

ConsistencyReport consistency_report(const std::vector<OperatingPoint>& cases, const std::vector<double>& omega,
                                     double tol, double theta, int threads) {
    ConsistencyReport rep;
    rep.tolerance = tol;
    rep.omega = omega;
    rep.relative_deviation.assign(omega.size(), 0.0);
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& op : cases) {
        const auto c = analytic::SymmetricCase::from(op.params, op.drive);
        if (op.params.gamma0 > 0.0) rep.flagged = true;
        const auto ss = model::solve_steady_state(op.params, op.drive);
        const auto num = spectra::quadrature_spectrum(op.params, ss, op.inputs, omega, theta, threads);
        const auto ana = analytic_spectrum(c, op.inputs, omega, theta);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            for (const auto& [n, a] : {std::pair{num.S1[i], ana.S1[i]}, std::pair{num.S2[i], ana.S2[i]}}) {
                const double d = std::abs(n - a) / std::max(std::abs(a), 1e-300);
                rep.relative_deviation[i] = std::max(rep.relative_deviation[i], d);
                total += d;
                ++count;
            }
        }
    }
    for (std::size_t i = 0; i < omega.size(); ++i) {
        rep.max_relative_deviation = std::max(rep.max_relative_deviation, rep.relative_deviation[i]);
        if (!(rep.relative_deviation[i] < tol)) rep.offending_omega.push_back(omega[i]);
    }
    rep.mean_relative_deviation = count ? total / static_cast<double>(count) : 0.0;
    rep.pass = rep.flagged || rep.offending_omega.empty();
    return rep;
}

} // namespace qswap::experiments
