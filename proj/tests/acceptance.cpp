// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "qswap/analytic.hpp"
#include "qswap/experiments.hpp"
#include "qswap/noise.hpp"
#include "qswap/oracle.hpp"
#include "qswap/spectra.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace qswap;
using namespace qswap::experiments;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const spectra::InputPair kSqueezed{GaussianInputState::coherent(), GaussianInputState::squeezed_variance(0.5)};
const spectra::InputPair kVacuum{GaussianInputState::coherent(), GaussianInputState::coherent()};

spectra::SpectrumResult numeric(const OperatingPoint& op, const std::vector<double>& grid, double theta = 0.0) {
    const auto ss = model::solve_steady_state(op.params, op.drive);
    return spectra::quadrature_spectrum(op.params, ss, op.inputs, grid, theta);
}

Outcome fig2_pins() {
    const std::vector<double> w{1e-4, 0.0707, 1e3};
    const auto s = numeric(fig2_caption(), w);
    const double e0 = std::max(std::abs(s.S1[0] - 1.0), std::abs(s.S2[0] - 0.5));
    const double e2 = std::max(std::abs(s.S1[2] - 1.0), std::abs(s.S2[2] - 0.5));
    const double e1 = std::max(std::abs(s.S1[1] - 0.512), std::abs(s.S2[1] - 0.990));
    return {e0 <= 1e-3 && e2 <= 1e-3 && e1 <= 0.005,
            fmt("S(1e-4)=(%.6f, %.6f) S(0.0707)=(%.6f, %.6f) S(1e3)=(%.6f, %.6f)", s.S1[0], s.S2[0], s.S1[1],
                s.S2[1], s.S1[2], s.S2[2])};
}

Outcome analytic_equivalence() {
    const auto grid = spectra::default_grid();
    const auto rep = consistency_report({fig2_caption(), fig2_text()}, grid, 1e-6);
    return {rep.pass && !rep.flagged && grid.size() == 400 && rep.max_relative_deviation < 1e-6,
            fmt("max relative deviation %.3e over %zu points, 2 cases", rep.max_relative_deviation, grid.size())};
}

Outcome kappa_cpt_law() {
    bool ok = true;
    std::string d;
    for (const auto& op : {fig2_caption(), fig2_text()}) {
        const double kc = analytic::kappa_cpt(analytic::SymmetricCase::from(op.params, op.drive));
        const double x = numeric_efficiency_crossing(op, 0.5, 1e-7, 1.0);
        const double rel = x / kc - 1.0;
        ok = ok && std::abs(rel) <= 0.1;
        d += fmt("kappa_CPT=%.5f crossing=%.5f (%+.1f%%) ", kc, x, 100 * rel);
    }
    const auto t = fig2_text();
    const double kc_text = analytic::kappa_cpt(analytic::SymmetricCase::from(t.params, t.drive));
    const double one_fig = std::round(kc_text * 1e3) / 1e3;
    ok = ok && one_fig == 0.001;
    d += fmt("text value to one figure %.3g", one_fig);
    return {ok, d};
}

Outcome plateau() {
    const auto op = fig2_caption();
    const auto c = analytic::SymmetricCase::from(op.params, op.drive);
    const double w = std::sqrt(c.kappa * analytic::kappa_cpt(c));
    const double exact = analytic::efficiency(c, w).exact;
    const double num = numeric_efficiency(op, w);
    const double approx = analytic::plateau_efficiency(c);
    return {std::abs(exact - 0.975) <= 0.005 && std::abs(num - 0.975) <= 0.005 && std::abs(exact - approx) <= 0.02,
            fmt("eta exact %.6f numeric %.6f plateau approximation %.6f", exact, num, approx)};
}

Outcome correlators() {
    double worst = 0.0;
    for (double g0 : {0.0, 1e-5})
        for (double N : {1.0, 1e3}) {
            const auto p = model::symmetric_params(10, 0.5, g0, 1.0, N);
            const auto ss = model::solve_steady_state(p, {0.25, 0.25, 0.0});
            const auto d = noise::diffusion_matrix(p, ss);
            const double fm = 2 * p.gamma() * N, fq = 2 * g0 * N;
            worst = std::max(worst, std::abs(noise::correlation(d, noise::dark_dipole_weights()) - fm) / fm);
            const cd q = noise::correlation(d, noise::dark_coherence_weights());
            worst = std::max(worst, fq > 0 ? std::abs(q - fq) / fq : std::abs(q) / fm);
        }
    return {worst < 1e-10, fmt("worst relative error %.3e (gamma0 in {0, 1e-5}, N in {1, 1e3})", worst)};
}

Outcome passivity() {
    const auto grid = spectra::default_grid();
    double worst = 1e300;
    std::vector<OperatingPoint> cases{fig2_caption(), fig2_text()};
    OperatingPoint lossy = fig2_text();
    lossy.params.gamma0 = 1e-3;
    cases.push_back(lossy);
    lossy.params.dephasing = model::GroundDephasing::Bare;
    cases.push_back(lossy);
    OperatingPoint skew = fig2_caption();
    skew.drive = {0.1, 0.6, 0.0};
    cases.push_back(skew);
    for (auto op : cases)
        for (const auto& in : {kSqueezed, kVacuum, spectra::InputPair{GaussianInputState::squeezed_variance(0.3, 0.4),
                                                                      GaussianInputState::squeezed_variance(0.7, 1.1)}}) {
            op.inputs = in;
            const auto ss = model::solve_steady_state(op.params, op.drive);
            const spectra::SpectrumEngine e(op.params, ss, op.inputs);
            for (double th : {0.0, 0.4, 1.0})
                for (double w : grid) {
                    const auto a = e.output_spectra(w, th);
                    const auto b = e.output_spectra(w, th + M_PI / 2);
                    worst = std::min({worst, a[0] * b[0], a[1] * b[1]});
                }
        }
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_plus = 0.0, worst_minus = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const auto c = analytic::SymmetricCase::from_rates(
            std::pow(10.0, -1 + 3 * u(rng)), std::pow(10.0, -2 + 2.5 * u(rng)), std::pow(10.0, -3 + 3 * u(rng)),
            k % 2 ? std::pow(10.0, -7 + 6 * u(rng)) : 0.0, std::pow(10.0, -1 + 2 * u(rng)));
        const auto l = analytic::lambdas(c, std::pow(10.0, -6 + 10 * u(rng)));
        worst_plus = std::max(worst_plus, std::abs(std::abs(l.plus) - 1.0));
        worst_minus = std::max(worst_minus, std::abs(l.minus) - 1.0);
    }
    return {worst >= 1 - 1e-9 && worst_plus < 1e-12 && worst_minus <= 1e-12,
            fmt("min S_th*S_th+pi/2 %.12f; max ||l+|-1| %.2e; max |l-|-1 %.2e (1e4 draws)", worst, worst_plus,
                worst_minus)};
}

Outcome sum_rule() {
    const auto op = fig2_caption();
    const double mode = 10.0;  // g sqrt(N) / kappa
    const auto s = numeric(op, spectra::default_grid());
    double away = 0.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i)
        if (std::abs(s.omega[i] - mode) > 3 && s.omega[i] < mode / 2) away = std::max(away, std::abs(s.sum_residual[i]));
    const auto fine = numeric(op, spectra::log_grid(1.0, 50.0, 2000));
    std::size_t k = 0;
    for (std::size_t i = 1; i < fine.omega.size(); ++i)
        if (std::abs(fine.sum_residual[i]) > std::abs(fine.sum_residual[k])) k = i;
    const double at = fine.omega[k];
    return {away < 0.05 && std::abs(at / mode - 1.0) <= 0.2,
            fmt("max |dS_sum| away from mode %.4f; largest deficit %.4f at omega=%.3f", away,
                -fine.sum_residual[k], at)};
}

Outcome fig4() {
    Fig4Grid g;
    const auto m = run_fig4(g);
    const auto circles = circle_maxima(m);
    int off = 0;
    for (const auto& c : circles) off += !c.on_diagonal();
    const auto o = m.first.values();
    double diag = 0.0;
    for (int k = 0; k < m.first.points; ++k) {
        const auto c = analytic::SymmetricCase::from_rates(g.g_sqrtN, g.gamma, o[static_cast<std::size_t>(k)], g.gamma0,
                                                           g.kappa);
        diag = std::max(diag, std::abs(m.at(k, k) - analytic::efficiency(c, g.omega).exact));
    }
    return {m.invalid_cells() == 0 && off == 0 && diag <= 0.03,
            fmt("%dx%d grid, %zu circles, %d off-diagonal maxima, max diagonal deviation %.4f", m.first.points,
                m.second.points, circles.size(), off, diag)};
}

Outcome stochastic() {
    const auto op = fig2_caption();
    const auto ss = model::solve_steady_state(op.params, op.drive);
    oracle::OracleOptions opt;
    opt.seed = 20240917;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = oracle::stochastic_oracle(op.params, ss, op.inputs, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double worst = 0.0;
    for (const auto& e : r.probes)
        worst = std::max({worst, std::abs(e.S1 / e.S1_reference - 1.0), std::abs(e.S2 / e.S2_reference - 1.0)});
    return {r.probes.size() == 5 && worst <= 0.05 && secs <= 60.0,
            fmt("%zu probes, worst relative deviation %.4f, %zu segments, %.1f s", r.probes.size(), worst, r.segments,
                secs)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[e.path().filename().string()] = ss.str();
    }
    return files;
}

Outcome determinism() {
    const std::vector<std::pair<std::string, std::string>> runs{{"spectrum", "fig2.json"},
                                                                {"efficiency-map", "fig3.json"},
                                                                {"asymmetric-map", "fig4.json"},
                                                                {"consistency", "consistency_gamma0.json"},
                                                                {"oracle", "oracle.json"}};
    const fs::path root = fs::temp_directory_path() / "qswap_acceptance";
    fs::remove_all(root);
    bool ok = true;
    std::string d;
    for (const auto& [cmd, cfg] : runs) {
        std::vector<std::map<std::string, std::string>> outs;
        int attempt = 0;
        for (int threads : {1, 4, 1}) {
            const fs::path out = root / (cmd + std::to_string(attempt++));
            const std::string line = std::string(QSWAP_CLI_PATH) + " " + cmd + " --config " + QSWAP_CONFIG_DIR + "/" +
                                     cfg + " --out " + out.string() + " --threads " + std::to_string(threads) +
                                     " > /dev/null 2>&1";
            const int rc = std::system(line.c_str());
            if (rc != 0) {
                ok = false;
                d += cmd + " exit " + std::to_string(rc) + "; ";
                break;
            }
            outs.push_back(snapshot(out));
        }
        if (outs.size() == 3) {
            const bool same = outs[0] == outs[1] && outs[0] == outs[2] && !outs[0].empty();
            ok = ok && same;
            d += cmd + (same ? " identical" : " DIFFERS") + fmt(" (%zu files); ", outs[0].size());
        }
    }
    fs::remove_all(root);
    return {ok, d};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 caption spectra pins", fig2_pins},
        {"AC2 closed form equals numeric", analytic_equivalence},
        {"AC3 kappa_CPT law", kappa_cpt_law},
        {"AC4 efficiency plateau", plateau},
        {"AC5 dark-basis noise correlators", correlators},
        {"AC6 passivity and lambda bounds", passivity},
        {"AC7 sum rule and loss at the normal mode", sum_rule},
        {"AC8 balanced drive optimal", fig4},
        {"AC9 stochastic oracle", stochastic},
        {"AC10 CLI determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
