#include "doctest.h"

#include "qswap/experiments.hpp"

#include <cmath>

using namespace qswap;
using namespace qswap::experiments;

TEST_CASE("fig2 pipeline") {
    SpectrumConfig cfg;
    cfg.point = fig2_caption();
    cfg.omega = {1e-4, std::sqrt(0.005), 1e3};
    cfg.conjugate_quadrature = true;
    const auto run = run_fig2(cfg);
    REQUIRE(run.analytic);
    REQUIRE(run.numeric_conjugate);
    CHECK(std::abs(run.numeric.S1[0] - 1.0) < 1e-3);
    CHECK(std::abs(run.numeric.S2[0] - 0.5) < 1e-3);
    CHECK(std::abs(run.numeric.S1[1] - 0.512) < 0.005);
    CHECK(std::abs(run.numeric.S2[1] - 0.990) < 0.005);
    CHECK(std::abs(run.numeric.S1[2] - 1.0) < 1e-3);
    CHECK(std::abs(run.numeric.S2[2] - 0.5) < 1e-3);
    // anti-squeezed quadrature of field 2 in transparency
    CHECK(std::abs(run.numeric_conjugate->S2[0] - 2.0) < 2e-3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(run.numeric.S1[i] - run.analytic->S1[i]) < 1e-9);
}

TEST_CASE("text-parameter variant") {
    const auto op = fig2_text();
    CHECK(op.params.cooperativity() == doctest::Approx(100.0));
    const auto c = analytic::SymmetricCase::from(op.params, op.drive);
    CHECK(analytic::kappa_cpt(c) == doctest::Approx(0.00125));
}

TEST_CASE("fig3 map") {
    Fig3Grid g;
    g.omega = {"omega_over_kappa", 1e-6, 1e3, 120, Spacing::Log};
    g.C = {"C", 1.0, 1e3, 25, Spacing::Log};
    const auto r = run_fig3(g);
    const auto& m = r.map;
    REQUIRE(m.eta.size() == 120u * 25u);
    CHECK(m.invalid_cells() == 0);
    CHECK(r.spot_cells.size() == 10);
    CHECK(r.spot_check_deviation < 1e-8);
    for (double v : m.eta) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-9);
    }
    const auto w = m.first.values();
    const auto cs = m.second.values();
    for (int j = 0; j < m.second.points; ++j) CHECK(m.at(0, j) < 0.01);

    // nondecreasing in C inside the swap band
    for (int i = 0; i < m.first.points; ++i) {
        if (w[static_cast<std::size_t>(i)] < 0.05 || w[static_cast<std::size_t>(i)] > 0.2) continue;
        for (int j = 1; j < m.second.points; ++j) CHECK(m.at(i, j) >= m.at(i, j - 1) - 1e-12);
    }
    // rising edge below kappa_CPT, main peak between kappa_CPT and kappa, dead above the normal modes
    for (int j = 0; j < m.second.points; ++j) {
        const double c = cs[static_cast<std::size_t>(j)];
        const double kc = 2 * 0.25 * 0.25 / (2 * 0.5 * c);
        const double normal_mode = std::sqrt(2 * 0.5 * c);
        int peak = 0;
        for (int i = 1; i < m.first.points; ++i)
            if (m.at(i, j) > m.at(peak, j)) peak = i;
        CHECK(w[static_cast<std::size_t>(peak)] >= kc);
        CHECK(w[static_cast<std::size_t>(peak)] <= 1.0);
        for (int i = 1; i < m.first.points && w[static_cast<std::size_t>(i)] < kc; ++i)
            CHECK(m.at(i, j) >= m.at(i - 1, j) - 1e-12);
        for (int i = 1; i < m.first.points; ++i)
            if (w[static_cast<std::size_t>(i - 1)] > 3 * normal_mode) CHECK(m.at(i, j) <= m.at(i - 1, j) + 1e-12);
    }
}

TEST_CASE("fig3 plateau at C = 100") {
    const double kc = 0.00125;
    const auto c = analytic::SymmetricCase::from_rates(std::sqrt(2 * 0.5 * 100.0), 0.5, 0.25, 0.0);
    CHECK(analytic::efficiency(c, std::sqrt(kc)).exact >= 0.95);
}

TEST_CASE("fig4 map: balanced drive is optimal") {
    Fig4Grid g;
    g.Omega1.points = g.Omega2.points = 16;
    const auto m = run_fig4(g);
    CHECK(m.invalid_cells() == 0);
    CHECK(m.errors.empty());
    for (double v : m.eta) {
        CHECK(v >= -1e-9);
        CHECK(v <= 1.0 + 1e-9);
    }
    const auto circles = circle_maxima(m);
    CHECK(circles.size() == 16);
    for (const auto& c : circles) CHECK(c.on_diagonal());

    // diagonal against the closed form
    const auto o = m.first.values();
    for (int k = 0; k < 16; ++k) {
        const auto c = analytic::SymmetricCase::from_rates(10, 0.5, o[static_cast<std::size_t>(k)], 1e-5);
        CHECK(std::abs(m.at(k, k) - analytic::efficiency(c, 0.1).exact) < 0.03);
    }
    // approximate mirror symmetry with fixed input roles
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(std::abs(m.at(i, j) - m.at(j, i)) < 0.05);
}

TEST_CASE("fig4: mirror symmetry is exact when the input roles are exchanged") {
    OperatingPoint a = fig2_caption();
    a.params.gamma0 = 1e-5;
    a.drive = {0.1, 0.4, 0.0};
    OperatingPoint b = a;
    b.drive = {0.4, 0.1, 0.0};
    b.inputs = {a.inputs[1], a.inputs[0]};
    const auto ssa = model::solve_steady_state(a.params, a.drive);
    const auto ssb = model::solve_steady_state(b.params, b.drive);
    const spectra::SpectrumEngine ea(a.params, ssa, a.inputs), eb(b.params, ssb, b.inputs);
    for (double w : {0.01, 0.1, 1.0}) {
        const auto sa = ea.output_spectra(w, 0.0);
        const auto sb = eb.output_spectra(w, 0.0);
        const double eta_a = (1 - sa[0]) / 0.5;
        const double eta_b = (1 - sb[1]) / 0.5;
        CHECK(std::abs(eta_a - eta_b) < 1e-6);
    }
}

TEST_CASE("strongly unbalanced drive swaps less") {
    OperatingPoint op = fig2_caption();
    op.params = model::symmetric_params(10, 0.5, 1e-5);
    const double total = std::sqrt(2.0) * 0.25;
    op.drive = {total / std::sqrt(2.0), total / std::sqrt(2.0), 0.0};
    const double balanced = numeric_efficiency(op, 0.1);
    op.drive = {10 * total / std::sqrt(101.0), total / std::sqrt(101.0), 0.0};
    CHECK(numeric_efficiency(op, 0.1) < balanced);
}

TEST_CASE("fig4: failing cells are isolated") {
    Fig4Grid g;
    g.Omega1 = {"Omega1_over_kappa", 0.0, 0.2, 2, Spacing::Linear};
    g.Omega2 = {"Omega2_over_kappa", 0.0, 0.2, 2, Spacing::Linear};
    const auto m = run_fig4(g);
    CHECK(m.invalid_cells() == 1);
    CHECK(std::isnan(m.at(0, 0)));
    REQUIRE(m.errors.size() == 1);
    CHECK(m.errors[0].find("cell (0, 0)") != std::string::npos);
    CHECK(std::isfinite(m.at(1, 1)));
    g.Omega1.min = -0.1;
    CHECK_THROWS_AS(run_fig4(g), std::invalid_argument);
}

TEST_CASE("consistency report") {
    const auto grid = spectra::default_grid();
    const auto rep = consistency_report({fig2_caption(), fig2_text()}, grid);
    CHECK(rep.pass);
    CHECK_FALSE(rep.flagged);
    CHECK(rep.max_relative_deviation < 1e-6);
    CHECK(rep.offending_omega.empty());

    OperatingPoint empty = fig2_caption();
    empty.params = model::symmetric_params(10, 0.25, 0.0, 1.0, 0.0);
    const auto e = consistency_report({empty}, grid, 1e-12);
    CHECK(e.pass);
    CHECK(e.max_relative_deviation < 1e-12);
}

TEST_CASE("consistency report: gamma0 > 0 is flagged, deviation sits at low frequency") {
    OperatingPoint op = fig2_text();
    op.params.gamma0 = 1e-3;
    op.params.dephasing = model::GroundDephasing::Bare;
    const auto grid = spectra::default_grid();
    const auto rep = consistency_report({op}, grid);
    CHECK(rep.flagged);
    CHECK(rep.pass);
    CHECK(rep.max_relative_deviation > 1e-3);
    // deviation is concentrated below the cavity linewidth and fades above the normal modes
    double low = 0.0, high = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.1) low = std::max(low, rep.relative_deviation[i]);
        if (grid[i] > 30.0) high = std::max(high, rep.relative_deviation[i]);
    }
    CHECK(low > 100 * high);
    CHECK(high < 1e-3);

    op.params.dephasing = model::GroundDephasing::DarkBright;
    const auto db = consistency_report({op}, grid);
    CHECK(db.flagged);
    CHECK(db.max_relative_deviation < 1e-6);
}

TEST_CASE("axis specs") {
    AxisSpec a{"x", 1, 100, 3, Spacing::Log};
    const auto v = a.values();
    CHECK(v[1] == doctest::Approx(10.0));
    AxisSpec bad{"x", 1, 100, 0, Spacing::Log};
    CHECK_THROWS_AS(bad.values(), std::invalid_argument);
}
