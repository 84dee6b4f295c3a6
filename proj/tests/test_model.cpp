#include "doctest.h"

#include "qswap/model.hpp"
#include "qswap/spectra.hpp"

#include <cmath>
#include <random>

using namespace qswap;
using namespace qswap::model;

namespace {

RawParams raw(double g_sqrtN, double gamma, double gamma0, double kappa = 1.0) {
    RawParams r;
    r.g_sqrtN = g_sqrtN;
    r.gamma = gamma;
    r.gamma0 = gamma0;
    r.kappa = kappa;
    return r;
}

double max_real_eigenvalue(const Mat12& m) {
    const Eigen::ComplexEigenSolver<Mat12> es(m);
    return es.eigenvalues().real().maxCoeff();
}

} // namespace

TEST_CASE("validate_params accepts the caption parameters") {
    const auto v = validate_params(raw(10, 0.25, 0));
    CHECK(v.warnings.empty());
    CHECK(v.params.gamma() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(v.params.gamma1 == v.params.gamma2);
    CHECK(v.params.g1_squared_N() == doctest::Approx(100.0));
}

TEST_CASE("validate_params derives the cooperativity") {
    const auto v = validate_params(raw(10, 0.5, 0));
    CHECK(v.params.cooperativity() == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("validate_params hard errors and warnings") {
    CHECK_THROWS_AS(validate_params(raw(10, 0.25, 0, -1)), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(raw(10, 0.25, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(raw(10, 0.0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(raw(10, -0.5, 0)), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(raw(10, 0.5, -1e-3)), std::invalid_argument);
    CHECK_THROWS_AS(validate_params(raw(NAN, 0.5, 0)), std::invalid_argument);

    const auto w = validate_params(raw(10, 0.5, 0.6));
    CHECK(w.warnings.size() == 1);

    RawParams split = raw(10, 0.5, 0);
    split.gamma1 = 0.3;
    split.gamma2 = 0.7;
    const auto s = validate_params(split);
    CHECK(s.params.gamma1 == 0.3);
    CHECK(s.params.gamma2 == 0.7);
    CHECK_FALSE(s.params.symmetric());
    split.gamma2.reset();
    CHECK_THROWS_AS(validate_params(split), std::invalid_argument);
}

TEST_CASE("drive checks") {
    const auto p = symmetric_params(10, 0.25, 0);
    CHECK_THROWS_AS(solve_steady_state(p, {0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_drive(p, {-0.1, 0.5, 0.0}), std::invalid_argument);
    const auto q = symmetric_params(10, 0.5, 1e-2);
    CHECK(check_drive(q, {0.01, 0.01, 0.0}).size() == 1);
    CHECK(check_drive(q, {0.5, 0.5, 0.0}).empty());
}

TEST_CASE("balanced drive pumps into the dark state") {
    const auto p = symmetric_params(10, 0.25, 0, 1.0, 1000.0);
    const auto ss = solve_steady_state(p, {0.5, 0.5, 0.0});
    const double N = p.N;
    CHECK(std::abs(ss.P(1, 2) - cd(-N / 2, 0)) < 1e-12 * N);
    CHECK(std::abs(ss.P(1, 1) - N / 2) < 1e-12 * N);
    CHECK(std::abs(ss.P(2, 2) - N / 2) < 1e-12 * N);
    CHECK(std::abs(ss.P(3, 3)) < 1e-12 * N);
    CHECK(std::abs(ss.P(1, 3)) < 1e-12 * N);
    CHECK(std::abs(ss.P(2, 3)) < 1e-12 * N);
    CHECK(ss.residual < 1e-12);
    CHECK(ss.iterations <= 1);
}

TEST_CASE("unbalanced drive: dark-state projector") {
    const auto p = symmetric_params(10, 0.5, 0, 1.0, 50.0);
    const double o1 = 0.1, o2 = 0.7, op2 = o1 * o1 + o2 * o2;
    const auto ss = solve_steady_state(p, {o1, o2, 0.0});
    CHECK(ss.P(1, 1).real() == doctest::Approx(p.N * o2 * o2 / op2).epsilon(1e-12));
    CHECK(ss.P(2, 2).real() == doctest::Approx(p.N * o1 * o1 / op2).epsilon(1e-12));
    CHECK(std::abs(ss.P(1, 2) - cd(-p.N * o1 * o2 / op2, 0.0)) < 1e-12 * p.N);
    CHECK(std::abs(ss.P(3, 3)) < 1e-12 * p.N);
}

TEST_CASE("empty cavity steady state") {
    const auto p = symmetric_params(10, 0.25, 0, 1.0, 0.0);
    const auto ss = solve_steady_state(p, {0.5, 0.3, 0.0});
    for (int f = 1; f <= 2; ++f) {
        CHECK(std::abs(ss.A(f) - std::sqrt(2.0) * ss.A_in(f)) < 1e-15);
    }
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) CHECK(std::abs(ss.P(i, j)) == 0.0);
}

TEST_CASE("steady state invariants over random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        RawParams r = raw(1 + 30 * u(rng), 0.05 + u(rng), 1e-4 * u(rng) * (k % 2), 0.5 + u(rng));
        r.N = 1 + 1e4 * u(rng);
        if (k % 3 == 0) {
            r.gamma1 = 0.05 + u(rng);
            r.gamma2 = 0.05 + u(rng);
            r.gamma = 0.0;
        }
        r.dephasing = k % 4 == 1 ? GroundDephasing::Bare : GroundDephasing::DarkBright;
        if (r.gamma == 0.0) r.gamma = 0.5 * (*r.gamma1 + *r.gamma2);
        const auto p = validate_params(r).params;
        const DriveSpec d{0.01 + u(rng), 0.01 + u(rng), 2 * M_PI * u(rng)};
        const auto ss = solve_steady_state(p, d);
        const double N = p.N;
        CHECK(std::abs((ss.P(1, 1) + ss.P(2, 2) + ss.P(3, 3)).real() - N) < 1e-10 * N);
        for (int i = 1; i <= 3; ++i) {
            CHECK(std::abs(ss.P(i, i).imag()) < 1e-12 * N);
            CHECK(ss.P(i, i).real() >= -1e-12 * N);
            CHECK(ss.P(i, i).real() <= N * (1 + 1e-12));
        }
        CHECK(mean_field_residual(p, ss) < 1e-12 * N);
        const auto drift = build_drift_matrix(p, ss);
        CHECK(max_real_eigenvalue(drift.M) <= 1e-10);
    }
}

TEST_CASE("basis bookkeeping") {
    using namespace basis;
    for (int k = 0; k < kDim; ++k) CHECK(conjugate(conjugate(k)) == k);
    CHECK(conjugate(dP11) == dP11);
    CHECK(conjugate(dP22) == dP22);
    CHECK(conjugate(dA1) == dA1d);
    // dP33 = -dP11 - dP22
    const auto c = decompose(unit(3, 3));
    CHECK(c(dP11) == cd(-1.0));
    CHECK(c(dP22) == cd(-1.0));
    CHECK(c.cwiseAbs().sum() == doctest::Approx(2.0));
    const auto c13 = decompose(unit(1, 3));
    CHECK(c13(dP13) == cd(1.0));
}

TEST_CASE("drift matrix: empty cavity") {
    const auto p = symmetric_params(10, 0.25, 0, 1.0, 0.0);
    const auto ss = solve_steady_state(p, {0.5, 0.5, 0.0});
    const auto m = build_drift_matrix(p, ss).M;
    using namespace basis;
    CHECK(m.block<4, kAtomic>(dA1, 0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.block<kAtomic, 4>(0, dA1).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::Matrix4cd field = m.block<4, 4>(dA1, dA1);
    CHECK((field + Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("drift matrix: caption parameters are stable and conjugation symmetric") {
    const auto p = symmetric_params(10, 0.25, 0);
    const auto ss = solve_steady_state(p, {0.5, 0.5, 0.0});
    const auto drift = build_drift_matrix(p, ss);
    CHECK(max_real_eigenvalue(drift.M) <= 1e-10);
    using namespace basis;
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) {
            CHECK(std::abs(drift.M(conjugate(a), conjugate(b)) - std::conj(drift.M(a, b))) < 1e-14);
        }
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < 4; ++b) {
            CHECK(std::abs(drift.input_coupling(conjugate(a), b ^ 1) - std::conj(drift.input_coupling(a, b))) < 1e-14);
        }
}

TEST_CASE("drift matrix with unequal decay branches is stable") {
    RawParams r = raw(10, 0.5, 1e-4);
    r.gamma1 = 0.2;
    r.gamma2 = 0.8;
    // the drive dark state does not care about the branching ratio
    auto p = validate_params(r).params;
    auto ss = solve_steady_state(p, {0.3, 0.6, 0.0});
    CHECK(std::abs(ss.P(3, 3)) < 1e-12);
    CHECK(max_real_eigenvalue(build_drift_matrix(p, ss).M) < 0.0);
    // bare ground dephasing scrambles it and pumps some population up
    r.dephasing = GroundDephasing::Bare;
    p = validate_params(r).params;
    ss = solve_steady_state(p, {0.3, 0.6, 0.0});
    CHECK(ss.P(3, 3).real() > 1e-8);
    CHECK(max_real_eigenvalue(build_drift_matrix(p, ss).M) < 0.0);
}

TEST_CASE("gauge: a common drive phase rotates the means, not the spectra") {
    const auto p = symmetric_params(10, 0.25, 1e-4);
    const spectra::InputPair in{GaussianInputState::squeezed_variance(0.7), GaussianInputState::squeezed_variance(0.5)};
    for (auto frame : {GroundDephasing::DarkBright, GroundDephasing::Bare}) {
        auto q = p;
        q.dephasing = frame;
        const auto ss0 = solve_steady_state(q, {0.3, 0.5, 0.0});
        const auto ss1 = solve_steady_state(q, {0.3, 0.5, 1.1});
        CHECK(std::abs(ss1.A1 - ss0.A1 * std::polar(1.0, 1.1)) < 1e-14);
        CHECK(std::abs(ss1.A2_in - ss0.A2_in * std::polar(1.0, 1.1)) < 1e-12);
        const spectra::SpectrumEngine e0(q, ss0, in), e1(q, ss1, in);
        for (double w : {0.0, 1e-3, 0.07, 1.0, 10.0}) {
            for (double th : {0.0, 0.4}) {
                const auto a = e0.output_spectra(w, th);
                const auto b = e1.output_spectra(w, th);
                CHECK(std::abs(a[0] - b[0]) < 1e-10);
                CHECK(std::abs(a[1] - b[1]) < 1e-10);
            }
        }
    }
}

TEST_CASE("ground dephasing frame names") {
    CHECK(ground_dephasing_from_string("bare") == GroundDephasing::Bare);
    CHECK(ground_dephasing_from_string("dark_bright") == GroundDephasing::DarkBright);
    CHECK(std::string(to_string(GroundDephasing::Bare)) == "bare");
    CHECK_THROWS_AS(ground_dephasing_from_string("dark"), std::invalid_argument);
}

TEST_CASE("bare-frame dephasing leaks population out of the dark state") {
    auto p = symmetric_params(10, 0.5, 1e-3);
    p.dephasing = GroundDephasing::Bare;
    const auto ss = solve_steady_state(p, {0.25, 0.25, 0.0});
    CHECK(ss.P(3, 3).real() > 1e-4);
    CHECK(ss.P(1, 2).real() > -0.5);
    CHECK(ss.residual < 1e-12);
    p.dephasing = GroundDephasing::DarkBright;
    const auto db = solve_steady_state(p, {0.25, 0.25, 0.0});
    CHECK(std::abs(db.P(3, 3)) < 1e-12);
}
