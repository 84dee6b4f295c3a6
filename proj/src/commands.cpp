#include "qswap/commands.hpp"
#include "qswap/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qswap::commands {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& header) { out_ << header << '\n'; }

    template <class... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    std::ostringstream out_;
};

struct Output {
    fs::path dir;
    std::vector<std::string> files;

    void write(const std::string& name, const std::string& content) {
        const fs::path p = dir / name;
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
        f << content;
        if (!f) throw std::runtime_error("failed writing '" + p.string() + "'");
        files.push_back(p.string());
    }
};

double general_kappa_cpt(const model::SystemParams& p, const model::DriveSpec& d) {
    const double op = d.Omega_prime();
    if (p.g1_squared_N() == 0.0) return p.gamma0;
    return p.gamma0 + p.kappa1 * op * op / p.g1_squared_N();
}

ordered_json steady_state_json(const model::SteadyState& ss) {
    return {{"P11", ss.P(1, 1).real()},
            {"P22", ss.P(2, 2).real()},
            {"P33", ss.P(3, 3).real()},
            {"P12_re", ss.P(1, 2).real()},
            {"P12_im", ss.P(1, 2).imag()},
            {"abs_P13", std::abs(ss.P(1, 3))},
            {"abs_P23", std::abs(ss.P(2, 3))},
            {"residual", ss.residual},
            {"iterations", ss.iterations}};
}

ordered_json map_axes_json(const experiments::EfficiencyMap& m) {
    auto axis = [](const experiments::AxisSpec& a) {
        return ordered_json{{"name", a.name},
                            {"min", a.min},
                            {"max", a.max},
                            {"points", a.points},
                            {"spacing", a.spacing == experiments::Spacing::Log ? "log" : "linear"}};
    };
    ordered_json fixed = ordered_json::object();
    for (const auto& [k, v] : m.fixed) fixed[k] = v;
    return {{"first_axis", axis(m.first)}, {"second_axis", axis(m.second)}, {"fixed", fixed}};
}

std::string write_map(const experiments::EfficiencyMap& m, const std::string& header) {
    const auto a = m.first.values();
    const auto b = m.second.values();
    CsvWriter csv(header);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) csv.row(a[i], b[j], m.at(static_cast<int>(i), static_cast<int>(j)));
    return csv.str();
}

spectra::InputPair require_squeezed_field2(const config::RunConfig& cfg) {
    const auto in = cfg.inputs();
    if (std::abs(in[1].quadrature_spectrum(0.0) - 1.0) < 1e-12) {
        throw std::invalid_argument("efficiency maps need a squeezed field 2 input (inputs.field2.kind = squeezed)");
    }
    return in;
}

ordered_json run_spectrum(const config::RunConfig& cfg, int threads, Output& out, std::vector<std::string>& warnings) {
    experiments::SpectrumConfig sc;
    sc.point = {cfg.system(&warnings), cfg.drive(), cfg.inputs()};
    const auto dw = model::check_drive(sc.point.params, sc.point.drive);
    warnings.insert(warnings.end(), dw.begin(), dw.end());
    sc.omega = cfg.omega.spec("omega_over_kappa").values();
    sc.theta = cfg.theta;
    sc.conjugate_quadrature = cfg.conjugate_quadrature;
    sc.threads = threads;
    const auto run = experiments::run_fig2(sc);

    const double kc = general_kappa_cpt(sc.point.params, sc.point.drive);
    const double kappa = sc.point.params.kappa1;
    auto table = [&](const spectra::SpectrumResult& r) {
        CsvWriter csv("omega_over_kappa,S_X1,S_X2,regime");
        for (std::size_t i = 0; i < r.omega.size(); ++i) {
            csv.row(r.omega[i], r.S1[i], r.S2[i],
                    analytic::to_string(analytic::classify_regime(kc, kappa, r.omega[i]).regime));
        }
        return csv.str();
    };
    out.write("spectrum.csv", table(run.numeric));
    if (run.numeric_conjugate) out.write("spectrum_conjugate.csv", table(*run.numeric_conjugate));

    ordered_json meta;
    meta["rows"] = run.numeric.omega.size();
    meta["theta"] = cfg.theta;
    meta["kappa_cpt"] = kc;
    meta["steady_state"] = steady_state_json(run.steady_state);
    double max_sum = 0.0;
    for (double r : run.numeric.sum_residual) max_sum = std::max(max_sum, std::abs(r));
    meta["max_abs_sum_change"] = max_sum;
    if (run.analytic) {
        double dev = 0.0;
        for (std::size_t i = 0; i < run.numeric.omega.size(); ++i) {
            dev = std::max({dev, std::abs(run.numeric.S1[i] - run.analytic->S1[i]) / std::abs(run.analytic->S1[i]),
                            std::abs(run.numeric.S2[i] - run.analytic->S2[i]) / std::abs(run.analytic->S2[i])});
        }
        meta["max_relative_deviation_from_closed_form"] = dev;
        meta["closed_form_exact"] = sc.point.params.gamma0 == 0.0;
    }
    return meta;
}

ordered_json run_efficiency_map(const config::RunConfig& cfg, int threads, std::uint64_t seed, Output& out,
                                std::vector<std::string>& warnings) {
    const auto p = cfg.system(&warnings);
    if (!p.symmetric()) throw std::invalid_argument("efficiency-map needs gamma1 = gamma2");
    if (cfg.Omega1 != cfg.Omega2) throw std::invalid_argument("efficiency-map needs drive.Omega1 = drive.Omega2");
    experiments::Fig3Grid g;
    g.omega = cfg.omega.spec("omega_over_kappa");
    g.C = cfg.C.spec("C");
    g.gamma = p.gamma();
    g.Omega = cfg.Omega1;
    g.gamma0 = p.gamma0;
    g.kappa = p.kappa1;
    g.inputs = require_squeezed_field2(cfg);
    g.seed = seed;
    g.threads = threads;
    const auto r = experiments::run_fig3(g);
    out.write("efficiency_map.csv", write_map(r.map, "omega_over_kappa,C,eta"));

    ordered_json meta = map_axes_json(r.map);
    meta["invalid_cells"] = r.map.invalid_cells();
    meta["spot_checks"] = r.spot_cells.size();
    meta["spot_check_max_deviation"] = r.spot_check_deviation;
    return meta;
}

ordered_json run_asymmetric_map(const config::RunConfig& cfg, int threads, Output& out,
                                std::vector<std::string>& warnings) {
    const auto p = cfg.system(&warnings);
    if (!p.symmetric()) throw std::invalid_argument("asymmetric-map needs gamma1 = gamma2");
    experiments::Fig4Grid g;
    g.Omega1 = cfg.Omega1_axis.spec("Omega1_over_kappa");
    g.Omega2 = cfg.Omega2_axis.spec("Omega2_over_kappa");
    g.g_sqrtN = cfg.params.g_sqrtN;
    g.gamma = p.gamma();
    g.gamma0 = p.gamma0;
    g.kappa = p.kappa1;
    g.omega = cfg.analysis_omega;
    g.dephasing = p.dephasing;
    g.inputs = require_squeezed_field2(cfg);
    g.threads = threads;
    const auto m = experiments::run_fig4(g);
    out.write("asymmetric_map.csv", write_map(m, "Omega1_over_kappa,Omega2_over_kappa,eta"));

    ordered_json meta = map_axes_json(m);
    meta["invalid_cells"] = m.invalid_cells();
    meta["cell_errors"] = m.errors;
    ordered_json circles = ordered_json::array();
    int off_diagonal = 0;
    for (const auto& c : experiments::circle_maxima(m)) {
        circles.push_back({{"radius", c.radius}, {"best_Omega1_index", c.best_i}, {"best_Omega2_index", c.best_j},
                           {"best_eta", c.best_eta}, {"cells", c.cells}});
        if (!c.on_diagonal()) ++off_diagonal;
    }
    meta["circle_maxima"] = circles;
    meta["circles_with_off_diagonal_maximum"] = off_diagonal;
    if (m.invalid_cells() > 0) {
        warnings.push_back(std::to_string(m.invalid_cells()) + " map cells could not be evaluated");
    }
    return meta;
}

ordered_json run_consistency(const config::RunConfig& cfg, int threads, Output& out,
                             std::vector<std::string>& warnings, bool& failed) {
    const experiments::OperatingPoint op{cfg.system(&warnings), cfg.drive(), cfg.inputs()};
    const auto grid = cfg.omega.spec("omega_over_kappa").values();
    const auto rep = experiments::consistency_report({op}, grid, cfg.tolerance, cfg.theta, threads);
    CsvWriter csv("omega_over_kappa,relative_deviation");
    for (std::size_t i = 0; i < rep.omega.size(); ++i) csv.row(rep.omega[i], rep.relative_deviation[i]);
    out.write("consistency.csv", csv.str());

    ordered_json meta;
    meta["tolerance"] = rep.tolerance;
    meta["max_relative_deviation"] = rep.max_relative_deviation;
    meta["mean_relative_deviation"] = rep.mean_relative_deviation;
    meta["pass"] = rep.pass;
    meta["flagged_approximate"] = rep.flagged;
    meta["offending_omega"] = rep.offending_omega;
    if (rep.flagged) warnings.push_back("gamma0 > 0: closed form is approximate, deviations reported only");
    failed = !rep.pass;
    return meta;
}

ordered_json run_oracle(const config::RunConfig& cfg, int threads, std::uint64_t seed, Output& out,
                        std::vector<std::string>& warnings) {
    const auto p = cfg.system(&warnings);
    const auto ss = model::solve_steady_state(p, cfg.drive());
    oracle::OracleOptions o;
    o.probes = cfg.oracle.probes;
    o.duration = cfg.oracle.duration;
    o.step = cfg.oracle.step;
    o.segment = cfg.oracle.segment;
    o.bins = cfg.oracle.bins;
    o.chains = cfg.oracle.chains;
    o.seed = seed;
    o.theta = cfg.theta;
    o.threads = threads;
    const auto r = oracle::stochastic_oracle(p, ss, cfg.inputs(), o);

    CsvWriter csv("omega_over_kappa,S_X1_estimate,S_X1_stderr,S_X2_estimate,S_X2_stderr,S_X1_reference,S_X2_reference");
    double worst = 0.0;
    for (const auto& e : r.probes) {
        csv.row(e.omega, e.S1, e.S1_error, e.S2, e.S2_error, e.S1_reference, e.S2_reference);
        worst = std::max({worst, std::abs(e.S1 / e.S1_reference - 1.0), std::abs(e.S2 / e.S2_reference - 1.0)});
    }
    out.write("oracle.csv", csv.str());
    ordered_json meta;
    meta["segments"] = r.segments;
    meta["steps"] = r.steps;
    meta["max_relative_deviation"] = worst;
    return meta;
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"spectrum", "efficiency-map", "asymmetric-map", "consistency",
                                                "oracle"};
    return names;
}

int run_command(const std::string& name, const config::RunConfig& cfg_in, const CommandOptions& opt,
                std::ostream& log) {
    config::RunConfig cfg = cfg_in;
    if (opt.seed) cfg.seed = *opt.seed;
    const int threads = std::max(1, opt.threads);
    try {
        Output out{opt.out_dir.empty() ? fs::path(cfg.output) : fs::path(opt.out_dir), {}};
        fs::create_directories(out.dir);

        std::vector<std::string> warnings;
        ordered_json meta;
        bool failed = false;
        if (name == "spectrum") {
            meta = run_spectrum(cfg, threads, out, warnings);
        } else if (name == "efficiency-map") {
            meta = run_efficiency_map(cfg, threads, cfg.seed, out, warnings);
        } else if (name == "asymmetric-map") {
            meta = run_asymmetric_map(cfg, threads, out, warnings);
        } else if (name == "consistency") {
            meta = run_consistency(cfg, threads, out, warnings, failed);
        } else if (name == "oracle") {
            meta = run_oracle(cfg, threads, cfg.seed, out, warnings);
        } else {
            log << "error: unknown command '" << name << "'\n";
            return kConfigFailure;
        }

        std::string stem = name;
        for (char& c : stem)
            if (c == '-') c = '_';
        ordered_json sidecar;
        sidecar["command"] = name;
        sidecar["seed"] = cfg.seed;
        sidecar["warnings"] = warnings;
        for (auto& [k, v] : meta.items()) sidecar[k] = v;
        out.write(stem + ".meta.json", sidecar.dump(2) + "\n");
        out.write("config.resolved.json", config::serialize_config(cfg));

        for (const auto& w : warnings) log << "warning: " << w << '\n';
        for (const auto& f : out.files) log << "wrote " << f << '\n';
        if (failed) {
            log << "error: " << name << " check failed\n";
            return kNumericFailure;
        }
        return kSuccess;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::invalid_argument& e) {
        log << "invalid input: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::out_of_range& e) {
        log << "invalid input: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const NumericError& e) {
        log << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const std::exception& e) {
        log << "failure: " << e.what() << '\n';
        return kNumericFailure;
    }
}

int run_command_file(const std::string& name, const std::string& config_path, const CommandOptions& opt,
                     std::ostream& log) {
    config::RunConfig cfg;
    try {
        cfg = config::load_config(config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigFailure;
    }
    return run_command(name, cfg, opt, log);
}

} // namespace qswap::commands
