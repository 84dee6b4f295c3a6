#include "qswap/config.hpp"
#include "qswap/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qswap::config {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

// Typed access to one JSON object, rejecting keys that are never read.
class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("must be an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        known_.emplace_back(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config: '" + where(key) + "' has the wrong type");
        }
    }

    void read(const char* key, std::optional<double>& out) {
        double v = 0.0;
        if (has(key)) {
            read(key, v);
            out = v;
        } else {
            known_.emplace_back(key);
        }
    }

    void read(const char* key, double& out) {
        known_.emplace_back(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        if (!it->is_number()) throw ConfigError("config: '" + where(key) + "' must be a number");
        out = it->get<double>();
    }

    bool has(const char* key) const { return j_.contains(key); }

    std::optional<Block> child(const char* key) {
        known_.emplace_back(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return std::nullopt;
        return Block(*it, where(key));
    }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (std::find(known_.begin(), known_.end(), k) != known_.end()) continue;
            std::string msg = "config: unknown key '" + where(k) + "'";
            if (const auto s = suggest_key(k, known_)) msg += " (did you mean '" + *s + "'?)";
            throw ConfigError(msg);
        }
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config: '" + (path_.empty() ? std::string("<root>") : path_) + "' " + what);
    }
    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
    std::vector<std::string> known_;
};

void read_axis(Block& parent, const char* key, AxisConfig& axis) {
    if (auto b = parent.child(key)) {
        b->read("min", axis.min);
        b->read("max", axis.max);
        b->read("points", axis.points);
        b->read("spacing", axis.spacing);
        b->finish();
        if (axis.spacing != "log" && axis.spacing != "linear") {
            throw ConfigError(std::string("config: scan.") + key + ".spacing must be 'log' or 'linear'");
        }
        if (axis.points < 1) throw ConfigError(std::string("config: scan.") + key + ".points must be >= 1");
    }
}

void read_input(Block& parent, const char* key, InputSpec& in) {
    if (auto b = parent.child(key)) {
        b->read("kind", in.kind);
        b->read("squeeze_db", in.squeeze_db);
        b->read("angle_rad", in.angle_rad);
        b->finish();
        if (in.kind != "coherent" && in.kind != "squeezed") {
            throw ConfigError(std::string("config: inputs.") + key + ".kind must be 'coherent' or 'squeezed'");
        }
    }
}

ordered_json axis_json(const AxisConfig& a) {
    return {{"min", a.min}, {"max", a.max}, {"points", a.points}, {"spacing", a.spacing}};
}

ordered_json input_json(const InputSpec& in) {
    return {{"kind", in.kind}, {"squeeze_db", in.squeeze_db}, {"angle_rad", in.angle_rad}};
}

} // namespace

GaussianInputState InputSpec::state() const {
    if (kind == "coherent") return GaussianInputState::coherent();
    if (kind == "squeezed") {
        if (!(squeeze_db >= 0.0)) throw std::invalid_argument("squeeze_db must be >= 0");
        return GaussianInputState::squeezed_db(squeeze_db, angle_rad);
    }
    throw std::invalid_argument("unknown input kind '" + kind + "'");
}

model::RawParams ParamsSpec::raw() const {
    model::RawParams r;
    r.g_sqrtN = g_sqrtN;
    r.gamma = gamma;
    if (gamma == 0.0 && gamma1 && gamma2) r.gamma = 0.5 * (*gamma1 + *gamma2);
    r.gamma0 = gamma0;
    r.kappa = kappa;
    r.N = N;
    r.gamma1 = gamma1;
    r.gamma2 = gamma2;
    r.dephasing = model::ground_dephasing_from_string(ground_dephasing);
    return r;
}

experiments::AxisSpec AxisConfig::spec(const std::string& name) const {
    return {name, min, max, points, spacing == "linear" ? experiments::Spacing::Linear : experiments::Spacing::Log};
}

model::SystemParams RunConfig::system(std::vector<std::string>* warnings) const {
    auto v = model::validate_params(params.raw());
    if (warnings) warnings->insert(warnings->end(), v.warnings.begin(), v.warnings.end());
    return v.params;
}

std::optional<std::string> suggest_key(const std::string& key, const std::vector<std::string>& candidates) {
    // ties go to the candidate sharing the longer prefix plus suffix
    auto shared = [&](const std::string& c) {
        std::size_t p = 0, s = 0;
        while (p < key.size() && p < c.size() && key[p] == c[p]) ++p;
        while (s < key.size() - p && s < c.size() - p && key[key.size() - 1 - s] == c[c.size() - 1 - s]) ++s;
        return p + s;
    };
    std::optional<std::string> best;
    std::size_t best_d = 0, best_shared = 0;
    for (const auto& c : candidates) {
        const std::size_t d = edit_distance(key, c);
        const std::size_t sh = shared(c);
        if (!best || d < best_d || (d == best_d && sh > best_shared)) {
            best = c;
            best_d = d;
            best_shared = sh;
        }
    }
    if (best && best_d <= std::max<std::size_t>(2, key.size() / 3)) return best;
    return std::nullopt;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        std::ostringstream os;
        os << "config syntax error at line " << line << ": " << e.what();
        throw ConfigError(os.str());
    }

    RunConfig cfg;
    Block top(root, "");
    auto params = top.child("params");
    if (!params) throw ConfigError("config: missing required 'params' block");
    params->read("g_sqrtN", cfg.params.g_sqrtN);
    params->read("gamma", cfg.params.gamma);
    params->read("gamma0", cfg.params.gamma0);
    params->read("kappa", cfg.params.kappa);
    params->read("N", cfg.params.N);
    params->read("gamma1", cfg.params.gamma1);
    params->read("gamma2", cfg.params.gamma2);
    params->read("ground_dephasing", cfg.params.ground_dephasing);
    params->finish();
    try {
        (void)model::ground_dephasing_from_string(cfg.params.ground_dephasing);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: params.ground_dephasing: ") + e.what());
    }

    if (auto drive = top.child("drive")) {
        drive->read("Omega1", cfg.Omega1);
        drive->read("Omega2", cfg.Omega2);
        drive->finish();
    }
    if (auto inputs = top.child("inputs")) {
        read_input(*inputs, "field1", cfg.field1);
        read_input(*inputs, "field2", cfg.field2);
        inputs->finish();
    }
    if (auto scan = top.child("scan")) {
        read_axis(*scan, "omega", cfg.omega);
        read_axis(*scan, "C", cfg.C);
        read_axis(*scan, "Omega1", cfg.Omega1_axis);
        read_axis(*scan, "Omega2", cfg.Omega2_axis);
        scan->finish();
    }
    top.read("theta", cfg.theta);
    top.read("conjugate_quadrature", cfg.conjugate_quadrature);
    top.read("analysis_omega", cfg.analysis_omega);
    top.read("tolerance", cfg.tolerance);
    top.read("output", cfg.output);
    top.read("seed", cfg.seed);
    if (auto o = top.child("oracle")) {
        o->read("probes", cfg.oracle.probes);
        o->read("duration", cfg.oracle.duration);
        o->read("step", cfg.oracle.step);
        o->read("segment", cfg.oracle.segment);
        o->read("bins", cfg.oracle.bins);
        o->read("chains", cfg.oracle.chains);
        o->finish();
    }
    top.finish();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    ordered_json params = {{"g_sqrtN", cfg.params.g_sqrtN}, {"gamma", cfg.params.gamma},
                           {"gamma0", cfg.params.gamma0},   {"kappa", cfg.params.kappa},
                           {"N", cfg.params.N}};
    if (cfg.params.gamma1) params["gamma1"] = *cfg.params.gamma1;
    if (cfg.params.gamma2) params["gamma2"] = *cfg.params.gamma2;
    params["ground_dephasing"] = cfg.params.ground_dephasing;

    ordered_json j;
    j["params"] = params;
    j["drive"] = {{"Omega1", cfg.Omega1}, {"Omega2", cfg.Omega2}};
    j["inputs"] = {{"field1", input_json(cfg.field1)}, {"field2", input_json(cfg.field2)}};
    j["scan"] = {{"omega", axis_json(cfg.omega)},
                 {"C", axis_json(cfg.C)},
                 {"Omega1", axis_json(cfg.Omega1_axis)},
                 {"Omega2", axis_json(cfg.Omega2_axis)}};
    j["theta"] = cfg.theta;
    j["conjugate_quadrature"] = cfg.conjugate_quadrature;
    j["analysis_omega"] = cfg.analysis_omega;
    j["tolerance"] = cfg.tolerance;
    j["output"] = cfg.output;
    j["seed"] = cfg.seed;
    j["oracle"] = {{"probes", cfg.oracle.probes}, {"duration", cfg.oracle.duration},
                   {"step", cfg.oracle.step},     {"segment", cfg.oracle.segment},
                   {"bins", cfg.oracle.bins},     {"chains", cfg.oracle.chains}};
    return j.dump(2) + "\n";
}

} // namespace qswap::config
