#include "vvlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vvlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

void parse_ini(const std::string& text, std::map<std::string, std::string>& out) {
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value, got '" + line + "'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string val = trim(line.substr(eq + 1));
        out[section.empty() ? key : section + "." + key] = val;
    }
}

void parse_json(const std::string& text, std::map<std::string, std::string>& out) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config: JSON root must be an object");
    for (const auto& [sec, body] : j.items()) {
        if (!body.is_object())
            throw std::invalid_argument("config: JSON section '" + sec + "' must be an object");
        for (const auto& [key, val] : body.items()) {
            std::string s;
            if (val.is_string())
                s = val.get<std::string>();
            else if (val.is_array()) {
                std::string acc;
                for (const auto& item : val) {
                    if (!acc.empty()) acc += ",";
                    acc += item.dump();
                }
                s = acc;
            } else
                s = val.dump();
            out[lower(sec) + "." + lower(key)] = s;
        }
    }
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    const std::string head = trim(text);
    return from_string(text, json || (!head.empty() && head.front() == '{'));
}

RunConfig RunConfig::from_string(const std::string& text, bool json) {
    RunConfig cfg;
    if (json)
        parse_json(text, cfg.values_);
    else
        parse_ini(text, cfg.values_);
    return cfg;
}

std::string RunConfig::get_string(const std::string& key, const std::string& dflt) const {
    const auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
}

double RunConfig::get_double(const std::string& key, double dflt) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: '" +
                                    it->second + "'");
    }
}

int RunConfig::get_int(const std::string& key, int dflt) const {
    return static_cast<int>(get_double(key, dflt));
}

bool RunConfig::get_bool(const std::string& key, bool dflt) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    const std::string v = lower(it->second);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: key '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
    const auto it = values_.find(key);
    std::vector<double> out;
    if (it == values_.end()) return out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<double> RunConfig::epsilon_ladder() const {
    if (has("approx.epsilon_list")) return get_list("approx.epsilon_list");
    if (has("approx.epsilon0")) {
        const double e0 = get_double("approx.epsilon0", 0.04);
        const int halvings = get_int("approx.halvings", 3);
        std::vector<double> out;
        double e = e0;
        for (int i = 0; i <= halvings; ++i, e *= 0.5) out.push_back(e);
        return out;
    }
    return {get_double("approx.epsilon", 0.01)};
}

int RunConfig::workers() const {
    if (const char* env = std::getenv("VVLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return std::max(1, get_int("run.workers", 4));
}

PressureLaw RunConfig::make_law() const {
    const std::string kind = lower(get_string("pressure.kind", "polytropic"));
    const double gamma = get_double("pressure.gamma", 2.0);
    const double kappa = get_double("pressure.kappa", -1.0);
    if (kind == "polytropic") return PressureLaw::polytropic(gamma, kappa);
    if (kind == "general_blend" || kind == "blend")
        return PressureLaw::general_blend(
            gamma, get_double("pressure.gamma2", std::min(gamma, 1.5)), kappa,
            get_double("pressure.rho_star_low", 1.0),
            get_double("pressure.rho_star_high", 4.0));
    throw std::invalid_argument("config: unknown pressure.kind '" + kind + "'");
}

NonlocalConfig RunConfig::make_nonlocal() const {
    NonlocalConfig nl;
    nl.lambda = get_double("nonlocal.lambda", 0.0);
    const std::string kernel = lower(get_string("nonlocal.alignment", "off"));
    if (kernel == "off")
        nl.kernel = AlignmentKernel::off();
    else if (kernel == "constant")
        nl.kernel = AlignmentKernel::constant(get_double("nonlocal.alignment_amplitude", 1.0));
    else if (kernel == "gaussian")
        nl.kernel = AlignmentKernel::gaussian(get_double("nonlocal.alignment_amplitude", 1.0),
                                              get_double("nonlocal.alignment_width", 1.0));
    else if (kernel == "custom")
        nl.kernel = AlignmentKernel::bounded_custom(get_list("nonlocal.alignment_table_x"),
                                                    get_list("nonlocal.alignment_table_w"));
    else
        throw std::invalid_argument("config: unknown nonlocal.alignment '" + kernel + "'");
    nl.alignment_cutoff = get_double("nonlocal.alignment_cutoff", 0.0);

    const std::string inter = lower(get_string("nonlocal.interaction", "off"));
    if (inter == "off")
        nl.interaction = InteractionTag::Off;
    else if (inter == "newtonian_quadratic" || inter == "on")
        nl.interaction = InteractionTag::NewtonianPlusQuadratic;
    else
        throw std::invalid_argument("config: unknown nonlocal.interaction '" + inter + "'");
    return nl;
}

RawInitialData RunConfig::make_raw() const {
    const std::string preset = lower(get_string("initial.preset", "gaussian"));
    const double mass = get_double("initial.mass", 1.0);
    const double vamp = get_double("initial.velocity_amplitude", 0.0);
    if (preset == "gaussian")
        return raw_gaussian_bump(mass, get_double("initial.sigma", 0.8), vamp);
    if (preset == "double_bump")
        return raw_double_bump(mass, get_double("initial.sigma", 0.6),
                               get_double("initial.separation", 2.0), vamp);
    if (preset == "plateau")
        return raw_plateau(mass, get_double("initial.halfwidth", 1.0), vamp);
    if (preset == "samples") {
        auto xs = get_list("initial.sample_x");
        auto rr = get_list("initial.sample_rho");
        auto mm = get_list("initial.sample_m");
        if (mm.empty()) mm.assign(xs.size(), 0.0);
        return raw_from_samples(std::move(xs), std::move(rr), std::move(mm));
    }
    throw std::invalid_argument("config: unknown initial.preset '" + preset + "'");
}

MollifyOptions RunConfig::make_mollify_options() const {
    MollifyOptions opt;
    opt.core_points = get_int("approx.core_points", opt.core_points);
    opt.tail_points = get_int("approx.tail_points", opt.tail_points);
    opt.mollifier_points = get_int("approx.mollifier_points", opt.mollifier_points);
    return opt;
}

SolverConfig RunConfig::make_solver_config() const {
    SolverConfig sc;
    sc.cfl = get_double("solver.cfl", 0.4);
    sc.dt_max = get_double("solver.dt_max", 5e-3);
    sc.vacuum_floor = get_double("solver.vacuum_floor", 1e-12);
    sc.t_end = get_double("solver.t_end", 1.0);
    sc.strang_splitting = get_bool("solver.strang", false);
    const std::string vs = lower(get_string("solver.viscous_scheme", "backward_euler"));
    if (vs == "backward_euler")
        sc.viscous_scheme = ViscousScheme::BackwardEuler;
    else if (vs == "crank_nicolson")
        sc.viscous_scheme = ViscousScheme::CrankNicolson;
    else
        throw std::invalid_argument("config: unknown solver.viscous_scheme '" + vs + "'");
    return sc;
}

DiagnosticsOptions RunConfig::make_diagnostics_options(const RawInitialData& raw) const {
    DiagnosticsOptions opt;
    if (has("diagnostics.window_lo") || has("diagnostics.window_hi")) {
        opt.window_lo = get_double("diagnostics.window_lo", -1.0);
        opt.window_hi = get_double("diagnostics.window_hi", 1.0);
    } else {
        // central fraction of the raw support
        const double f = get_double("diagnostics.window_fraction", 0.5);
        opt.window_lo = -f * raw.support_radius;
        opt.window_hi = f * raw.support_radius;
    }
    opt.mass_tol = get_double("diagnostics.mass_tol", opt.mass_tol);
    opt.energy_tol = get_double("diagnostics.energy_tol", opt.energy_tol);
    opt.boundary_tol = get_double("diagnostics.boundary_tol", opt.boundary_tol);
    opt.align_tol = get_double("diagnostics.align_tol", opt.align_tol);
    opt.gronwall_slack = get_double("diagnostics.gronwall_slack", opt.gronwall_slack);
    opt.margin_eps0 = get_double("diagnostics.margin_eps0", opt.margin_eps0);
    return opt;
}

std::vector<std::string> RunConfig::validate() const {
    std::vector<std::string> errors;
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    double gamma = 2.0;
    try {
        const auto law = make_law();
        gamma = law.gamma();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    if (has("pressure.kappa2"))
        fail("pressure.kappa2 is derived from continuity of the blended law; "
             "remove the key");
    try {
        make_nonlocal();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    try {
        make_raw();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    try {
        make_solver_config();
    } catch (const std::exception& e) {
        fail(e.what());
    }

    const double a = alpha();
    if (!(a > 2.0 / 3.0 && a <= 1.0))
        fail("approx.alpha must lie in (2/3, 1]; the viscosity exponent outside this "
             "range breaks the initial-data regularization (beta = 2/(2 alpha - 1) "
             "must stay in [2, 6))");

    const bool b_given = has("approx.halfwidth_b");
    if (!b_given) {
        const double p = p_exponent();
        const double p_min = gamma / (gamma - a);
        if (!(p > p_min)) {
            std::ostringstream os;
            os << "approx.p_exponent = " << p << " too small: the initial half-width "
               << "b = epsilon^-p must grow fast enough that the free boundary stays "
               << "away from the support; need p > gamma/(gamma - alpha) = " << p_min;
            fail(os.str());
        }
    }

    for (double e : epsilon_ladder())
        if (!(e > 0.0 && e <= 1.0)) fail("epsilon values must lie in (0, 1]");
    const double cfl = get_double("solver.cfl", 0.4);
    if (!(cfl > 0.0 && cfl <= 1.0)) fail("solver.cfl must lie in (0, 1]");
    if (n_cells() < 2) fail("solver.n_cells must be at least 2");
    if (!(get_double("solver.t_end", 1.0) >= 0.0)) fail("solver.t_end must be >= 0");
    return errors;
}

} // namespace vvlab
