#include "config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <toml.hpp>

#include "rsf/errors.hpp"

namespace rsf::cli {

namespace {

double as_double(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<double>()) return *v;
    if (auto v = n.value_exact<int64_t>()) return static_cast<double>(*v);
    throw ConfigError("key '" + key + "' must be a number");
}

int as_int(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<int64_t>()) return static_cast<int>(*v);
    throw ConfigError("key '" + key + "' must be an integer");
}

bool as_bool(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<bool>()) return *v;
    throw ConfigError("key '" + key + "' must be a boolean");
}

std::string as_string(const toml::node& n, const std::string& key) {
    if (auto v = n.value_exact<std::string>()) return *v;
    throw ConfigError("key '" + key + "' must be a string");
}

std::vector<double> as_list(const toml::node& n, const std::string& key) {
    const toml::array* arr = n.as_array();
    if (!arr) throw ConfigError("key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *arr) out.push_back(as_double(e, key));
    return out;
}

using Setter = std::function<void(RunConfig&, const toml::node&, const std::string&)>;
using Section = std::map<std::string, Setter>;

const std::map<std::string, Section>& schema() {
    static const std::map<std::string, Section> s = {
        {"model",
         {
             {"mu0", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.friction.mu0 = as_double(n, k); }},
             {"a", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.friction.a = as_double(n, k); }},
             {"b", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.friction.b = as_double(n, k); }},
             {"h_ref", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.friction.h_ref = as_double(n, k); }},
             {"c_state", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.friction.c_state = as_double(n, k); }},
             {"theta_inf", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.aging.theta_inf = as_double(n, k); }},
             {"c1", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.aging.c1 = as_double(n, k); }},
             {"C", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.stiffness.C0 = as_double(n, k); }},
             {"ell_ratio", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.stiffness.ell_ratio = as_double(n, k); }},
             {"stiffness",
              [](RunConfig& c, const toml::node& n, const std::string& k) {
                  const std::string v = as_string(n, k);
                  if (v == "constant") c.model.stiffness.mode = StiffnessMode::constant;
                  else if (v == "damage") c.model.stiffness.mode = StiffnessMode::damage;
                  else throw ConfigError("stiffness must be 'constant' or 'damage'");
              }},
             {"H", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.H = as_double(n, k); }},
             {"rho", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.rho = as_double(n, k); }},
             {"eta", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.eta = as_double(n, k); }},
             {"kappa", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.kappa = as_double(n, k); }},
             {"ell", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.ell = as_double(n, k); }},
             {"Gc", [](RunConfig& c, const toml::node& n, const std::string& k) { c.model.Gc = as_double(n, k); }},
         }},
        {"numerics",
         {
             {"N", [](RunConfig& c, const toml::node& n, const std::string& k) { c.numerics.N = as_int(n, k); }},
             {"tau", [](RunConfig& c, const toml::node& n, const std::string& k) { c.numerics.tau = as_double(n, k); }},
             {"tol", [](RunConfig& c, const toml::node& n, const std::string& k) { c.numerics.tol = as_double(n, k); }},
             {"max_iter", [](RunConfig& c, const toml::node& n, const std::string& k) { c.numerics.max_iter = as_int(n, k); }},
             {"damping", [](RunConfig& c, const toml::node& n, const std::string& k) { c.numerics.damping = as_double(n, k); }},
             {"dt", [](RunConfig& c, const toml::node& n, const std::string& k) { c.numerics.dt = as_double(n, k); }},
         }},
        {"experiment",
         {
             {"v_inf", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.v_inf = as_double(n, k); }},
             {"T", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.T = as_double(n, k); }},
             {"kappa_list", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.kappa_list = as_list(n, k); }},
             {"v_inf_list", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.v_inf_list = as_list(n, k); }},
             {"h", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.h = as_double(n, k); }},
             {"start", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.start = as_string(n, k); }},
             {"perturbation", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.perturbation = as_double(n, k); }},
             {"sigma0", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.sigma0 = as_double(n, k); }},
             {"theta0", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.theta0 = as_double(n, k); }},
             {"probes", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.probes = as_list(n, k); }},
             {"record_every", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.record_every = as_int(n, k); }},
             {"ledger_every", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.ledger_every = as_int(n, k); }},
             {"ramp", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.ramp = as_double(n, k); }},
             {"v_min", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.v_min = as_double(n, k); }},
             {"v_max", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.v_max = as_double(n, k); }},
             {"samples", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.samples = as_int(n, k); }},
             {"pi_max", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.pi_max = as_double(n, k); }},
             {"threads", [](RunConfig& c, const toml::node& n, const std::string& k) { c.experiment.threads = as_int(n, k); }},
         }},
        {"output",
         {
             {"dir", [](RunConfig& c, const toml::node& n, const std::string& k) { c.output.dir = as_string(n, k); }},
             {"profiles", [](RunConfig& c, const toml::node& n, const std::string& k) { c.output.profiles = as_bool(n, k); }},
         }},
    };
    return s;
}

}  // namespace

void RunConfig::validate() const {
    model.validate();
    if (numerics.N < 5 || numerics.N % 2 == 0) throw ConfigError("numerics.N must be odd and at least 5");
    if (!(numerics.tau > 0.0)) throw ConfigError("numerics.tau must be positive");
    if (!(numerics.tol > 0.0)) throw ConfigError("numerics.tol must be positive");
    if (numerics.max_iter < 1) throw ConfigError("numerics.max_iter must be at least 1");
    if (!(numerics.damping > 0.0 && numerics.damping <= 1.0)) throw ConfigError("numerics.damping must lie in (0, 1]");
    if (!(numerics.dt > 0.0)) throw ConfigError("numerics.dt must be positive");
    const auto& e = experiment;
    if (!(e.T > 0.0)) throw ConfigError("experiment.T must be positive");
    if (!(e.h > 0.0 && e.h <= model.H)) throw ConfigError("experiment.h must lie in (0, H]");
    if (e.start != "steady" && e.start != "rest") throw ConfigError("experiment.start must be 'steady' or 'rest'");
    if (!(e.perturbation >= 0.0)) throw ConfigError("experiment.perturbation must be nonnegative");
    if (e.theta0 && !(*e.theta0 >= 0.0 && *e.theta0 <= model.aging.theta_inf))
        throw ConfigError("experiment.theta0 must lie in [0, theta_inf]");
    if (e.record_every < 1 || e.ledger_every < 1) throw ConfigError("record intervals must be at least 1");
    if (!(e.ramp >= 0.0)) throw ConfigError("experiment.ramp must be nonnegative");
    if (!(e.v_min < e.v_max)) throw ConfigError("experiment.v_min must be below v_max");
    if (e.samples < 2) throw ConfigError("experiment.samples must be at least 2");
    if (!(e.pi_max > 0.0)) throw ConfigError("experiment.pi_max must be positive");
    if (e.threads < 0) throw ConfigError("experiment.threads must be nonnegative");
    for (double k : e.kappa_list)
        if (!(k >= 0.0)) throw ConfigError("experiment.kappa_list entries must be nonnegative");
    if (output.dir.empty()) throw ConfigError("output.dir must not be empty");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    toml::table tbl;
    try {
        tbl = toml::parse(text, origin);
    } catch (const toml::parse_error& err) {
        std::ostringstream os;
        os << origin << ": " << err.description() << " at line " << err.source().begin.line;
        throw ConfigError(os.str());
    }
    RunConfig cfg;
    for (const auto& [sec_key, sec_node] : tbl) {
        const std::string sec(sec_key.str());
        const auto it = schema().find(sec);
        if (it == schema().end()) throw ConfigError("unknown section [" + sec + "]");
        const toml::table* body = sec_node.as_table();
        if (!body) throw ConfigError("[" + sec + "] must be a table");
        for (const auto& [key, node] : *body) {
            const std::string k(key.str());
            const auto setter = it->second.find(k);
            if (setter == it->second.end()) throw ConfigError("unknown key '" + sec + "." + k + "'");
            setter->second(cfg, node, sec + "." + k);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.v_inf) cfg.experiment.v_inf = *o.v_inf;
    if (o.kappa) cfg.model.kappa = *o.kappa;
    if (o.tau) cfg.numerics.tau = *o.tau;
    if (o.N) cfg.numerics.N = *o.N;
    if (o.out) cfg.output.dir = *o.out;
    cfg.validate();
}

}  // namespace rsf::cli
