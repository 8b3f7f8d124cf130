#ifndef REGDIGRAPH_CONFIG_HPP
#define REGDIGRAPH_CONFIG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "sampler.hpp"

namespace regdigraph {

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"singularity",  "sn-tail",     "quasirandom", "single-vector",
                                                   "compressible", "rerandom-uniformity", "clcd-suite"};
    return names;
}

struct ExperimentConfig {
    std::string experiment = "sn-tail";
    std::size_t n = 50;
    std::optional<std::size_t> d;   // unset: floor(lambda n)
    std::optional<double> lambda;   // unset: min(d, n - d) / n
    std::uint64_t trials = 1000;
    std::vector<double> kappaGrid = {0.0, 1e-3, 1e-2, 5e-2, 1e-1};
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::string output;

    std::string sampler = "switch-chain";
    std::optional<std::uint64_t> burnIn;

    // Parameter pack.
    double delta = 0.1;
    double rho = 0.1;
    double deltaPrime = 0.05;
    double rhoPrime = 0.05;
    double nu1 = 0.01;
    double nu2 = 0.05;
    double nu3 = 10.0;
    double gamma = 0.01;
    double alpha = 1.0;
    double mu = 0.001;
    std::size_t q = 2;
    double eta = 0.5;
    std::size_t h = 3;
    double a = 0.1;
    double t = 0.5;
    double svdTol = 1e-10;
    double singularTol = 1e-6;
    double thetaMax = 1e3;

    // Experiment-specific knobs.
    std::uint64_t checkBudget = 100000;
    std::size_t familySize = 1;
    double cThreshold = 0.01;
    std::size_t corpusSize = 200;
    std::string vector = "alternating";
    std::uint64_t sampleCount = 100000;
    std::vector<double> epsilonGrid = {1e-3, 1e-2, 1e-1};
    std::vector<double> dimensions = {12, 64, 200};
    bool recordTiming = false;

    std::size_t effective_d() const {
        if (d) {
            return *d;
        }
        if (lambda) {
            return static_cast<std::size_t>(std::floor(*lambda * static_cast<double>(n)));
        }
        return n / 4;
    }

    double effective_lambda() const {
        if (lambda) {
            return *lambda;
        }
        const auto dd = effective_d();
        return static_cast<double>(std::min(dd, n - dd)) / static_cast<double>(n);
    }

    SamplerConfig sampler_config() const {
        SamplerConfig s;
        s.n = n;
        s.d = effective_d();
        s.method = parse_sampler_method(sampler);
        s.burnIn = burnIn;
        s.seed = seed;
        return s;
    }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_uint(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("expected a nonnegative integer, got '" + s + "'");
    }
    return v;
}

inline double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("expected a number, got '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw ValidationError("expected a finite number, got '" + s + "'");
    }
    return v;
}

inline bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") {
        return true;
    }
    if (s == "false" || s == "0") {
        return false;
    }
    throw ValidationError("expected true or false, got '" + s + "'");
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(parse_double(item));
        }
    }
    return out;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        out += (k ? ", " : "") + format_double(v[k]);
    }
    return out;
}

struct ConfigKey {
    std::string name;
    std::function<std::optional<std::string>(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class T>
ConfigKey size_key(std::string name, T ExperimentConfig::*field) {
    return {std::move(name), [field](const ExperimentConfig& c) { return std::optional(std::to_string(c.*field)); },
            [field](ExperimentConfig& c, const std::string& v) { c.*field = static_cast<T>(parse_uint(v)); }};
}

inline ConfigKey double_key(std::string name, double ExperimentConfig::*field) {
    return {std::move(name), [field](const ExperimentConfig& c) { return std::optional(format_double(c.*field)); },
            [field](ExperimentConfig& c, const std::string& v) { c.*field = parse_double(v); }};
}

inline ConfigKey list_key(std::string name, std::vector<double> ExperimentConfig::*field) {
    return {std::move(name), [field](const ExperimentConfig& c) { return std::optional(format_list(c.*field)); },
            [field](ExperimentConfig& c, const std::string& v) { c.*field = parse_list(v); }};
}

inline ConfigKey string_key(std::string name, std::string ExperimentConfig::*field) {
    return {std::move(name), [field](const ExperimentConfig& c) { return std::optional(c.*field); },
            [field](ExperimentConfig& c, const std::string& v) { c.*field = v; }};
}

inline const std::vector<ConfigKey>& config_keys() {
    using C = ExperimentConfig;
    static const std::vector<ConfigKey> keys = {
        string_key("experiment", &C::experiment),
        size_key("n", &C::n),
        {"d", [](const C& c) { return c.d ? std::optional(std::to_string(*c.d)) : std::nullopt; },
         [](C& c, const std::string& v) { c.d = static_cast<std::size_t>(parse_uint(v)); }},
        {"lambda", [](const C& c) { return c.lambda ? std::optional(format_double(*c.lambda)) : std::nullopt; },
         [](C& c, const std::string& v) { c.lambda = parse_double(v); }},
        size_key("trials", &C::trials),
        list_key("kappa_grid", &C::kappaGrid),
        size_key("seed", &C::seed),
        size_key("threads", &C::threads),
        string_key("output", &C::output),
        string_key("sampler", &C::sampler),
        {"burn_in", [](const C& c) { return c.burnIn ? std::optional(std::to_string(*c.burnIn)) : std::nullopt; },
         [](C& c, const std::string& v) { c.burnIn = parse_uint(v); }},
        double_key("delta", &C::delta),
        double_key("rho", &C::rho),
        double_key("delta_prime", &C::deltaPrime),
        double_key("rho_prime", &C::rhoPrime),
        double_key("nu1", &C::nu1),
        double_key("nu2", &C::nu2),
        double_key("nu3", &C::nu3),
        double_key("gamma", &C::gamma),
        double_key("alpha", &C::alpha),
        double_key("mu", &C::mu),
        size_key("q", &C::q),
        double_key("eta", &C::eta),
        size_key("h", &C::h),
        double_key("a", &C::a),
        double_key("t", &C::t),
        double_key("svd_tol", &C::svdTol),
        double_key("singular_tol", &C::singularTol),
        double_key("theta_max", &C::thetaMax),
        size_key("check_budget", &C::checkBudget),
        size_key("family_size", &C::familySize),
        double_key("c_threshold", &C::cThreshold),
        size_key("corpus_size", &C::corpusSize),
        string_key("vector", &C::vector),
        size_key("sample_count", &C::sampleCount),
        list_key("epsilon_grid", &C::epsilonGrid),
        list_key("dimensions", &C::dimensions),
        {"record_timing", [](const C& c) { return std::optional(std::string(c.recordTiming ? "true" : "false")); },
         [](C& c, const std::string& v) { c.recordTiming = parse_bool(v); }},
    };
    return keys;
}

} // namespace detail

/// Checks hard invariants; throws ValidationError.
inline void check_config(const ExperimentConfig& c) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
        throw ValidationError("unknown experiment '" + c.experiment + "'");
    }
    if (c.n < 2) {
        throw ValidationError("n must be at least 2");
    }
    if (c.lambda && !(*c.lambda > 0 && *c.lambda <= 0.5)) {
        throw ValidationError("lambda must lie in (0, 1/2]");
    }
    const auto d = c.effective_d();
    if (d < 1 || d + 1 > c.n) {
        throw ValidationError("need min(d, n - d) >= 1, got n=" + std::to_string(c.n) + " d=" + std::to_string(d));
    }
    if (!std::is_sorted(c.kappaGrid.begin(), c.kappaGrid.end())) {
        throw ValidationError("kappa_grid must be sorted ascending");
    }
    if (std::any_of(c.kappaGrid.begin(), c.kappaGrid.end(), [](double k) { return k < 0; })) {
        throw ValidationError("kappa_grid entries must be nonnegative");
    }
    if (c.threads == 0) {
        throw ValidationError("threads must be positive");
    }
    parse_sampler_method(c.sampler);
    if (!(c.svdTol > 0 && c.svdTol <= 1e-6)) {
        throw ValidationError("svd_tol must lie in (0, 1e-6]");
    }
    if (!(c.t > 0 && c.t < 1)) {
        throw ValidationError("t must lie in (0, 1)");
    }
    if (c.vector != "alternating" && c.vector != "random") {
        throw ValidationError("vector must be 'alternating' or 'random'");
    }
}

/// Soft check of mu << gamma << eta, 1/Q << nu1, nu2 << delta, rho << lambda,
/// read as strict inequalities between consecutive tiers. nu3 is an upper
/// band edge (at least 1/sqrt(delta)) and is left out.
inline std::vector<std::string> parameter_chain_warnings(const ExperimentConfig& c) {
    std::vector<std::string> out;
    auto need = [&](double small, double large, const std::string& what) {
        if (!(small < large)) {
            out.push_back("parameter chain: expected " + what);
        }
    };
    const double invQ = c.q > 0 ? 1.0 / static_cast<double>(c.q) : std::numeric_limits<double>::infinity();
    need(c.mu, c.gamma, "mu < gamma");
    need(c.gamma, std::min(c.eta, invQ), "gamma < min(eta, 1/Q)");
    need(std::max(c.eta, invQ), std::min(c.nu1, c.nu2), "max(eta, 1/Q) < min(nu1, nu2)");
    need(std::max(c.nu1, c.nu2), std::min(c.delta, c.rho), "max(nu1, nu2) < min(delta, rho)");
    need(std::max(c.delta, c.rho), c.effective_lambda(), "max(delta, rho) < lambda");
    return out;
}

inline ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig c;
    std::map<std::string, const detail::ConfigKey*> table;
    for (const auto& k : detail::config_keys()) {
        table[k.name] = &k;
    }
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(is, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineNo) + ": expected 'key = value', got '" + line +
                                  "'");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        auto it = table.find(key);
        if (it == table.end()) {
            throw ValidationError("config line " + std::to_string(lineNo) + ": unknown key '" + key + "'");
        }
        try {
            it->second->set(c, value);
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineNo) + ": " + key + ": " + e.what());
        }
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

inline ExperimentConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read config file '" + path + "'");
    }
    return parse_config(in);
}

inline void write_config(std::ostream& os, const ExperimentConfig& c) {
    for (const auto& k : detail::config_keys()) {
        if (auto v = k.get(c)) {
            os << k.name << " = " << *v << '\n';
        }
    }
}

inline std::string config_to_text(const ExperimentConfig& c) {
    std::ostringstream os;
    write_config(os, c);
    return os.str();
}

} // namespace regdigraph

#endif
