#include "zgkn/io.hpp"

#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace zgkn {

std::string config_hash(const json& config) {
    const std::string dump = config.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json params_to_json(const ModelParams& p) {
    return json{{"a", p.a},          {"m", p.m}, {"Q", p.Q},
                {"Qprime", p.Qprime}, {"I", p.I}, {"gamma", p.gamma}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.a = j.at("a").get<double>();
    p.m = j.at("m").get<double>();
    p.Q = j.value("Q", p.Q);
    p.Qprime = j.value("Qprime", p.Qprime);
    p.I = j.value("I", p.I);
    p.gamma = j.at("gamma").get<double>();
    return p;
}

json make_envelope(const json& config, json payload, json diagnostics,
                   bool reproducible) {
    json env;
    env["artifact_version"] = "1.0.0";
    env["config_hash"] = config_hash(config);
    env["config"] = config;
    if (!reproducible) {
        const auto now = std::chrono::system_clock::now();
        env["generated_at_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
                .count();
    }
    env["payload"] = std::move(payload);
    env["diagnostics"] = std::move(diagnostics);
    return env;
}

namespace {

constexpr char kMagic[8] = {'Z', 'G', 'K', 'N', 'G', 'R', 'D', '1'};

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void get(std::ifstream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof v);
}

} // namespace

void save_grid(const GridBiSpinor& g, const ModelParams& params,
               const std::string& path, const std::string& cfg_hash) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    os.write(kMagic, sizeof kMagic);
    const std::uint32_t nr = g.spec.nr, nt = g.spec.ntheta;
    put(os, nr);
    put(os, nt);
    put(os, g.spec.r_scale);
    put(os, g.spec.r_max);
    put(os, g.spec.a);
    put(os, g.kappa);
    put(os, g.E);
    for (const auto& z : g.data) {
        const double re = z.real(), im = z.imag();
        put(os, re);
        put(os, im);
    }
    json side;
    side["params"] = params_to_json(params);
    side["kappa"] = g.kappa;
    side["E"] = g.E;
    side["shape"] = {nr, nt, 4};
    side["config_hash"] = cfg_hash;
    std::ofstream js(path + ".json");
    js << side.dump(2) << "\n";
}

GridBiSpinor load_grid(const std::string& path, ModelParams* params_out,
                       std::string* hash_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw ConfigError(path + " is not a grid container");
    GridSpec spec;
    std::uint32_t nr, nt;
    get(is, nr);
    get(is, nt);
    spec.nr = static_cast<int>(nr);
    spec.ntheta = static_cast<int>(nt);
    get(is, spec.r_scale);
    get(is, spec.r_max);
    get(is, spec.a);
    double kappa, E;
    get(is, kappa);
    get(is, E);
    GridBiSpinor g(spec, kappa);
    g.E = E;
    for (auto& z : g.data) {
        double re, im;
        get(is, re);
        get(is, im);
        z = {re, im};
    }
    if (!is) throw ConfigError(path + ": truncated grid container");
    std::ifstream js(path + ".json");
    if (js) {
        json side = json::parse(js);
        if (params_out) *params_out = params_from_json(side.at("params"));
        if (hash_out) *hash_out = side.value("config_hash", "");
    }
    return g;
}

namespace {

json table_to_json(const HermiteTable& t) {
    return json{{"x", t.xs()}, {"y", t.ys()}, {"dy", t.dys()}};
}

HermiteTable table_from_json(const json& j) {
    return HermiteTable(j.at("x").get<std::vector<double>>(),
                        j.at("y").get<std::vector<double>>(),
                        j.at("dy").get<std::vector<double>>());
}

} // namespace

json state_to_json(const SeparatedState& st) {
    json j;
    j["params"] = params_to_json(st.params);
    j["kappa"] = st.kappa;
    j["branch"] = st.branch;
    j["winding"] = st.winding;
    j["E"] = st.E;
    j["lambda"] = st.lambda;
    j["norm_const"] = st.norm_const;
    j["r_max"] = st.r_max;
    j["Omega"] = table_to_json(st.Omega);
    j["lnR"] = table_to_json(st.lnR);
    j["angular"] = {{"lambda", st.angular.lambda},
                    {"theta_start", st.angular.theta_start},
                    {"Theta0", st.angular.Theta0},
                    {"Theta_pi", st.angular.Theta_pi},
                    {"kappa", st.angular.kappa},
                    {"Theta", table_to_json(st.angular.Theta)},
                    {"lnS", table_to_json(st.angular.lnS)}};
    j["report"] = {{"converged", st.report.converged},
                   {"final_mismatch", st.report.final_mismatch},
                   {"winding", st.report.winding},
                   {"energy_iterations", st.report.energy_iterations},
                   {"angular_solves", st.report.angular_solves},
                   {"r_max", st.report.r_max}};
    return j;
}

SeparatedState state_from_json(const json& j) {
    SeparatedState st;
    st.params = params_from_json(j.at("params"));
    st.kappa = j.at("kappa").get<double>();
    st.branch = j.at("branch").get<int>();
    st.winding = j.at("winding").get<int>();
    st.E = j.at("E").get<double>();
    st.lambda = j.at("lambda").get<double>();
    st.norm_const = j.at("norm_const").get<double>();
    st.r_max = j.at("r_max").get<double>();
    st.Omega = table_from_json(j.at("Omega"));
    st.lnR = table_from_json(j.at("lnR"));
    const json& a = j.at("angular");
    st.angular.lambda = a.at("lambda").get<double>();
    st.angular.theta_start = a.at("theta_start").get<double>();
    st.angular.Theta0 = a.at("Theta0").get<double>();
    st.angular.Theta_pi = a.at("Theta_pi").get<double>();
    st.angular.kappa = a.at("kappa").get<double>();
    st.angular.Theta = table_from_json(a.at("Theta"));
    st.angular.lnS = table_from_json(a.at("lnS"));
    return st;
}

void save_state(const SeparatedState& st, const std::string& path,
                const std::string& cfg_hash) {
    json j = state_to_json(st);
    j["config_hash"] = cfg_hash;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    os << j.dump() << "\n";
}

SeparatedState load_state(const std::string& path, std::string* hash_out) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open " + path);
    json j = json::parse(is);
    if (hash_out) *hash_out = j.value("config_hash", "");
    return state_from_json(j);
}

} // namespace zgkn
