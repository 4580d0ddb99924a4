#include "nflab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace nflab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: " + key + ": " + what);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) bad(key, "expected a number, got '" + v + "'");
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) bad(key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad(key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) bad(key, "expected a comma-separated list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid.tau", [](RunConfig& c, auto& k, auto& v) { c.tau = to_double(k, v); }},
        {"grid.n", [](RunConfig& c, auto& k, auto& v) { c.n = to_u64(k, v); }},
        {"kernel.kind", [](RunConfig& c, auto&, auto& v) { c.kernel.kind = v; }},
        {"kernel.a", [](RunConfig& c, auto& k, auto& v) { c.kernel.a = to_double(k, v); }},
        {"kernel.b1", [](RunConfig& c, auto& k, auto& v) { c.kernel.b1 = to_double(k, v); }},
        {"kernel.b2", [](RunConfig& c, auto& k, auto& v) { c.kernel.b2 = to_double(k, v); }},
        {"kernel.table_path", [](RunConfig& c, auto&, auto& v) { c.kernel.table_path = v; }},
        {"firing.beta", [](RunConfig& c, auto& k, auto& v) { c.beta = to_double(k, v); }},
        {"firing.theta", [](RunConfig& c, auto& k, auto& v) { c.theta = to_double(k, v); }},
        {"dynamics.h", [](RunConfig& c, auto& k, auto& v) { c.h = to_double(k, v); }},
        {"dynamics.dt", [](RunConfig& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
        {"dynamics.integrator", [](RunConfig& c, auto& k, auto& v) {
             try {
                 c.integrator = parse_integrator(v);
             } catch (const std::exception& e) {
                 bad(k, e.what());
             }
         }},
        {"sim.T", [](RunConfig& c, auto& k, auto& v) { c.T = to_double(k, v); }},
        {"sim.stride", [](RunConfig& c, auto& k, auto& v) { c.stride = to_u64(k, v); }},
        {"sim.n_ic", [](RunConfig& c, auto& k, auto& v) { c.n_ic = to_u64(k, v); }},
        {"sim.seed", [](RunConfig& c, auto& k, auto& v) { c.seed = to_u64(k, v); }},
        {"sim.burn_in", [](RunConfig& c, auto& k, auto& v) { c.burn_in = to_double(k, v); }},
        {"sim.tail_count", [](RunConfig& c, auto& k, auto& v) { c.tail_count = to_u64(k, v); }},
        {"sim.trace_time", [](RunConfig& c, auto& k, auto& v) { c.trace_time = to_double(k, v); }},
        {"sim.snapshots", [](RunConfig& c, auto& k, auto& v) { c.snapshots = to_bool(k, v); }},
        {"sim.ic", [](RunConfig& c, auto&, auto& v) { c.ic = v; }},
        {"sim.ic_amplitude", [](RunConfig& c, auto& k, auto& v) { c.ic_amplitude = to_double(k, v); }},
        {"tolerances.newton_tol", [](RunConfig& c, auto& k, auto& v) { c.newton_tol = to_double(k, v); }},
        {"tolerances.zero_tol", [](RunConfig& c, auto& k, auto& v) { c.zero_tol = to_double(k, v); }},
        {"tolerances.gap_tol", [](RunConfig& c, auto& k, auto& v) { c.gap_tol = to_double(k, v); }},
        {"tolerances.hyp_tol", [](RunConfig& c, auto& k, auto& v) { c.hyp_tol = to_double(k, v); }},
        {"tolerances.energy_tol", [](RunConfig& c, auto& k, auto& v) { c.energy_tol = to_double(k, v); }},
        {"equilibria.seeds", [](RunConfig& c, auto& k, auto& v) { c.eq_seeds = to_u64(k, v); }},
        {"equilibria.kmax", [](RunConfig& c, auto& k, auto& v) { c.eq_kmax = to_u64(k, v); }},
        {"equilibria.amp_min", [](RunConfig& c, auto& k, auto& v) { c.eq_amp_min = to_double(k, v); }},
        {"equilibria.amp_max", [](RunConfig& c, auto& k, auto& v) { c.eq_amp_max = to_double(k, v); }},
        {"sweep.kind", [](RunConfig& c, auto&, auto& v) { c.sweep_kind = v; }},
        {"sweep.values", [](RunConfig& c, auto& k, auto& v) { c.sweep_values = to_list(k, v); }},
        {"output.dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) bad(key, what);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) bad(key, "unknown key");
        if (value.empty()) bad(key, "empty value");
        it->second(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const RunConfig& c) {
    require(c.tau > 1.0, "grid.tau", "tau must exceed 1");
    require(c.n >= CircleGrid::kMinPoints && c.n % 2 == 0, "grid.n", "n must be even and at least 8");
    require(c.kernel.kind == "bump" || c.kernel.kind == "scaled_bump" || c.kernel.kind == "mexican_hat" ||
                c.kernel.kind == "table",
            "kernel.kind", "expected bump, scaled_bump, mexican_hat or table");
    require(c.kernel.a > 0.0 && c.kernel.a <= 1.0, "kernel.a", "a must lie in (0, 1]");
    require(c.kernel.b1 > 0.0, "kernel.b1", "b1 must be positive");
    require(c.kernel.kind != "table" || !c.kernel.table_path.empty(), "kernel.table_path",
            "required for kernel.kind = table");
    require(c.beta > 0.0, "firing.beta", "beta must be positive");
    require(std::isfinite(c.theta), "firing.theta", "theta must be finite");
    require(c.h > 0.0, "dynamics.h", "h must be positive");
    require(c.dt > 0.0, "dynamics.dt", "dt must be positive");
    require(c.T >= c.dt, "sim.T", "T must be at least dt");
    require(c.stride >= 1, "sim.stride", "stride must be at least 1");
    require(c.burn_in >= 0.0, "sim.burn_in", "burn_in must be non-negative");
    require(c.trace_time >= c.dt, "sim.trace_time", "trace_time must be at least dt");
    require(c.ic == "random" || c.ic == "constant" || c.ic == "cosine", "sim.ic",
            "expected random, constant or cosine");
    require(c.newton_tol > 0.0, "tolerances.newton_tol", "must be positive");
    require(c.zero_tol > 0.0, "tolerances.zero_tol", "must be positive");
    require(c.gap_tol > 0.0, "tolerances.gap_tol", "must be positive");
    require(c.hyp_tol > 0.0, "tolerances.hyp_tol", "must be positive");
    require(c.energy_tol > 0.0, "tolerances.energy_tol", "must be positive");
    require(c.eq_amp_min > 0.0 && c.eq_amp_min <= c.eq_amp_max, "equilibria.amp_min", "need 0 < amp_min <= amp_max");
    require(c.sweep_kind == "scaled_bump", "sweep.kind", "only scaled_bump families are supported");
    for (double a : c.sweep_values) require(a > 0.0 && a <= 1.0, "sweep.values", "every a must lie in (0, 1]");
}

std::string effective_config(const RunConfig& c) {
    std::ostringstream os;
    auto kv = [&os](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
    kv("grid.tau", fmt(c.tau));
    kv("grid.n", std::to_string(c.n));
    kv("kernel.kind", c.kernel.kind);
    kv("kernel.a", fmt(c.kernel.a));
    kv("kernel.b1", fmt(c.kernel.b1));
    kv("kernel.b2", fmt(c.kernel.b2));
    kv("kernel.table_path", c.kernel.table_path.empty() ? "\"\"" : c.kernel.table_path);
    kv("firing.beta", fmt(c.beta));
    kv("firing.theta", fmt(c.theta));
    kv("dynamics.h", fmt(c.h));
    kv("dynamics.dt", fmt(c.dt));
    kv("dynamics.integrator", to_string(c.integrator));
    kv("sim.T", fmt(c.T));
    kv("sim.stride", std::to_string(c.stride));
    kv("sim.n_ic", std::to_string(c.n_ic));
    kv("sim.seed", std::to_string(c.seed));
    kv("sim.burn_in", fmt(c.burn_in));
    kv("sim.tail_count", std::to_string(c.tail_count));
    kv("sim.trace_time", fmt(c.trace_time));
    kv("sim.snapshots", c.snapshots ? "true" : "false");
    kv("sim.ic", c.ic);
    kv("sim.ic_amplitude", fmt(c.ic_amplitude));
    kv("tolerances.newton_tol", fmt(c.newton_tol));
    kv("tolerances.zero_tol", fmt(c.zero_tol));
    kv("tolerances.gap_tol", fmt(c.gap_tol));
    kv("tolerances.hyp_tol", fmt(c.hyp_tol));
    kv("tolerances.energy_tol", fmt(c.energy_tol));
    kv("equilibria.seeds", std::to_string(c.eq_seeds));
    kv("equilibria.kmax", std::to_string(c.eq_kmax));
    kv("equilibria.amp_min", fmt(c.eq_amp_min));
    kv("equilibria.amp_max", fmt(c.eq_amp_max));
    kv("sweep.kind", c.sweep_kind);
    std::string values;
    for (std::size_t i = 0; i < c.sweep_values.size(); ++i) values += (i ? ", " : "") + fmt(c.sweep_values[i]);
    kv("sweep.values", values);
    // output.dir is deliberately left out: it does not change any result.
    return os.str();
}

std::string config_fingerprint(const RunConfig& cfg) {
    const auto text = effective_config(cfg);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("config_fingerprint: SHA-256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < 8 && i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

KernelProfile kernel_profile(const KernelConfig& kc) {
    if (kc.kind == "bump") return KernelProfile::bump();
    if (kc.kind == "scaled_bump") return KernelProfile::scaled_bump(kc.a);
    if (kc.kind == "mexican_hat") return KernelProfile::truncated_mexican_hat(kc.b1, kc.b2);
    if (kc.kind == "table") return KernelProfile::table_from_csv(kc.table_path);
    throw std::invalid_argument("config: kernel.kind: unknown kind '" + kc.kind + "'");
}

FlowParams flow_params(const RunConfig& cfg) {
    const CircleGrid grid(cfg.tau, cfg.n);
    return FlowParams(cfg.h, FiringRate(cfg.beta, cfg.theta), make_kernel(kernel_profile(cfg.kernel), grid), cfg.dt,
                      cfg.integrator);
}

SpectrumOptions spectrum_options(const RunConfig& cfg) {
    SpectrumOptions o;
    o.zero_tol = cfg.zero_tol;
    o.gap_tol = cfg.gap_tol;
    o.hyp_tol = cfg.hyp_tol;
    return o;
}

MultistartSpec multistart_spec(const RunConfig& cfg) {
    MultistartSpec m;
    m.seeds = cfg.eq_seeds;
    m.kmax = cfg.eq_kmax;
    m.amp_min = cfg.eq_amp_min;
    m.amp_max = cfg.eq_amp_max;
    m.seed = derive_seed(cfg.seed, 1);
    m.newton.tol = cfg.newton_tol;
    m.spectrum = spectrum_options(cfg);
    return m;
}

SamplingSpec sampling_spec(const RunConfig& cfg) {
    SamplingSpec s;
    s.n_ic = cfg.n_ic;
    s.burn_in = cfg.burn_in;
    s.tail_count = cfg.tail_count;
    s.trace_time = cfg.trace_time;
    s.seed = derive_seed(cfg.seed, 2);
    s.hyp_tol = cfg.hyp_tol;
    return s;
}

std::vector<SweepMember> sweep_family(const RunConfig& cfg) {
    const double a_base = cfg.kernel.kind == "scaled_bump" ? cfg.kernel.a : 1.0;
    std::vector<SweepMember> family;
    for (double a : cfg.sweep_values) {
        family.push_back(SweepMember{a_base - a, KernelProfile::scaled_bump(a)});
    }
    return family;
}

}  // namespace nflab
