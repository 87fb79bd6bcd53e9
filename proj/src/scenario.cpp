#include "ringprobe/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ringprobe/constants.hpp"

namespace ringprobe {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_quotes(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters after number in \"" + context + "\"");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("malformed number in \"" + context + "\"");
    }
}

struct UnitTable {
    std::map<std::string, double> scale;
};

const UnitTable& unit_table(std::string_view dimension) {
    static const std::map<std::string, UnitTable> tables = {
        {"frequency", {{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}}},
        {"time", {{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}}}},
        {"length", {{{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}}}},
        {"mass", {{{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}, {"ng", 1e-12},
                   {"pg", 1e-15}, {"fg", 1e-18}, {"u", k_atomic_mass_unit}}}},
        {"temperature", {{{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"µK", 1e-6}, {"nK", 1e-9}}}},
        {"bare", {{}}},
    };
    auto it = tables.find(std::string(dimension));
    if (it == tables.end()) throw ConfigError("unknown unit dimension " + std::string(dimension));
    return it->second;
}

}  // namespace

double parse_quantity(std::string_view text, std::string_view dimension) {
    const std::string cleaned = strip_quotes(trim(text));
    if (cleaned.empty()) throw ConfigError("empty value");
    // Split into leading number and optional unit token.
    size_t i = 0;
    while (i < cleaned.size() &&
           (std::isdigit(static_cast<unsigned char>(cleaned[i])) || cleaned[i] == '.' ||
            cleaned[i] == '+' || cleaned[i] == '-' ||
            ((cleaned[i] == 'e' || cleaned[i] == 'E') && i + 1 < cleaned.size() &&
             (std::isdigit(static_cast<unsigned char>(cleaned[i + 1])) || cleaned[i + 1] == '+' ||
              cleaned[i + 1] == '-')))) {
        if (cleaned[i] == 'e' || cleaned[i] == 'E') ++i;  // consume exponent sign next pass
        ++i;
    }
    const double value = parse_number(cleaned.substr(0, i), cleaned);
    const std::string unit = trim(cleaned.substr(i));
    const UnitTable& table = unit_table(dimension);
    if (unit.empty()) {
        // Bare numbers are taken as SI base units of the dimension.
        return value;
    }
    auto it = table.scale.find(unit);
    if (it == table.scale.end()) {
        throw ConfigError("unknown unit \"" + unit + "\" for " + std::string(dimension) +
                          " in \"" + std::string(text) + "\"");
    }
    return value * it->second;
}

std::vector<double> parse_time_grid(std::string_view text) {
    const std::string cleaned = strip_quotes(trim(text));
    const size_t c1 = cleaned.find(':');
    const size_t c2 = cleaned.rfind(':');
    if (c1 == std::string::npos || c2 == c1) {
        throw ConfigError("grid must be start:stop:points, got \"" + cleaned + "\"");
    }
    const double start = parse_quantity(cleaned.substr(0, c1), "time");
    const double stop = parse_quantity(cleaned.substr(c1 + 1, c2 - c1 - 1), "time");
    const double pts = parse_number(trim(cleaned.substr(c2 + 1)), cleaned);
    const long n = std::lround(pts);
    if (n < 2 || stop <= start || start < 0.0) {
        throw ConfigError("grid must have stop > start >= 0 and at least 2 points");
    }
    std::vector<double> grid(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        grid[static_cast<size_t>(i)] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
}

namespace {

using KeyMap = std::map<std::string, std::map<std::string, std::string>>;

KeyMap tokenize_config(std::string_view text) {
    KeyMap out;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("unterminated section header at line " + std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError("empty section name at line " + std::to_string(lineno));
            out[section];
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
        if (section.empty()) throw ConfigError("key outside of any section at line " + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = strip_quotes(trim(t.substr(eq + 1)));
        if (key.empty() || value.empty()) throw ConfigError("empty key or value at line " + std::to_string(lineno));
        if (!out[section].emplace(key, value).second) {
            throw ConfigError("duplicate key \"" + key + "\" in [" + section + "]");
        }
    }
    return out;
}

class SectionReader {
public:
    SectionReader(const KeyMap& map, std::string section) : map_(map), section_(std::move(section)) {}

    bool has(const std::string& key) const {
        auto sec = map_.find(section_);
        return sec != map_.end() && sec->second.count(key) > 0;
    }

    std::string get(const std::string& key) const {
        auto sec = map_.find(section_);
        if (sec == map_.end() || !sec->second.count(key)) {
            throw ConfigError("missing mandatory field [" + section_ + "] " + key);
        }
        consumed_.insert(key);
        return sec->second.at(key);
    }

    std::optional<std::string> get_optional(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return get(key);
    }

    void check_no_unknown_keys() const {
        auto sec = map_.find(section_);
        if (sec == map_.end()) return;
        for (const auto& [key, value] : sec->second) {
            if (!consumed_.count(key)) {
                throw ConfigError("unknown key \"" + key + "\" in [" + section_ + "]");
            }
        }
    }

private:
    const KeyMap& map_;
    std::string section_;
    mutable std::set<std::string> consumed_;
};

void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("non-positive physical value for " + what);
    }
}

void require_nonnegative(double v, const std::string& what) {
    if (v < 0.0 || !std::isfinite(v)) {
        throw ConfigError("negative value for " + what);
    }
}

constexpr double k_two_pi = 2.0 * k_pi;

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    const KeyMap map = tokenize_config(text);
    for (const auto& [section, keys] : map) {
        static const std::set<std::string> known = {"oscillator", "cavity", "environment", "probe", "run"};
        if (!known.count(section)) throw ConfigError("unknown section [" + section + "]");
    }

    ScenarioConfig cfg;
    SectionReader osc(map, "oscillator");
    cfg.mass = parse_quantity(osc.get("mass"), "mass");
    // Frequencies in the config are cyclic; stored rates are angular.
    cfg.trap_omega = k_two_pi * parse_quantity(osc.get("omega"), "frequency");
    cfg.temperature0 = parse_quantity(osc.get("temperature"), "temperature");
    osc.check_no_unknown_keys();
    require_positive(cfg.mass, "mass");
    require_positive(cfg.trap_omega, "omega");
    require_nonnegative(cfg.temperature0, "temperature");

    SectionReader cav(map, "cavity");
    cfg.cavity_kappa = k_two_pi * parse_quantity(cav.get("kappa"), "frequency");
    cfg.fsr_hz = parse_quantity(cav.get("fsr"), "frequency");
    cfg.coupling_g = k_two_pi * parse_quantity(cav.get("g"), "frequency");
    cav.check_no_unknown_keys();
    require_positive(cfg.cavity_kappa, "kappa");
    require_positive(cfg.fsr_hz, "fsr");
    require_positive(cfg.coupling_g, "g");

    SectionReader env(map, "environment");
    const std::string kind = env.get("kind");
    if (kind == "decoherence") {
        cfg.env_kind = EnvironmentKind::pure_decoherence;
        const bool has_gamma = env.has("gamma");
        const bool has_diffusion = env.has("diffusion");
        if (!has_gamma && !has_diffusion) {
            throw ConfigError("decoherence environment needs gamma or diffusion");
        }
        if (has_diffusion) {
            cfg.diffusion = parse_quantity(env.get("diffusion"), "bare");
            require_positive(*cfg.diffusion, "diffusion");
        }
        if (has_gamma) {
            cfg.decoherence_rate = k_two_pi * parse_quantity(env.get("gamma"), "frequency");
            require_positive(cfg.decoherence_rate, "gamma");
        } else {
            cfg.decoherence_rate = *cfg.diffusion / (k_hbar * cfg.trap_omega * cfg.mass);
        }
        if (has_gamma && has_diffusion) {
            const double from_d = *cfg.diffusion / (k_hbar * cfg.trap_omega * cfg.mass);
            if (std::abs(from_d - cfg.decoherence_rate) > 1e-6 * cfg.decoherence_rate) {
                throw ConfigError("gamma and diffusion disagree beyond 1 part in 1e6");
            }
        }
    } else if (kind == "thermalization") {
        cfg.env_kind = EnvironmentKind::thermalization;
        cfg.thermalization_rate = k_two_pi * parse_quantity(env.get("gamma_th"), "frequency");
        cfg.bath_temperature = parse_quantity(env.get("bath_temperature"), "temperature");
        require_positive(cfg.thermalization_rate, "gamma_th");
        require_nonnegative(cfg.bath_temperature, "bath_temperature");
    } else {
        throw ConfigError("environment kind must be decoherence or thermalization");
    }
    env.check_no_unknown_keys();

    SectionReader probe(map, "probe");
    cfg.wavelength = parse_quantity(probe.get("wavelength"), "length");
    cfg.pulse_length = parse_quantity(probe.get("pulse"), "time");
    cfg.photons_in = parse_quantity(probe.get("photons"), "bare");
    probe.check_no_unknown_keys();
    require_positive(cfg.wavelength, "wavelength");
    require_positive(cfg.pulse_length, "pulse");
    if (!(cfg.photons_in >= 1.0)) throw ConfigError("photons must be >= 1");

    SectionReader run(map, "run");
    if (auto seed = run.get_optional("seed")) {
        const double v = parse_number(strip_quotes(*seed), "seed");
        if (v < 0.0) throw ConfigError("seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(v);
    }
    if (auto grid = run.get_optional("grid")) {
        cfg.probe_times = parse_time_grid(*grid);
    } else {
        // Default grid: 512 probe times from 0 to the optimal observation
        // horizon nbar0/Gamma (or 8 trap periods for a rate-free fallback).
        const double nbar0 = thermal_occupation(cfg.trap_omega, cfg.temperature0);
        const double rate = cfg.env_kind == EnvironmentKind::pure_decoherence
                                ? cfg.decoherence_rate
                                : cfg.thermalization_rate;
        const double horizon = rate > 0.0 ? nbar0 / rate : 16.0 * k_pi / cfg.trap_omega;
        cfg.probe_times.resize(512);
        for (size_t i = 0; i < cfg.probe_times.size(); ++i) {
            cfg.probe_times[i] = horizon * static_cast<double>(i) / 511.0;
        }
    }
    run.check_no_unknown_keys();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

double thermal_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;
    const double x = k_hbar * omega / (2.0 * k_boltzmann * temperature);
    if (x > 350.0) return 1.0;  // coth saturates well inside double range
    return 1.0 / std::tanh(x);
}

DimensionlessParams derive_dimensionless(const ScenarioConfig& config) {
    DimensionlessParams p;
    const double k = 2.0 * k_pi / config.wavelength;
    p.sigma0 = std::sqrt(k_hbar / (2.0 * config.mass * config.trap_omega));
    p.lamb_dicke = k_hbar * k * k / (2.0 * config.mass * config.trap_omega);
    p.env_kind = config.env_kind;
    if (config.env_kind == EnvironmentKind::pure_decoherence) {
        p.gamma = config.decoherence_rate / config.trap_omega;
    } else {
        p.gamma_th = config.thermalization_rate / config.trap_omega;
        p.nbar_env = thermal_occupation(config.trap_omega, config.bath_temperature);
    }
    p.nbar0 = thermal_occupation(config.trap_omega, config.temperature0);
    p.g_over_kappa = config.coupling_g / config.cavity_kappa;
    p.kappa_tau = config.cavity_kappa * config.pulse_length;
    p.omega_tau = config.trap_omega * config.pulse_length;
    p.omega_over_kappa = config.trap_omega / config.cavity_kappa;
    p.omega_over_fsr = config.trap_omega / (2.0 * k_pi * config.fsr_hz);
    p.photons_in = config.photons_in;
    p.omega = config.trap_omega;
    p.kappa = config.cavity_kappa;
    p.coupling_g = config.coupling_g;
    p.pulse_length = config.pulse_length;
    p.seed = config.seed;
    p.theta_grid.resize(config.probe_times.size());
    for (size_t i = 0; i < p.theta_grid.size(); ++i) {
        p.theta_grid[i] = config.trap_omega * config.probe_times[i];
    }

    for (double v : {p.lamb_dicke, p.nbar0, p.nbar_env, p.g_over_kappa, p.kappa_tau,
                     p.omega_tau, p.omega_over_kappa, p.omega_over_fsr, p.sigma0}) {
        if (!std::isfinite(v)) throw ConfigError("overflow or underflow in unit conversion");
    }
    return p;
}

ValidityReport check_validity(const DimensionlessParams& params,
                              const ValidityThresholds& thresholds) {
    ValidityReport report;
    auto add = [&report](std::string name, double ratio, double threshold, bool strict = false) {
        const bool pass = strict ? ratio < threshold : ratio <= threshold;
        report.checks.push_back({std::move(name), ratio, threshold, pass});
    };
    add("sudden_pulse", params.omega_tau, thresholds.sudden_pulse);
    add("sudden_cavity", params.omega_over_kappa, thresholds.sudden_cavity);
    add("bad_cavity", 1.0 / params.kappa_tau, thresholds.bad_cavity);
    // Full linewidth against the angular free spectral range.
    add("mode_spacing", 2.0 * params.kappa * params.omega_over_fsr / params.omega,
        thresholds.mode_spacing, /*strict=*/true);
    const double rate = params.env_kind == EnvironmentKind::pure_decoherence ? params.gamma
                                                                             : params.gamma_th;
    add("weak_coupling", rate, thresholds.weak_coupling);
    add("lamb_dicke_initial", 8.0 * params.lamb_dicke * params.nbar0, thresholds.lamb_dicke,
        /*strict=*/true);

    report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const ValidityCheck& c) { return c.pass; });
    if (params.nbar0 == 1.0) {
        report.notes.push_back("initial state at nbar0 = 1 (ground-state preparation)");
    }
    return report;
}

}  // namespace ringprobe
