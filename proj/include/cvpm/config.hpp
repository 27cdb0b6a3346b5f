#pragma once

// INI-style config files: [section] headers, key = value pairs, '#'/';' comments.
// Parse errors carry the offending line number.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvpm/bench.hpp"
#include "cvpm/circuits.hpp"

namespace cvpm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
}  // namespace detail

class ConfigMap {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static ConfigMap parse(std::istream& in, const std::string& source_name) {
        ConfigMap cfg;
        cfg.source_ = source_name;
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            size_t cut = line.find_first_of("#;");
            std::string body = detail::trim(cut == std::string::npos ? line : line.substr(0, cut));
            if (body.empty()) continue;
            if (body.front() == '[') {
                if (body.back() != ']')
                    throw ConfigError(source_name + ":" + std::to_string(lineno) +
                                      ": unterminated section header");
                section = detail::trim(body.substr(1, body.size() - 2));
                if (section.empty())
                    throw ConfigError(source_name + ":" + std::to_string(lineno) + ": empty section name");
                continue;
            }
            size_t eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(source_name + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + body + "'");
            std::string key = detail::trim(body.substr(0, eq));
            std::string value = detail::trim(body.substr(eq + 1));
            if (key.empty())
                throw ConfigError(source_name + ":" + std::to_string(lineno) + ": empty key");
            auto& sec = cfg.sections_[section];
            if (sec.count(key))
                throw ConfigError(source_name + ":" + std::to_string(lineno) + ": duplicate key '" +
                                  key + "' in section [" + section + "]");
            sec[key] = Entry{value, lineno};
        }
        return cfg;
    }

    static ConfigMap parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        return parse(in, path);
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    const std::string& source() const { return source_; }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        auto* e = find(section, key);
        return e ? e->value : fallback;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        auto* e = find(section, key);
        if (!e) return fallback;
        return to_double(*e, section, key);
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        auto* e = find(section, key);
        if (!e) return fallback;
        try {
            size_t pos = 0;
            std::int64_t v = std::stoll(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(where(*e, section, key) + ": expected an integer, got '" + e->value + "'");
        }
    }

    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const {
        auto* e = find(section, key);
        if (!e) return fallback;
        try {
            size_t pos = 0;
            std::uint64_t v = std::stoull(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(where(*e, section, key) + ": expected an unsigned integer, got '" +
                              e->value + "'");
        }
    }

    // Comma-separated list of doubles.
    std::vector<double> get_list(const std::string& section, const std::string& key) const {
        auto* e = find(section, key);
        if (!e) return {};
        std::vector<double> out;
        std::stringstream ss(e->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty())
                throw ConfigError(where(*e, section, key) + ": empty list element");
            try {
                size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ConfigError(where(*e, section, key) + ": expected a number, got '" + item + "'");
            }
        }
        return out;
    }

private:
    const Entry* find(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    std::string where(const Entry& e, const std::string& section, const std::string& key) const {
        return source_ + ":" + std::to_string(e.line) + ": [" + section + "] " + key;
    }

    double to_double(const Entry& e, const std::string& section, const std::string& key) const {
        try {
            size_t pos = 0;
            double v = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(where(e, section, key) + ": expected a number, got '" + e.value + "'");
        }
    }

    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::string source_;
};

namespace detail {
inline const std::array<const char*, 6> context_keys = {"row1", "row2", "row3",
                                                        "col1", "col2", "col3"};

// All-or-nothing per-context override: if any key of the family is present,
// every context must be listed.
inline std::optional<std::array<double, 6>> per_context(const ConfigMap& cfg,
                                                        const std::string& section,
                                                        const std::string& prefix) {
    bool any = false;
    for (const char* k : context_keys) any = any || cfg.has(section, prefix + k);
    if (!any) return std::nullopt;
    std::array<double, 6> out{};
    for (size_t i = 0; i < 6; ++i) {
        std::string key = prefix + context_keys[i];
        if (!cfg.has(section, key))
            throw ConfigError(cfg.source() + ": [" + section + "] missing context '" + key +
                              "' (per-context values must cover all six contexts)");
        out[i] = cfg.get_double(section, key, 0.0);
    }
    return out;
}
}  // namespace detail

inline ExperimentConfig experiment_from_config(const ConfigMap& cfg) {
    ExperimentConfig out;

    SquareParams canon = SquareParams::canonical();
    out.square_params.q0 = cfg.get_double("square", "q0", canon.q0);
    out.square_params.p0 = cfg.get_double("square", "p0", canon.p0);

    std::string kind = cfg.get_string("backend", "kind", "gaussian");
    if (kind == "gaussian") {
        out.backend.kind = BackendKind::Gaussian;
    } else if (kind == "fock") {
        out.backend.kind = BackendKind::Fock;
    } else {
        throw ConfigError(cfg.source() + ": [backend] kind must be 'gaussian' or 'fock', got '" +
                          kind + "'");
    }
    out.backend.cutoff = static_cast<int>(cfg.get_int("backend", "cutoff", out.backend.cutoff));

    out.probe.disp[0] = cx{cfg.get_double("probe", "disp_x_re", 0.0),
                           cfg.get_double("probe", "disp_x_im", 0.0)};
    out.probe.disp[1] = cx{cfg.get_double("probe", "disp_y_re", 0.0),
                           cfg.get_double("probe", "disp_y_im", 0.0)};
    out.probe.squeeze[0] = cfg.get_double("probe", "squeeze_x", 0.0);
    out.probe.squeeze[1] = cfg.get_double("probe", "squeeze_y", 0.0);
    out.probe.rotation[0] = cfg.get_double("probe", "rotation_x", 0.0);
    out.probe.rotation[1] = cfg.get_double("probe", "rotation_y", 0.0);

    NoiseModel& n = out.noise;
    n.visibility_hadamard = cfg.get_double("noise", "visibility", n.visibility_hadamard);
    n.visibility_sagnac = cfg.get_double("noise", "visibility_sagnac", n.visibility_sagnac);
    n.per_context_visibility = detail::per_context(cfg, "noise", "visibility_");
    n.calib_eps_q = cfg.get_double("noise", "eps_q", 0.0);
    n.calib_eps_p = cfg.get_double("noise", "eps_p", 0.0);
    n.residual_amp_x = cx{cfg.get_double("noise", "residual_x_re", 0.0),
                          cfg.get_double("noise", "residual_x_im", 0.0)};
    n.residual_amp_y = cx{cfg.get_double("noise", "residual_y_re", 0.0),
                          cfg.get_double("noise", "residual_y_im", 0.0)};
    n.g2 = cfg.get_double("noise", "g2", 0.0);
    n.visibility_jitter_sd = cfg.get_double("noise", "visibility_jitter_sd", 0.0);

    out.count_rate = cfg.get_double("counting", "rate", out.count_rate);
    out.per_context_rate = detail::per_context(cfg, "counting", "rate_");
    out.kappa_count_rate = cfg.get_double("counting", "kappa_rate", out.kappa_count_rate);
    out.window_s = cfg.get_double("counting", "window_s", out.window_s);
    out.n_windows = static_cast<int>(cfg.get_int("counting", "n_windows", out.n_windows));

    out.rng_seed = cfg.get_u64("rng", "seed", out.rng_seed);
    out.slots_per_context =
        static_cast<int>(cfg.get_int("analysis", "slots_per_context", out.slots_per_context));

    try {
        out.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    return out;
}

struct BenchConfig {
    BenchParams params;
    double qd_wavelength = 932e-9;  // emitter transition; calibration math uses params.wavelength
};

inline BenchConfig bench_from_config(const ConfigMap& cfg) {
    BenchConfig out;
    out.params.wavelength = cfg.get_double("bench", "wavelength", out.params.wavelength);
    out.params.shear = cfg.get_double("bench", "shear", out.params.shear);
    out.params.wedge_deflection = cfg.get_double("bench", "wedge_deflection", 0.0);
    out.params.farfield_distance = cfg.get_double("bench", "farfield_distance", out.params.farfield_distance);
    out.params.length_scale = cfg.get_double("bench", "length_scale", out.params.length_scale);
    out.qd_wavelength = cfg.get_double("bench", "qd_wavelength", out.qd_wavelength);
    return out;
}

struct SweepSpec {
    std::string parameter;  // visibility | g2 | eps_q | eps_p | cutoff
    std::vector<double> values;
};

inline SweepSpec sweep_from_config(const ConfigMap& cfg) {
    SweepSpec out;
    out.parameter = cfg.get_string("sweep", "parameter", "");
    static const std::vector<std::string> known = {"visibility", "g2", "eps_q", "eps_p", "cutoff"};
    bool ok = false;
    for (const auto& k : known) ok = ok || k == out.parameter;
    if (!ok)
        throw ConfigError(cfg.source() + ": [sweep] parameter must be one of visibility, g2, "
                          "eps_q, eps_p, cutoff; got '" + out.parameter + "'");

    if (cfg.has("sweep", "values")) {
        out.values = cfg.get_list("sweep", "values");
    } else {
        double start = cfg.get_double("sweep", "start", std::nan(""));
        double stop = cfg.get_double("sweep", "stop", std::nan(""));
        double step = cfg.get_double("sweep", "step", std::nan(""));
        if (std::isnan(start) || std::isnan(stop) || std::isnan(step))
            throw ConfigError(cfg.source() +
                              ": [sweep] needs either 'values' or 'start'/'stop'/'step'");
        if (step <= 0.0) throw ConfigError(cfg.source() + ": [sweep] step must be positive");
        for (double v = start; v <= stop + 0.5 * step; v += step) out.values.push_back(v);
    }
    if (out.values.empty()) throw ConfigError(cfg.source() + ": [sweep] empty value range");
    return out;
}

}  // namespace cvpm
