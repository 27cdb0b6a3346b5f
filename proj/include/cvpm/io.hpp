#pragma once

// JSON/CSV serialization for reports, plus the run manifest.
// Numbers are rendered with 17 significant digits so repeated runs with the
// same seed produce byte-identical numeric outputs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cvpm/analysis.hpp"
#include "cvpm/bench.hpp"
#include "cvpm/circuits.hpp"
#include "cvpm/config.hpp"

namespace cvpm {

inline constexpr const char* tool_version = "1.0.0";

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using json = nlohmann::ordered_json;

// JSON has no literal for infinities; report them as null.
inline json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline json square_report_json(const InequalityReport& rep, std::uint64_t seed) {
    json j;
    j["schema"] = "cvpm.square.v1";
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    j["L"] = rep.L;
    j["sd"] = rep.sd;
    j["significance"] = json_number(rep.significance);
    j["nc_bound"] = nc_bound();
    j["quantum_max"] = quantum_max;
    j["violation"] = rep.violation;
    j["corrected_bound"] = rep.corrected_bound;
    j["corrected_violation"] = rep.corrected_violation;
    j["contexts"] = json::array();
    for (const auto& e : rep.per_context) {
        json c;
        c["context"] = context_name(e.label);
        c["operators"] = e.operator_label;
        c["n_plus"] = e.n_plus;
        c["n_minus"] = e.n_minus;
        c["re_expectation"] = e.expectation;
        c["im_expectation"] = std::imag(e.complex_expectation);
        c["sd"] = e.sd;
        j["contexts"].push_back(c);
    }
    return j;
}

inline std::string square_report_csv(const InequalityReport& rep) {
    std::string out = "context,operators,n_plus,n_minus,re_expectation,sd\n";
    for (const auto& e : rep.per_context) {
        out += std::string(context_name(e.label)) + "," + e.operator_label + "," + fmt17(e.n_plus) +
               "," + fmt17(e.n_minus) + "," + fmt17(e.expectation) + "," + fmt17(e.sd) + "\n";
    }
    return out;
}

inline std::string kappa_report_csv(const KappaReport& rep) {
    std::string out = "context,pair,n_plus,n_minus,kappa,sd\n";
    for (const auto& e : rep.pairs) {
        out += std::string(context_name(e.context)) + "," + e.pair_label + "," + fmt17(e.n_plus) +
               "," + fmt17(e.n_minus) + "," + fmt17(e.kappa) + "," + fmt17(e.sd) + "\n";
    }
    out += "mean,,,," + fmt17(rep.mean_kappa) + ",\n";
    out += "max,,,," + fmt17(rep.max_kappa) + ",\n";
    return out;
}

inline json bench_report_json(const BenchConfig& cfg) {
    double tilt = cfg.params.wedge_deflection;
    if (tilt == 0.0) tilt = tilt_from_p(pi / (2.0 * cfg.params.shear), cfg.params.wavelength);
    FarfieldShift shift = farfield_shift(tilt, cfg.params.farfield_distance);
    BenchParams resolved = cfg.params;
    resolved.wedge_deflection = tilt;
    DimensionlessMap map = dimensionless_map(resolved);

    json j;
    j["schema"] = "cvpm.bench.v1";
    j["tool_version"] = tool_version;
    j["wavelength"] = cfg.params.wavelength;
    j["qd_wavelength"] = cfg.qd_wavelength;
    j["wavelength_discrepancy"] = cfg.qd_wavelength != cfg.params.wavelength;
    j["shear"] = cfg.params.shear;
    j["wedge_deflection"] = tilt;
    j["farfield_distance"] = cfg.params.farfield_distance;
    j["farfield_shift"] = shift.shift;
    j["small_angle_ok"] = shift.small_angle_ok;
    j["length_scale"] = cfg.params.length_scale;
    j["q0"] = map.params.q0;
    j["p0"] = map.params.p0;
    j["q0_p0_product"] = map.product;
    j["product_ok"] = map.product_ok;
    if (!map.product_ok)
        j["advisory"] = "q0*p0 deviates from pi/2; anticommutation of conjugate displacements is "
                        "broken at these bench settings";
    return j;
}

struct SweepRow {
    double value = 0.0;
    double L = 0.0;
    double significance = 0.0;   // NaN when not applicable
    double corrected_bound = 0.0;
    double max_deviation = 0.0;  // NaN unless sweeping the cutoff
};

inline std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
    std::string out = "parameter,value,L,significance,corrected_bound,max_deviation\n";
    for (const auto& r : rows) {
        out += parameter + "," + fmt17(r.value) + "," + fmt17(r.L) + ",";
        out += std::isfinite(r.significance) ? fmt17(r.significance) : std::string();
        out += "," + fmt17(r.corrected_bound) + ",";
        out += std::isnan(r.max_deviation) ? std::string() : fmt17(r.max_deviation);
        out += "\n";
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

// FNV-1a; enough to let the manifest flag any content drift between runs.
inline std::string content_digest(const std::string& content) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct RunManifest {
    std::string command;
    std::string config_path;
    std::string config_echo;
    std::uint64_t seed = 0;
    std::string timestamp;  // informational; numeric outputs stay seed-deterministic
    std::vector<std::pair<std::string, std::string>> digests;  // file -> digest

    json to_json() const {
        json j;
        j["schema"] = "cvpm.manifest.v1";
        j["tool_version"] = tool_version;
        j["command"] = command;
        j["config_path"] = config_path;
        j["config_echo"] = config_echo;
        j["seed"] = seed;
        j["timestamp"] = timestamp;
        j["outputs"] = json::object();
        for (const auto& [file, digest] : digests) j["outputs"][file] = digest;
        return j;
    }
};

}  // namespace cvpm
