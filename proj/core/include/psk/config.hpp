#pragma once

// Run configuration: a single JSON document selecting an ambient structure
// (catalog name or inline expressions), an optional immersion, potentials,
// deformation parameters, tolerances, and grids. The schema is documented
// in the README.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psk/contact.hpp"
#include "psk/immersion.hpp"

namespace psk {

struct ValidationError : std::runtime_error {
    std::string field;
    ValidationError(const std::string& field_, const std::string& msg)
        : std::runtime_error("config." + field_ + ": " + msg), field(field_)
    {
    }
};

struct SabotageSpec {
    double scale_eta = 1.0;
    bool flip_phi = false;
    double scale_xi = 1.0;
};

struct RunConfig {
    // ambient: catalog name + n, or a full inline structure (already parsed
    // into an AmbientStructure by the loader)
    std::string ambient_catalog;
    int ambient_n = 1;
    std::optional<AmbientStructure> ambient_inline;
    std::optional<SabotageSpec> sabotage;

    std::optional<std::string> immersion_catalog;
    std::optional<Immersion> immersion_inline;

    std::vector<std::string> potentials;
    std::vector<double> alphas;

    int sample_count = 24;
    uint64_t seed = 0;
    double tolerance_scale = 1.0;
    double h_t = 1e-2;
    double flow_t_max = 0.05;
    int spectrum_k = 8;
    std::vector<int> spectrum_resolution;
    bool run_legendrian_checks = true;

    std::string out = "report.json";
    std::string echo; // canonical JSON echo of the parsed document

    bool has_immersion() const { return immersion_catalog.has_value() || immersion_inline.has_value(); }
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Resolve catalog/inline and apply any sabotage transforms.
AmbientStructure build_ambient(const RunConfig& cfg);
Immersion build_immersion(const RunConfig& cfg);

} // namespace psk
