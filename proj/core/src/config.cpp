#include "psk/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace psk {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> coordinate_names(const ordered_json& j, int dim, const char* stem)
{
    if (j.contains("coords")) {
        auto names = j.at("coords").get<std::vector<std::string>>();
        if (static_cast<int>(names.size()) != dim)
            throw ValidationError("coords", "expected " + std::to_string(dim) + " names");
        return names;
    }
    return default_variables(dim, stem);
}

AmbientStructure parse_inline_ambient(const ordered_json& j)
{
    AmbientStructure S;
    S.name = j.value("name", std::string("inline"));
    S.n = j.at("n").get<int>();
    S.eps = j.value("eps", 1);
    const int d = S.dim();
    const auto vars = coordinate_names(j, d, "x");

    std::vector<int> sig(static_cast<size_t>(d), 1);
    if (j.contains("signature")) {
        sig = j.at("signature").get<std::vector<int>>();
        if (static_cast<int>(sig.size()) != d) throw ValidationError("ambient.signature", "wrong length");
    } else if (S.eps == -1) {
        sig.back() = -1;
    }
    S.metric = MetricField(d, sig);

    const auto& gm = j.at("metric");
    if (static_cast<int>(gm.size()) != d) throw ValidationError("ambient.metric", "expected d rows");
    for (int i = 0; i < d; ++i)
        for (int k = i; k < d; ++k)
            S.metric.set(i, k, parse_expr(gm.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<std::string>(), vars));

    for (const auto& e : j.at("xi")) S.xi.push_back(parse_expr(e.get<std::string>(), vars));
    for (const auto& e : j.at("eta")) S.eta.push_back(parse_expr(e.get<std::string>(), vars));
    if (static_cast<int>(S.xi.size()) != d) throw ValidationError("ambient.xi", "expected d components");
    if (static_cast<int>(S.eta.size()) != d) throw ValidationError("ambient.eta", "expected d components");

    const auto& ph = j.at("phi");
    if (static_cast<int>(ph.size()) != d) throw ValidationError("ambient.phi", "expected d rows");
    S.phi.resize(static_cast<size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            S.phi[static_cast<size_t>(i * d + k)] =
                parse_expr(ph.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<std::string>(), vars);

    S.sample_lo = j.value("sample_lo", std::vector<double>(static_cast<size_t>(d), -1.0));
    S.sample_hi = j.value("sample_hi", std::vector<double>(static_cast<size_t>(d), 1.0));
    if (static_cast<int>(S.sample_lo.size()) != d || static_cast<int>(S.sample_hi.size()) != d)
        throw ValidationError("ambient.sample_lo/hi", "wrong length");
    return S;
}

Immersion parse_inline_immersion(const ordered_json& j)
{
    Immersion f;
    f.name = j.value("name", std::string("inline"));
    f.n = j.at("n").get<int>();
    const auto vars = coordinate_names(j, f.n, "u");

    for (const auto& e : j.at("components")) f.components.push_back(parse_expr(e.get<std::string>(), vars));
    if (static_cast<int>(f.components.size()) != f.ambient_dim())
        throw ValidationError("immersion.components", "expected 2n+1 components");

    const auto& dom = j.at("domain");
    if (static_cast<int>(dom.size()) != f.n) throw ValidationError("immersion.domain", "expected n ranges");
    for (const auto& r : dom) {
        f.lo.push_back(r.at(0).get<double>());
        f.hi.push_back(r.at(1).get<double>());
    }
    f.periodic = j.at("periodic").get<std::vector<bool>>();
    f.grid_sizes = j.at("grid").get<std::vector<int>>();
    if (static_cast<int>(f.periodic.size()) != f.n) throw ValidationError("immersion.periodic", "wrong length");
    if (static_cast<int>(f.grid_sizes.size()) != f.n) throw ValidationError("immersion.grid", "wrong length");
    for (int s : f.grid_sizes)
        if (s < 4) throw ValidationError("immersion.grid", "grid sizes must be at least 4");
    return f;
}

} // namespace

RunConfig parse_config(const std::string& json_text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ValidationError("(document)", std::string("JSON parse failure: ") + e.what());
    }

    RunConfig cfg;
    if (!j.contains("ambient")) throw ValidationError("ambient", "missing");
    const auto& amb = j.at("ambient");
    if (amb.contains("catalog")) {
        cfg.ambient_catalog = amb.at("catalog").get<std::string>();
        cfg.ambient_n = amb.value("n", 1);
    } else if (amb.contains("inline")) {
        cfg.ambient_inline = parse_inline_ambient(amb.at("inline"));
        cfg.ambient_n = cfg.ambient_inline->n;
    } else {
        throw ValidationError("ambient", "need either 'catalog' or 'inline'");
    }

    if (j.contains("sabotage")) {
        SabotageSpec s;
        s.scale_eta = j.at("sabotage").value("scale_eta", 1.0);
        s.flip_phi = j.at("sabotage").value("flip_phi", false);
        s.scale_xi = j.at("sabotage").value("scale_xi", 1.0);
        cfg.sabotage = s;
    }

    if (j.contains("immersion")) {
        const auto& im = j.at("immersion");
        if (im.contains("catalog"))
            cfg.immersion_catalog = im.at("catalog").get<std::string>();
        else if (im.contains("inline"))
            cfg.immersion_inline = parse_inline_immersion(im.at("inline"));
        else
            throw ValidationError("immersion", "need either 'catalog' or 'inline'");
    }

    if (j.contains("potentials"))
        cfg.potentials = j.at("potentials").get<std::vector<std::string>>();
    if (j.contains("alphas")) {
        cfg.alphas = j.at("alphas").get<std::vector<double>>();
        for (double a : cfg.alphas)
            if (a <= 0.0) throw ValidationError("alphas", "alpha values must be positive");
    }

    cfg.sample_count = j.value("sample_points", 24);
    if (cfg.sample_count < 1) throw ValidationError("sample_points", "must be positive");
    cfg.seed = j.value("seed", 0ull);
    cfg.tolerance_scale = j.value("tolerance_scale", 1.0);
    if (cfg.tolerance_scale <= 0.0) throw ValidationError("tolerance_scale", "must be positive");
    cfg.h_t = j.value("h_t", 1e-2);
    if (cfg.h_t <= 0.0) throw ValidationError("h_t", "must be positive");
    cfg.flow_t_max = j.value("flow_t_max", 0.05);
    cfg.spectrum_k = j.value("spectrum_k", 8);
    if (j.contains("spectrum_resolution"))
        cfg.spectrum_resolution = j.at("spectrum_resolution").get<std::vector<int>>();
    cfg.run_legendrian_checks = j.value("legendrian_checks", true);
    cfg.out = j.value("out", std::string("report.json"));

    cfg.echo = j.dump();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("(file)", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

AmbientStructure build_ambient(const RunConfig& cfg)
{
    AmbientStructure S = cfg.ambient_inline ? *cfg.ambient_inline
                                            : model_catalog(cfg.ambient_catalog, cfg.ambient_n);
    if (cfg.sabotage) {
        if (cfg.sabotage->scale_eta != 1.0) S = with_scaled_eta(S, cfg.sabotage->scale_eta);
        if (cfg.sabotage->flip_phi) S = with_flipped_phi(S);
        if (cfg.sabotage->scale_xi != 1.0) S = with_scaled_xi(S, cfg.sabotage->scale_xi);
    }
    return S;
}

Immersion build_immersion(const RunConfig& cfg)
{
    if (cfg.immersion_inline) return *cfg.immersion_inline;
    if (!cfg.immersion_catalog) throw ValidationError("immersion", "missing but required by this command");
    Immersion f = immersion_catalog(*cfg.immersion_catalog);
    if (!cfg.ambient_inline && !cfg.ambient_catalog.empty()) {
        const bool tanno_ambient = cfg.ambient_catalog.rfind("tanno(", 0) == 0;
        if (!tanno_ambient && (f.ambient_catalog != cfg.ambient_catalog || f.ambient_n != cfg.ambient_n))
            throw ValidationError("immersion.catalog", "immersion '" + f.name +
                                                           "' expects ambient '" + f.ambient_catalog +
                                                           "' with n=" + std::to_string(f.ambient_n));
    }
    return f;
}

} // namespace psk
