#include "psk/report.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

namespace psk {

bool RunReport::overall_pass() const
{
    for (const auto& r : records)
        if (!r.pass) return false;
    return true;
}

void RunReport::add_record(const std::string& id, const std::string& statement, double residual,
                           double tolerance)
{
    records.push_back({id, statement, residual, tolerance, residual <= tolerance});
}

void RunReport::add_record(const std::string& id, const IdentityRecord& r)
{
    records.push_back({id, r.statement, r.residual, r.tolerance, r.pass});
}

void RunReport::add_report(const std::string& prefix, const IdentityReport& rep)
{
    for (const auto& r : rep.records) add_record(prefix + "/" + r.id, r);
}

void RunReport::add_info(std::string key, std::string value)
{
    info.emplace_back(std::move(key), std::move(value));
}

std::string to_json(const RunReport& report)
{
    nlohmann::ordered_json j;
    j["engine"] = "pskgeo";
    j["version"] = report.engine_version;
    j["command"] = report.command;
    j["seed"] = report.seed;
    j["overall_pass"] = report.overall_pass();
    if (!report.config_echo.empty()) j["config"] = nlohmann::ordered_json::parse(report.config_echo);

    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["statement"] = r.statement;
        e["residual"] = r.residual;
        e["tolerance"] = r.tolerance;
        e["pass"] = r.pass;
        recs.push_back(std::move(e));
    }
    j["records"] = std::move(recs);

    nlohmann::ordered_json info = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.info) info[k] = v;
    j["info"] = std::move(info);

    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const auto& t : report.tables) {
        nlohmann::ordered_json e;
        e["name"] = t.name;
        e["columns"] = t.columns;
        e["rows"] = t.rows;
        tables.push_back(std::move(e));
    }
    j["tables"] = std::move(tables);

    return j.dump(2) + "\n";
}

namespace {

std::string format_full(double v)
{
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

void write_report(const RunReport& report, const std::string& path)
{
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
        out << to_json(report);
    }
    std::string stem = path;
    if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") stem.resize(stem.size() - 5);
    for (const auto& t : report.tables) {
        std::ofstream csv(stem + "." + t.name + ".csv", std::ios::binary);
        for (size_t c = 0; c < t.columns.size(); ++c) csv << (c ? "," : "") << t.columns[c];
        csv << "\n";
        for (const auto& row : t.rows) {
            for (size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << format_full(row[c]);
            csv << "\n";
        }
    }
}

} // namespace psk
