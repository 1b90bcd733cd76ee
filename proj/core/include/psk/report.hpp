#pragma once

// Machine-readable run reports: a flat list of named checks plus numeric
// tables. Serialization is deterministic (fixed ordering, no timestamps),
// so identical config + seed gives byte-identical output.

#include <cstdint>
#include <string>
#include <vector>

#include "psk/identity.hpp"

namespace psk {

struct CheckRecord {
    std::string id;
    std::string statement;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    std::string engine_version;
    std::string command;
    uint64_t seed = 0;
    std::string config_echo; // canonicalized config document
    std::vector<CheckRecord> records;
    std::vector<std::pair<std::string, std::string>> info;
    std::vector<Table> tables;

    bool overall_pass() const;
    void add_record(const std::string& id, const std::string& statement, double residual,
                    double tolerance);
    void add_record(const std::string& id, const IdentityRecord& r);
    void add_report(const std::string& prefix, const IdentityReport& rep);
    void add_info(std::string key, std::string value);
};

std::string to_json(const RunReport& report);

// Writes <path> as JSON and one <path stem>.<table>.csv per table.
void write_report(const RunReport& report, const std::string& path);

} // namespace psk
