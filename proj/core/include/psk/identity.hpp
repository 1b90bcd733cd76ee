#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace psk {

// One named identity check: residual is the max absolute deviation seen.
struct IdentityRecord {
    std::string id;
    std::string statement; // the checked equation, in plain text
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityRecord> records;

    void add(std::string id, std::string statement, double residual, double tolerance)
    {
        records.push_back({std::move(id), std::move(statement), residual, tolerance, residual <= tolerance});
    }

    bool all_pass() const
    {
        return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
    }

    double max_residual() const
    {
        double m = 0.0;
        for (const auto& r : records) m = std::max(m, r.residual);
        return m;
    }

    const IdentityRecord* find(const std::string& id) const
    {
        for (const auto& r : records)
            if (r.id == id) return &r;
        return nullptr;
    }

    void merge(const IdentityReport& other)
    {
        records.insert(records.end(), other.records.begin(), other.records.end());
    }
};

} // namespace psk
