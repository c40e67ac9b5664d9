#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checks.hpp"

// Versioned JSON reports for check suites. Output is deterministic: key order
// is fixed, and identical inputs (including the timestamp, which is an input)
// produce byte-identical documents.

namespace lf {

// Truncates oversized rendered expressions deterministically.
inline std::string truncate_rendered(const std::string &s, std::size_t limit = 4096) {
    if (s.size() <= limit)
        return s;
    return s.substr(0, limit) + "...[truncated " + std::to_string(s.size() - limit) +
           " bytes]";
}

inline std::string emit_report(const std::string &suite, const std::string &timestamp,
                               const std::vector<CheckResult> &checks) {
    nlohmann::ordered_json doc;
    doc["format"] = 1;
    doc["suite"] = suite;
    doc["timestamp"] = timestamp;
    doc["checks"] = nlohmann::ordered_json::array();
    for (const auto &c : checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["status"] = c.pass ? "pass" : "fail";
        jc["lhs"] = truncate_rendered(c.lhs);
        jc["rhs"] = truncate_rendered(c.rhs);
        jc["difference"] = truncate_rendered(c.difference);
        doc["checks"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

} // namespace lf
