#pragma once

#include <string>
#include <vector>

#include "tmc/json_util.hpp"

namespace tmc {

struct Report {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
    void add(std::string v) { violations.push_back(std::move(v)); }
    void warn(std::string w) { warnings.push_back(std::move(w)); }
};

inline json report_json(const Report& r)
{
    return json{{"ok", r.ok()}, {"violations", r.violations}, {"warnings", r.warnings}};
}

template <class S>
struct Enumeration {
    std::vector<S> solutions;
    bool truncated = false;
};

inline void check_cap(long long cap)
{
    if (cap <= 0) throw ArgumentError("cap must be a positive integer");
}

} // namespace tmc
