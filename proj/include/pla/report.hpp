#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace pla {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;

    void add(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back({name, pass, detail});
    }
    void merge(const Report& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    int passed() const {
        int k = 0;
        for (const auto& c : checks) k += c.pass;
        return k;
    }
    // deterministic rendering: one machine-parseable line per check, sorted by name
    std::string render() const {
        std::vector<const CheckResult*> v;
        for (const auto& c : checks) v.push_back(&c);
        std::stable_sort(v.begin(), v.end(),
                         [](const CheckResult* a, const CheckResult* b) { return a->name < b->name; });
        std::string out;
        for (const auto* c : v) {
            out += "CHECK " + c->name + (c->pass ? " PASS" : " FAIL");
            if (!c->detail.empty()) out += " " + c->detail;
            out += "\n";
        }
        out += "SUMMARY " + std::to_string(passed()) + "/" + std::to_string(checks.size()) + "\n";
        return out;
    }
};

} // namespace pla
