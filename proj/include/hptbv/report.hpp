#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace hptbv {

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string witness;  // empty when ok
};

struct Report {
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
    void add(std::string name, bool ok, std::string witness = {}) {
        checks.push_back({std::move(name), ok, std::move(witness)});
    }
    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::json e{{"check", c.name}, {"pass", c.ok}};
            if (!c.ok) e["witness"] = c.witness;
            j.push_back(e);
        }
        return j;
    }
};

}  // namespace hptbv
