// Validation and verification report types shared across modules.

#pragma once

#include <string>
#include <vector>

namespace fell {

/// One violated axiom, with the witnessing data and residual magnitude.
/// Discrete violations (bad table entries) carry residual 0.
struct Violation {
    std::string rule;
    std::string witness;
    double residual = 0.0;
};

/// Result of a structural validator. Empty means every axiom held.
struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string rule, std::string witness, double residual = 0.0) {
        violations.push_back({std::move(rule), std::move(witness), residual});
    }
    std::string to_string() const;
};

/// One numerically checked identity or inequality.
struct CheckRecord {
    std::string name;      // short machine-readable check id
    std::string law;       // the mathematical statement being checked
    std::string instance;  // which instance / which inputs
    double residual = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<CheckRecord> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(CheckRecord c) { checks.push_back(std::move(c)); }
    void add(std::string name, std::string law, std::string instance, double residual,
             double bound) {
        checks.push_back({std::move(name), std::move(law), std::move(instance), residual, bound,
                          residual <= bound});
    }
    void append(const VerificationReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }
    std::string summary() const;
};

}  // namespace fell
