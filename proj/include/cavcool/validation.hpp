#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cavcool/moments.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    bool skipped = false;
    double seconds = 0.0;
    std::vector<CheckResult> checks;

    /// First failing check, or nullptr.
    const CheckResult* first_failure() const;
};

using DriftBuilder = std::function<DriftSystem(const EffectiveParams&)>;

struct ValidationOptions {
    bool quick = false;     // analytic and moment criteria only, no oracle runs
    bool extended = false;  // also run the full-model and two-level criteria
    DriftBuilder drift = build_drift;
    double budget_seconds = 300.0;  // wall-clock limit for the core criteria
};

/// Test fixture: the regular drift with the sign of the phonon-number row flipped.
DriftSystem build_drift_sign_fault(const EffectiveParams& p);

CriterionResult check_stationary_agreement(const ValidationOptions& o);  // 1
CriterionResult check_oracle_equivalence(const ValidationOptions& o);    // 2
CriterionResult check_rate_formula(const ValidationOptions& o);          // 3
CriterionResult check_limit_values(const ValidationOptions& o);          // 4
CriterionResult check_optimal_detuning(const ValidationOptions& o);      // 5
CriterionResult check_identity_relations(const ValidationOptions& o);    // 6
CriterionResult check_adiabatic_elimination(const ValidationOptions& o); // 7
CriterionResult check_laser_cooling(const ValidationOptions& o);         // 8

struct ValidationReport {
    std::vector<CriterionResult> criteria;
    double seconds = 0.0;

    bool all_passed() const;
    std::string to_json() const;
};

/// Runs criteria 1-6 (2 is skipped in quick mode), 7-8 when extended, and
/// the wall-clock criterion 9 over 1-6.
ValidationReport run_validation(const ValidationOptions& o = {});

}  // namespace cavcool
