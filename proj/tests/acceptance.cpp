// Acceptance criteria 1-9, one PASS/FAIL line each.
//
//   acceptance                 all criteria (including the extended ones)
//   acceptance --criterion N   criterion N alone; exit status 1 on failure

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>

#include "cavcool/validation.hpp"

using namespace cavcool;

namespace {

void print(const CriterionResult& c) {
    const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    std::printf("criterion %d: %s  %s (%.2fs)\n", c.id, status, c.title.c_str(), c.seconds);
    for (const auto& k : c.checks)
        std::printf("    %-4s %s value=%.6g limit=%.6g %s\n", k.passed ? "ok" : "FAIL", k.name.c_str(), k.value,
                    k.limit, k.detail.c_str());
}

CriterionResult run_one(int id) {
    ValidationOptions o;
    o.extended = true;
    switch (id) {
        case 1: return check_stationary_agreement(o);
        case 2: return check_oracle_equivalence(o);
        case 3: return check_rate_formula(o);
        case 4: return check_limit_values(o);
        case 5: return check_optimal_detuning(o);
        case 6: return check_identity_relations(o);
        case 7: return check_adiabatic_elimination(o);
        case 8: return check_laser_cooling(o);
        default: break;
    }
    o.extended = false;
    for (const auto& c : run_validation(o).criteria)
        if (c.id == 9) return c;
    std::fprintf(stderr, "criterion 9 missing from the report\n");
    std::exit(2);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
            const int id = std::atoi(argv[2]);
            if (id < 1 || id > 9) {
                std::fprintf(stderr, "criterion must be 1..9\n");
                return 2;
            }
            const CriterionResult c = run_one(id);
            print(c);
            return c.passed ? 0 : 1;
        }
        if (argc != 1) {
            std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
            return 2;
        }
        ValidationOptions o;
        o.extended = true;
        const ValidationReport rep = run_validation(o);
        for (const auto& c : rep.criteria) print(c);
        std::printf("%s\n", rep.all_passed() ? "all criteria passed" : "some criteria failed");
        return rep.all_passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
