#include <cmath>
#include <limits>
#include <random>

#include "cavcool/error.hpp"
#include "cavcool/params.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace cavcool;

namespace {

EffectiveParams eff(double kappa, double nu, double eta = 0.1, double g = 1e-4, double d = 0.5) {
    EffectiveParams p;
    p.kappa = kappa;
    p.nu = nu;
    p.eta = eta;
    p.g_eff = g;
    p.delta_eff = d;
    return p;
}

}  // namespace

TEST_CASE("derive_effective eliminates the atom") {
    RawParams r;
    r.cavity_coupling = 0.01;
    r.rabi_frequency = 0.02;
    r.atom_detuning = 10.0;
    r.cavity_laser_detuning = 0.5;
    r.lamb_dicke = 0.1;
    r.phonon_frequency = 0.3;
    r.atomic_decay = 0.2;
    const EffectiveParams p = derive_effective(r);
    CHECK(p.g_eff == doctest::Approx(oracle_value("derive_effective", "g_eff")).epsilon(1e-14));
    CHECK(p.delta_eff == doctest::Approx(oracle_value("derive_effective", "delta_eff")).epsilon(1e-14));
    CHECK(p.kappa == 1.0);
    CHECK(p.nu == 0.3);
    CHECK(p.eta == 0.1);
    CHECK(p.gamma == 0.2);

    SUBCASE("zero drive") {
        r.rabi_frequency = 0.0;
        CHECK(derive_effective(r).g_eff == 0.0);
    }
    SUBCASE("level shift cancels the detuning") {
        r.cavity_laser_detuning = r.cavity_coupling * r.cavity_coupling / r.atom_detuning;
        CHECK(derive_effective(r).delta_eff == 0.0);
    }
    SUBCASE("Delta = 0 is rejected") {
        r.atom_detuning = 0.0;
        CHECK_THROWS_AS(derive_effective(r), InvalidParameter);
    }
}

TEST_CASE("derive_effective is homogeneous of degree one in the rates") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        RawParams r;
        r.rabi_frequency = u(rng);
        r.cavity_coupling = u(rng);
        r.atom_detuning = 10.0 * u(rng);
        r.cavity_laser_detuning = u(rng);
        r.cavity_decay = u(rng);
        r.atomic_decay = u(rng);
        r.phonon_frequency = u(rng);
        r.lamb_dicke = 0.1;
        const double s = 0.1 + 3.0 * u(rng);
        RawParams scaled = r;
        for (double* v : {&scaled.rabi_frequency, &scaled.cavity_coupling, &scaled.atom_detuning,
                          &scaled.cavity_laser_detuning, &scaled.cavity_decay, &scaled.atomic_decay,
                          &scaled.phonon_frequency})
            *v *= s;
        const EffectiveParams a = derive_effective(r), b = derive_effective(scaled);
        CHECK(b.g_eff == doctest::Approx(s * a.g_eff).epsilon(1e-13));
        CHECK(b.delta_eff == doctest::Approx(s * a.delta_eff).epsilon(1e-12));
        CHECK(b.eta == a.eta);
    }
}

TEST_CASE("parameter invariants are enforced") {
    CHECK_THROWS_AS(eff(0.0, 1.0).validate(), InvalidParameter);
    CHECK_THROWS_AS(eff(1.0, 0.0).validate(), InvalidParameter);
    CHECK_THROWS_AS(eff(1.0, 1.0, -0.1).validate(), InvalidParameter);
    EffectiveParams p = eff(1.0, 1.0);
    p.gamma = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p.gamma = 0.0;
    p.g_eff = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    RawParams r;
    r.atomic_decay = -1.0;
    CHECK_THROWS_AS(r.validate(), InvalidParameter);
}

TEST_CASE("classify_confinement") {
    CHECK(classify_confinement(eff(1.0, 20.0), 10.0) == Confinement::strong);
    CHECK(classify_confinement(eff(1.0, 0.05), 10.0) == Confinement::weak);
    CHECK(classify_confinement(eff(1.0, 1.0), 10.0) == Confinement::intermediate);
    CHECK(classify_confinement(eff(1.0, 10.0)) == Confinement::strong);
    CHECK_THROWS_AS(classify_confinement(eff(1.0, 1.0), 1.0), InvalidParameter);
    CHECK(to_string(Confinement::weak) == "weak");

    SUBCASE("invariant under joint scaling of kappa and nu") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> logu(-3.0, 3.0);
        for (int i = 0; i < 200; ++i) {
            const double k = std::pow(10.0, logu(rng)), nu = std::pow(10.0, logu(rng));
            const double s = std::pow(2.0, logu(rng));  // exact binary scaling
            CHECK(classify_confinement(eff(k, nu)) == classify_confinement(eff(s * k, s * nu)));
        }
    }
}

TEST_CASE("check_timescale_separation") {
    const RatioCheck a = check_timescale_separation(eff(1.0, 0.1, 0.1, 5e-4), 100.0);
    CHECK(a.ok);
    CHECK(a.ratio == doctest::Approx(oracle_value("timescale_ratio", "separated")).epsilon(1e-12));

    const RatioCheck b = check_timescale_separation(eff(1.0, 1.0, 0.5, 0.5), 100.0);
    CHECK_FALSE(b.ok);
    CHECK(b.ratio == doctest::Approx(oracle_value("timescale_ratio", "not_separated")).epsilon(1e-12));

    const RatioCheck c = check_timescale_separation(eff(1.0, 1.0, 0.0, 0.5));
    CHECK(c.ok);
    CHECK(std::isinf(c.ratio));
    const RatioCheck d = check_timescale_separation(eff(1.0, 1.0, 0.1, 0.0));
    CHECK(d.ok);
    CHECK(std::isinf(d.ratio));
    CHECK(check_timescale_separation(eff(1.0, 0.1, 0.1, -5e-4)).ratio == doctest::Approx(2000.0));
}

TEST_CASE("required_cooperativity") {
    CHECK(required_cooperativity(eff(1.0, 0.1, 0.1), DetuningRegime::half_kappa) ==
          doctest::Approx(oracle_value("cooperativity", "half_kappa")).epsilon(1e-13));
    CHECK(required_cooperativity(eff(1.0, 10.0, 0.1), DetuningRegime::nu) ==
          doctest::Approx(oracle_value("cooperativity", "nu")).epsilon(1e-13));
    CHECK_THROWS_AS(required_cooperativity(eff(1.0, 1.0, 0.0), DetuningRegime::nu), SingularFormula);

    SUBCASE("positive and smooth over four decades of kappa/nu") {
        for (double eta : {0.01, 0.1, 0.5, 1.0}) {
            double prev = 0.0;
            for (int i = 0; i <= 400; ++i) {
                const double k = std::pow(10.0, -2.0 + 4.0 * i / 400.0);
                for (auto choice : {DetuningRegime::half_kappa, DetuningRegime::nu}) {
                    const double c = required_cooperativity(eff(k, 1.0, eta), choice);
                    CHECK(c > 0.0);
                    CHECK(std::isfinite(c));
                }
                const double c = required_cooperativity(eff(k, 1.0, eta), DetuningRegime::half_kappa);
                if (i > 0) CHECK(std::abs(std::log(c / prev)) < 0.1);  // no jumps between neighbours
                prev = c;
            }
        }
    }
}

TEST_CASE("check_spontaneous_emission") {
    RawParams r;
    r.rabi_frequency = 0.02;
    r.atom_detuning = 10.0;
    r.atomic_decay = 0.0;
    const RatioCheck none = check_spontaneous_emission(r, 2e-9);
    CHECK(none.ok);
    CHECK(std::isinf(none.ratio));

    r.atomic_decay = 1.0;
    const RatioCheck bad = check_spontaneous_emission(r, 2e-9);
    CHECK_FALSE(bad.ok);
    CHECK(bad.ratio == doctest::Approx(oracle_value("emission_ratio", "gamma_1")).epsilon(1e-12));

    r.atomic_decay = 1e-8;
    const RatioCheck good = check_spontaneous_emission(r, 2e-9);
    CHECK(good.ok);
    CHECK(good.ratio == doctest::Approx(oracle_value("emission_ratio", "gamma_1e-8")).epsilon(1e-12));

    r.atom_detuning = 0.0;
    CHECK_THROWS_AS(check_spontaneous_emission(r, 1.0), InvalidParameter);
}

TEST_CASE("assess_regime") {
    SUBCASE("effective parameters only") {
        const RegimeReport rep = assess_regime(eff(1.0, 0.05, 0.1, 1e-4, 0.5));
        CHECK(rep.confinement == Confinement::weak);
        CHECK(rep.timescale.ok);
        CHECK(rep.lamb_dicke_ok);
        CHECK(rep.detuning_choice == DetuningRegime::half_kappa);
        REQUIRE(rep.cooperativity_required);
        CHECK(*rep.cooperativity_required > 0.0);
        CHECK_FALSE(rep.cooperativity_actual);
        CHECK_FALSE(rep.spontaneous_emission);
    }
    SUBCASE("eta outside the Lamb-Dicke range") {
        CHECK_FALSE(assess_regime(eff(1.0, 1.0, 0.3)).lamb_dicke_ok);
        CHECK_FALSE(assess_regime(eff(1.0, 1.0, 0.0)).cooperativity_required);
    }
    SUBCASE("raw parameters") {
        RawParams r;
        r.cavity_coupling = 2.0;
        r.rabi_frequency = 0.4;
        r.atom_detuning = 400.0;
        r.cavity_laser_detuning = 10.0;
        r.phonon_frequency = 10.0;
        r.lamb_dicke = 0.1;
        r.atomic_decay = 0.01;
        const RegimeReport rep = assess_regime(r);
        CHECK(rep.confinement == Confinement::strong);
        CHECK(rep.detuning_choice == DetuningRegime::nu);
        REQUIRE(rep.cooperativity_actual);
        CHECK(*rep.cooperativity_actual == doctest::Approx(400.0));
        REQUIRE(rep.spontaneous_emission);
        r.atomic_decay = 0.0;
        const RegimeReport rep0 = assess_regime(r);
        CHECK_FALSE(rep0.cooperativity_actual);
        CHECK(rep0.spontaneous_emission->ok);
    }
}
