#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cavcool/error.hpp"
#include "cavcool/moments.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace cavcool;

namespace {

EffectiveParams eff(double g, double eta, double nu, double d, double kappa = 1.0) {
    EffectiveParams p;
    p.g_eff = g;
    p.eta = eta;
    p.nu = nu;
    p.delta_eff = d;
    p.kappa = kappa;
    return p;
}

const char* const kNames[] = {"k_x", "k_y", "k_u", "k_w", "k1", "k2", "k3",
                              "k4",  "k5",  "k6",  "k7",  "k8", "n",  "m"};

// Reference generator, written row by row from the cooling equations.
struct Reference {
    DriftMatrix A = DriftMatrix::Zero();
    MomentVector b = MomentVector::Zero();
};

Reference reference_drift(const EffectiveParams& p) {
    using M = Moment;
    Reference r;
    const double g = p.g_eff, eg = p.eta * p.g_eff, k = p.kappa, hk = 0.5 * p.kappa, nu = p.nu,
                 d = p.delta_eff;
    auto a = [&](M row, M col, double v) {
        r.A(MomentState::index(row), MomentState::index(col)) += v;
    };
    auto c = [&](M row, double v) { r.b(MomentState::index(row)) += v; };
    a(M::kx, M::ky, -2 * eg); a(M::kx, M::ku, nu);
    c(M::ky, 2 * g); a(M::ky, M::kw, d); a(M::ky, M::ky, -hk);
    a(M::ku, M::kx, -nu);
    a(M::kw, M::ku, 2 * eg); a(M::kw, M::ky, -d); a(M::kw, M::kw, -hk);
    a(M::k1, M::k7, 2 * eg); a(M::k1, M::m, 4 * eg); c(M::k1, 2 * eg);
    a(M::k1, M::k3, -nu); a(M::k1, M::k2, -d); a(M::k1, M::k1, -hk);
    a(M::k2, M::ku, 2 * g); a(M::k2, M::k4, nu); a(M::k2, M::k1, d); a(M::k2, M::k2, -hk);
    a(M::k3, M::k6, -2 * eg); a(M::k3, M::k8, 2 * eg); a(M::k3, M::k1, nu); a(M::k3, M::k4, d);
    a(M::k3, M::k3, -hk);
    a(M::k4, M::kx, -2 * g); a(M::k4, M::k5, -2 * eg); a(M::k4, M::n, 4 * eg); c(M::k4, 2 * eg);
    a(M::k4, M::k2, -nu); a(M::k4, M::k3, -d); a(M::k4, M::k4, -hk);
    a(M::k5, M::ky, -2 * g); a(M::k5, M::k1, 2 * eg); a(M::k5, M::k6, -2 * d); a(M::k5, M::k5, -k);
    a(M::k6, M::kw, 2 * g); a(M::k6, M::k2, 2 * eg); a(M::k6, M::k5, 2 * d); a(M::k6, M::k6, -k);
    a(M::k7, M::k4, -2 * eg); a(M::k7, M::k8, -2 * nu);
    a(M::k8, M::k2, -2 * eg); a(M::k8, M::k7, 2 * nu);
    a(M::n, M::ky, g); a(M::n, M::k1, eg); a(M::n, M::n, -k);
    a(M::m, M::k4, eg);
    return r;
}

MomentVector oracle_vector(const char* key) {
    MomentVector v;
    for (int i = 0; i < 14; ++i) v(i) = oracle_value(key, kNames[i]);
    return v;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
    return t;
}

}  // namespace

TEST_CASE("moment names follow the slot order") {
    for (std::size_t i = 0; i < kMomentCount; ++i)
        CHECK(moment_name(static_cast<Moment>(i)) == kNames[i]);
}

TEST_CASE("build_drift matches the cooling equations entry by entry") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const EffectiveParams p = eff(u(rng), std::abs(u(rng)), 0.1 + std::abs(u(rng)), u(rng),
                                      0.1 + std::abs(u(rng)));
        const DriftSystem sys = build_drift(p);
        const Reference ref = reference_drift(p);
        for (int i = 0; i < 14; ++i) {
            CAPTURE(kNames[i]);
            for (int j = 0; j < 14; ++j) CHECK(sys.A(i, j) == doctest::Approx(ref.A(i, j)).epsilon(1e-15));
            CHECK(sys.b(i) == doctest::Approx(ref.b(i)).epsilon(1e-15));
        }
    }

    SUBCASE("worked entries") {
        const DriftSystem sys = build_drift(eff(1e-4, 0.1, 0.05, 0.5));
        const auto ky = MomentState::index(Moment::ky), kw = MomentState::index(Moment::kw);
        CHECK(sys.A(ky, kw) == 0.5);
        CHECK(sys.A(ky, ky) == -0.5);
        CHECK(sys.b(ky) == doctest::Approx(2e-4).epsilon(1e-15));
        CHECK(sys.b(MomentState::index(Moment::m)) == 0.0);
    }
}

TEST_CASE("initial_state") {
    const MomentState s = initial_state(2500.0);
    CHECK(s.m() == 2500.0);
    for (std::size_t i = 0; i + 1 < kMomentCount; ++i) CHECK(s.vector()(i) == 0.0);
    CHECK(initial_state(0.0).vector().isZero(0.0));
    CHECK_THROWS_AS(initial_state(-1.0), InvalidParameter);
}

TEST_CASE("evolve") {
    const DriftSystem sys = build_drift(eff(1e-4, 0.1, 0.05, 0.5));
    const MomentState v0 = initial_state(2500.0);

    SUBCASE("t = 0 reproduces the initial state exactly") {
        const std::vector<double> t{0.0};
        const Trajectory tr = evolve(sys, v0, t);
        REQUIRE(tr.states.size() == 1);
        CHECK(tr.states[0].vector() == v0.vector());
    }
    SUBCASE("g_eff = 0 leaves every moment constant") {
        const DriftSystem zero = build_drift(eff(0.0, 0.1, 0.05, 0.5));
        const std::vector<double> t = linspace(0, 1e4, 11);
        const Trajectory tr = evolve(zero, v0, t);
        for (const auto& s : tr.states) {
            CHECK(s.m() == doctest::Approx(2500.0).epsilon(1e-12));
            CHECK((s.vector() - v0.vector()).head<13>().cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SUBCASE("long times approach the stationary point") {
        const StationaryResult st = stationary_numeric(sys);
        const std::vector<double> t{0.0, 1e13};
        const Trajectory tr = evolve(sys, v0, t);
        const MomentVector diff = tr.states[1].vector() - st.state.vector();
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("independent of the output grid") {
        const std::vector<double> coarse = linspace(0, 1e8, 11), fine = linspace(0, 1e8, 21);
        const Trajectory a = evolve(sys, v0, coarse), b = evolve(sys, v0, fine);
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            const double scale = std::max(1.0, a.states[i].vector().cwiseAbs().maxCoeff());
            CHECK((a.states[i].vector() - b.states[2 * i].vector()).cwiseAbs().maxCoeff() <
                  1e-12 * scale);
        }
    }
    SUBCASE("affine in the initial state") {
        const std::vector<double> t = linspace(0, 2e8, 5);
        const Trajectory a = evolve(sys, initial_state(1000.0), t);
        const Trajectory b = evolve(sys, initial_state(2000.0), t);
        const Trajectory c = evolve(sys, initial_state(3000.0), t);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const MomentVector lhs = c.states[i].vector() - a.states[i].vector();
            const MomentVector rhs = 2.0 * (b.states[i].vector() - a.states[i].vector());
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
        }
    }
    SUBCASE("adaptive integration agrees with the matrix exponential") {
        const std::vector<double> t = linspace(0, 1e3, 11);
        const Trajectory a = evolve(sys, v0, t);
        const Trajectory b = evolve_adaptive(sys, v0, t, 1e-12, 1e-12);
        CHECK(b.method == EvolveMethod::adaptive);
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK((a.states[i].vector() - b.states[i].vector()).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("stable parameters give bounded trajectories") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> logu(-2.0, 1.0);
    int stable = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const EffectiveParams p =
            eff(1e-3 * std::pow(10.0, logu(rng)), 0.1, std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng)));
        const DriftSystem sys = build_drift(p);
        if (!analyze_stability(sys).hurwitz) continue;
        ++stable;
        const std::vector<double> t = linspace(0, 1e6, 21);
        const Trajectory tr = evolve(sys, initial_state(100.0), t);
        for (const auto& s : tr.states) {
            CHECK(std::isfinite(s.m()));
            CHECK(std::abs(s.m()) < 1e4);
        }
    }
    CHECK(stable > 20);
}

TEST_CASE("stationary_numeric matches exact rational solutions") {
    struct Case {
        const char* key;
        EffectiveParams p;
    };
    const Case cases[] = {{"stationary_weak", eff(1e-4, 0.1, 0.05, 0.5)},
                          {"stationary_strong", eff(1e-4, 0.1, 10.0, 10.0)},
                          {"stationary_signed", eff(-3e-3, 0.05, 0.7, 0.3)}};
    for (const auto& c : cases) {
        CAPTURE(c.key);
        const StationaryResult st = stationary_numeric(build_drift(c.p));
        CHECK(st.attracting);
        const MomentVector ref = oracle_vector(c.key);
        for (int i = 0; i < 14; ++i) {
            CAPTURE(kNames[i]);
            CHECK(std::abs(st.state.vector()(i) - ref(i)) <= 1e-9 * std::max(1e-3, std::abs(ref(i))));
        }
    }
    SUBCASE("g_eff = 0 gives the zero vector") {
        const StationaryResult st = stationary_numeric(build_drift(eff(0.0, 0.1, 0.05, 0.5)));
        CHECK(st.state.vector().isZero(0.0));
        CHECK_FALSE(st.attracting);
    }
}

TEST_CASE("fit_cooling_rate") {
    Trajectory tr;
    const double rate = 2.0e-9, m_ss = 4.5;
    for (int i = 0; i <= 200; ++i) {
        const double t = i * 1e7;
        tr.times.push_back(t);
        MomentState s;
        s[Moment::m] = m_ss + (2500.0 - m_ss) * std::exp(-rate * t);
        tr.states.push_back(s);
    }
    const RateFit fit = fit_cooling_rate(tr, m_ss);
    CHECK(std::abs(fit.rate - rate) < 1e-12);
    CHECK(fit.r_squared > 0.999999);
    CHECK(fit.points >= 3);

    Trajectory flat = tr;
    for (auto& s : flat.states) s[Moment::m] = 2500.0;
    CHECK_THROWS_AS(fit_cooling_rate(flat, m_ss), InsufficientDecay);
    CHECK_THROWS_AS(fit_cooling_rate(Trajectory{}, m_ss), InsufficientDecay);
}

TEST_CASE("trajectory CSV layout") {
    const DriftSystem sys = build_drift(eff(1e-4, 0.1, 0.05, 0.5));
    const std::vector<double> t{0.0, 1.0, 2.0};
    const Trajectory tr = evolve(sys, initial_state(2500.0), t);
    std::ostringstream out;
    const std::vector<ExtraColumn> extra{{"m_analytic", {1.0, 2.0, 3.0}}};
    write_trajectory_csv(out, tr, extra);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "t,m,n,k_x,k_y,k_u,k_w,k1,k2,k3,k4,k5,k6,k7,k8,m_analytic");
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        CHECK(std::count(row.begin(), row.end(), ',') == 15);
    }
    CHECK(rows == 3);
    std::istringstream first(out.str().substr(header.size() + 1));
    std::string cell;
    std::getline(first, cell, ',');
    CHECK(cell == "0");
    std::getline(first, cell, ',');
    CHECK(std::stod(cell) == 2500.0);
}
