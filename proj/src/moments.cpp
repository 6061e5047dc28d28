#include "cavcool/moments.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "cavcool/error.hpp"

namespace cavcool {

namespace {

constexpr std::array<std::string_view, kMomentCount> kNames = {
    "k_x", "k_y", "k_u", "k_w", "k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8", "n", "m"};

constexpr Eigen::Index idx(Moment w) { return MomentState::index(w); }

void check_times(std::span<const double> times) {
    if (times.empty()) return;
    if (!(times.front() >= 0.0)) throw InvalidParameter("output times must start at t >= 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw InvalidParameter("output times must be strictly increasing");
        }
    }
}

// Exact zero pivots only. The slow cooling mode makes A legitimately
// ill-conditioned (eigenvalue ~ eta^2 g_eff^2) while the structured solve
// stays accurate, so a relative pivot threshold would reject valid systems.
bool is_singular(const DriftMatrix& A) {
    Eigen::PartialPivLU<DriftMatrix> lu(A);
    return (lu.matrixLU().diagonal().array() == 0.0).any();
}

}  // namespace

std::string_view moment_name(Moment which) { return kNames[static_cast<std::size_t>(which)]; }

std::string_view to_string(EvolveMethod m) {
    return m == EvolveMethod::matrix_exponential ? "matrix-exponential" : "adaptive";
}

DriftSystem build_drift(const EffectiveParams& p) {
    p.validate();
    using M = Moment;
    const double g = p.g_eff, eg = p.eta * p.g_eff, nu = p.nu, d = p.delta_eff;
    const double hk = 0.5 * p.kappa, k = p.kappa;

    DriftSystem sys;
    sys.params = p;
    sys.A.setZero();
    sys.b.setZero();
    auto a = [&](M row, M col) -> double& { return sys.A(idx(row), idx(col)); };

    // Cavity field and phonon quadratures.
    a(M::kx, M::ky) = -2.0 * eg;
    a(M::kx, M::ku) = nu;

    sys.b(idx(M::ky)) = 2.0 * g;
    a(M::ky, M::kw) = d;
    a(M::ky, M::ky) = -hk;

    a(M::ku, M::kx) = -nu;

    a(M::kw, M::ku) = 2.0 * eg;
    a(M::kw, M::ky) = -d;
    a(M::kw, M::kw) = -hk;

    // Photon number and second-order coherences.
    a(M::n, M::ky) = g;
    a(M::n, M::k1) = eg;
    a(M::n, M::n) = -k;

    a(M::k1, M::k7) = 2.0 * eg;
    a(M::k1, M::m) = 4.0 * eg;
    sys.b(idx(M::k1)) = 2.0 * eg;
    a(M::k1, M::k3) = -nu;
    a(M::k1, M::k2) = -d;
    a(M::k1, M::k1) = -hk;

    a(M::k2, M::ku) = 2.0 * g;
    a(M::k2, M::k4) = nu;
    a(M::k2, M::k1) = d;
    a(M::k2, M::k2) = -hk;

    a(M::k3, M::k6) = -2.0 * eg;
    a(M::k3, M::k8) = 2.0 * eg;
    a(M::k3, M::k1) = nu;
    a(M::k3, M::k4) = d;
    a(M::k3, M::k3) = -hk;

    a(M::k4, M::kx) = -2.0 * g;
    a(M::k4, M::k5) = -2.0 * eg;
    a(M::k4, M::n) = 4.0 * eg;
    sys.b(idx(M::k4)) = 2.0 * eg;
    a(M::k4, M::k2) = -nu;
    a(M::k4, M::k3) = -d;
    a(M::k4, M::k4) = -hk;

    a(M::k5, M::ky) = -2.0 * g;
    a(M::k5, M::k1) = 2.0 * eg;
    a(M::k5, M::k6) = -2.0 * d;
    a(M::k5, M::k5) = -k;

    a(M::k6, M::kw) = 2.0 * g;
    a(M::k6, M::k2) = 2.0 * eg;
    a(M::k6, M::k5) = 2.0 * d;
    a(M::k6, M::k6) = -k;

    a(M::k7, M::k4) = -2.0 * eg;
    a(M::k7, M::k8) = -2.0 * nu;

    a(M::k8, M::k2) = -2.0 * eg;
    a(M::k8, M::k7) = 2.0 * nu;

    // Phonon number: driven only through the photon-phonon coherence k4.
    a(M::m, M::k4) = eg;
    return sys;
}

MomentState initial_state(double m0) {
    if (!(m0 >= 0.0) || !std::isfinite(m0)) {
        throw InvalidParameter("initial phonon number must be finite and >= 0");
    }
    MomentState s;
    s[Moment::m] = m0;
    return s;
}

Trajectory evolve(const DriftSystem& sys, const MomentState& v0, std::span<const double> times) {
    check_times(times);
    Trajectory traj;
    traj.params = sys.params;
    traj.method = EvolveMethod::matrix_exponential;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());

    if (!is_singular(sys.A)) {
        const MomentVector vstar = sys.A.partialPivLu().solve(-sys.b);
        const MomentVector offset = v0.vector() - vstar;
        for (double t : times) {
            if (t == 0.0) {
                traj.states.push_back(v0);
                continue;
            }
            const DriftMatrix prop = (sys.A * t).exp();
            traj.states.emplace_back(MomentVector(prop * offset + vstar));
        }
        return traj;
    }

    // Singular generator: the affine flow is the top-right block of the
    // exponential of the augmented homogeneous system.
    traj.has_stationary_state = false;
    using Aug = Eigen::Matrix<double, 15, 15>;
    Aug G = Aug::Zero();
    G.topLeftCorner<14, 14>() = sys.A;
    G.topRightCorner<14, 1>() = sys.b;
    Eigen::Matrix<double, 15, 1> w;
    w << v0.vector(), 1.0;
    for (double t : times) {
        if (t == 0.0) {
            traj.states.push_back(v0);
            continue;
        }
        const Aug prop = (G * t).exp();
        traj.states.emplace_back(MomentVector((prop * w).head<14>()));
    }
    return traj;
}

Trajectory evolve_adaptive(const DriftSystem& sys, const MomentState& v0,
                           std::span<const double> times, double abs_tol, double rel_tol) {
    namespace ode = boost::numeric::odeint;
    check_times(times);
    Trajectory traj;
    traj.params = sys.params;
    traj.method = EvolveMethod::adaptive;
    traj.has_stationary_state = !is_singular(sys.A);
    if (times.empty()) return traj;

    using State = std::vector<double>;
    State x(v0.vector().data(), v0.vector().data() + kMomentCount);
    auto rhs = [&sys](const State& s, State& ds, double) {
        Eigen::Map<const MomentVector> v(s.data());
        Eigen::Map<MomentVector> dv(ds.data());
        dv.noalias() = sys.A * v + sys.b;
    };
    auto observer = [&traj](const State& s, double t) {
        traj.times.push_back(t);
        traj.states.emplace_back(MomentVector(Eigen::Map<const MomentVector>(s.data())));
    };
    const double span = times.back() - times.front();
    const double dt0 = span > 0.0 ? span * 1e-6 : 1e-6;
    try {
        ode::integrate_times(
            ode::make_controlled(abs_tol, rel_tol, ode::runge_kutta_dopri5<State>()), rhs, x,
            times.begin(), times.end(), dt0, observer);
    } catch (const ode::step_adjustment_error& e) {
        throw StiffnessError(std::string("moment integration stalled: ") + e.what());
    }
    return traj;
}

StabilityReport analyze_stability(const DriftSystem& sys) {
    StabilityReport r;
    Eigen::EigenSolver<DriftMatrix> es(sys.A, false);
    if (es.info() != Eigen::Success) throw IntegrityError("eigenvalue computation failed");
    r.max_real_eigenvalue = es.eigenvalues().real().maxCoeff();
    r.hurwitz = r.max_real_eigenvalue < 0.0;
    const double rcond = sys.A.partialPivLu().rcond();
    r.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    return r;
}

StationaryResult stationary_numeric(const DriftSystem& sys, double rcond_floor) {
    StationaryResult out;
    out.stability = analyze_stability(sys);
    const double cond = out.stability.condition_estimate;
    if (is_singular(sys.A) || !(1.0 / cond >= rcond_floor)) {
        // Homogeneous singular systems (g_eff = 0) keep v = 0 as a stationary
        // point, just not an isolated one.
        if (sys.b.isZero(0.0)) return out;
        throw SingularSystem("drift matrix is numerically singular (condition estimate " +
                                 std::to_string(cond) + ")",
                             cond);
    }
    out.state = MomentState(MomentVector(sys.A.partialPivLu().solve(-sys.b)));
    out.attracting = out.stability.hurwitz;
    return out;
}

RateFit fit_cooling_rate(const Trajectory& traj, double m_ss_hint, const FitWindow& window) {
    if (traj.states.empty()) throw InsufficientDecay("empty trajectory");
    const double m0 = traj.states.front().m();
    const double floor = std::max(m_ss_hint, 1e-12);
    if (!(m0 > 10.0 * floor)) {
        throw InsufficientDecay("trajectory starts within a factor 10 of the stationary value");
    }
    const double lo = std::max(window.above_stationary * m_ss_hint,
                               window.fraction_of_initial * m0);
    const double hi = window.upper_fraction * m0;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    RateFit fit;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double m = traj.states[i].m();
        if (m < lo || m > hi) continue;
        const double x = traj.times[i];
        const double y = std::log(m - m_ss_hint);
        if (fit.points == 0) fit.t_first = x;
        fit.t_last = x;
        ++fit.points;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    if (fit.points < 3) {
        throw InsufficientDecay("fit window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] holds fewer than 3 samples");
    }
    const double n = static_cast<double>(fit.points);
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    if (!(vx > 0.0)) throw InsufficientDecay("degenerate fit window");
    const double slope = cxy / vx;
    fit.rate = -slope;
    fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
    return fit;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    write_trajectory_csv(out, traj, {});
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          std::span<const ExtraColumn> extra) {
    static constexpr std::array<Moment, kMomentCount> order = {
        Moment::m,  Moment::n,  Moment::kx, Moment::ky, Moment::ku, Moment::kw, Moment::k1,
        Moment::k2, Moment::k3, Moment::k4, Moment::k5, Moment::k6, Moment::k7, Moment::k8};
    for (const auto& col : extra) {
        if (col.values.size() != traj.times.size()) {
            throw InvalidParameter("extra column '" + col.name + "' has the wrong length");
        }
    }
    out << 't';
    for (Moment w : order) out << ',' << moment_name(w);
    for (const auto& col : extra) out << ',' << col.name;
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        put(traj.times[i]);
        for (Moment w : order) {
            out << ',';
            put(traj.states[i][w]);
        }
        for (const auto& col : extra) {
            out << ',';
            put(col.values[i]);
        }
        out << '\n';
    }
}

}  // namespace cavcool
