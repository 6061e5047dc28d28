#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cavcool/params.hpp"

namespace cavcool {

/// Slots of the closed set of expectation values.
///
///   k_x = i<b - b^+>,  k_y = i<c - c^+>,  k_u = <b + b^+>,  k_w = <c + c^+>,
///   k1 = <(b+b^+)(c+c^+)>,   k2 = i<(b+b^+)(c-c^+)>,
///   k3 = i<(b-b^+)(c+c^+)>,  k4 = <(b-b^+)(c-c^+)>,
///   k5 = <c^2 + c^+2>,  k6 = i<c^2 - c^+2>,  k7 = <b^2 + b^+2>,  k8 = i<b^2 - b^+2>,
///   n = <c^+ c>,  m = <b^+ b>.
///
/// Coherences first, populations last: index 0 is k_x and index 13 is m.
enum class Moment : std::size_t {
    kx = 0, ky, ku, kw, k1, k2, k3, k4, k5, k6, k7, k8, n, m
};

inline constexpr std::size_t kMomentCount = 14;

std::string_view moment_name(Moment which);

using MomentVector = Eigen::Matrix<double, 14, 1>;
using DriftMatrix = Eigen::Matrix<double, 14, 14>;

class MomentState {
public:
    MomentState() { values_.setZero(); }
    explicit MomentState(const MomentVector& v) : values_(v) {}

    double operator[](Moment which) const { return values_[index(which)]; }
    double& operator[](Moment which) { return values_[index(which)]; }

    double m() const { return (*this)[Moment::m]; }
    double n() const { return (*this)[Moment::n]; }

    const MomentVector& vector() const { return values_; }

    static constexpr Eigen::Index index(Moment which) {
        return static_cast<Eigen::Index>(which);
    }

private:
    MomentVector values_;
};

/// Affine generator dv/dt = A v + b of the cooling equations.
struct DriftSystem {
    DriftMatrix A;
    MomentVector b;
    EffectiveParams params;
};

DriftSystem build_drift(const EffectiveParams& p);

/// Thermal-free start: m = m0, all coherences and n zero.
MomentState initial_state(double m0);

enum class EvolveMethod { matrix_exponential, adaptive };
std::string_view to_string(EvolveMethod m);

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentState> states;
    EffectiveParams params;
    EvolveMethod method = EvolveMethod::matrix_exponential;
    /// False when A is singular; the stationary point v* is then undefined.
    bool has_stationary_state = true;
};

/// Exact solution v(t) = e^{At}(v0 - v*) + v*, v* = -A^{-1} b, one matrix
/// exponential per output time. When A is singular the augmented 15x15
/// generator [[A, b], [0, 0]] is exponentiated instead.
Trajectory evolve(const DriftSystem& sys, const MomentState& v0, std::span<const double> times);

/// Dormand-Prince integration of the same system; tolerances are absolute
/// and relative per component.
Trajectory evolve_adaptive(const DriftSystem& sys, const MomentState& v0,
                           std::span<const double> times, double abs_tol = 1e-12,
                           double rel_tol = 1e-12);

struct StabilityReport {
    double max_real_eigenvalue = 0.0;
    bool hurwitz = false;
    double condition_estimate = 0.0;  // reciprocal of LU rcond
};

StabilityReport analyze_stability(const DriftSystem& sys);

struct StationaryResult {
    MomentState state;
    StabilityReport stability;
    bool attracting = false;  // true only when A is Hurwitz
};

/// Solves A v = -b by LU with partial pivoting. Throws SingularSystem on a
/// zero pivot or when the reciprocal condition estimate falls below
/// `rcond_floor`. Homogeneous singular systems (b = 0) return v = 0.
StationaryResult stationary_numeric(const DriftSystem& sys, double rcond_floor = 0.0);

struct FitWindow {
    double above_stationary = 10.0;   // lower bound: factor * m_ss_hint
    double fraction_of_initial = 0.01;  // lower bound: fraction * m(0)
    double upper_fraction = 0.9;      // upper bound: fraction * m(0)
};

struct RateFit {
    double rate = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
    double t_first = 0.0;
    double t_last = 0.0;
};

/// Least-squares slope of ln(m - m_ss_hint) over the single-exponential
/// window. Throws InsufficientDecay when the window holds fewer than 3 points.
RateFit fit_cooling_rate(const Trajectory& traj, double m_ss_hint, const FitWindow& window = {});

struct ExtraColumn {
    std::string name;
    std::vector<double> values;
};

/// Header `t,m,n,k_x,k_y,k_u,k_w,k1,...,k8`, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Same layout with additional trailing columns (one value per row).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          std::span<const ExtraColumn> extra);

}  // namespace cavcool
