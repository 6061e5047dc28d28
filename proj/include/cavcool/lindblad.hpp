#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cavcool/moments.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

using Complex = std::complex<double>;
using SparseOperator = Eigen::SparseMatrix<Complex>;
using DenseOperator = Eigen::MatrixXcd;

/// Truncation of the Fock spaces. photon_cutoff = 0 means "no cavity mode"
/// and is only valid for the two-level comparator.
struct FockConfig {
    int phonon_cutoff = 10;
    int photon_cutoff = 4;
    bool atom_included = false;
    long dimension_budget = 20000;

    long dimension() const;
};

/// Product basis atom (x) phonon (x) photon. The photon index runs fastest,
/// then the phonon index; atom level 0 is the ground state.
class BasisLayout {
public:
    BasisLayout() = default;
    BasisLayout(int atom_levels, int phonon_levels, int photon_levels);
    explicit BasisLayout(const FockConfig& cfg);

    int atom_levels() const { return atom_; }
    int phonon_levels() const { return phonon_; }
    int photon_levels() const { return photon_; }
    long dimension() const { return static_cast<long>(atom_) * phonon_ * photon_; }
    bool has_atom() const { return atom_ == 2; }
    bool has_cavity() const { return photon_ > 1; }

    long index(int atom, int phonon, int photon) const {
        return (static_cast<long>(atom) * phonon_ + phonon) * photon_ + photon;
    }

    /// Phonon annihilator b on the full space.
    SparseOperator phonon_annihilator() const;
    /// Photon annihilator c on the full space (zero matrix without cavity).
    SparseOperator photon_annihilator() const;
    /// sigma^- = |0><1| on the full space; throws without atom.
    SparseOperator atom_lowering() const;
    SparseOperator identity() const;
    /// Embeds an operator acting on the phonon factor only.
    SparseOperator embed_phonon(const DenseOperator& op) const;

    bool operator==(const BasisLayout&) const = default;

private:
    int atom_ = 1;
    int phonon_ = 1;
    int photon_ = 1;
};

class DensityOperator {
public:
    DensityOperator() = default;
    DensityOperator(BasisLayout layout, DenseOperator rho);

    const BasisLayout& layout() const { return layout_; }
    const DenseOperator& matrix() const { return rho_; }

    Complex trace() const { return rho_.trace(); }
    /// max |rho - rho^+|
    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// Throws IntegrityError unless Hermitian to herm_tol and |Tr - 1| <= trace_tol.
    void check(double herm_tol = 1e-10, double trace_tol = 1e-8) const;

    /// <O> = Tr(O rho).
    Complex expectation(const SparseOperator& op) const;

private:
    BasisLayout layout_;
    DenseOperator rho_;
};

enum class DisplacementMode { exact, first_order };
enum class ModelKind { effective, full, tls };
std::string_view to_string(DisplacementMode m);
std::string_view to_string(ModelKind k);

struct JumpOperator {
    std::string name;
    double rate = 0.0;
    SparseOperator op;  // unscaled; the Lindblad operator is sqrt(rate) * op
};

struct ModelSpec {
    ModelKind kind = ModelKind::effective;
    BasisLayout layout;
    SparseOperator hamiltonian;  // H / hbar
    std::vector<JumpOperator> jumps;
    DisplacementMode displacement = DisplacementMode::first_order;
    std::map<std::string, double> parameters;

    /// Throws IntegrityError unless H is Hermitian to 1e-10 and rates >= 0.
    void check() const;
};

/// H = g_eff (c + c^+) - i eta g_eff (b + b^+) c + i eta g_eff (b + b^+) c^+
///     + nu b^+ b + delta_eff c^+ c, single jump sqrt(kappa) c.
ModelSpec build_effective_model(const EffectiveParams& p, const FockConfig& cfg);

/// H = (Omega/2) D(i eta) sigma^- + g sigma^- c^+ + H.c. + (Delta + delta) sigma^+ sigma^-
///     + nu b^+ b + delta c^+ c with D(i eta) = exp(-i eta (b + b^+)) (exact) or
///     1 - i eta (b + b^+) (first order); jumps sqrt(kappa) c and sqrt(Gamma) sigma^-.
ModelSpec build_full_model(const RawParams& raw, const FockConfig& cfg, DisplacementMode mode);

/// Laser-cooling analogue of the effective model: c -> sigma^-, kappa -> Gamma_tls,
/// g_eff -> Omega_eff. Requires atom_included and photon_cutoff = 0.
ModelSpec build_tls_comparator(double omega_eff, double gamma_tls, double delta_tls, double eta,
                               double nu, const FockConfig& cfg);

/// exp(-i eta (b + b^+)) on a phonon space with `levels` states.
DenseOperator displacement_exact(double eta, int levels);
/// 1 - i eta (b + b^+) on a phonon space with `levels` states.
DenseOperator displacement_first_order(double eta, int levels);

/// Thermal phonon state of mean m0 (geometric distribution renormalised on
/// the truncated space) times photon vacuum and atomic ground state.
/// Throws CutoffTooSmall when more than `tail_tolerance` of the population
/// lies beyond the phonon cutoff.
DensityOperator thermal_initial(double m0, const FockConfig& cfg, double tail_tolerance = 1e-8);
/// Phonon Fock state |m0> with photon vacuum and atomic ground state.
DensityOperator fock_initial(int m0, const FockConfig& cfg);

struct LindbladOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    double initial_step = 1e-3;
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<DensityOperator> states;
    double max_trace_drift = 0.0;        // max |Tr rho(t) - Tr rho(0)|
    double max_hermiticity_error = 0.0;  // before symmetrisation
};

/// Integrates drho/dt = -i[H, rho] + sum_k (L rho L^+ - {L^+ L, rho}/2) with
/// adaptive Runge-Kutta-Fehlberg 7(8) steps, stopping exactly at every output time. An
/// empty time list returns [rho0]. Throws StiffnessError when the step size
/// controller cannot make progress.
DensityTrajectory evolve_density(const ModelSpec& model, const DensityOperator& rho0,
                                 std::span<const double> times, const LindbladOptions& opts = {});

/// All fourteen moments. Without a cavity mode the atomic lowering operator
/// takes the role of c.
MomentState extract_moments(const DensityOperator& rho);
std::vector<MomentState> extract_moments(std::span<const DensityOperator> states);

/// <sigma^+ sigma^-> along a trajectory. Throws InvalidParameter without atom.
std::vector<double> excited_population(std::span<const DensityOperator> states);

struct RelaxationOptions {
    double step = 0.0;  // implicit step; 0 picks 1e10 / max|L_ij|
    double tolerance = 1e-12;
    int max_iterations = 200;
    long max_superoperator_dimension = 600000;
};

struct StationaryDensity {
    DensityOperator rho;
    int iterations = 0;
    double residual = 0.0;  // max |L[rho]|
};

/// Long-time limit by implicit Euler relaxation: (1 - h L) rho_{k+1} = rho_k
/// with a single sparse LU factorisation and a very large step h, iterated
/// until the trace-normalised state stops changing.
StationaryDensity relax_to_stationary(const ModelSpec& model, const DensityOperator& rho0,
                                      const RelaxationOptions& opts = {});

/// Applies the Lindblad generator once; used for residual checks.
DenseOperator apply_lindbladian(const ModelSpec& model, const DenseOperator& rho);

}  // namespace cavcool
