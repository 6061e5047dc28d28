#include "cavcool/lindblad.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <Eigen/SparseLU>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "cavcool/error.hpp"

namespace cavcool {

namespace {

constexpr double kHermitianTol = 1e-10;

SparseOperator ladder(int levels) {
    SparseOperator a(levels, levels);
    std::vector<Eigen::Triplet<Complex>> t;
    for (int k = 1; k < levels; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

SparseOperator eye(long n) {
    SparseOperator I(n, n);
    I.setIdentity();
    return I;
}

SparseOperator kron3(const SparseOperator& a, const SparseOperator& b, const SparseOperator& c) {
    SparseOperator ab = Eigen::kroneckerProduct(a, b);
    SparseOperator abc = Eigen::kroneckerProduct(ab, c);
    abc.makeCompressed();
    return abc;
}

SparseOperator adjoint(const SparseOperator& a) { return SparseOperator(a.adjoint()); }

double max_abs(const SparseOperator& a) {
    double m = 0.0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseOperator::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

BasisLayout checked_layout(const FockConfig& cfg) {
    if (cfg.phonon_cutoff < 1) throw InvalidParameter("phonon cutoff must be >= 1");
    if (cfg.photon_cutoff < 0) throw InvalidParameter("photon cutoff must be >= 0");
    const long dim = cfg.dimension();
    if (dim > cfg.dimension_budget) {
        throw DimensionBudgetExceeded("Hilbert space dimension " + std::to_string(dim) +
                                          " exceeds the budget of " +
                                          std::to_string(cfg.dimension_budget),
                                      dim);
    }
    return BasisLayout(cfg);
}

// H_eff = H - (i/2) sum_k r_k L_k^+ L_k
SparseOperator non_hermitian_hamiltonian(const ModelSpec& model) {
    SparseOperator h = model.hamiltonian;
    for (const auto& j : model.jumps) {
        h -= Complex(0.0, 0.5 * j.rate) * SparseOperator(adjoint(j.op) * j.op);
    }
    h.makeCompressed();
    return h;
}

struct Generator {
    SparseOperator h_eff;
    std::vector<SparseOperator> jumps;  // already scaled by sqrt(rate)

    explicit Generator(const ModelSpec& model) : h_eff(non_hermitian_hamiltonian(model)) {
        for (const auto& j : model.jumps) {
            if (j.rate > 0.0) jumps.push_back(std::sqrt(j.rate) * j.op);
        }
    }

    void apply(const Eigen::Ref<const DenseOperator>& rho, Eigen::Ref<DenseOperator> out) const {
        DenseOperator x = Complex(0.0, -1.0) * (h_eff * rho);
        out = x + x.adjoint();
        for (const auto& l : jumps) {
            DenseOperator y = l * rho;
            out.noalias() += l * DenseOperator(y.adjoint());
        }
    }
};

Complex trace_product(const SparseOperator& op, const DenseOperator& rho) {
    Complex s = 0.0;
    for (int k = 0; k < op.outerSize(); ++k)
        for (SparseOperator::InnerIterator it(op, k); it; ++it) s += it.value() * rho(it.col(), it.row());
    return s;
}

}  // namespace

long FockConfig::dimension() const {
    return static_cast<long>(phonon_cutoff + 1) * (photon_cutoff + 1) * (atom_included ? 2 : 1);
}

BasisLayout::BasisLayout(int atom_levels, int phonon_levels, int photon_levels)
    : atom_(atom_levels), phonon_(phonon_levels), photon_(photon_levels) {
    if (atom_ < 1 || atom_ > 2 || phonon_ < 1 || photon_ < 1) {
        throw InvalidParameter("invalid basis layout");
    }
}

BasisLayout::BasisLayout(const FockConfig& cfg)
    : BasisLayout(cfg.atom_included ? 2 : 1, cfg.phonon_cutoff + 1, cfg.photon_cutoff + 1) {}

SparseOperator BasisLayout::phonon_annihilator() const {
    return kron3(eye(atom_), ladder(phonon_), eye(photon_));
}

SparseOperator BasisLayout::photon_annihilator() const {
    return kron3(eye(atom_), eye(phonon_), ladder(photon_));
}

SparseOperator BasisLayout::atom_lowering() const {
    if (!has_atom()) throw InvalidParameter("model has no atom");
    return kron3(ladder(2), eye(phonon_), eye(photon_));
}

SparseOperator BasisLayout::identity() const { return eye(dimension()); }

SparseOperator BasisLayout::embed_phonon(const DenseOperator& op) const {
    if (op.rows() != phonon_ || op.cols() != phonon_) {
        throw InvalidParameter("phonon operator has the wrong size");
    }
    SparseOperator s = op.sparseView(Complex(0.0), 0.0);
    return kron3(eye(atom_), s, eye(photon_));
}

DensityOperator::DensityOperator(BasisLayout layout, DenseOperator rho)
    : layout_(layout), rho_(std::move(rho)) {
    if (rho_.rows() != layout_.dimension() || rho_.cols() != layout_.dimension()) {
        throw InvalidParameter("density matrix does not match the basis dimension");
    }
}

double DensityOperator::hermiticity_error() const {
    return rho_.size() ? (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() : 0.0;
}

double DensityOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityOperator::check(double herm_tol, double trace_tol) const {
    const double herm = hermiticity_error();
    if (herm > herm_tol) {
        throw IntegrityError("density matrix not Hermitian (error " + std::to_string(herm) + ")");
    }
    const double tr = std::abs(trace() - 1.0);
    if (tr > trace_tol) {
        throw IntegrityError("density matrix trace deviates from 1 by " + std::to_string(tr));
    }
}

Complex DensityOperator::expectation(const SparseOperator& op) const {
    if (op.rows() != rho_.rows()) throw InvalidParameter("operator dimension mismatch");
    return trace_product(op, rho_);
}

std::string_view to_string(DisplacementMode m) {
    return m == DisplacementMode::exact ? "exact" : "first-order";
}

std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::effective: return "effective";
        case ModelKind::full: return "full";
        case ModelKind::tls: return "tls";
    }
    return "?";
}

void ModelSpec::check() const {
    const long d = layout.dimension();
    if (hamiltonian.rows() != d || hamiltonian.cols() != d) {
        throw IntegrityError("Hamiltonian does not match the basis dimension");
    }
    const SparseOperator diff = hamiltonian - adjoint(hamiltonian);
    const double herm = max_abs(diff);
    if (herm > kHermitianTol) {
        throw IntegrityError("Hamiltonian not Hermitian (error " + std::to_string(herm) + ")");
    }
    for (const auto& j : jumps) {
        if (!(j.rate >= 0.0)) throw IntegrityError("jump '" + j.name + "' has a negative rate");
        if (j.op.rows() != d || j.op.cols() != d) {
            throw IntegrityError("jump '" + j.name + "' does not match the basis dimension");
        }
    }
}

DenseOperator displacement_exact(double eta, int levels) {
    const DenseOperator a = DenseOperator(ladder(levels));
    const Eigen::MatrixXd x = (a + a.adjoint()).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    const Eigen::VectorXcd phase =
        (Complex(0.0, -eta) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
    const DenseOperator v = es.eigenvectors().cast<Complex>();
    return v * phase.asDiagonal() * v.adjoint();
}

DenseOperator displacement_first_order(double eta, int levels) {
    const DenseOperator a = DenseOperator(ladder(levels));
    return DenseOperator::Identity(levels, levels) - Complex(0.0, eta) * (a + a.adjoint());
}

ModelSpec build_effective_model(const EffectiveParams& p, const FockConfig& cfg) {
    p.validate();
    if (cfg.atom_included) throw InvalidParameter("effective model has no atom");
    if (cfg.photon_cutoff < 1) throw InvalidParameter("effective model needs photon cutoff >= 1");
    ModelSpec m;
    m.kind = ModelKind::effective;
    m.layout = checked_layout(cfg);
    const SparseOperator b = m.layout.phonon_annihilator();
    const SparseOperator c = m.layout.photon_annihilator();
    const SparseOperator bd = adjoint(b), cd = adjoint(c);
    const SparseOperator x = b + bd;
    const Complex ieg(0.0, p.eta * p.g_eff);
    m.hamiltonian = p.g_eff * (c + cd) - ieg * SparseOperator(x * c) + ieg * SparseOperator(x * cd) +
                    p.nu * SparseOperator(bd * b) + p.delta_eff * SparseOperator(cd * c);
    m.hamiltonian.makeCompressed();
    m.jumps.push_back({"cavity", p.kappa, c});
    m.parameters = {{"g_eff", p.g_eff}, {"delta_eff", p.delta_eff}, {"kappa", p.kappa},
                    {"nu", p.nu},       {"eta", p.eta}};
    m.check();
    return m;
}

ModelSpec build_full_model(const RawParams& raw, const FockConfig& cfg, DisplacementMode mode) {
    raw.validate();
    if (!cfg.atom_included) throw InvalidParameter("full model needs the atom");
    if (cfg.photon_cutoff < 1) throw InvalidParameter("full model needs photon cutoff >= 1");
    ModelSpec m;
    m.kind = ModelKind::full;
    m.displacement = mode;
    m.layout = checked_layout(cfg);
    const int nb = m.layout.phonon_levels();
    const SparseOperator b = m.layout.phonon_annihilator();
    const SparseOperator c = m.layout.photon_annihilator();
    const SparseOperator sm = m.layout.atom_lowering();
    const SparseOperator bd = adjoint(b), cd = adjoint(c), sp = adjoint(sm);
    const double eta = raw.lamb_dicke;
    const SparseOperator D = m.layout.embed_phonon(
        mode == DisplacementMode::exact ? displacement_exact(eta, nb) : displacement_first_order(eta, nb));

    const SparseOperator coupling =
        0.5 * raw.rabi_frequency * SparseOperator(D * sm) + raw.cavity_coupling * SparseOperator(sm * cd);
    m.hamiltonian = coupling + adjoint(coupling) +
                    (raw.atom_detuning + raw.cavity_laser_detuning) * SparseOperator(sp * sm) +
                    raw.phonon_frequency * SparseOperator(bd * b) +
                    raw.cavity_laser_detuning * SparseOperator(cd * c);
    m.hamiltonian.makeCompressed();
    m.jumps.push_back({"cavity", raw.cavity_decay, c});
    m.jumps.push_back({"atom", raw.atomic_decay, sm});
    m.parameters = {{"omega", raw.rabi_frequency},
                    {"g", raw.cavity_coupling},
                    {"delta_cap", raw.atom_detuning},
                    {"delta", raw.cavity_laser_detuning},
                    {"kappa", raw.cavity_decay},
                    {"gamma_cap", raw.atomic_decay},
                    {"nu", raw.phonon_frequency},
                    {"eta", eta}};
    m.check();
    return m;
}

ModelSpec build_tls_comparator(double omega_eff, double gamma_tls, double delta_tls, double eta,
                               double nu, const FockConfig& cfg) {
    if (!cfg.atom_included) throw InvalidParameter("two-level comparator needs the atom");
    if (cfg.photon_cutoff != 0) throw InvalidParameter("two-level comparator has no cavity mode");
    if (!(gamma_tls >= 0.0) || !(nu > 0.0) || !(eta >= 0.0)) {
        throw InvalidParameter("two-level comparator needs Gamma >= 0, nu > 0, eta >= 0");
    }
    ModelSpec m;
    m.kind = ModelKind::tls;
    m.layout = checked_layout(cfg);
    const SparseOperator b = m.layout.phonon_annihilator();
    const SparseOperator s = m.layout.atom_lowering();
    const SparseOperator bd = adjoint(b), sd = adjoint(s);
    const SparseOperator x = b + bd;
    const Complex ieg(0.0, eta * omega_eff);
    m.hamiltonian = omega_eff * (s + sd) - ieg * SparseOperator(x * s) + ieg * SparseOperator(x * sd) +
                    nu * SparseOperator(bd * b) + delta_tls * SparseOperator(sd * s);
    m.hamiltonian.makeCompressed();
    m.jumps.push_back({"atom", gamma_tls, s});
    m.parameters = {{"omega_eff", omega_eff}, {"gamma_tls", gamma_tls}, {"delta_tls", delta_tls},
                    {"eta", eta},             {"nu", nu}};
    m.check();
    return m;
}

DensityOperator thermal_initial(double m0, const FockConfig& cfg, double tail_tolerance) {
    if (!(m0 >= 0.0) || !std::isfinite(m0)) throw InvalidParameter("m0 must be finite and >= 0");
    const BasisLayout layout = checked_layout(cfg);
    const int nb = layout.phonon_levels();
    DenseOperator rho = DenseOperator::Zero(layout.dimension(), layout.dimension());
    if (m0 == 0.0) {
        rho(0, 0) = 1.0;
        return DensityOperator(layout, rho);
    }
    const double q = m0 / (1.0 + m0);
    const double tail = std::pow(q, nb);
    if (tail > tail_tolerance) {
        const int required = static_cast<int>(std::ceil(std::log(tail_tolerance) / std::log(q))) - 1;
        throw CutoffTooSmall("thermal state with m0 = " + std::to_string(m0) + " leaves " +
                                 std::to_string(tail) + " population above the cutoff; need N_b >= " +
                                 std::to_string(required),
                             required);
    }
    double norm = 0.0, w = 1.0;
    for (int k = 0; k < nb; ++k, w *= q) {
        rho(layout.index(0, k, 0), layout.index(0, k, 0)) = w;
        norm += w;
    }
    rho /= norm;
    return DensityOperator(layout, rho);
}

DensityOperator fock_initial(int m0, const FockConfig& cfg) {
    const BasisLayout layout = checked_layout(cfg);
    if (m0 < 0 || m0 >= layout.phonon_levels()) {
        throw CutoffTooSmall("Fock state |" + std::to_string(m0) + "> lies above the phonon cutoff",
                             std::max(m0, 1));
    }
    DenseOperator rho = DenseOperator::Zero(layout.dimension(), layout.dimension());
    const long i = layout.index(0, m0, 0);
    rho(i, i) = 1.0;
    return DensityOperator(layout, rho);
}

DensityTrajectory evolve_density(const ModelSpec& model, const DensityOperator& rho0,
                                 std::span<const double> times, const LindbladOptions& opts) {
    namespace ode = boost::numeric::odeint;
    if (!(rho0.layout() == model.layout)) {
        throw InvalidParameter("initial state does not match the model basis");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw InvalidParameter("output times must be strictly increasing");
    }
    DensityTrajectory out;
    if (times.empty() || (times.size() == 1 && times[0] == 0.0)) {
        out.times.push_back(0.0);
        out.states.push_back(rho0);
        return out;
    }
    if (!(times.front() >= 0.0)) throw InvalidParameter("output times must start at t >= 0");

    const long d = model.layout.dimension();
    const Generator gen(model);
    using State = std::vector<double>;
    State x(2 * d * d);
    Eigen::Map<DenseOperator>(reinterpret_cast<Complex*>(x.data()), d, d) = rho0.matrix();
    const Complex tr0 = rho0.trace();

    auto rhs = [&gen, d](const State& s, State& ds, double) {
        Eigen::Map<const DenseOperator> rho(reinterpret_cast<const Complex*>(s.data()), d, d);
        Eigen::Map<DenseOperator> drho(reinterpret_cast<Complex*>(ds.data()), d, d);
        gen.apply(rho, drho);
    };
    auto observer = [&](const State& s, double t) {
        Eigen::Map<const DenseOperator> rho(reinterpret_cast<const Complex*>(s.data()), d, d);
        out.max_trace_drift = std::max(out.max_trace_drift, std::abs(rho.trace() - tr0));
        out.max_hermiticity_error =
            std::max(out.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        out.times.push_back(t);
        out.states.emplace_back(model.layout, DenseOperator(0.5 * (rho + rho.adjoint())));
    };

    // The integrator needs a start point; prepend t = 0 when the caller did not.
    std::vector<double> grid;
    if (times.front() > 0.0) grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());
    const bool drop_first = times.front() > 0.0;

    try {
        ode::integrate_times(
            ode::make_controlled(opts.abs_tol, opts.rel_tol, ode::runge_kutta_fehlberg78<State>()), rhs, x,
            grid.begin(), grid.end(), opts.initial_step, observer);
    } catch (const ode::step_adjustment_error& e) {
        throw StiffnessError(std::string("density-matrix integration stalled (") + e.what() +
                             "); reduce the cutoffs or the time horizon");
    }
    if (drop_first) {
        out.times.erase(out.times.begin());
        out.states.erase(out.states.begin());
    }
    return out;
}

MomentState extract_moments(const DensityOperator& rho) {
    const double herm = rho.hermiticity_error();
    if (herm > kHermitianTol) {
        throw IntegrityError("density matrix not Hermitian (error " + std::to_string(herm) + ")");
    }
    const BasisLayout& L = rho.layout();
    const SparseOperator b = L.phonon_annihilator();
    const SparseOperator c = L.has_cavity() ? L.photon_annihilator()
                             : L.has_atom() ? L.atom_lowering()
                                            : L.photon_annihilator();
    const SparseOperator bd = adjoint(b), cd = adjoint(c);
    const Complex i(0.0, 1.0);
    const SparseOperator bp = b + bd, bm = b - bd, cp = c + cd, cm = c - cd;
    const SparseOperator b2 = b * b, c2 = c * c, b2d = adjoint(b2), c2d = adjoint(c2);

    MomentState s;
    auto put = [&](Moment w, const SparseOperator& op, Complex factor) {
        const Complex v = factor * rho.expectation(op);
        if (std::abs(v.imag()) > kHermitianTol * std::max(1.0, std::abs(v.real()))) {
            throw IntegrityError(std::string("moment ") + std::string(moment_name(w)) +
                                 " has an imaginary part " + std::to_string(v.imag()));
        }
        s[w] = v.real();
    };
    using M = Moment;
    put(M::kx, bm, i);
    put(M::ky, cm, i);
    put(M::ku, bp, 1.0);
    put(M::kw, cp, 1.0);
    put(M::k1, bp * cp, 1.0);
    put(M::k2, bp * cm, i);
    put(M::k3, bm * cp, i);
    put(M::k4, bm * cm, 1.0);
    put(M::k5, c2 + c2d, 1.0);
    put(M::k6, c2 - c2d, i);
    put(M::k7, b2 + b2d, 1.0);
    put(M::k8, b2 - b2d, i);
    put(M::n, cd * c, 1.0);
    put(M::m, bd * b, 1.0);
    return s;
}

std::vector<MomentState> extract_moments(std::span<const DensityOperator> states) {
    std::vector<MomentState> out;
    out.reserve(states.size());
    for (const auto& r : states) out.push_back(extract_moments(r));
    return out;
}

std::vector<double> excited_population(std::span<const DensityOperator> states) {
    std::vector<double> out;
    out.reserve(states.size());
    if (states.empty()) return out;
    const SparseOperator sm = states.front().layout().atom_lowering();
    const SparseOperator pe = adjoint(sm) * sm;
    for (const auto& r : states) out.push_back(r.expectation(pe).real());
    return out;
}

DenseOperator apply_lindbladian(const ModelSpec& model, const DenseOperator& rho) {
    const long d = model.layout.dimension();
    if (rho.rows() != d || rho.cols() != d) throw InvalidParameter("density matrix dimension mismatch");
    DenseOperator out(d, d);
    Generator(model).apply(rho, out);
    return out;
}

StationaryDensity relax_to_stationary(const ModelSpec& model, const DensityOperator& rho0,
                                      const RelaxationOptions& opts) {
    if (!(rho0.layout() == model.layout)) {
        throw InvalidParameter("initial state does not match the model basis");
    }
    const long d = model.layout.dimension();
    const long n = d * d;
    if (n > opts.max_superoperator_dimension) {
        throw DimensionBudgetExceeded("Liouvillian dimension " + std::to_string(n) +
                                          " exceeds the relaxation budget",
                                      n);
    }
    // Column-major vec: vec(A rho B) = (B^T kron A) vec(rho).
    const Generator gen(model);
    const SparseOperator I = eye(d);
    const SparseOperator h_conj = SparseOperator(gen.h_eff.conjugate());
    SparseOperator liou = Complex(0.0, -1.0) * SparseOperator(Eigen::kroneckerProduct(I, gen.h_eff)) +
                          Complex(0.0, 1.0) * SparseOperator(Eigen::kroneckerProduct(h_conj, I));
    for (const auto& l : gen.jumps) {
        const SparseOperator l_conj = SparseOperator(l.conjugate());
        liou += SparseOperator(Eigen::kroneckerProduct(l_conj, l));
    }
    const double h = opts.step > 0.0 ? opts.step : 1e10 / std::max(max_abs(liou), 1e-300);
    SparseOperator sys = eye(n) - h * liou;
    sys.makeCompressed();

    Eigen::SparseLU<SparseOperator, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(sys);
    if (lu.info() != Eigen::Success) {
        throw IntegrityError("sparse LU of the relaxation operator failed: " + lu.lastErrorMessage());
    }

    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.matrix().data(), n);
    StationaryDensity out;
    for (out.iterations = 1; out.iterations <= opts.max_iterations; ++out.iterations) {
        Eigen::VectorXcd next = lu.solve(v);
        Eigen::Map<DenseOperator> r(next.data(), d, d);
        r = 0.5 * (r + r.adjoint()).eval();
        r /= r.trace();
        const double change = (next - v).cwiseAbs().maxCoeff();
        v = next;
        if (change <= opts.tolerance) break;
    }
    out.iterations = std::min(out.iterations, opts.max_iterations);
    DenseOperator rho = Eigen::Map<DenseOperator>(v.data(), d, d);
    out.residual = apply_lindbladian(model, rho).cwiseAbs().maxCoeff();
    out.rho = DensityOperator(model.layout, std::move(rho));
    return out;
}

}  // namespace cavcool
