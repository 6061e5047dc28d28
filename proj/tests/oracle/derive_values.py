"""Reference values for the C++ test-suite.

Everything here is computed independently of the library:
  * the drift matrix is transcribed from the cooling equations and then
    checked against Tr(O L[rho]) of the Lindblad generator on random states,
  * stationary moments come from an exact rational solve (sympy),
  * scalar formulas are evaluated in 50-digit arithmetic (mpmath),
  * Fock-space quantities are brute-forced with dense numpy/scipy matrices.

Run:  python3 tests/oracle/derive_values.py > tests/oracle/derived_values.json
"""

import json
import sys

import mpmath as mp
import numpy as np
import scipy.linalg as sla
import sympy as sp

mp.mp.dps = 50

NAMES = ["k_x", "k_y", "k_u", "k_w", "k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8", "n", "m"]
IDX = {n: i for i, n in enumerate(NAMES)}


def drift(g, eta, kappa, nu, d, zero=0, one=1):
    """Cooling equations, one row per moment, in the NAMES ordering."""
    eg = eta * g
    hk = kappa / 2
    A = [[zero] * 14 for _ in range(14)]
    b = [zero] * 14

    def a(r, c, v):
        A[IDX[r]][IDX[c]] = A[IDX[r]][IDX[c]] + v

    a("k_x", "k_y", -2 * eg); a("k_x", "k_u", nu)
    b[IDX["k_y"]] = 2 * g; a("k_y", "k_w", d); a("k_y", "k_y", -hk)
    a("k_u", "k_x", -nu)
    a("k_w", "k_u", 2 * eg); a("k_w", "k_y", -d); a("k_w", "k_w", -hk)
    a("n", "k_y", g); a("n", "k1", eg); a("n", "n", -kappa)
    a("k1", "k7", 2 * eg); a("k1", "m", 4 * eg); b[IDX["k1"]] = 2 * eg
    a("k1", "k3", -nu); a("k1", "k2", -d); a("k1", "k1", -hk)
    a("k2", "k_u", 2 * g); a("k2", "k4", nu); a("k2", "k1", d); a("k2", "k2", -hk)
    a("k3", "k6", -2 * eg); a("k3", "k8", 2 * eg); a("k3", "k1", nu); a("k3", "k4", d); a("k3", "k3", -hk)
    a("k4", "k_x", -2 * g); a("k4", "k5", -2 * eg); a("k4", "n", 4 * eg); b[IDX["k4"]] = 2 * eg
    a("k4", "k2", -nu); a("k4", "k3", -d); a("k4", "k4", -hk)
    a("k5", "k_y", -2 * g); a("k5", "k1", 2 * eg); a("k5", "k6", -2 * d); a("k5", "k5", -kappa)
    a("k6", "k_w", 2 * g); a("k6", "k2", 2 * eg); a("k6", "k5", 2 * d); a("k6", "k6", -kappa)
    a("k7", "k4", -2 * eg); a("k7", "k8", -2 * nu)
    a("k8", "k2", -2 * eg); a("k8", "k7", 2 * nu)
    a("m", "k4", eg)
    return A, b


def ladder(n):
    return np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)


def verify_drift_against_lindblad():
    """Fits dv/dt = A v + b from the master equation on random low-lying states."""
    rng = np.random.default_rng(7)
    g, eta, kappa, nu, d = 0.37, 0.23, 1.3, 0.71, 0.53
    N = 10
    b1 = ladder(N); I = np.eye(N)
    b = np.kron(b1, I); c = np.kron(I, b1)
    bd, cd = b.conj().T, c.conj().T
    X = b + bd
    H = g * (c + cd) - 1j * eta * g * X @ c + 1j * eta * g * X @ cd + nu * bd @ b + d * cd @ c
    L = np.sqrt(kappa) * c

    def lind(r):
        return -1j * (H @ r - r @ H) + L @ r @ L.conj().T - 0.5 * (L.conj().T @ L @ r + r @ L.conj().T @ L)

    ops = [1j * (b - bd), 1j * (c - cd), b + bd, c + cd, (b + bd) @ (c + cd), 1j * (b + bd) @ (c - cd),
           1j * (b - bd) @ (c + cd), (b - bd) @ (c - cd), c @ c + cd @ cd, 1j * (c @ c - cd @ cd),
           b @ b + bd @ bd, 1j * (b @ b - bd @ bd), cd @ c, bd @ b]
    rows_v, rows_dv = [], []
    low = [i * N + j for i in range(4) for j in range(4)]
    for _ in range(60):
        psi = np.zeros((N * N, 3), complex)
        psi[low] = rng.normal(size=(len(low), 3)) + 1j * rng.normal(size=(len(low), 3))
        r = psi @ psi.conj().T
        r /= np.trace(r)
        dr = lind(r)
        rows_v.append([np.trace(o @ r).real for o in ops] + [1.0])
        rows_dv.append([np.trace(o @ dr).real for o in ops])
    V = np.array(rows_v); DV = np.array(rows_dv)
    coef, *_ = np.linalg.lstsq(V, DV, rcond=None)
    A_fit = coef[:14].T; b_fit = coef[14]
    A_ref, b_ref = drift(g, eta, kappa, nu, d, zero=0.0)
    err = max(np.abs(A_fit - np.array(A_ref)).max(), np.abs(b_fit - np.array(b_ref)).max())
    if err > 1e-9:
        sys.exit(f"transcribed drift disagrees with the master equation: {err}")
    return err


def exact_stationary(g, eta, kappa, nu, d):
    R = sp.Rational
    A, b = drift(R(g), R(eta), R(kappa), R(nu), R(d), zero=sp.Integer(0))
    v = sp.Matrix(A).LUsolve(-sp.Matrix(b))
    return {NAMES[i]: float(sp.N(v[i], 30)) for i in range(14)}


def f(x):
    return float(x)


def main():
    out = {}
    out["drift_fit_error"] = verify_drift_against_lindblad()

    # Adiabatic elimination arithmetic.
    g, om, Dl, de = mp.mpf("0.01"), mp.mpf("0.02"), mp.mpf(10), mp.mpf("0.5")
    out["derive_effective"] = {"g_eff": f(-g * om / (2 * Dl)), "delta_eff": f(de - g * g / Dl)}

    out["timescale_ratio"] = {"separated": f(mp.mpf("0.1") / (mp.mpf("0.1") * mp.mpf("5e-4"))),
                              "not_separated": f(1 / (mp.mpf("0.5") * mp.mpf("0.5")))}

    def coop_half(k, nu, eta):
        return (k**4 + 4 * nu**4) / (8 * eta**2 * nu * k**3)

    def coop_nu(k, nu, eta):
        return (k**2 + 16 * nu**2) / (64 * eta**2 * nu**2)

    out["cooperativity"] = {"half_kappa": f(coop_half(1, mp.mpf("0.1"), mp.mpf("0.1"))),
                            "nu": f(coop_nu(1, mp.mpf(10), mp.mpf("0.1")))}

    def emission(Gam, Om, Dl, rate):
        return rate / (Gam * Om**2 / (4 * Dl**2))

    out["emission_ratio"] = {"gamma_1": f(emission(1, mp.mpf("0.02"), 10, mp.mpf("2e-9"))),
                             "gamma_1e-8": f(emission(mp.mpf("1e-8"), mp.mpf("0.02"), 10, mp.mpf("2e-9")))}

    def mss1(k, nu, d):
        return (k**2 + 4 * (nu - d) ** 2) / (16 * nu * d)

    def denom(k, nu, d):
        return (k**2 + 4 * nu**2) ** 2 + 8 * d**2 * (k**2 - 4 * nu**2) + 16 * d**4

    def gamma(eta, g, k, nu, d):
        return 64 * eta**2 * g**2 * nu * d * k / denom(k, nu, d)

    tenth = mp.mpf("0.1")
    out["m_ss_first_order"] = {"weak": f(mss1(1, mp.mpf("0.05"), mp.mpf("0.5"))),
                               "strong": f(mss1(1, mp.mpf(10), mp.mpf(10)))}
    out["optimal_detuning_unit"] = f(mp.sqrt(5) / 2)
    out["optimal_detuning_nu10_rel_to_nu"] = f(mp.sqrt(1 + 400) / 2 / 10 - 1)
    out["gamma"] = {
        "half_kappa": f(gamma(tenth, mp.mpf("5e-4"), 1, tenth, mp.mpf("0.5"))),
        "half_kappa_simplified": f(8 * tenth**2 * mp.mpf("5e-4") ** 2 * tenth / (1 + 4 * tenth**4)),
        "nu": f(gamma(tenth, mp.mpf("1e-4"), 1, mp.mpf(10), mp.mpf(10))),
        "nu_simplified": f(64 * tenth**2 * mp.mpf("1e-4") ** 2 * 100 / (1 + 1600)),
    }
    gk = gamma(tenth, mp.mpf("5e-4"), 1, tenth, mp.mpf("0.5"))
    out["k4_adiabatic"] = f(-gk * 2500 / (tenth * mp.mpf("5e-4")))
    nu8 = mp.mpf(1) / 8
    out["gamma_ratio_nu_kappa_over_8"] = f(gamma(tenth, mp.mpf("1e-4"), 1, nu8, mp.mpf("0.5")) /
                                           gamma(tenth, mp.mpf("1e-4"), 1, nu8, nu8))
    nu05 = mp.mpf("0.05")
    out["identity"] = {
        "sqrt_ratio": f(mss1(1, nu05, mp.mpf("0.5")) / mp.sqrt(mss1(1, nu05, nu05))),
        "gamma_ratio": f(gamma(tenth, mp.mpf("1e-4"), 1, nu05, mp.mpf("0.5")) /
                         gamma(tenth, mp.mpf("1e-4"), 1, nu05, nu05)),
    }

    # Exact stationary states.
    out["stationary_weak"] = exact_stationary("1/10000", "1/10", 1, "1/20", "1/2")
    out["stationary_strong"] = exact_stationary("1/10000", "1/10", 1, 10, 10)
    out["stationary_signed"] = exact_stationary("-3/1000", "1/20", 1, "7/10", "3/10")

    # Thermal state, m0 = 2 on N_b = 60.
    q = mp.mpf(2) / 3
    w = [q**n for n in range(61)]
    out["thermal_mean_m0_2_nb_60"] = f(sum(n * x for n, x in enumerate(w)) / sum(w))

    # Displaced vacuum exp(-i theta (b + b^+)) |0>, theta = 0.01, brute force.
    N = 40
    a = ladder(N)
    X = a + a.conj().T
    U = sla.expm(-1j * 0.01 * X)
    psi = U[:, 0]
    out["displaced_vacuum"] = {
        "k_u": float(np.vdot(psi, X @ psi).real),
        "k_x": float(np.vdot(psi, 1j * (a - a.conj().T) @ psi).real),
    }
    # Lamb-Dicke expansion error on the vacuum element.
    D_exact = sla.expm(-1j * 0.1 * X)
    D_first = np.eye(N) - 1j * 0.1 * X
    out["displacement_vacuum_element_error"] = float(abs(D_exact[0, 0] - D_first[0, 0]))

    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
