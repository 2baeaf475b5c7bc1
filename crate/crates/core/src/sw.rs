//! The perturbed abelian monopole equations on the flat 4-torus, their gauge
//! action, Coulomb gauge fixing, and a least-squares descent solver.
//!
//! A state is a pair `(A, psi)`; the residuals are
//!
//! ```text
//!   r1 = D+_A psi,
//!   r2 = i rho_sd(F_plus + delta) - sigma(psi),
//! ```
//!
//! with `F_plus` the self-dual clover curvature coefficients (the imaginary
//! part of the curvature 2-form of the link connection) and `delta` a real
//! self-dual perturbation. Both residuals are computed in the Pauli
//! coefficient coordinates in which the hermitian embedding is an isometry,
//! so `|r2|^2 = sum_k (y_k - s_k)^2` sitewise.
//!
//! The solver is gradient descent on `E = |r1|^2 + |r2|^2` with a
//! warm-started Armijo line search that may also expand the step while the
//! energy keeps dropping. Expansion matters: near the reducible minima the
//! spinor zero modes of `D+` are damped only quartically, and fixed-step
//! backtracking would need ~1/s^2 iterations to push their amplitude `s`
//! down; near-line-minimal steps traverse them geometrically. Energy is
//! monotone over accepted steps by construction, and the state is re-fixed to
//! Coulomb gauge periodically.

use crate::clifford::{sigma, SpinorPlus, TracelessHermitian2};
use crate::dirac::{
    b_apply, dirac_minus, dirac_plus, SpinorMinusField, SpinorPlusField, U1Connection,
    SCALAR_CURVATURE,
};
use crate::error::{Result, SwtError};
use crate::lattice::{
    codifferential, inner_one_form, solve_gauge_potential, Lattice, OneForm, ScalarField,
    SelfDualField, PAIRS,
};
use num_complex::Complex;
use serde::Serialize;

pub type C64 = Complex<f64>;

/// A connection together with a positive spinor section.
#[derive(Clone, Debug)]
pub struct SWState {
    pub conn: U1Connection,
    pub psi: SpinorPlusField,
}

impl SWState {
    pub fn new(conn: U1Connection, psi: SpinorPlusField) -> Result<Self> {
        conn.lat().same_shape(&psi.lat)?;
        Ok(SWState { conn, psi })
    }

    pub fn lat(&self) -> Lattice {
        self.psi.lat
    }

    /// The flat reducible state `(trivial connection, 0)`.
    pub fn flat(lat: Lattice) -> Self {
        SWState {
            conn: U1Connection::trivial(lat),
            psi: SpinorPlusField::zeros(lat),
        }
    }
}

/// Self-dual perturbation of the curvature equation.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub delta: SelfDualField,
}

impl Perturbation {
    pub fn zero(lat: Lattice) -> Self {
        Perturbation {
            delta: SelfDualField::zeros(lat),
        }
    }

    pub fn constant(lat: Lattice, c: [f64; 3]) -> Self {
        Perturbation {
            delta: SelfDualField::constant(lat, c),
        }
    }
}

/// Descent parameters.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub step_size: f64,
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    pub gauge_fix_every: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            step_size: 0.25,
            max_iterations: 200_000,
            residual_tolerance: 1e-9,
            gauge_fix_every: 200,
            seed: 42,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0) {
            return Err(SwtError::InvalidArgument(format!(
                "step_size must be positive, got {}",
                self.step_size
            )));
        }
        if !(self.residual_tolerance > 0.0) {
            return Err(SwtError::InvalidArgument(format!(
                "residual_tolerance must be positive, got {}",
                self.residual_tolerance
            )));
        }
        Ok(())
    }
}

/// Scalar diagnostics of a state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub dirac_norm: f64,
    pub curvature_norm: f64,
    pub energy: f64,
    pub max_psi_sq: f64,
    pub c0_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Site-indexed traceless hermitian matrices (the curvature-equation
/// residual).
#[derive(Clone, Debug)]
pub struct HermitianField {
    pub lat: Lattice,
    pub vals: Vec<TracelessHermitian2<C64>>,
}

impl HermitianField {
    pub fn norm_sq(&self) -> f64 {
        self.lat.weight() * self.vals.iter().map(|v| v.norm_sq()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

fn check_pert(state: &SWState, pert: &Perturbation) -> Result<()> {
    state.lat().same_shape(&pert.delta.lat)
}

/// Pauli coefficients of `sigma(psi)` at one site: the vector `s` with
/// `sigma(psi) = i rho_sd(s)`.
#[inline]
fn sigma_coeffs(v: &SpinorPlus<C64>) -> [f64; 3] {
    let d = 0.5 * (v.z.norm_sqr() - v.w.norm_sqr());
    let c = v.z * v.w.conj();
    [-d, -c.im, c.re]
}

/// Curvature-equation residual coefficients `y - s` per site (`y` = clover
/// self-dual curvature plus `delta`, `s` = Pauli coefficients of
/// `sigma(psi)`), together with the Dirac residual.
fn residual_parts(
    state: &SWState,
    pert: &Perturbation,
) -> Result<(SpinorMinusField, Vec<[f64; 3]>)> {
    check_pert(state, pert)?;
    let r1 = dirac_plus(&state.conn, &state.psi)?;
    let cf = state.conn.clover_self_dual()?;
    let coeffs = cf
        .vals
        .iter()
        .zip(&pert.delta.vals)
        .zip(&state.psi.vals)
        .map(|((f, d), v)| {
            let s = sigma_coeffs(v);
            [f[0] + d[0] - s[0], f[1] + d[1] - s[1], f[2] + d[2] - s[2]]
        })
        .collect();
    Ok((r1, coeffs))
}

/// The two residual fields of the perturbed equations.
pub fn sw_residual(
    state: &SWState,
    pert: &Perturbation,
) -> Result<(SpinorMinusField, HermitianField)> {
    let (r1, coeffs) = residual_parts(state, pert)?;
    let vals = coeffs
        .iter()
        .map(TracelessHermitian2::<C64>::from_pauli)
        .collect();
    Ok((
        r1,
        HermitianField {
            lat: state.lat(),
            vals,
        },
    ))
}

/// Least-squares energy `|r1|^2 + |r2|^2`.
pub fn energy(state: &SWState, pert: &Perturbation) -> Result<f64> {
    let (r1, coeffs) = residual_parts(state, pert)?;
    let w = state.lat().weight();
    let e2: f64 = coeffs
        .iter()
        .map(|c| c[0] * c[0] + c[1] * c[1] + c[2] * c[2])
        .sum();
    Ok(r1.norm_sq() + w * e2)
}

/// Energy with its exact discrete gradients with respect to the generating
/// 1-form and the spinor (Riesz gradients in the `h^4` inner product, so the
/// directional derivative along `(da, dpsi)` is
/// `<grad_a, da> + 2 Re <grad_psi, dpsi>`).
pub fn energy_and_gradient(
    state: &SWState,
    pert: &Perturbation,
) -> Result<(f64, OneForm, SpinorPlusField)> {
    check_pert(state, pert)?;
    let lat = state.lat();
    let h = lat.h();
    let w = lat.weight();

    let r1 = dirac_plus(&state.conn, &state.psi)?;
    let plaq = state.conn.plaquette_curvature()?;
    // Clover self-dual coefficients and the residual coefficients y - s.
    let mut resid = vec![[0.0f64; 3]; lat.n_sites()];
    for idx in 0..lat.n_sites() {
        let mut clover = [0.0f64; 3];
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            let mi = lat.shift(idx, i, -1);
            let mj = lat.shift(idx, j, -1);
            let mij = lat.shift(mi, j, -1);
            let avg = 0.25
                * (plaq.vals[idx][p] + plaq.vals[mi][p] + plaq.vals[mj][p] + plaq.vals[mij][p]);
            match p {
                0 => clover[0] += avg,
                1 => clover[1] += avg,
                2 => clover[2] += avg,
                3 => clover[2] += avg,
                4 => clover[1] -= avg,
                5 => clover[0] += avg,
                _ => unreachable!(),
            }
        }
        let s = sigma_coeffs(&state.psi.vals[idx]);
        let d = &pert.delta.vals[idx];
        resid[idx] = [
            clover[0] + d[0] - s[0],
            clover[1] + d[1] - s[1],
            clover[2] + d[2] - s[2],
        ];
    }

    let e2: f64 = resid.iter().map(|c| c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sum();
    let e = r1.norm_sq() + w * e2;

    // Spinor gradient: D- r1 plus the sigma-coupling term.
    let mut grad_psi = dirac_minus(&state.conn, &r1)?;
    for idx in 0..lat.n_sites() {
        let v = &state.psi.vals[idx];
        let r = [2.0 * resid[idx][0], 2.0 * resid[idx][1], 2.0 * resid[idx][2]];
        let gz = 0.5 * (r[0] * v.z + C64::new(0.0, r[1]) * v.w - r[2] * v.w);
        let gw = -0.5 * (r[0] * v.w + C64::new(0.0, r[1]) * v.z + r[2] * v.z);
        grad_psi.vals[idx].z += gz;
        grad_psi.vals[idx].w += gw;
    }

    // Connection gradient, Dirac part: d/da_i(x) perturbs the two hops that
    // use the link (x, i).
    let mut grad_a = OneForm::zeros(lat);
    for idx in 0..lat.n_sites() {
        for axis in 0..4 {
            let up = lat.shift(idx, axis, 1);
            let u = state.conn.link(idx, axis);
            let b_up = b_apply(axis, &state.psi.vals[up]);
            let b_here = b_apply(axis, &state.psi.vals[idx]);
            let r_here = &r1.vals[idx];
            let r_up = &r1.vals[up];
            let inner_fwd = b_up.z.conj() * r_here.z + b_up.w.conj() * r_here.w;
            let inner_bwd = b_here.z.conj() * r_up.z + b_here.w.conj() * r_up.w;
            grad_a.vals[idx][axis] += (u.conj() * inner_fwd + u * inner_bwd).im;
        }
    }

    // Connection gradient, curvature part: each plaquette argument is linear
    // in the four participating link variables with slope +-h, and feeds the
    // clover averages of its four corner sites.
    let pair_sign: [(usize, f64); 6] = [
        (0, 1.0),
        (1, 1.0),
        (2, 1.0),
        (2, 1.0),
        (1, -1.0),
        (0, 1.0),
    ];
    let inv4h = 1.0 / (4.0 * h);
    for idx in 0..lat.n_sites() {
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            let (k, sgn) = pair_sign[p];
            let xi = lat.shift(idx, i, 1);
            let xj = lat.shift(idx, j, 1);
            let xij = lat.shift(xi, j, 1);
            let wsum =
                2.0 * (resid[idx][k] + resid[xi][k] + resid[xj][k] + resid[xij][k]);
            let t = sgn * wsum * inv4h;
            grad_a.vals[idx][i] += t;
            grad_a.vals[xi][j] += t;
            grad_a.vals[xj][i] -= t;
            grad_a.vals[idx][j] -= t;
        }
    }

    Ok((e, grad_a, grad_psi))
}

/// Gauge action by `exp(i f)` for a real field `f`: links pick up the
/// coboundary, the spinor is multiplied by `exp(-i f)`. Both residual norms
/// and the energy are invariant up to round-off.
pub fn apply_gauge(state: &SWState, f: &ScalarField) -> SWState {
    SWState {
        conn: state.conn.gauge_transformed(f),
        psi: state.psi.phase_multiplied(f),
    }
}

/// Gauge-equivalent representative with coclosed generating 1-form and each
/// holonomy mean reduced into `[0, 2 pi / (n_i h))`.
pub fn coulomb_fix(state: &SWState) -> Result<SWState> {
    let lat = state.lat();
    let a = state.conn.generating_form();
    let f = solve_gauge_potential(&a);
    let mut fixed = apply_gauge(state, &f);
    for axis in 0..4 {
        let period = 2.0 * std::f64::consts::PI / (lat.dims()[axis] as f64 * lat.h());
        let mean = fixed.conn.generating_form().direction_means()[axis];
        let m = (mean / period).floor() as i64;
        if m != 0 {
            let (conn, phase) = fixed.conn.winding_transformed(axis, m);
            fixed = SWState {
                conn,
                psi: fixed.psi.phase_multiplied(&phase),
            };
        }
    }
    let a_fixed = fixed.conn.generating_form();
    let div = codifferential(&a_fixed).norm();
    let scale = 1.0f64.max(a_fixed.norm());
    if div > 1e-10 * scale {
        return Err(SwtError::SolverFailure(format!(
            "Coulomb fixing left divergence {div:.3e} (scale {scale:.3e})"
        )));
    }
    Ok(fixed)
}

/// Max of `|psi|^2` over sites against the curvature bound
/// `max(0, -2 s_min)`; with the flat metric the bound is zero. Only
/// meaningful on states whose residual is itself below tolerance.
pub fn c0_bound_check(state: &SWState, tolerance: f64) -> (f64, f64, bool) {
    let max_psi_sq = state.psi.max_fiber_norm_sq();
    let bound = (0.0f64).max(-2.0 * SCALAR_CURVATURE);
    (max_psi_sq, bound, max_psi_sq <= bound + tolerance)
}

/// Diagnostics of a state (plus iteration metadata).
pub fn report(
    state: &SWState,
    pert: &Perturbation,
    iterations: usize,
    converged: bool,
) -> Result<ResidualReport> {
    let (r1, r2) = sw_residual(state, pert)?;
    let dirac_norm = r1.norm();
    let curvature_norm = r2.norm();
    Ok(ResidualReport {
        dirac_norm,
        curvature_norm,
        energy: dirac_norm * dirac_norm + curvature_norm * curvature_norm,
        max_psi_sq: state.psi.max_fiber_norm_sq(),
        c0_bound: (0.0f64).max(-2.0 * SCALAR_CURVATURE),
        iterations,
        converged,
    })
}

fn stepped(state: &SWState, grad_a: &OneForm, grad_psi: &SpinorPlusField, t: f64) -> SWState {
    let a = state.conn.generating_form().sub(&grad_a.scale(t));
    let psi = state.psi.sub(&grad_psi.scale(C64::new(t, 0.0)));
    SWState {
        conn: U1Connection::from_one_form(&a),
        psi,
    }
}

const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 90;
const MAX_EXPANSIONS: usize = 60;

/// Monotone energy descent with warm-started, expanding Armijo line search
/// and periodic Coulomb gauge fixing. Converged means
/// `energy < residual_tolerance^2`.
pub fn solve(
    init: &SWState,
    pert: &Perturbation,
    cfg: &SolverConfig,
) -> Result<(SWState, ResidualReport, bool)> {
    cfg.validate()?;
    check_pert(init, pert)?;
    let tol2 = cfg.residual_tolerance * cfg.residual_tolerance;

    let mut state = init.clone();
    let mut iterations = 0usize;
    let (mut e, mut grad_a, mut grad_psi) = energy_and_gradient(&state, pert)?;
    let mut converged = e < tol2;
    let mut trial = cfg.step_size;

    while !converged && iterations < cfg.max_iterations {
        let g2 = inner_one_form(&grad_a, &grad_a)
            + 2.0 * crate::dirac::inner_spinor_plus(&grad_psi, &grad_psi).re;
        if g2 <= 0.0 || !g2.is_finite() {
            break; // stationary (or degenerate) point
        }

        let mut t = trial;
        let mut backtracks = 0usize;
        let (next_state, next_e, accepted_t) = loop {
            let cand = stepped(&state, &grad_a, &grad_psi, t);
            let e_cand = energy(&cand, pert)?;
            if e_cand.is_finite() && e_cand <= e - ARMIJO_C * t * g2 {
                if backtracks == 0 {
                    // Expand while the energy keeps dropping.
                    let mut best = (cand, e_cand, t);
                    for _ in 0..MAX_EXPANSIONS {
                        let t2 = best.2 * 2.0;
                        let cand2 = stepped(&state, &grad_a, &grad_psi, t2);
                        let e2 = energy(&cand2, pert)?;
                        if e2.is_finite() && e2 < best.1 {
                            best = (cand2, e2, t2);
                        } else {
                            break;
                        }
                    }
                    break best;
                }
                break (cand, e_cand, t);
            }
            t *= 0.5;
            backtracks += 1;
            if backtracks > MAX_BACKTRACKS {
                return Err(SwtError::SolverFailure(format!(
                    "line search could not decrease the energy from {e:.6e} \
                     (gradient norm^2 {g2:.6e})"
                )));
            }
        };

        debug_assert!(next_e <= e, "descent must be monotone");
        state = next_state;
        e = next_e;
        trial = (accepted_t * 2.0).clamp(1e-18, 1e18);
        iterations += 1;

        if cfg.gauge_fix_every > 0 && iterations % cfg.gauge_fix_every == 0 {
            state = coulomb_fix(&state)?;
            let e_fixed = energy(&state, pert)?;
            if e_fixed > e * (1.0 + 1e-9) + 1e-300 {
                return Err(SwtError::SolverFailure(format!(
                    "gauge fixing changed the energy from {e:.6e} to {e_fixed:.6e}"
                )));
            }
            e = e_fixed;
        }

        if e < tol2 {
            converged = true;
            break;
        }
        let refreshed = energy_and_gradient(&state, pert)?;
        e = refreshed.0;
        grad_a = refreshed.1;
        grad_psi = refreshed.2;
        converged = e < tol2;
    }

    let rep = report(&state, pert, iterations, converged)?;
    Ok((state, rep, converged))
}
