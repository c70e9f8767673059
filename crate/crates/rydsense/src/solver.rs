//! Rotating-frame Hamiltonian, relaxation superoperator and steady-state
//! solver for N-level ladder systems.
//!
//! The density matrix is vectorized column major: element rho[r, c] sits at
//! index c*n + r. The full Liouvillian is the n^2 x n^2 matrix
//! M = -i(I ⊗ H - H^T ⊗ I) + L acting on vec(rho); the steady state is the
//! trace-1 element of its kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::budget::DephasingBudget;
use crate::constants::{EPS0, HBAR, SPEED_OF_LIGHT, TAU};
use crate::error::{Result, RydError};
use crate::scheme::LadderScheme;

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rotating-wave ladder Hamiltonian in rad/s (H/ħ) for one velocity class.
///
/// Diagonal entries are cumulative detunings up the ladder, with each
/// coupling's detuning Doppler shifted to `detuning - wavevector * velocity`.
/// Off-diagonal entries are -Ω/2 on coupled pairs.
pub fn build_hamiltonian(scheme: &LadderScheme, velocity: f64) -> Result<CMatrix> {
    scheme.validate()?;
    let n = scheme.n();
    let mut h = CMatrix::zeros(n, n);
    let mut cumulative = 0.0;
    for j in 1..n {
        let c = &scheme.couplings[scheme.rung(j - 1)];
        cumulative += c.detuning - c.wavevector * velocity;
        h[(j, j)] = Complex64::new(cumulative, 0.0);
    }
    for c in &scheme.couplings {
        let half = Complex64::new(-c.rabi / 2.0, 0.0);
        h[(c.lower, c.upper)] = half;
        h[(c.upper, c.lower)] = half;
    }
    Ok(h)
}

/// Relaxation superoperator (Lindblad dissipator plus pure dephasing and
/// transit relaxation), independent of velocity and detunings.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub superop: CMatrix,
    n: usize,
}

impl Relaxation {
    pub fn dim(&self) -> usize {
        self.n
    }
}

/// Superoperator for vec(X rho Y): M[(c,r),(c2,r2)] = X[r,r2] * Y[c2,c].
fn sandwich(x: &CMatrix, y: &CMatrix, out: &mut CMatrix, scale: f64) {
    let n = x.nrows();
    for c in 0..n {
        for r in 0..n {
            for c2 in 0..n {
                for r2 in 0..n {
                    out[(c * n + r, c2 * n + r2)] += scale * x[(r, r2)] * y[(c2, c)];
                }
            }
        }
    }
}

/// Build the relaxation matrix for a scheme and dephasing budget.
///
/// Population decay: each level's branches (remainder to ground) become
/// Lindblad channels |target><source| with branch repopulation. Pure
/// dephasing: each coherence assigned in the budget decays at rate/2 per
/// channel (FWHM convention). Transit: uniform relaxation of all elements
/// toward the thermal ground state at Γ_t/2.
pub fn build_relaxation(scheme: &LadderScheme, budget: &DephasingBudget) -> Result<Relaxation> {
    scheme.validate()?;
    budget.validate()?;
    let n = scheme.n();
    let nn = n * n;
    let mut m = CMatrix::zeros(nn, nn);

    for (i, level) in scheme.levels.iter().enumerate() {
        let mut channels: Vec<(usize, f64)> = level.decay_branches.clone();
        let branch_sum: f64 = channels.iter().map(|&(_, g)| g).sum();
        let remainder = level.population_decay_out - branch_sum;
        if remainder > 0.0 && i != 0 {
            channels.push((0, remainder));
        }
        for (target, rate) in channels {
            if rate == 0.0 {
                continue;
            }
            // A = |target><i|: vec(A rho A†) term.
            let mut a = CMatrix::zeros(n, n);
            a[(target, i)] = Complex64::new(1.0, 0.0);
            let a_dag = a.adjoint();
            sandwich(&a, &a_dag, &mut m, rate);
            // -1/2 {A†A, rho} with A†A = |i><i|.
            let half = Complex64::new(rate / 2.0, 0.0);
            for k in 0..n {
                m[(k * n + i, k * n + i)] -= half; // rho[i, k] rows
                m[(i * n + k, i * n + k)] -= half; // rho[k, i] rows
            }
        }
    }

    for (&(lo, up), &rate) in &budget.resolve(scheme)? {
        let half = Complex64::new(rate / 2.0, 0.0);
        m[(up * n + lo, up * n + lo)] -= half;
        m[(lo * n + up, lo * n + up)] -= half;
    }

    if budget.transit > 0.0 {
        let half = Complex64::new(budget.transit / 2.0, 0.0);
        for k in 0..nn {
            m[(k, k)] -= half;
        }
        // Repopulate |0><0| with tr(rho).
        for d in 0..n {
            m[(0, d * n + d)] += half;
        }
    }

    Ok(Relaxation { superop: m, n })
}

/// Full Liouvillian M = -i(I ⊗ H - H^T ⊗ I) + L.
pub fn liouvillian(h: &CMatrix, relax: &Relaxation) -> CMatrix {
    let n = relax.n;
    let mut m = relax.superop.clone();
    for c in 0..n {
        for r in 0..n {
            let row = c * n + r;
            for k in 0..n {
                // -i (H rho)[r,c] = -i sum_k H[r,k] rho[k,c]
                m[(row, c * n + k)] -= I * h[(r, k)];
                // +i (rho H)[r,c] = +i sum_k rho[r,k] H[k,c]
                m[(row, k * n + r)] += I * h[(k, c)];
            }
        }
    }
    m
}

/// Steady-state density matrix with validated invariants.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: CMatrix,
}

impl SteadyState {
    pub fn population(&self, i: usize) -> f64 {
        self.rho[(i, i)].re
    }

    /// rho[upper, lower]; Im > 0 means absorption on that transition.
    pub fn coherence(&self, upper: usize, lower: usize) -> Complex64 {
        self.rho[(upper, lower)]
    }

    pub fn probe_coherence(&self, scheme: &LadderScheme) -> Complex64 {
        let p = scheme.probe();
        self.coherence(p.upper, p.lower)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rho.nrows()).map(|i| self.rho[(i, i)].re).sum()
    }
}

const TRACE_TOL: f64 = 1e-10;
const HERMITICITY_TOL: f64 = 1e-10;
const POSITIVITY_SLACK: f64 = -1e-9;
const RESIDUAL_TOL: f64 = 1e-9;

/// Solve M vec(rho) = 0 with tr(rho) = 1 by replacing the rho[0,0] row of the
/// Liouvillian with the trace condition. Errors if the kernel is degenerate.
pub fn steady_state(h: &CMatrix, relax: &Relaxation) -> Result<SteadyState> {
    let n = relax.n;
    let nn = n * n;
    let m = liouvillian(h, relax);

    let mut a = m.clone();
    for k in 0..nn {
        a[(0, k)] = Complex64::new(0.0, 0.0);
    }
    for d in 0..n {
        a[(0, d * n + d)] = Complex64::new(1.0, 0.0);
    }
    // Row equilibration improves pivoting when detunings dwarf decay rates.
    let mut row_scale = vec![1.0f64; nn];
    for r in 0..nn {
        let mut mx = 0.0f64;
        for c in 0..nn {
            mx = mx.max(a[(r, c)].norm());
        }
        if mx > 0.0 {
            row_scale[r] = 1.0 / mx;
        }
        for c in 0..nn {
            a[(r, c)] *= Complex64::new(row_scale[r], 0.0);
        }
    }
    let mut b = DMatrix::zeros(nn, 1);
    b[(0, 0)] = Complex64::new(row_scale[0], 0.0);

    let lu = a.clone().lu();
    let mut x = lu
        .solve(&b)
        .ok_or_else(|| RydError::DegenerateSteadyState("singular Liouvillian".into()))?;
    // One step of iterative refinement.
    let r = &b - &a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }

    // Residual against the unmodified Liouvillian.
    let resid = &m * &x;
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(1.0);
    let mut resid_max = 0.0f64;
    for k in 1..nn {
        resid_max = resid_max.max(resid[(k, 0)].norm());
    }
    if !(resid_max <= RESIDUAL_TOL * scale) {
        return Err(RydError::DegenerateSteadyState(format!(
            "Liouvillian residual {resid_max:.3e} exceeds {RESIDUAL_TOL:.0e} x {scale:.3e}; \
             kernel is likely not one-dimensional"
        )));
    }

    let mut rho = CMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            rho[(r, c)] = x[(c * n + r, 0)];
        }
    }

    let trace: Complex64 = (0..n).map(|d| rho[(d, d)]).sum();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Err(RydError::DegenerateSteadyState(format!(
            "trace {trace} deviates from 1"
        )));
    }
    let mut herm_dev = 0.0f64;
    for c in 0..n {
        for r in 0..n {
            herm_dev = herm_dev.max((rho[(r, c)] - rho[(c, r)].conj()).norm() / 2.0);
        }
    }
    if herm_dev > HERMITICITY_TOL {
        return Err(RydError::DegenerateSteadyState(format!(
            "Hermiticity deviation {herm_dev:.3e}"
        )));
    }
    // Clean up rounding before the eigenvalue check.
    let rho = (rho.clone() + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = rho.clone().symmetric_eigen();
    let min_eig = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < POSITIVITY_SLACK {
        return Err(RydError::DegenerateSteadyState(format!(
            "negative eigenvalue {min_eig:.3e}"
        )));
    }

    Ok(SteadyState { rho })
}

/// Convenience: steady state of a scheme at one velocity.
pub fn solve_scheme(
    scheme: &LadderScheme,
    budget: &DephasingBudget,
    velocity: f64,
) -> Result<SteadyState> {
    let h = build_hamiltonian(scheme, velocity)?;
    let l = build_relaxation(scheme, budget)?;
    steady_state(&h, &l)
}

/// Dipole moment that makes a two-level transition's natural linewidth equal
/// `gamma` at wavelength `lambda`: mu^2 = 3 pi eps0 hbar c^3 gamma / omega^3.
pub fn natural_dipole(wavelength: f64, gamma: f64) -> f64 {
    let omega = TAU * SPEED_OF_LIGHT / wavelength;
    (3.0 * std::f64::consts::PI * EPS0 * HBAR * SPEED_OF_LIGHT.powi(3) * gamma / omega.powi(3))
        .sqrt()
}

/// Dipole for the scheme's probe transition from the upper level's decay rate.
pub fn natural_probe_dipole(scheme: &LadderScheme) -> Result<f64> {
    let p = scheme.probe();
    if p.wavevector == 0.0 {
        return Err(RydError::Validation(
            "probe coupling needs a nonzero wavevector".into(),
        ));
    }
    let lambda = TAU / p.wavevector.abs();
    let gamma = scheme.levels[p.upper].population_decay_out;
    Ok(natural_dipole(lambda, gamma))
}

/// Absorption coefficient (1/m) from the probe coherence:
/// alpha = 2 k N mu^2 Im(rho_probe) / (eps0 hbar Omega_p).
pub fn probe_absorption(
    state: &SteadyState,
    scheme: &LadderScheme,
    density: f64,
    probe_dipole: f64,
) -> Result<f64> {
    let p = scheme.probe();
    if p.rabi <= 0.0 {
        return Err(RydError::ZeroProbeRabi);
    }
    if p.wavevector == 0.0 {
        return Err(RydError::Validation(
            "probe coupling needs a nonzero wavevector".into(),
        ));
    }
    let k = p.wavevector.abs();
    let im = state.probe_coherence(scheme).im;
    Ok(2.0 * k * density * probe_dipole * probe_dipole * im / (EPS0 * HBAR * p.rabi))
}

/// Complex susceptibility-like pair (absorption 1/m, dispersion 1/m) from the
/// probe coherence; the dispersion part feeds the interferometer phase.
pub fn probe_response(
    state: &SteadyState,
    scheme: &LadderScheme,
    density: f64,
    probe_dipole: f64,
) -> Result<(f64, f64)> {
    let p = scheme.probe();
    if p.rabi <= 0.0 {
        return Err(RydError::ZeroProbeRabi);
    }
    let k = p.wavevector.abs();
    let coh = state.probe_coherence(scheme);
    let prefactor = 2.0 * k * density * probe_dipole * probe_dipole / (EPS0 * HBAR * p.rabi);
    Ok((prefactor * coh.im, prefactor * coh.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::{Assignment, CoherenceAssignment, DephasingChannel};
    use crate::presets;
    use approx::assert_relative_eq;

    fn two_level(rabi: f64, detuning: f64, gamma: f64) -> LadderScheme {
        presets::two_level(rabi, detuning, gamma)
    }

    #[test]
    fn hamiltonian_two_level_resonant() {
        // Delta = 0, Omega = 2pi x 1 MHz, v = 0 -> [[0, -pi 1e6], [-pi 1e6, 0]].
        let s = two_level(TAU * 1e6, 0.0, TAU * 5.2e6);
        let h = build_hamiltonian(&s, 0.0).unwrap();
        assert_eq!(h[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(h[(1, 1)], Complex64::new(0.0, 0.0));
        assert_relative_eq!(
            h[(0, 1)].re,
            -std::f64::consts::PI * 1e6,
            max_relative = 1e-15
        );
        assert_eq!(h[(0, 1)].im, 0.0);
        assert_eq!(h[(1, 0)], h[(0, 1)]);
    }

    #[test]
    fn hamiltonian_three_level_resonant_diagonal_zero() {
        let s = presets::three_level_eit(TAU * 1e6, TAU * 2e6, 0.0, 0.0);
        let h = build_hamiltonian(&s, 0.0).unwrap();
        for j in 0..3 {
            assert_eq!(h[(j, j)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn hamiltonian_doppler_shift_852nm() {
        // lambda = 852 nm, v = +100 m/s -> probe detuning shifted by
        // -2pi x 117.37089 MHz.
        let mut s = two_level(TAU * 1e6, 0.0, TAU * 5.2e6);
        s.couplings[0].wavevector = TAU / 852e-9;
        let h = build_hamiltonian(&s, 100.0).unwrap();
        let expected = -TAU * (100.0 / 852e-9);
        assert_relative_eq!(h[(1, 1)].re, expected, max_relative = 1e-12);
        assert_relative_eq!(
            h[(1, 1)].re,
            -TAU * 117.37089201877936e6,
            max_relative = 1e-12
        );
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let s = presets::cs_four_level(
            TAU * 1.8e6,
            TAU * 0.5e6,
            TAU * 2e6,
            TAU * 1e6,
            -TAU * 2e6,
            TAU * 0.3e6,
        );
        let h = build_hamiltonian(&s, 37.0).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(h[(r, c)], h[(c, r)].conj());
            }
        }
    }

    #[test]
    fn relaxation_two_level_textbook_rates() {
        // Excited population decays at Gamma; coherences at Gamma/2.
        let gamma = TAU * 5.2e6;
        let s = two_level(TAU * 1e6, 0.0, gamma);
        let l = build_relaxation(&s, &DephasingBudget::zero()).unwrap();
        let m = &l.superop;
        let n = 2;
        let k_ee = 1 * n + 1;
        let k_gg = 0;
        let k_ge = 1 * n + 0; // rho[0,1]
        let k_eg = 0 * n + 1; // rho[1,0]
        assert_relative_eq!(m[(k_ee, k_ee)].re, -gamma, max_relative = 1e-14);
        assert_relative_eq!(m[(k_gg, k_ee)].re, gamma, max_relative = 1e-14);
        assert_relative_eq!(m[(k_ge, k_ge)].re, -gamma / 2.0, max_relative = 1e-14);
        assert_relative_eq!(m[(k_eg, k_eg)].re, -gamma / 2.0, max_relative = 1e-14);
        // Population flow into the ground state, nothing else on that row.
        assert_eq!(m[(k_gg, k_gg)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn relaxation_zero_budget_zero_decay_is_zero() {
        let s = LadderScheme::new(
            vec![
                crate::scheme::Level::new("g", 0.0),
                crate::scheme::Level::new("e", 0.0),
            ],
            vec![crate::scheme::Coupling::optical(0, 1, TAU * 1e6, 0.0, 0.0)],
            0,
        )
        .unwrap();
        let l = build_relaxation(&s, &DephasingBudget::zero()).unwrap();
        assert!(l.superop.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn relaxation_laser_dephasing_lands_on_assigned_coherence_only() {
        // 3-level with laser dephasing assigned to the Rydberg coherence only:
        // dephasing appears in exactly the rho[0,2]/rho[2,0] rows.
        let s = presets::three_level_eit(TAU * 1e6, TAU * 2e6, 0.0, 0.0);
        let rate = TAU * 70e3;
        let budget = DephasingBudget {
            laser: rate,
            assignment: Assignment::Explicit(vec![
                CoherenceAssignment {
                    lower: 0,
                    upper: 2,
                    channels: vec![DephasingChannel::Laser],
                },
                CoherenceAssignment {
                    lower: 1,
                    upper: 2,
                    channels: vec![],
                },
            ]),
            ..DephasingBudget::zero()
        };
        let with = build_relaxation(&s, &budget).unwrap();
        let without = build_relaxation(&s, &DephasingBudget::zero()).unwrap();
        let diff = &with.superop - &without.superop;
        let n = 3;
        for r in 0..9 {
            for c in 0..9 {
                let expected = if r == c && (r == 2 * n + 0 || r == 0 * n + 2) {
                    Complex64::new(-rate / 2.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert_eq!(diff[(r, c)], expected, "entry ({r}, {c})");
            }
        }
    }

    #[test]
    fn steady_state_saturation_limit() {
        // Omega >> Gamma, resonant: populations -> 1/2 each within 1e-3.
        let s = two_level(TAU * 200e6, 0.0, TAU * 5.2e6);
        let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
        assert!((ss.population(0) - 0.5).abs() < 1e-3);
        assert!((ss.population(1) - 0.5).abs() < 1e-3);
    }

    #[test]
    fn steady_state_two_level_analytic() {
        // rho_ee = (Omega^2/4) / (Delta^2 + Gamma^2/4 + Omega^2/2).
        let cases = [
            (TAU * 1e6, TAU * 0.5e6, TAU * 5.2e6),
            (TAU * 3e6, -TAU * 2e6, TAU * 5.2e6),
            (TAU * 0.2e6, TAU * 8e6, TAU * 1.0e6),
        ];
        for (omega, delta, gamma) in cases {
            let s = two_level(omega, delta, gamma);
            let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
            let expected =
                (omega * omega / 4.0) / (delta * delta + gamma * gamma / 4.0 + omega * omega / 2.0);
            assert_relative_eq!(ss.population(1), expected, max_relative = 1e-8);
        }
    }

    #[test]
    fn steady_state_dark_state_weak_probe() {
        // Two-photon resonance, no Rydberg decay/dephasing, weak probe:
        // Im rho_probe = 0 within 1e-8.
        let mut s = presets::three_level_eit(TAU * 1e3, TAU * 2e6, 0.0, 0.0);
        s.levels[2].population_decay_out = 0.0;
        let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
        assert!(ss.probe_coherence(&s).im.abs() < 1e-8);
    }

    #[test]
    fn steady_state_degenerate_errors() {
        // Decoupled excited pair with no decay: kernel dimension > 1.
        let s = LadderScheme::new(
            vec![
                crate::scheme::Level::new("g", 0.0),
                crate::scheme::Level::new("e", 0.0),
            ],
            vec![crate::scheme::Coupling::optical(0, 1, 0.0, 0.0, 0.0)],
            0,
        )
        .unwrap();
        let err = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap_err();
        assert!(matches!(err, RydError::DegenerateSteadyState(_)));
    }

    #[test]
    fn probe_absorption_zero_when_transparent() {
        let mut s = presets::three_level_eit(TAU * 1e3, TAU * 2e6, 0.0, 0.0);
        s.levels[2].population_decay_out = 0.0;
        let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
        let mu = natural_probe_dipole(&s).unwrap();
        let alpha = probe_absorption(&ss, &s, 3.1e16, mu).unwrap();
        assert!(alpha.abs() < 1e-6);
    }

    #[test]
    fn probe_absorption_linear_in_density() {
        let s = two_level(TAU * 0.1e6, 0.0, TAU * 5.2e6);
        let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
        let mu = natural_probe_dipole(&s).unwrap();
        let a1 = probe_absorption(&ss, &s, 1e16, mu).unwrap();
        let a2 = probe_absorption(&ss, &s, 2e16, mu).unwrap();
        assert_relative_eq!(a2, 2.0 * a1, max_relative = 1e-14);
    }

    #[test]
    fn probe_absorption_rejects_zero_rabi() {
        let s = two_level(TAU * 0.1e6, 0.0, TAU * 5.2e6);
        let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
        let mut s0 = s.clone();
        s0.couplings[0].rabi = 0.0;
        let err = probe_absorption(&ss, &s0, 1e16, 1e-29).unwrap_err();
        assert!(matches!(err, RydError::ZeroProbeRabi));
    }

    #[test]
    fn two_level_weak_probe_matches_on_resonance_cross_section() {
        // With the natural dipole, on-resonance weak-probe absorption equals
        // N * 3 lambda^2 / (2 pi).
        let lambda = 852e-9;
        let gamma = TAU * 5.2e6;
        let s = two_level(TAU * 1e3, 0.0, gamma);
        let ss = solve_scheme(&s, &DephasingBudget::zero(), 0.0).unwrap();
        let mu = natural_dipole(lambda, gamma);
        let n = 3.1e16;
        let alpha = probe_absorption(&ss, &s, n, mu).unwrap();
        let sigma0 = 3.0 * lambda * lambda / TAU;
        assert_relative_eq!(alpha, n * sigma0, max_relative = 1e-5);
    }
}
