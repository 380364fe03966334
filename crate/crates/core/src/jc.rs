//! Two-photon Jaynes–Cummings dynamics.
//!
//! `H = ω a†a + ½ω₀σ_z + g(a†²σ₋ + a²σ₊)` maps `|a,n⟩` only onto `|b,n+2⟩`, so
//! starting from `|a,n⟩` the state stays in that two-dimensional subspace and
//! everything here is exact 2×2 algebra, with no Fock-space truncation.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::invalid;
use crate::tensor::HermitianOperator;
use crate::{Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// Model parameters (`ħ = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcParams {
    /// Field frequency `ω`.
    pub omega: f64,
    /// Atomic transition frequency `ω₀`.
    pub omega0: f64,
    /// Atom–field coupling `g`.
    pub g: f64,
    /// Initial photon number.
    pub n: u32,
}

impl JcParams {
    pub fn new(omega: f64, omega0: f64, g: f64, n: u32) -> Result<Self> {
        for (name, v) in [("omega", omega), ("omega0", omega0), ("g", g)] {
            if !v.is_finite() {
                return Err(invalid!("{name} must be finite, got {v}"));
            }
        }
        Ok(JcParams {
            omega,
            omega0,
            g,
            n,
        })
    }

    /// Detuning `δ = ω₀ − 2ω`.
    pub fn delta(&self) -> f64 {
        self.omega0 - 2.0 * self.omega
    }

    /// `g√((n+1)(n+2))`, the matrix element between the two levels.
    pub fn coupling_element(&self) -> f64 {
        let n = f64::from(self.n);
        self.g * ((n + 1.0) * (n + 2.0)).sqrt()
    }

    /// Rabi frequency `ω₁ = 2g√((n+1)(n+2))`.
    pub fn omega1(&self) -> f64 {
        2.0 * self.coupling_element()
    }

    /// Generalized Rabi frequency `Ω = √(δ² + ω₁²)`.
    pub fn rabi(&self) -> f64 {
        self.delta().hypot(self.omega1())
    }
}

/// `H` restricted to `{|a,n⟩, |b,n+2⟩}`.
pub fn hamiltonian_block(p: &JcParams) -> HermitianOperator {
    let n = f64::from(p.n);
    let off = C64::new(p.coupling_element(), 0.0);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(p.omega * n + 0.5 * p.omega0, 0.0),
            off,
            off,
            C64::new(p.omega * (n + 2.0) - 0.5 * p.omega0, 0.0),
        ],
    );
    HermitianOperator::from_parts(vec![2], m)
}

/// `(sin θ)/Ω` and `cos θ` with `θ = Ωt/2`, finite as `Ω → 0`.
fn rotation(p: &JcParams, t: f64) -> (f64, f64) {
    let big = p.rabi();
    let theta = 0.5 * big * t;
    let sinc = if big == 0.0 {
        0.5 * t
    } else {
        theta.sin() / big
    };
    (theta.cos(), sinc)
}

/// The closed-form amplitudes in their published form:
///
/// `c₁ = e^{−iω(n+1)t} [cos θ + i(δ/Ω) sin θ]`,
/// `c₂ = −i e^{+iω(n+1)t} (ω₁/Ω) sin θ`, `θ = Ωt/2`.
///
/// The populations are exact. The amplitudes are not a solution of the
/// Schrödinger equation for [`hamiltonian_block`] up to a global phase; see
/// [`schrodinger_state`] for one that is.
pub fn analytic_state(p: &JcParams, t: f64) -> (C64, C64) {
    let (cos, sinc) = rotation(p, t);
    let phi = p.omega * (f64::from(p.n) + 1.0) * t;
    let c1 = C64::from_polar(1.0, -phi) * C64::new(cos, p.delta() * sinc);
    let c2 = C64::new(0.0, -1.0) * C64::from_polar(1.0, phi) * (p.omega1() * sinc);
    (c1, c2)
}

/// `e^{−iHt}|a,n⟩` in closed form:
///
/// `c₁ = e^{−iω(n+1)t} [cos θ − i(δ/Ω) sin θ]`,
/// `c₂ = −i e^{−iω(n+1)t} (ω₁/Ω) sin θ`.
pub fn schrodinger_state(p: &JcParams, t: f64) -> (C64, C64) {
    let (cos, sinc) = rotation(p, t);
    let global = C64::from_polar(1.0, -p.omega * (f64::from(p.n) + 1.0) * t);
    (
        global * C64::new(cos, -p.delta() * sinc),
        global * C64::new(0.0, -p.omega1() * sinc),
    )
}

/// Largest transfer `max_t |c₂|² = ω₁²/(δ² + ω₁²)`; zero when both vanish.
pub fn max_transfer(p: &JcParams) -> f64 {
    let w1 = p.omega1();
    if w1 == 0.0 {
        return 0.0;
    }
    w1 * w1 / (p.delta() * p.delta() + w1 * w1)
}

/// Sampled amplitudes and atom–field entropy.
#[derive(Clone, Debug, PartialEq)]
pub struct JcTrajectory {
    pub params: JcParams,
    pub times: Vec<f64>,
    pub c1: Vec<C64>,
    pub c2: Vec<C64>,
    pub entropy: Vec<f64>,
}

impl JcTrajectory {
    fn from_amplitudes(params: JcParams, times: Vec<f64>, c1: Vec<C64>, c2: Vec<C64>) -> Self {
        let entropy = c1
            .iter()
            .zip(&c2)
            .map(|(a, b)| two_level_entropy(a.norm_sqr(), b.norm_sqr()))
            .collect();
        JcTrajectory {
            params,
            times,
            c1,
            c2,
            entropy,
        }
    }

    /// `|c₂|²` per sample.
    pub fn p2(&self) -> Vec<f64> {
        self.c2.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Largest `| |c₁|² + |c₂|² − 1 |`.
    pub fn norm_defect(&self) -> f64 {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `−p₁ ln p₁ − p₂ ln p₂` after rescaling to `p₁ + p₂ = 1`, the entropy of either reduced state of
/// `c₁|a,n⟩ + c₂|b,n+2⟩`; `0 ln 0 = 0`.
pub fn two_level_entropy(p1: f64, p2: f64) -> f64 {
    let total = p1 + p2;
    if total <= 0.0 || total.is_nan() {
        return 0.0;
    }
    [p1 / total, p2 / total]
        .iter()
        .filter(|&&p| p > 1e-14)
        .map(|&p| -p * p.ln())
        .sum()
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(invalid!("time grid is empty"));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(invalid!("time grid contains non-finite value {t}"));
    }
    if let Some(k) = (1..times.len()).find(|&k| times[k] <= times[k - 1]) {
        return Err(invalid!(
            "time grid not strictly ascending at index {k}: {} then {}",
            times[k - 1],
            times[k]
        ));
    }
    Ok(())
}

/// The published closed form sampled on `times`.
pub fn analytic_trajectory(p: &JcParams, times: &[f64]) -> Result<JcTrajectory> {
    check_grid(times)?;
    let (c1, c2) = times.iter().map(|&t| analytic_state(p, t)).unzip();
    Ok(JcTrajectory::from_amplitudes(*p, times.to_vec(), c1, c2))
}

/// [`schrodinger_state`] sampled on `times`.
pub fn schrodinger_trajectory(p: &JcParams, times: &[f64]) -> Result<JcTrajectory> {
    check_grid(times)?;
    let (c1, c2) = times.iter().map(|&t| schrodinger_state(p, t)).unzip();
    Ok(JcTrajectory::from_amplitudes(*p, times.to_vec(), c1, c2))
}

/// Default largest RK4 step: `0.005 / max(ω₁, |δ|, |ω|, ‖H‖, 1)`.
pub fn default_step(p: &JcParams) -> f64 {
    let h = hamiltonian_block(p);
    let m = h.matrix();
    let radius = m.iter().map(|z| z.norm()).fold(0.0, f64::max) * 2.0;
    let scale = [p.omega1(), p.delta().abs(), p.omega.abs(), radius, 1.0]
        .into_iter()
        .fold(0.0, f64::max);
    0.005 / scale
}

/// Integrates `i dc/dt = H c` from `c(0) = (1, 0)` with classical RK4, using
/// [`default_step`] as the largest step.
pub fn evolve_numeric(p: &JcParams, times: &[f64]) -> Result<JcTrajectory> {
    evolve_numeric_with_step(p, times, default_step(p))
}

/// As [`evolve_numeric`] with an explicit largest step. Each interval between
/// samples (and from 0 to the first sample) is split into equal substeps.
pub fn evolve_numeric_with_step(
    p: &JcParams,
    times: &[f64],
    max_step: f64,
) -> Result<JcTrajectory> {
    check_grid(times)?;
    if !(max_step > 0.0 && max_step.is_finite()) {
        return Err(invalid!(
            "integration step must be positive and finite, got {max_step}"
        ));
    }
    let h = hamiltonian_block(p);
    let m = h.matrix();
    let minus_i = C64::new(0.0, -1.0);
    let a = [
        [m[(0, 0)] * minus_i, m[(0, 1)] * minus_i],
        [m[(1, 0)] * minus_i, m[(1, 1)] * minus_i],
    ];
    let f = |c: [C64; 2]| {
        [
            a[0][0] * c[0] + a[0][1] * c[1],
            a[1][0] * c[0] + a[1][1] * c[1],
        ]
    };

    let mut state = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let mut now = 0.0;
    let mut c1 = Vec::with_capacity(times.len());
    let mut c2 = Vec::with_capacity(times.len());
    for &t in times {
        let span = t - now;
        let steps = (span.abs() / max_step)
            .ceil()
            .max(if span == 0.0 { 0.0 } else { 1.0 }) as usize;
        if steps > 0 {
            let dt = span / steps as f64;
            let half = dt * 0.5;
            for _ in 0..steps {
                let k1 = f(state);
                let k2 = f([state[0] + k1[0] * half, state[1] + k1[1] * half]);
                let k3 = f([state[0] + k2[0] * half, state[1] + k2[1] * half]);
                let k4 = f([state[0] + k3[0] * dt, state[1] + k3[1] * dt]);
                for i in 0..2 {
                    state[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                }
            }
        }
        now = t;
        c1.push(state[0]);
        c2.push(state[1]);
    }
    Ok(JcTrajectory::from_amplitudes(*p, times.to_vec(), c1, c2))
}

/// The entropy column of a trajectory, recomputed from its amplitudes.
pub fn entanglement_trajectory(traj: &JcTrajectory) -> Vec<f64> {
    traj.c1
        .iter()
        .zip(&traj.c2)
        .map(|(a, b)| two_level_entropy(a.norm_sqr(), b.norm_sqr()))
        .collect()
}

/// Largest deviation between two trajectories on the same grid, each sample
/// compared after removing the best global phase for that sample.
pub fn phase_aligned_deviation(a: &JcTrajectory, b: &JcTrajectory) -> Result<f64> {
    if a.times != b.times {
        return Err(invalid!("trajectories sampled on different grids"));
    }
    let mut worst: f64 = 0.0;
    for k in 0..a.times.len() {
        let x = [a.c1[k], a.c2[k]];
        let y = [b.c1[k], b.c2[k]];
        let ip = y[0].conj() * x[0] + y[1].conj() * x[1];
        let phase = if ip.norm() > 1e-300 {
            ip / ip.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..2 {
            worst = worst.max((x[i] - y[i] * phase).norm());
        }
    }
    Ok(worst)
}

/// Uniform grid `0, T/steps, …, T` over one full Rabi period `T = 2π/Ω`.
pub fn rabi_period_grid(p: &JcParams, steps: usize) -> Result<Vec<f64>> {
    let big = p.rabi();
    if big == 0.0 || steps == 0 {
        return Err(invalid!(
            "a Rabi-period grid needs Ω > 0 and at least one step"
        ));
    }
    let period = 2.0 * core::f64::consts::PI / big;
    Ok((0..=steps)
        .map(|k| period * k as f64 / steps as f64)
        .collect())
}

/// `max_t |c₂|²` measured on a numerically integrated trajectory over one
/// Rabi period.
pub fn measured_max_transfer(p: &JcParams, steps: usize) -> Result<f64> {
    let grid = rabi_period_grid(p, steps)?;
    Ok(evolve_numeric(p, &grid)?
        .p2()
        .into_iter()
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{LN_2, PI};

    fn params(omega: f64, omega0: f64, g: f64, n: u32) -> JcParams {
        JcParams::new(omega, omega0, g, n).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p = params(1.0, 3.0, 0.5, 1);
        assert_eq!(p.delta(), 1.0);
        assert!((p.omega1() - 6f64.sqrt()).abs() < 1e-15);
        assert!(JcParams::new(f64::NAN, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn block_examples() {
        let h = hamiltonian_block(&params(0.0, 0.0, 1.0, 0));
        let s2 = 2f64.sqrt();
        assert!((h.matrix()[(0, 1)].re - s2).abs() < 1e-15 && h.matrix()[(0, 0)].norm() == 0.0);
        let h = hamiltonian_block(&params(0.7, 1.1, 0.0, 3));
        assert_eq!(h.matrix()[(0, 1)].norm(), 0.0);
        // Gap at resonance equals ω₁.
        let p = params(0.6, 1.2, 0.3, 2);
        let e = h_eigs(&p);
        assert!((e[1] - e[0] - p.omega1()).abs() < 1e-12);
    }

    fn h_eigs(p: &JcParams) -> Vec<f64> {
        hamiltonian_block(p).eigh().unwrap().values
    }

    #[test]
    fn analytic_examples() {
        let p = params(0.4, 1.3, 0.7, 2);
        let (c1, c2) = analytic_state(&p, 0.0);
        assert_eq!((c1, c2), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        let free = params(0.4, 1.3, 0.0, 2);
        for t in [0.5, 3.0, 40.0] {
            assert_eq!(analytic_state(&free, t).1.norm(), 0.0);
        }
        let res = params(0.5, 1.0, 0.3, 1);
        let (_, c2) = analytic_state(&res, PI / res.omega1());
        assert!((c2.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn printed_and_exact_share_populations_but_not_phases() {
        let p = params(0.8, 2.1, 0.4, 1);
        let mut worst_pop: f64 = 0.0;
        let times: Vec<f64> = (1..200).map(|k| k as f64 * 0.05).collect();
        for &t in &times {
            let (a1, a2) = analytic_state(&p, t);
            let (s1, s2) = schrodinger_state(&p, t);
            worst_pop = worst_pop
                .max((a2.norm_sqr() - s2.norm_sqr()).abs())
                .max((a1.norm_sqr() - s1.norm_sqr()).abs());
        }
        assert!(worst_pop < 1e-14);
        let a = analytic_trajectory(&p, &times).unwrap();
        let s = schrodinger_trajectory(&p, &times).unwrap();
        assert!(phase_aligned_deviation(&a, &s).unwrap() > 1e-2);
    }

    #[test]
    fn numeric_matches_schrodinger() {
        for p in [
            params(0.8, 2.1, 0.4, 1),
            params(1.5, 0.0, 2.0, 3),
            params(0.0, 0.0, 0.1, 0),
        ] {
            let times: Vec<f64> = (0..=400)
                .map(|k| k as f64 * 20.0 / p.g.max(0.1) / 400.0)
                .collect();
            let num = evolve_numeric(&p, &times).unwrap();
            let exact = schrodinger_trajectory(&p, &times).unwrap();
            assert!(
                phase_aligned_deviation(&num, &exact).unwrap() < 1e-8,
                "{p:?}"
            );
            // Not only up to phase: the frames coincide.
            let raw = num
                .c1
                .iter()
                .zip(&exact.c1)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(raw < 1e-8);
            assert!(num.norm_defect() < 1e-10);
        }
    }

    #[test]
    fn zero_coupling_and_resonance() {
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.3).collect();
        let free = evolve_numeric(&params(0.9, 0.2, 0.0, 2), &times).unwrap();
        assert!(free.c2.iter().all(|c| c.norm() == 0.0));
        assert!(free.entropy.iter().all(|&s| s.abs() < 1e-12));

        let p = params(0.5, 1.0, 0.25, 0);
        let w1 = p.omega1();
        let grid = [PI / (2.0 * w1), PI / w1];
        let t = evolve_numeric(&p, &grid).unwrap();
        assert!((t.entropy[0] - LN_2).abs() < 1e-8);
        assert!((t.p2()[1] - 1.0).abs() < 1e-8);
        assert!((t.p2()[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn grid_validation() {
        let p = params(1.0, 1.0, 1.0, 0);
        assert!(evolve_numeric(&p, &[0.0, 1.0, 1.0]).is_err());
        assert!(evolve_numeric(&p, &[2.0, 1.0]).is_err());
        assert!(evolve_numeric(&p, &[]).is_err());
        assert!(evolve_numeric(&p, &[0.0, f64::INFINITY]).is_err());
        assert!(evolve_numeric_with_step(&p, &[1.0], 0.0).is_err());
        assert!(evolve_numeric(&p, &[-1.0, 0.5]).is_ok());
    }

    #[test]
    fn detuning_law() {
        let base = params(0.5, 1.0, 0.2, 1);
        let w1 = base.omega1();
        let mut last = f64::INFINITY;
        for k in 0..=10 {
            let delta = w1 * k as f64;
            let p = params(0.5, 1.0 + delta, 0.2, 1);
            let measured = measured_max_transfer(&p, 4000).unwrap();
            assert!((measured - max_transfer(&p)).abs() < 1e-6, "δ = {delta}");
            assert!(measured <= last + 1e-12);
            last = measured;
        }
    }

    #[test]
    fn entropy_bounds() {
        assert_eq!(two_level_entropy(1.0, 0.0), 0.0);
        assert!((two_level_entropy(0.5, 0.5) - LN_2).abs() < 1e-15);
        let p = params(0.3, 0.9, 1.3, 2);
        let times: Vec<f64> = (0..500).map(|k| k as f64 * 0.01).collect();
        let t = evolve_numeric(&p, &times).unwrap();
        assert!(t.entropy.iter().all(|&s| (0.0..=LN_2 + 1e-12).contains(&s)));
        assert_eq!(entanglement_trajectory(&t), t.entropy);
    }
}
