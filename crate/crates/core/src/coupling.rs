//! Coupled eigenbases `|S' S M⟩` of two- and three-spin systems.
//!
//! Two independent constructions are provided. [`coupled_eigenbasis`]
//! diagonalizes `S²` inside each `S_z` block and splits the remaining
//! degeneracy with the pair operator `S₁₂²`. [`cg_eigenbasis`] assembles the
//! same states from exact Clebsch–Gordan products, coupling particles 1 and 2
//! first and then particle 3.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use nalgebra::DMatrix;

use crate::cg::{clebsch_gordan_exact, coupled_values, projections, SignedSqrt};
use crate::error::invalid;
use crate::spin::{total_spin, ProductBasis, SpinSpecies};
use crate::tensor::{apply_matrix, canonical_phase, eigh_matrix, phase_deviation, StateVector};
use crate::{Error, HalfInt, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// Eigenvalues closer than this are treated as one degenerate level.
const LEVEL_GAP: f64 = 1e-8;

/// Coupling order. Only `(1,2)` then `3` is supported for three particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Two particles, labels `(S, M)`.
    PairOnly,
    /// Three particles, labels `(S', S, M)` with `S'` the spin of particles 1 and 2.
    PairThenThird,
}

impl Scheme {
    /// The scheme matching a particle count.
    pub fn for_len(n: usize) -> Result<Scheme> {
        match n {
            2 => Ok(Scheme::PairOnly),
            3 => Ok(Scheme::PairThenThird),
            _ => Err(invalid!("coupling supports 2 or 3 particles, got {n}")),
        }
    }

    fn check(self, n: usize) -> Result<()> {
        if Scheme::for_len(n)? != self {
            return Err(invalid!("scheme {self:?} does not apply to {n} particles"));
        }
        Ok(())
    }
}

/// `(S', S, M)`; `S'` is absent for two-particle states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub s_intermediate: Option<HalfInt>,
    pub s_total: HalfInt,
    pub m_total: HalfInt,
}

impl QuantumNumbers {
    pub fn pair(s: HalfInt, m: HalfInt) -> Self {
        QuantumNumbers {
            s_intermediate: None,
            s_total: s,
            m_total: m,
        }
    }

    pub fn triple(s_pair: HalfInt, s: HalfInt, m: HalfInt) -> Self {
        QuantumNumbers {
            s_intermediate: Some(s_pair),
            s_total: s,
            m_total: m,
        }
    }

    /// The same multiplet one step down in `M`.
    pub fn lowered(self) -> Self {
        QuantumNumbers {
            m_total: self.m_total - HalfInt::ONE,
            ..self
        }
    }
}

/// Basis order: `S'` descending, then `S` descending, then `M` descending.
impl Ord for QuantumNumbers {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |q: &Self| (q.s_intermediate, q.s_total, q.m_total);
        key(other).cmp(&key(self))
    }
}

impl PartialOrd for QuantumNumbers {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(sp) = self.s_intermediate {
            write!(f, "S'={sp} ")?;
        }
        write!(f, "S={} M={}", self.s_total, self.m_total)
    }
}

/// One simultaneous eigenstate of `S²`, `S_z` and (for three particles) `S₁₂²`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledBasisState {
    pub numbers: QuantumNumbers,
    pub vector: StateVector,
    /// Exact amplitudes, present for states built from Clebsch–Gordan products.
    pub exact: Option<Vec<SignedSqrt>>,
}

/// Every admissible label of the system, in basis order.
pub fn coupled_labels(system: &[SpinSpecies], scheme: Scheme) -> Result<Vec<QuantumNumbers>> {
    scheme.check(system.len())?;
    let (j1, j2) = (system[0].spin(), system[1].spin());
    let mut out = Vec::new();
    for sp in coupled_values(j1, j2) {
        match scheme {
            Scheme::PairOnly => out.extend(
                projections(sp)
                    .into_iter()
                    .map(|m| QuantumNumbers::pair(sp, m)),
            ),
            Scheme::PairThenThird => {
                for s in coupled_values(sp, system[2].spin()) {
                    out.extend(
                        projections(s)
                            .into_iter()
                            .map(|m| QuantumNumbers::triple(sp, s, m)),
                    );
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Analytic basis: each state's amplitudes are Clebsch–Gordan coefficients
/// (products of two for three particles), carried exactly.
pub fn cg_eigenbasis(system: &[SpinSpecies], scheme: Scheme) -> Result<Vec<CoupledBasisState>> {
    let labels = coupled_labels(system, scheme)?;
    let basis = ProductBasis::new(system)?;
    let spins: Vec<HalfInt> = system.iter().map(|s| s.spin()).collect();
    labels
        .into_iter()
        .map(|q| {
            let exact = (0..basis.dim())
                .map(|index| {
                    let ms = basis.labels(index);
                    let m12 = ms[0] + ms[1];
                    match q.s_intermediate {
                        None => clebsch_gordan_exact(
                            spins[0], ms[0], spins[1], ms[1], q.s_total, q.m_total,
                        ),
                        Some(sp) => {
                            let first =
                                clebsch_gordan_exact(spins[0], ms[0], spins[1], ms[1], sp, m12)?;
                            if first.is_zero() {
                                return Ok(first);
                            }
                            let second = clebsch_gordan_exact(
                                sp, m12, spins[2], ms[2], q.s_total, q.m_total,
                            )?;
                            first.checked_mul(&second)
                        }
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let amps = exact.iter().map(|c| C64::new(c.to_f64(), 0.0)).collect();
            Ok(CoupledBasisState {
                numbers: q,
                vector: StateVector::new(basis.dims(), amps)?,
                exact: Some(exact),
            })
        })
        .collect()
}

/// Splits ascending eigenvalues into runs closer than [`LEVEL_GAP`].
fn levels(values: &[f64]) -> Vec<(f64, Vec<usize>)> {
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some((first, members)) if (v - *first).abs() < LEVEL_GAP => members.push(k),
            _ => out.push((v, vec![k])),
        }
    }
    out
}

/// Reads `j` off an eigenvalue `j(j+1)`.
fn spin_from_casimir(lambda: f64) -> Result<HalfInt> {
    let j = (-1.0 + (1.0 + 4.0 * lambda).max(0.0).sqrt()) / 2.0;
    let j = HalfInt::from_doubled((2.0 * j).round() as i32);
    if (j.casimir() - lambda).abs() > 1e-8 {
        return Err(Error::Degenerate(alloc::format!(
            "eigenvalue {lambda} is not of the form j(j+1)"
        )));
    }
    Ok(j)
}

fn restrict(m: &DMatrix<C64>, idx: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

/// Numerical basis by simultaneous diagonalization.
///
/// Within each `S_z` block, `S²` is diagonalized; for three particles each `S`
/// eigenspace is then diagonalized under `S₁₂²`. The phase of every multiplet
/// is fixed on its top state (largest-magnitude amplitude real positive, first
/// such index on ties); each lower state is rotated so `⟨M−1|S₋|M⟩ > 0`.
pub fn coupled_eigenbasis(
    system: &[SpinSpecies],
    scheme: Scheme,
) -> Result<Vec<CoupledBasisState>> {
    scheme.check(system.len())?;
    let basis = ProductBasis::new(system)?;
    let dims = basis.dims();
    let n = basis.dim();
    let all: Vec<usize> = (0..system.len()).collect();
    let total = total_spin(system, &all)?;
    let pair = match scheme {
        Scheme::PairOnly => None,
        Scheme::PairThenThird => Some(total_spin(system, &[0, 1])?.squared),
    };

    let mut blocks: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for index in 0..n {
        blocks
            .entry(basis.total_m(index).doubled())
            .or_default()
            .push(index);
    }

    let mut found: BTreeMap<QuantumNumbers, Vec<C64>> = BTreeMap::new();
    for (&m2, idx) in &blocks {
        let m = HalfInt::from_doubled(m2);
        let block = eigh_matrix(restrict(total.squared.matrix(), idx))?;
        for (lambda, members) in levels(&block.values) {
            let s = spin_from_casimir(lambda)?;
            let q = block.vectors.select_columns(&members);
            let split: Vec<(Option<HalfInt>, Vec<C64>)> = match &pair {
                None => q
                    .column_iter()
                    .map(|c| (None, c.iter().copied().collect()))
                    .collect(),
                Some(p) => {
                    let inner = q.adjoint() * restrict(p.matrix(), idx) * &q;
                    let e = eigh_matrix(crate::tensor::symmetrize(inner))?;
                    let mut out = Vec::new();
                    for (mu, sub) in levels(&e.values) {
                        let sp = spin_from_casimir(mu)?;
                        for &k in &sub {
                            let v = &q * e.vectors.column(k);
                            out.push((Some(sp), v.iter().copied().collect()));
                        }
                    }
                    out
                }
            };
            for (sp, local) in split {
                let numbers = QuantumNumbers {
                    s_intermediate: sp,
                    s_total: s,
                    m_total: m,
                };
                let mut amps = vec![C64::new(0.0, 0.0); n];
                for (a, &i) in idx.iter().enumerate() {
                    amps[i] = local[a];
                }
                if found.insert(numbers, amps).is_some() {
                    return Err(Error::Degenerate(alloc::format!(
                        "{numbers} occurs more than once; the labels do not resolve the spectrum"
                    )));
                }
            }
        }
    }

    let mut states: Vec<CoupledBasisState> = Vec::with_capacity(n);
    let keys: Vec<QuantumNumbers> = found.keys().copied().collect();
    for q in keys {
        let amps = if q.m_total == q.s_total {
            canonical_phase(&found[&q])
        } else {
            let above = QuantumNumbers {
                m_total: q.m_total + HalfInt::ONE,
                ..q
            };
            let lowered = apply_matrix(&total.lowering, &found[&above]);
            let own = &found[&q];
            let c: C64 = own.iter().zip(&lowered).map(|(a, b)| a.conj() * b).sum();
            let phase = c / c.norm();
            own.iter().map(|a| a * phase).collect()
        };
        found.insert(q, amps.clone());
        states.push(CoupledBasisState {
            numbers: q,
            vector: StateVector::new(dims.clone(), amps)?,
            exact: None,
        });
    }
    debug_assert!(states.windows(2).all(|w| w[0].numbers < w[1].numbers));
    Ok(states)
}

/// Largest eigen-equation residual of a state: `‖(S² − S(S+1))v‖`,
/// `‖(S_z − M)v‖`, and `‖(S₁₂² − S'(S'+1))v‖` when `S'` is present.
pub fn invariant_residual(state: &CoupledBasisState, system: &[SpinSpecies]) -> Result<f64> {
    let all: Vec<usize> = (0..system.len()).collect();
    let total = total_spin(system, &all)?;
    let v = state.vector.amplitudes();
    let residual = |m: &DMatrix<C64>, eig: f64| -> f64 {
        apply_matrix(m, v)
            .iter()
            .zip(v)
            .map(|(a, b)| (a - b * eig).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let q = state.numbers;
    let mut worst = residual(total.squared.matrix(), q.s_total.casimir())
        .max(residual(total.z.matrix(), q.m_total.as_f64()));
    if let Some(sp) = q.s_intermediate {
        let pair = total_spin(system, &[0, 1])?;
        worst = worst.max(residual(pair.squared.matrix(), sp.casimir()));
    }
    Ok(worst)
}

/// Largest violation of `S₋|S' S M⟩ = √(S(S+1) − M(M−1)) |S' S M−1⟩` over the basis.
pub fn ladder_defect(states: &[CoupledBasisState], system: &[SpinSpecies]) -> Result<f64> {
    let all: Vec<usize> = (0..system.len()).collect();
    let lowering = total_spin(system, &all)?.lowering;
    let mut worst: f64 = 0.0;
    for st in states {
        let q = st.numbers;
        if q.m_total == -q.s_total {
            continue;
        }
        let below =
            find(states, q.lowered()).ok_or_else(|| invalid!("basis lacks {}", q.lowered()))?;
        let m = q.m_total.as_f64();
        let factor = (q.s_total.casimir() - m * (m - 1.0)).sqrt();
        let image = apply_matrix(&lowering, st.vector.amplitudes());
        for (a, b) in image.iter().zip(below.vector.amplitudes()) {
            worst = worst.max((a - b * factor).norm());
        }
    }
    Ok(worst)
}

/// The state carrying `numbers`, if any.
pub fn find(states: &[CoupledBasisState], numbers: QuantumNumbers) -> Option<&CoupledBasisState> {
    states.iter().find(|s| s.numbers == numbers)
}

/// Matrix whose columns are the basis states, in order.
pub fn basis_matrix(states: &[CoupledBasisState]) -> Result<DMatrix<C64>> {
    let first = states.first().ok_or_else(|| invalid!("empty basis"))?;
    let n = first.vector.dim();
    if states.iter().any(|s| s.vector.dim() != n) {
        return Err(invalid!("basis states of different dimensions"));
    }
    Ok(DMatrix::from_fn(n, states.len(), |i, k| {
        states[k].vector.amplitudes()[i]
    }))
}

/// Largest global-phase-adjusted deviation between two bases that carry the
/// same labels in the same order.
pub fn compare_bases(a: &[CoupledBasisState], b: &[CoupledBasisState]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(invalid!(
            "bases of different sizes: {} vs {}",
            a.len(),
            b.len()
        ));
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        if x.numbers != y.numbers {
            return Err(invalid!("label mismatch: {} vs {}", x.numbers, y.numbers));
        }
        worst = worst.max(phase_deviation(
            x.vector.amplitudes(),
            y.vector.amplitudes(),
        ));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: SpinSpecies = SpinSpecies::ELECTRON;
    const P: SpinSpecies = SpinSpecies::PHOTON;

    fn hi(d: i32) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    fn systems() -> [Vec<SpinSpecies>; 4] {
        [vec![E, E], vec![E, E, E], vec![P, P], vec![P, P, P]]
    }

    #[test]
    fn label_counts() {
        let counts = |sys: &[SpinSpecies]| {
            let mut c: BTreeMap<(Option<HalfInt>, HalfInt), usize> = BTreeMap::new();
            for q in coupled_labels(sys, Scheme::for_len(sys.len()).unwrap()).unwrap() {
                *c.entry((q.s_intermediate, q.s_total)).or_default() += 1;
            }
            c
        };
        let three_e = counts(&[E, E, E]);
        assert_eq!(three_e[&(Some(hi(2)), hi(3))], 4);
        assert_eq!(three_e[&(Some(hi(2)), hi(1))], 2);
        assert_eq!(three_e[&(Some(hi(0)), hi(1))], 2);
        let three_p = counts(&[P, P, P]);
        let keys: Vec<(i32, i32)> = three_p
            .keys()
            .map(|(sp, s)| (sp.unwrap().doubled() / 2, s.doubled() / 2))
            .collect();
        assert_eq!(
            keys,
            vec![(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3)]
        );
        assert_eq!(three_p.values().sum::<usize>(), 27);
    }

    #[test]
    fn ordering() {
        let labels = coupled_labels(&[E, E], Scheme::PairOnly).unwrap();
        let expect = [(2, 2), (2, 0), (2, -2), (0, 0)];
        for (q, (s, m)) in labels.iter().zip(expect) {
            assert_eq!((q.s_total.doubled(), q.m_total.doubled()), (s, m));
        }
        let three = coupled_labels(&[E, E, E], Scheme::PairThenThird).unwrap();
        assert_eq!(three[0], QuantumNumbers::triple(hi(2), hi(3), hi(3)));
        assert_eq!(three[7], QuantumNumbers::triple(hi(0), hi(1), hi(-1)));
    }

    #[test]
    fn scheme_validation() {
        assert!(coupled_eigenbasis(&[E, E], Scheme::PairThenThird).is_err());
        assert!(coupled_eigenbasis(&[E, E, E, E], Scheme::PairThenThird).is_err());
        assert!(cg_eigenbasis(&[E], Scheme::PairOnly).is_err());
    }

    #[test]
    fn two_electron_basis() {
        let b = coupled_eigenbasis(&[E, E], Scheme::PairOnly).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let amps =
            |k: usize| -> Vec<f64> { b[k].vector.amplitudes().iter().map(|z| z.re).collect() };
        assert_eq!(amps(0), vec![1.0, 0.0, 0.0, 0.0]);
        for (got, want) in amps(1).iter().zip([0.0, r, r, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in amps(3).iter().zip([0.0, r, -r, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn both_routes_agree() {
        for sys in systems() {
            let scheme = Scheme::for_len(sys.len()).unwrap();
            let diag = coupled_eigenbasis(&sys, scheme).unwrap();
            let cg = cg_eigenbasis(&sys, scheme).unwrap();
            assert_eq!(diag.len(), sys.iter().map(|s| s.dim()).product::<usize>());
            assert!(compare_bases(&diag, &cg).unwrap() < 1e-10, "{sys:?}");
        }
    }

    #[test]
    fn eigen_equations_ladder_and_completeness() {
        for sys in systems() {
            let scheme = Scheme::for_len(sys.len()).unwrap();
            for basis in [
                coupled_eigenbasis(&sys, scheme).unwrap(),
                cg_eigenbasis(&sys, scheme).unwrap(),
            ] {
                for st in &basis {
                    assert!(
                        invariant_residual(st, &sys).unwrap() < 1e-10,
                        "{}",
                        st.numbers
                    );
                }
                assert!(ladder_defect(&basis, &sys).unwrap() < 1e-10);
                let u = basis_matrix(&basis).unwrap();
                let id = DMatrix::<C64>::identity(u.nrows(), u.nrows());
                assert!((u.adjoint() * &u - id).iter().all(|z| z.norm() < 1e-10));
            }
        }
    }

    #[test]
    fn three_photon_w_state_exact() {
        let b = cg_eigenbasis(&[P, P, P], Scheme::PairThenThird).unwrap();
        let st = find(&b, QuantumNumbers::triple(hi(4), hi(6), hi(4))).unwrap();
        let exact = st.exact.as_ref().unwrap();
        let basis = ProductBasis::new(&[P, P, P]).unwrap();
        let third = SignedSqrt::new(false, 1, 3).unwrap();
        for (i, c) in exact.iter().enumerate() {
            let excited = basis.labels(i).iter().filter(|m| m.doubled() == 0).count();
            if basis.total_m(i) == 2 && excited == 1 {
                assert_eq!(*c, third);
            } else {
                assert!(c.is_zero());
            }
        }
    }

    #[test]
    fn mixed_species() {
        let sys = [E, P];
        let d = coupled_eigenbasis(&sys, Scheme::PairOnly).unwrap();
        let c = cg_eigenbasis(&sys, Scheme::PairOnly).unwrap();
        assert_eq!(d.len(), 6);
        assert!(compare_bases(&d, &c).unwrap() < 1e-10);
    }
}
