//! Spin operators for arbitrary `s`, the Cartesian photon polarization frame,
//! and isotropic spin–spin Hamiltonians `g Σ_{i<j} sᵢ·sⱼ`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::invalid;
use crate::tensor::{symmetrize, HermitianOperator};
use crate::{Error, HalfInt, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// A particle's spin magnitude `s ≥ ½`; its factor space has dimension `2s+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinSpecies {
    two_s: u32,
}

impl SpinSpecies {
    pub const ELECTRON: SpinSpecies = SpinSpecies { two_s: 1 };
    /// Photons are treated as plain spin-1 particles with all three `m` states.
    pub const PHOTON: SpinSpecies = SpinSpecies { two_s: 2 };

    pub fn new(s: HalfInt) -> Result<Self> {
        if s.doubled() < 1 {
            return Err(invalid!("spin must be at least 1/2, got {s}"));
        }
        Ok(SpinSpecies {
            two_s: s.doubled() as u32,
        })
    }

    /// The species whose factor space has dimension `dim`.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(invalid!(
                "spin factor dimension must be at least 2, got {dim}"
            ));
        }
        Ok(SpinSpecies {
            two_s: (dim - 1) as u32,
        })
    }

    pub fn spin(self) -> HalfInt {
        HalfInt::from_doubled(self.two_s as i32)
    }

    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    /// Half-integer spin.
    pub fn is_fermion(self) -> bool {
        self.two_s % 2 == 1
    }

    /// `m = s, s-1, …, -s`, the order of the factor's basis.
    pub fn m_values(self) -> Vec<HalfInt> {
        let s = self.two_s as i32;
        (0..=self.two_s as i32)
            .map(|k| HalfInt::from_doubled(s - 2 * k))
            .collect()
    }

    /// Position of `m` within the factor basis.
    pub fn index_of(self, m: HalfInt) -> Result<usize> {
        let s = self.two_s as i32;
        let d = m.doubled();
        if d.abs() > s || (s - d) % 2 != 0 {
            return Err(invalid!("m = {m} is not a state of spin {}", self.spin()));
        }
        Ok(((s - d) / 2) as usize)
    }

    pub fn m_at(self, index: usize) -> HalfInt {
        HalfInt::from_doubled(self.two_s as i32 - 2 * index as i32)
    }
}

/// `e` (electron), `p` (photon), or an explicit spin such as `3/2`.
impl FromStr for SpinSpecies {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" => Ok(SpinSpecies::ELECTRON),
            "p" => Ok(SpinSpecies::PHOTON),
            other => SpinSpecies::new(other.parse()?),
        }
    }
}

impl fmt::Display for SpinSpecies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpinSpecies::ELECTRON => f.write_str("e"),
            SpinSpecies::PHOTON => f.write_str("p"),
            other => write!(f, "{}", other.spin()),
        }
    }
}

/// Parses a comma-separated system such as `e,e,e` or `p,p`.
pub fn parse_system(spec: &str) -> Result<Vec<SpinSpecies>> {
    spec.split(',').map(str::parse).collect()
}

/// Energy scale of a spin–spin coupling (ħ = 1). Any finite value, either sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingStrength(f64);

impl CouplingStrength {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(invalid!("coupling strength must be finite, got {value}"));
        }
        Ok(CouplingStrength(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Cartesian spin components plus the ladder operators they were built from.
#[derive(Clone, Debug)]
pub struct SpinMatrices {
    pub x: HermitianOperator,
    pub y: HermitianOperator,
    pub z: HermitianOperator,
    pub raising: DMatrix<C64>,
    pub lowering: DMatrix<C64>,
}

impl SpinMatrices {
    pub fn components(&self) -> [&HermitianOperator; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// `Sx² + Sy² + Sz²`.
    pub fn squared(&self) -> HermitianOperator {
        let m = self
            .components()
            .iter()
            .map(|c| c.matrix() * c.matrix())
            .fold(DMatrix::zeros(self.z.dim(), self.z.dim()), |acc, x| acc + x);
        HermitianOperator::from_parts(self.z.dims().to_vec(), symmetrize(m))
    }
}

/// Spin matrices of a single particle in the `m`-descending basis.
///
/// `S₊|m⟩ = √(s(s+1) − m(m+1)) |m+1⟩` with real positive entries
/// (Condon–Shortley); `Sx = (S₊+S₋)/2`, `Sy = (S₊−S₋)/2i`.
pub fn spin_matrices(species: SpinSpecies) -> SpinMatrices {
    let d = species.dim();
    let s = species.spin().casimir();
    let mut raising = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        let m = species.m_at(i).as_f64();
        raising[(i - 1, i)] = C64::new((s - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lowering = raising.adjoint();
    let half = C64::new(0.5, 0.0);
    let x = (&raising + &lowering) * half;
    let y = (&raising - &lowering) * C64::new(0.0, -0.5);
    let z = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(species.m_at(i).as_f64(), 0.0)
        } else {
            C64::zero()
        }
    });
    SpinMatrices {
        x: HermitianOperator::from_parts(vec![d], x),
        y: HermitianOperator::from_parts(vec![d], y),
        z: HermitianOperator::from_parts(vec![d], z),
        raising,
        lowering,
    }
}

/// Labels and indexing for the product basis of a spin system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductBasis {
    species: Vec<SpinSpecies>,
}

impl ProductBasis {
    pub fn new(species: &[SpinSpecies]) -> Result<Self> {
        if species.is_empty() {
            return Err(invalid!("empty spin system"));
        }
        Ok(ProductBasis {
            species: species.to_vec(),
        })
    }

    pub fn species(&self) -> &[SpinSpecies] {
        &self.species
    }

    pub fn dims(&self) -> Vec<usize> {
        self.species.iter().map(|s| s.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.species.iter().map(|s| s.dim()).product()
    }

    /// Flat index of the product state `|m₁ m₂ …⟩`.
    pub fn index_of(&self, ms: &[HalfInt]) -> Result<usize> {
        if ms.len() != self.species.len() {
            return Err(invalid!(
                "{} labels for a {}-particle system",
                ms.len(),
                self.species.len()
            ));
        }
        let mut index = 0;
        for (sp, &m) in self.species.iter().zip(ms) {
            index = index * sp.dim() + sp.index_of(m)?;
        }
        Ok(index)
    }

    /// The `m` labels of the product state at `index`.
    pub fn labels(&self, mut index: usize) -> Vec<HalfInt> {
        let mut out = vec![HalfInt::ZERO; self.species.len()];
        for (k, sp) in self.species.iter().enumerate().rev() {
            out[k] = sp.m_at(index % sp.dim());
            index /= sp.dim();
        }
        out
    }

    pub fn total_m(&self, index: usize) -> HalfInt {
        self.labels(index)
            .into_iter()
            .fold(HalfInt::ZERO, |a, m| a + m)
    }
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on factor `site`.
pub fn embed(op: &DMatrix<C64>, site: usize, dims: &[usize]) -> DMatrix<C64> {
    dims.iter()
        .enumerate()
        .fold(DMatrix::identity(1, 1), |acc, (k, &d)| {
            if k == site {
                acc.kronecker(op)
            } else {
                acc.kronecker(&DMatrix::<C64>::identity(d, d))
            }
        })
}

/// Sum of the spin vectors of the particles in `members`, embedded in the
/// full product space.
#[derive(Clone, Debug)]
pub struct TotalSpin {
    pub x: HermitianOperator,
    pub y: HermitianOperator,
    pub z: HermitianOperator,
    pub squared: HermitianOperator,
    pub lowering: DMatrix<C64>,
}

pub fn total_spin(system: &[SpinSpecies], members: &[usize]) -> Result<TotalSpin> {
    let basis = ProductBasis::new(system)?;
    let dims = basis.dims();
    let n = basis.dim();
    if members.is_empty() || members.iter().any(|&m| m >= system.len()) {
        return Err(invalid!(
            "invalid member set {members:?} for {} particles",
            system.len()
        ));
    }
    let mut comps = [
        DMatrix::zeros(n, n),
        DMatrix::zeros(n, n),
        DMatrix::zeros(n, n),
    ];
    let mut lowering = DMatrix::zeros(n, n);
    for &site in members {
        let sm = spin_matrices(system[site]);
        for (acc, c) in comps.iter_mut().zip(sm.components()) {
            *acc += embed(c.matrix(), site, &dims);
        }
        lowering += embed(&sm.lowering, site, &dims);
    }
    let squared = comps
        .iter()
        .map(|c| c * c)
        .fold(DMatrix::zeros(n, n), |a, b| a + b);
    let [x, y, z] = comps;
    Ok(TotalSpin {
        x: HermitianOperator::from_parts(dims.clone(), x),
        y: HermitianOperator::from_parts(dims.clone(), y),
        z: HermitianOperator::from_parts(dims.clone(), z),
        squared: HermitianOperator::from_parts(dims, symmetrize(squared)),
        lowering,
    })
}

/// `sᵢ·sⱼ` embedded in the product space of `system`.
pub fn spin_dot(system: &[SpinSpecies], i: usize, j: usize) -> Result<HermitianOperator> {
    if i >= system.len() || j >= system.len() || i == j {
        return Err(invalid!("spin_dot({i}, {j}) on {} particles", system.len()));
    }
    let dims: Vec<usize> = system.iter().map(|s| s.dim()).collect();
    let (a, b) = (spin_matrices(system[i]), spin_matrices(system[j]));
    let n: usize = dims.iter().product();
    let m = a
        .components()
        .iter()
        .zip(b.components())
        .map(|(ca, cb)| embed(ca.matrix(), i, &dims) * embed(cb.matrix(), j, &dims))
        .fold(DMatrix::zeros(n, n), |acc, x| acc + x);
    Ok(HermitianOperator::from_parts(dims, symmetrize(m)))
}

/// `g · Σ_{i<j} sᵢ·sⱼ` over all particle pairs.
pub fn spin_spin_hamiltonian(
    system: &[SpinSpecies],
    g: CouplingStrength,
) -> Result<HermitianOperator> {
    if system.len() < 2 {
        return Err(invalid!(
            "spin-spin coupling needs at least two particles, got {}",
            system.len()
        ));
    }
    let mut h: Option<HermitianOperator> = None;
    for i in 0..system.len() {
        for j in i + 1..system.len() {
            let term = spin_dot(system, i, j)?;
            h = Some(match h {
                None => term,
                Some(acc) => acc.plus(&term)?,
            });
        }
    }
    Ok(h.expect("at least one pair").scaled(g.value()))
}

/// The three single-photon polarization vectors in the Cartesian frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonPolarization {
    /// `χ₀ = (0, 0, 1)`
    pub zero: [C64; 3],
    /// `χ₁ = −(1, i, 0)/√2`
    pub plus: [C64; 3],
    /// `χ₋₁ = (1, −i, 0)/√2`
    pub minus: [C64; 3],
}

impl PhotonPolarization {
    /// The vector for magnetic number `m ∈ {1, 0, −1}`.
    pub fn for_m(&self, m: i32) -> Option<[C64; 3]> {
        match m {
            1 => Some(self.plus),
            0 => Some(self.zero),
            -1 => Some(self.minus),
            _ => None,
        }
    }
}

pub fn photon_polarization_basis() -> PhotonPolarization {
    let r = 1.0 / 2f64.sqrt();
    let z = C64::zero();
    PhotonPolarization {
        zero: [z, z, C64::new(1.0, 0.0)],
        plus: [C64::new(-r, 0.0), C64::new(0.0, -r), z],
        minus: [C64::new(r, 0.0), C64::new(0.0, -r), z],
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Spin-1 generators acting on Cartesian vectors: `(S_k)_{ij} = −i ε_{kij}`.
pub fn cartesian_spin_matrices() -> [HermitianOperator; 3] {
    core::array::from_fn(|k| {
        let m = DMatrix::from_fn(3, 3, |i, j| C64::new(0.0, -levi_civita(k, i, j)));
        HermitianOperator::from_parts(vec![3], m)
    })
}

/// Unitary taking Cartesian components to `|1, m⟩` components, slots ordered
/// `m = 1, 0, −1`. Row `k` is the conjugate of the polarization vector for the
/// `k`-th slot, so `χ_m` maps to the unit vector of its slot.
pub fn cartesian_to_m_frame() -> DMatrix<C64> {
    let p = photon_polarization_basis();
    let rows = [p.plus, p.zero, p.minus];
    DMatrix::from_fn(3, 3, |r, c| rows[r][c].conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::apply_matrix;

    fn max_dev(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn species(two_s: i32) -> SpinSpecies {
        SpinSpecies::new(HalfInt::from_doubled(two_s)).unwrap()
    }

    #[test]
    fn spin_half_and_one_representations() {
        let h = spin_matrices(SpinSpecies::ELECTRON);
        let expect =
            DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]).map(|x| C64::new(x, 0.0));
        assert_eq!(max_dev(h.z.matrix(), &expect), 0.0);

        let one = spin_matrices(SpinSpecies::PHOTON);
        let zdiag: Vec<f64> = (0..3).map(|i| one.z.matrix()[(i, i)].re).collect();
        assert_eq!(zdiag, vec![1.0, 0.0, -1.0]);
        assert!((one.raising[(0, 1)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!((one.raising[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn su2_commutator_spin_three_halves() {
        let m = spin_matrices(species(3));
        let (x, y, z) = (m.x.matrix(), m.y.matrix(), m.z.matrix());
        let comm = x * y - y * x - z * C64::new(0.0, 1.0);
        assert!(comm.iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn casimir_is_scalar() {
        for two_s in 1..=4 {
            let sp = species(two_s);
            let sq = spin_matrices(sp).squared();
            let expect =
                DMatrix::<C64>::identity(sp.dim(), sp.dim()) * C64::new(sp.spin().casimir(), 0.0);
            assert!(max_dev(sq.matrix(), &expect) < 1e-12, "s = {}", sp.spin());
        }
    }

    #[test]
    fn product_basis_ordering() {
        let b = ProductBasis::new(&[SpinSpecies::ELECTRON, SpinSpecies::PHOTON]).unwrap();
        assert_eq!(b.dim(), 6);
        assert_eq!(b.index_of(&[HalfInt::HALF, HalfInt::ONE]).unwrap(), 0);
        assert_eq!(b.index_of(&[-HalfInt::HALF, -HalfInt::ONE]).unwrap(), 5);
        assert_eq!(b.labels(4), vec![-HalfInt::HALF, HalfInt::ZERO]);
        assert!(b.index_of(&[HalfInt::ONE, HalfInt::ONE]).is_err());
    }

    #[test]
    fn hamiltonian_spectra() {
        let g = CouplingStrength::new(1.0).unwrap();
        let cases: [(&[SpinSpecies], &[f64]); 3] = [
            (&[SpinSpecies::ELECTRON; 2], &[-0.75, 0.25, 0.25, 0.25]),
            (
                &[SpinSpecies::PHOTON; 2],
                &[-2.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            ),
            (
                &[SpinSpecies::ELECTRON; 3],
                &[-0.75, -0.75, -0.75, -0.75, 0.75, 0.75, 0.75, 0.75],
            ),
        ];
        for (system, expected) in cases {
            let e = spin_spin_hamiltonian(system, g).unwrap().eigh().unwrap();
            for (got, want) in e.values.iter().zip(expected) {
                assert!((got - want).abs() < 1e-10, "{system:?}: {got} vs {want}");
            }
        }
        assert!(spin_spin_hamiltonian(&[SpinSpecies::ELECTRON], g).is_err());
        assert!(CouplingStrength::new(f64::INFINITY).is_err());
    }

    #[test]
    fn hamiltonian_commutes_with_total_spin() {
        let g = CouplingStrength::new(0.7).unwrap();
        for system in [vec![SpinSpecies::ELECTRON; 3], vec![SpinSpecies::PHOTON; 3]] {
            let h = spin_spin_hamiltonian(&system, g).unwrap();
            let t = total_spin(&system, &[0, 1, 2]).unwrap();
            assert!(h.commutator_norm(&t.squared).unwrap() < 1e-10);
            assert!(h.commutator_norm(&t.z).unwrap() < 1e-10);
        }
    }

    #[test]
    fn photon_vectors_are_cartesian_eigenvectors() {
        let p = photon_polarization_basis();
        let r = 1.0 / 2f64.sqrt();
        assert_eq!(p.zero, [C64::zero(), C64::zero(), C64::new(1.0, 0.0)]);
        assert_eq!(p.plus, [C64::new(-r, 0.0), C64::new(0.0, -r), C64::zero()]);

        let [_, _, sz] = cartesian_spin_matrices();
        for m in [1, 0, -1] {
            let v = p.for_m(m).unwrap();
            let out = apply_matrix(sz.matrix(), &v);
            for (a, b) in out.iter().zip(v) {
                assert!((a - b * m as f64).norm() < 1e-15, "m = {m}");
            }
        }
        // Orthonormal.
        let vs = [p.plus, p.zero, p.minus];
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let ip: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn cartesian_frame_reproduces_standard_spin_one() {
        let u = cartesian_to_m_frame();
        assert!(max_dev(&(&u * u.adjoint()), &DMatrix::identity(3, 3)) < 1e-12);

        let p = photon_polarization_basis();
        let image = apply_matrix(&u, &p.zero);
        assert!((image[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(image[0].norm() < 1e-15 && image[2].norm() < 1e-15);

        let standard = spin_matrices(SpinSpecies::PHOTON);
        for (cart, std_op) in cartesian_spin_matrices().iter().zip(standard.components()) {
            let conj = &u * cart.matrix() * u.adjoint();
            assert!(max_dev(&conj, std_op.matrix()) < 1e-12);
        }
    }

    #[test]
    fn system_parsing() {
        assert_eq!(
            parse_system("e,e,e").unwrap(),
            vec![SpinSpecies::ELECTRON; 3]
        );
        assert_eq!(parse_system("p,3/2").unwrap()[1].dim(), 4);
        assert!(parse_system("e,x").is_err());
        assert!(parse_system("0").is_err());
    }
}
