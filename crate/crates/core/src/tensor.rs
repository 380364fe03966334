//! Dense complex linear algebra over labeled product spaces.
//!
//! Every object carries `dims`, one entry per subsystem factor. Flat indices
//! follow row-major order over those factors, so subsystem 0 varies slowest
//! and the Kronecker product `a ⊗ b` puts `a` first.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;

use crate::error::invalid;
use crate::{Error, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// Largest total dimension a Kronecker product may produce by default.
pub const DEFAULT_DIM_CAP: usize = 1 << 20;

/// Two amplitudes whose magnitudes differ by less than this are treated as
/// tied when picking the phase reference.
const PHASE_TIE: f64 = 1e-9;

/// Numerical tolerances used for assertions throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Physics assertions: eigen-equations, state comparisons, purities.
    pub physics: f64,
    /// Algebraic identities: traces, normalization, Hermiticity.
    pub algebraic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            physics: 1e-10,
            algebraic: 1e-12,
        }
    }
}

fn total_dim(dims: &[usize], cap: usize) -> Result<usize> {
    if dims.is_empty() {
        return Err(invalid!("dimension list is empty"));
    }
    let mut total: usize = 1;
    for &d in dims {
        if d == 0 {
            return Err(invalid!("subsystem dimension must be positive"));
        }
        total = match total.checked_mul(d) {
            Some(t) if t <= cap => t,
            _ => {
                let requested = dims.iter().fold(1usize, |a, &d| a.saturating_mul(d));
                return Err(Error::Capacity { requested, cap });
            }
        };
    }
    Ok(total)
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Splits a flat index into per-subsystem indices.
pub fn multi_index(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Validates a subsystem index set and returns it sorted and deduplicated.
pub fn subsystem_set(indices: &[usize], count: usize) -> Result<Vec<usize>> {
    if indices.is_empty() {
        return Err(invalid!("subsystem set is empty"));
    }
    let mut set = indices.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&i| i >= count) {
        return Err(invalid!(
            "subsystem {bad} out of range for {count} subsystems"
        ));
    }
    Ok(set)
}

fn validate_permutation(order: &[usize], count: usize) -> Result<()> {
    let mut seen = vec![false; count];
    if order.len() != count {
        return Err(invalid!(
            "permutation has {} entries, expected {count}",
            order.len()
        ));
    }
    for &o in order {
        if o >= count || seen[o] {
            return Err(invalid!("{order:?} is not a permutation of 0..{count}"));
        }
        seen[o] = true;
    }
    Ok(())
}

/// Maps each old flat index to its position after reordering subsystems so that
/// new subsystem `i` is old subsystem `order[i]`.
fn permutation_map(dims: &[usize], order: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let new_strides = strides(&new_dims);
    let total: usize = dims.iter().product();
    let map = (0..total)
        .map(|i| {
            let m = multi_index(i, dims);
            order
                .iter()
                .zip(&new_strides)
                .map(|(&o, &s)| m[o] * s)
                .sum()
        })
        .collect();
    (map, new_dims)
}

/// Unit complex number carried by the largest-magnitude amplitude (the first
/// one on ties). Dividing by it makes that amplitude real positive.
pub fn phase_reference(amps: &[C64]) -> C64 {
    let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let a = amps
        .iter()
        .find(|a| a.norm() >= max - PHASE_TIE)
        .copied()
        .unwrap_or_default();
    a / a.norm()
}

/// Rotates the vector by a global phase so the reference amplitude is real positive.
pub fn canonical_phase(amps: &[C64]) -> Vec<C64> {
    let r = phase_reference(amps).conj();
    amps.iter().map(|a| a * r).collect()
}

/// Largest elementwise deviation between two amplitude lists after both are
/// brought to canonical phase.
pub fn phase_deviation(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    canonical_phase(a)
        .iter()
        .zip(canonical_phase(b))
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Normalized complex amplitude vector over a product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within `1e-10`.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        Self::with_norm_tolerance(dims, amps, 1e-10)
    }

    /// Wraps amplitudes whose norm is within `tol` of one.
    pub fn with_norm_tolerance(dims: Vec<usize>, amps: Vec<C64>, tol: f64) -> Result<Self> {
        let state = Self::unchecked(dims, amps)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > tol {
            return Err(invalid!(
                "state norm {norm} differs from 1 by more than {tol:e}"
            ));
        }
        Ok(state)
    }

    /// Divides by the norm. The zero vector is rejected.
    pub fn normalized(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let mut state = Self::unchecked(dims, amps)?;
        let norm = state.norm();
        if !norm.is_finite() || norm <= 1e-14 {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        state.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    fn unchecked(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let total = total_dim(&dims, usize::MAX)?;
        if amps.len() != total {
            return Err(invalid!(
                "{} amplitudes for dims {dims:?} (need {total})",
                amps.len()
            ));
        }
        Ok(StateVector { dims, amps })
    }

    /// The computational basis vector `|index⟩`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total = total_dim(&dims, usize::MAX)?;
        if index >= total {
            return Err(invalid!("basis index {index} out of range {total}"));
        }
        let mut amps = vec![C64::zero(); total];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(invalid!(
                "inner product of dims {:?} and {:?}",
                self.dims,
                other.dims
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Reorders subsystems: new subsystem `i` is old subsystem `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        validate_permutation(order, self.dims.len())?;
        let (map, dims) = permutation_map(&self.dims, order);
        let mut amps = vec![C64::zero(); self.amps.len()];
        for (old, &new) in map.iter().enumerate() {
            amps[new] = self.amps[old];
        }
        Ok(StateVector { dims, amps })
    }

    /// Same state with its largest amplitude rotated to the positive real axis.
    pub fn with_canonical_phase(&self) -> StateVector {
        StateVector {
            dims: self.dims.clone(),
            amps: canonical_phase(&self.amps),
        }
    }

    /// Multiplies every amplitude by `phase` (expected to have unit modulus).
    pub fn rotated(&self, phase: C64) -> StateVector {
        StateVector {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Max amplitude deviation from `other` modulo one global phase.
    pub fn phase_deviation(&self, other: &StateVector) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        phase_deviation(&self.amps, &other.amps)
    }

    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.phase_deviation(other) <= tol
    }

    /// Writes the amplitudes as a `dim_a × dim_b` matrix, where subsystems in
    /// `part` (sorted) index rows and the rest index columns.
    pub fn bipartite_matrix(
        &self,
        part: &[usize],
    ) -> Result<(DMatrix<C64>, Vec<usize>, Vec<usize>)> {
        let n = self.dims.len();
        let a = subsystem_set(part, n)?;
        let b: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
        let order: Vec<usize> = a.iter().chain(&b).copied().collect();
        let permuted = self.permute(&order)?;
        let dims_a: Vec<usize> = a.iter().map(|&i| self.dims[i]).collect();
        let dims_b: Vec<usize> = b.iter().map(|&i| self.dims[i]).collect();
        let rows: usize = dims_a.iter().product();
        let cols: usize = dims_b.iter().product();
        let m = DMatrix::from_fn(rows, cols, |r, c| permuted.amps[r * cols + c]);
        Ok((m, dims_a, dims_b))
    }
}

/// Dense self-adjoint matrix over a product space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    dims: Vec<usize>,
    matrix: DMatrix<C64>,
}

fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl HermitianOperator {
    /// Accepts `matrix` when it equals its conjugate transpose to `1e-12`
    /// (relative to its largest entry, floor 1).
    pub fn new(dims: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        let total = total_dim(&dims, usize::MAX)?;
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(invalid!(
                "{}x{} matrix for dims {dims:?} (need {total}x{total})",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-12 * max_abs(&matrix).max(1.0) {
            return Err(invalid!("matrix is not Hermitian (defect {defect:e})"));
        }
        Ok(HermitianOperator { dims, matrix })
    }

    pub(crate) fn from_parts(dims: Vec<usize>, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        HermitianOperator { dims, matrix }
    }

    pub fn identity(dims: Vec<usize>) -> Result<Self> {
        let n = total_dim(&dims, usize::MAX)?;
        Ok(HermitianOperator {
            dims,
            matrix: DMatrix::identity(n, n),
        })
    }

    /// Real diagonal operator on a single factor.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let m = DMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::zero()
            }
        });
        Self::new(vec![values.len()], m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn eigh(&self) -> Result<Eigh> {
        eigh_unchecked(self.matrix.clone())
    }

    /// `self·v` as raw amplitudes (not renormalized).
    pub fn apply(&self, v: &StateVector) -> Result<Vec<C64>> {
        if v.dims() != self.dims.as_slice() {
            return Err(invalid!(
                "operator dims {:?} vs state dims {:?}",
                self.dims,
                v.dims()
            ));
        }
        Ok(apply_matrix(&self.matrix, v.amplitudes()))
    }

    /// `⟨v|self|v⟩`, real for Hermitian operators.
    pub fn expectation(&self, v: &StateVector) -> Result<f64> {
        let hv = self.apply(v)?;
        Ok(v.amplitudes()
            .iter()
            .zip(&hv)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re)
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &HermitianOperator) -> Result<f64> {
        if self.dims != other.dims {
            return Err(invalid!(
                "commutator of dims {:?} and {:?}",
                self.dims,
                other.dims
            ));
        }
        let c = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(c.norm())
    }

    pub fn scaled(&self, factor: f64) -> HermitianOperator {
        HermitianOperator {
            dims: self.dims.clone(),
            matrix: &self.matrix * C64::new(factor, 0.0),
        }
    }

    pub fn plus(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if self.dims != other.dims {
            return Err(invalid!("sum of dims {:?} and {:?}", self.dims, other.dims));
        }
        Ok(HermitianOperator {
            dims: self.dims.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// Restriction `Qᴴ·self·Q` onto the span of the orthonormal columns of `q`.
    pub fn compress(&self, q: &DMatrix<C64>) -> Result<HermitianOperator> {
        if q.nrows() != self.dim() {
            return Err(invalid!(
                "projector has {} rows, operator dim {}",
                q.nrows(),
                self.dim()
            ));
        }
        let m = q.adjoint() * &self.matrix * q;
        Ok(HermitianOperator {
            dims: vec![q.ncols()],
            matrix: symmetrize(m),
        })
    }
}

pub(crate) fn apply_matrix(m: &DMatrix<C64>, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Replaces `m` with `(m + mᴴ)/2`, removing round-off asymmetry.
pub(crate) fn symmetrize(m: DMatrix<C64>) -> DMatrix<C64> {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Eigh {
    /// Column `k` as an amplitude list.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k).iter().copied().collect()
    }
}

/// Diagonalizes a Hermitian operator.
pub fn eigh(h: &HermitianOperator) -> Result<Eigh> {
    h.eigh()
}

/// Diagonalizes a raw matrix after checking it is Hermitian.
pub fn eigh_matrix(m: DMatrix<C64>) -> Result<Eigh> {
    if !m.is_square() {
        return Err(invalid!(
            "eigh of a non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        ));
    }
    let defect = hermiticity_defect(&m);
    if defect > 1e-12 * max_abs(&m).max(1.0) {
        return Err(invalid!(
            "eigh of a non-Hermitian matrix (defect {defect:e})"
        ));
    }
    eigh_unchecked(m)
}

fn eigh_unchecked(m: DMatrix<C64>) -> Result<Eigh> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(symmetrize(m), f64::EPSILON, 1000 * n.max(1))
        .ok_or_else(|| invalid!("Hermitian eigensolver did not converge"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = symmetrize(m.clone())
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Positive semidefinite, unit-trace Hermitian matrix over a product space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace (`1e-12`) and eigenvalues `≥ -1e-12`.
    pub fn new(dims: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        let op = HermitianOperator::new(dims, matrix)?;
        let trace = op.matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(invalid!("density matrix trace {trace} is not 1"));
        }
        if let Some(&low) = eigvalsh(&op.matrix).first() {
            if low < -1e-12 {
                return Err(invalid!("density matrix has negative eigenvalue {low:e}"));
            }
        }
        Ok(DensityMatrix {
            dims: op.dims,
            matrix: op.matrix,
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &StateVector) -> Self {
        let v = state.amplitudes();
        let n = v.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        DensityMatrix {
            dims: state.dims().to_vec(),
            matrix,
        }
    }

    /// `½·I` style maximally mixed state.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n = total_dim(&dims, usize::MAX)?;
        let matrix = DMatrix::identity(n, n) * C64::new(1.0 / n as f64, 0.0);
        Ok(DensityMatrix { dims, matrix })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        validate_permutation(order, self.dims.len())?;
        let (map, dims) = permutation_map(&self.dims, order);
        let n = self.dim();
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                matrix[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        Ok(DensityMatrix { dims, matrix })
    }
}

/// Traces out every subsystem not in `keep`. Kept subsystems stay in their
/// original relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = subsystem_set(keep, rho.dims.len())?;
    let kept_dims: Vec<usize> = keep.iter().map(|&k| rho.dims[k]).collect();
    let traced: Vec<usize> = (0..rho.dims.len()).filter(|i| !keep.contains(i)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| rho.dims[k]).collect();
    let kept_strides = strides(&kept_dims);
    let traced_strides = strides(&traced_dims);
    let traced_total: usize = traced_dims.iter().product();
    let kept_total: usize = kept_dims.iter().product();

    // Group full indices by their traced component.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_total];
    for i in 0..rho.dim() {
        let m = multi_index(i, &rho.dims);
        let k: usize = keep
            .iter()
            .zip(&kept_strides)
            .map(|(&s, &st)| m[s] * st)
            .sum();
        let t: usize = traced
            .iter()
            .zip(&traced_strides)
            .map(|(&s, &st)| m[s] * st)
            .sum();
        groups[t].push((i, k));
    }
    let mut out = DMatrix::zeros(kept_total, kept_total);
    for group in &groups {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[(ki, kj)] += rho.matrix[(i, j)];
            }
        }
    }
    Ok(DensityMatrix {
        dims: kept_dims,
        matrix: out,
    })
}

/// Reduced density matrix of a pure state on the subsystems in `keep`.
///
/// Equivalent to `partial_trace(&DensityMatrix::from_pure(state), keep)` but
/// computed as `M·Mᴴ` on the bipartite amplitude matrix, which avoids forming
/// the full outer product.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let (m, dims_a, _) = state.bipartite_matrix(keep)?;
    let matrix = symmetrize(&m * m.adjoint());
    Ok(DensityMatrix {
        dims: dims_a,
        matrix,
    })
}

/// Kronecker product with a dimension cap.
pub trait Kron: Sized {
    fn kron_capped(&self, other: &Self, cap: usize) -> Result<Self>;
}

impl Kron for StateVector {
    fn kron_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        total_dim(&dims, cap)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector { dims, amps })
    }
}

impl Kron for HermitianOperator {
    fn kron_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        total_dim(&dims, cap)?;
        Ok(HermitianOperator {
            dims,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }
}

/// `a ⊗ b` under [`DEFAULT_DIM_CAP`].
pub fn kron<T: Kron>(a: &T, b: &T) -> Result<T> {
    a.kron_capped(b, DEFAULT_DIM_CAP)
}
