//! Entanglement of pure states: Schmidt decomposition, von Neumann entropy,
//! per-particle purity and separability.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::invalid;
use crate::reference::PublishedVerdict;
use crate::tensor::{eigvalsh, reduced_density, subsystem_set, DensityMatrix, StateVector};
use crate::{Error, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// A particle counts as separable when its reduced purity reaches this.
pub const PURITY_THRESHOLD: f64 = 1.0 - 1e-10;
/// Eigenvalues below this contribute nothing to an entropy.
const ENTROPY_FLOOR: f64 = 1e-14;
/// Eigenvalues below this are a malformed density matrix, not rounding.
const NEGATIVE_EIGENVALUE: f64 = -1e-10;
/// Squared Schmidt coefficients below this do not count toward the rank.
const RANK_FLOOR: f64 = 1e-10;

/// `|ψ⟩ = Σₖ λₖ |uₖ⟩|vₖ⟩` across a bipartition.
#[derive(Clone, Debug, PartialEq)]
pub struct Schmidt {
    /// Descending, non-negative; length `min(dim A, dim B)`, zeros included.
    pub coefficients: Vec<f64>,
    /// Columns `uₖ` over the subsystems in `part`.
    pub left: DMatrix<C64>,
    /// Columns `vₖ` over the complement.
    pub right: DMatrix<C64>,
    pub part: Vec<usize>,
    pub complement: Vec<usize>,
}

impl Schmidt {
    /// Number of coefficients whose square exceeds `1e-10`.
    pub fn rank(&self) -> usize {
        self.coefficients
            .iter()
            .filter(|c| *c * *c > RANK_FLOOR)
            .count()
    }

    /// Entanglement entropy across the cut, `-Σ λₖ² ln λₖ²`.
    pub fn entropy(&self) -> f64 {
        shannon(self.coefficients.iter().map(|c| c * c))
    }

    /// `Σ λₖ uₖ ⊗ vₖ` in the ordering `part ++ complement`.
    pub fn reconstruct(&self) -> Vec<C64> {
        let m = &self.left
            * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                self.coefficients.len(),
                self.coefficients.iter().map(|&c| C64::new(c, 0.0)),
            ))
            * self.right.transpose();
        // Row-major flattening: index = a * dim_b + b.
        let mut out = Vec::with_capacity(m.nrows() * m.ncols());
        for a in 0..m.nrows() {
            for b in 0..m.ncols() {
                out.push(m[(a, b)]);
            }
        }
        out
    }
}

fn shannon(ps: impl Iterator<Item = f64>) -> f64 {
    ps.filter(|&p| p >= ENTROPY_FLOOR)
        .map(|p| -p * p.ln())
        .sum()
}

/// Schmidt decomposition of `state` across `part | rest`.
pub fn schmidt(state: &StateVector, part: &[usize]) -> Result<Schmidt> {
    let n = state.subsystems();
    let part = subsystem_set(part, n)?;
    if part.len() == n {
        return Err(invalid!(
            "bipartition {part:?} leaves nothing on the other side"
        ));
    }
    let complement: Vec<usize> = (0..n).filter(|k| !part.contains(k)).collect();
    let (m, _, _) = state.bipartite_matrix(&part)?;
    let svd = m.svd(true, true);
    let u = svd
        .u
        .ok_or_else(|| Error::Degenerate("SVD returned no left vectors".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Degenerate("SVD returned no right vectors".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });
    let coefficients = order.iter().map(|&k| svd.singular_values[k]).collect();
    let left = u.select_columns(&order);
    // m = U Σ Vᴴ, so the right Schmidt vectors are the rows of Vᴴ, unconjugated.
    let right = v_t.select_rows(&order).transpose();
    Ok(Schmidt {
        coefficients,
        left,
        right,
        part,
        complement,
    })
}

/// Von Neumann entropy `-Tr ρ ln ρ`, natural log.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// Entropy of a density-matrix spectrum; rejects eigenvalues below `-1e-10`.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    if let Some(bad) = eigenvalues.iter().find(|&&l| l < NEGATIVE_EIGENVALUE) {
        return Err(invalid!("density matrix has eigenvalue {bad} < 0"));
    }
    Ok(shannon(eigenvalues.iter().copied()))
}

/// Entropy of the reduced state on `keep` of a pure state.
pub fn subsystem_entropy(state: &StateVector, keep: &[usize]) -> Result<f64> {
    let rho = reduced_density(state, keep)?;
    entropy_of_spectrum(&eigvalsh(rho.matrix()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParticleStats {
    pub index: usize,
    pub purity: f64,
    pub entropy: f64,
    pub separable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartitionStats {
    pub part: Vec<usize>,
    pub complement: Vec<usize>,
    pub schmidt_coefficients: Vec<f64>,
    pub schmidt_rank: usize,
    pub entropy: f64,
}

/// A pair of particles viewed on its own.
#[derive(Clone, Debug, PartialEq)]
pub struct PairStats {
    pub pair: (usize, usize),
    pub purity: f64,
    /// The pair's reduced state is pure (purity ≥ `1 − 1e-10`).
    pub pure: bool,
    /// For a pure pair state, whether it is entangled; `None` for mixed pair
    /// states, whose entanglement is outside this report.
    pub entangled: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport {
    pub particles: Vec<ParticleStats>,
    pub bipartitions: Vec<BipartitionStats>,
    pub pairs: Vec<PairStats>,
    pub separable_particles: Vec<usize>,
    /// No particle is separable from the rest.
    pub genuinely_entangled: bool,
    /// The state is not a full product state.
    pub entangled: bool,
    pub published: Option<PublishedVerdict>,
    /// Whether `genuinely_entangled` agrees with a published entangled /
    /// not-entangled verdict; `None` when there is no such verdict.
    pub label_agreement: Option<bool>,
}

impl EntanglementReport {
    pub fn with_published(mut self, verdict: Option<PublishedVerdict>) -> Self {
        self.published = verdict;
        self.label_agreement = match verdict {
            Some(PublishedVerdict::Entangled) => Some(self.genuinely_entangled),
            Some(PublishedVerdict::NotEntangled) => Some(!self.genuinely_entangled),
            Some(PublishedVerdict::Ambiguous) | None => None,
        };
        self
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairStats> {
        let key = (i.min(j), i.max(j));
        self.pairs.iter().find(|p| p.pair == key)
    }
}

/// Purities, entropies, Schmidt data and separability flags of a 2- or
/// 3-particle pure state.
pub fn separability_report(state: &StateVector) -> Result<EntanglementReport> {
    let n = state.subsystems();
    if !(2..=3).contains(&n) {
        return Err(invalid!(
            "separability report needs 2 or 3 subsystems, got {n}"
        ));
    }
    let mut particles = Vec::with_capacity(n);
    let mut bipartitions = Vec::with_capacity(n);
    for k in 0..n {
        let s = schmidt(state, &[k])?;
        let probs: Vec<f64> = s.coefficients.iter().map(|c| c * c).collect();
        let purity: f64 = probs.iter().map(|p| p * p).sum();
        let entropy = s.entropy();
        particles.push(ParticleStats {
            index: k,
            purity,
            entropy,
            separable: purity >= PURITY_THRESHOLD,
        });
        if n == 2 && k == 1 {
            // Same cut as k = 0.
            continue;
        }
        bipartitions.push(BipartitionStats {
            schmidt_rank: s.rank(),
            part: s.part,
            complement: s.complement,
            schmidt_coefficients: s.coefficients,
            entropy,
        });
    }
    let separable_particles: Vec<usize> = particles
        .iter()
        .filter(|p| p.separable)
        .map(|p| p.index)
        .collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let purity = if n == 2 {
                1.0
            } else {
                let third = (0..n)
                    .find(|k| *k != i && *k != j)
                    .expect("three particles");
                particles[third].purity
            };
            let pure = purity >= PURITY_THRESHOLD;
            let entangled = if !pure {
                None
            } else if n == 2 {
                Some(!particles[0].separable)
            } else {
                // The pair state is pure, so the global state is (pair) ⊗ (third)
                // and particle i's marginal is the pair's marginal.
                Some(!particles[i].separable)
            };
            pairs.push(PairStats {
                pair: (i, j),
                purity,
                pure,
                entangled,
            });
        }
    }
    Ok(EntanglementReport {
        genuinely_entangled: separable_particles.is_empty(),
        entangled: separable_particles.len() < n,
        particles,
        bipartitions,
        pairs,
        separable_particles,
        published: None,
        label_agreement: None,
    })
}
