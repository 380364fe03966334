//! Comparison of transcribed listings against a computed coupled basis.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coupling::{cg_eigenbasis, find, CoupledBasisState, QuantumNumbers};
use crate::error::invalid;
use crate::listing::{Coefficient, Listing};
use crate::numfmt::sci;
use crate::reference::{ReferenceSet, Remark};
use crate::spin::{ProductBasis, SpinSpecies};
use crate::tensor::phase_reference;
use crate::{HalfInt, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// Outcome of comparing one listing with the computed state of the same labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ListingVerdict {
    /// Normalized and equal to the computed state amplitude by amplitude.
    ExactMatch,
    /// Normalized and equal up to one global phase.
    GlobalPhaseMatch,
    /// Right direction, wrong length: after rescaling it matches up to phase.
    NormalizationDefect,
    /// No rescaling or phase makes it match.
    AmplitudeMismatch,
    /// The computed basis has no state with these labels.
    Unmatched,
}

impl ListingVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ListingVerdict::ExactMatch => "exact-match",
            ListingVerdict::GlobalPhaseMatch => "global-phase-match",
            ListingVerdict::NormalizationDefect => "normalization-defect",
            ListingVerdict::AmplitudeMismatch => "amplitude-mismatch",
            ListingVerdict::Unmatched => "unmatched",
        }
    }

    /// The listing is a correct state, whatever its phase.
    pub fn is_consistent(self) -> bool {
        matches!(
            self,
            ListingVerdict::ExactMatch | ListingVerdict::GlobalPhaseMatch
        )
    }
}

impl fmt::Display for ListingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One nonzero amplitude of the computed state, expressed in the listing's phase.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectedTerm {
    pub ms: Vec<HalfInt>,
    pub amplitude: C64,
    /// Exact value when the computed state is exact and the phase is ±1.
    pub exact: Option<Coefficient>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrataEntry {
    pub id: String,
    pub numbers: QuantumNumbers,
    pub verdict: ListingVerdict,
    /// `Σ|c|²` of the listing as `(num, den)`, when exactly computable.
    pub norm_squared_exact: Option<(i128, i128)>,
    pub norm_squared: f64,
    /// Largest amplitude deviation after rescaling the listing to unit norm
    /// and aligning its phase with the computed state.
    pub max_deviation: Option<f64>,
    /// `|⟨computed|listing⟩|` with the listing rescaled to unit norm.
    pub overlap: Option<f64>,
    /// Kets whose `Σm` differs from the listed `M`.
    pub wrong_m_kets: Vec<Vec<HalfInt>>,
    pub corrected: Vec<CorrectedTerm>,
}

/// A computed state that no listing covers, with its amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct MissingState {
    pub numbers: QuantumNumbers,
    pub terms: Vec<CorrectedTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrataReport {
    pub system: Vec<SpinSpecies>,
    pub tolerance: f64,
    /// One entry per listing, in listing order.
    pub entries: Vec<ErrataEntry>,
    /// Computed states with no listing.
    pub missing: Vec<MissingState>,
    pub remarks: Vec<Remark>,
}

impl ErrataReport {
    pub fn entry(&self, id: &str) -> Option<&ErrataEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn count(&self, verdict: ListingVerdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == verdict).count()
    }
}

/// Phase that best aligns `oracle` with `listing`, and the resulting maximum
/// deviation.
fn align(listing: &[C64], oracle: &[C64]) -> (C64, f64) {
    let ip: C64 = oracle.iter().zip(listing).map(|(o, l)| o.conj() * l).sum();
    let phase = if ip.norm() > 1e-12 {
        ip / ip.norm()
    } else {
        phase_reference(listing) / phase_reference(oracle)
    };
    let dev = listing
        .iter()
        .zip(oracle)
        .map(|(l, o)| (l - o * phase).norm())
        .fold(0.0, f64::max);
    (phase, dev)
}

/// Nonzero amplitudes of `oracle` times `phase`; exact values are kept when
/// `sign` says the phase is `±1`.
fn terms(
    oracle: &CoupledBasisState,
    basis: &ProductBasis,
    phase: C64,
    sign: Option<bool>,
) -> Result<Vec<CorrectedTerm>> {
    oracle
        .vector
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-14)
        .map(|(i, a)| {
            let exact = match (&oracle.exact, sign) {
                (Some(ex), Some(flip)) => {
                    let v = if flip { -ex[i] } else { ex[i] };
                    Some(Coefficient::from_signed_sqrt(&v)?)
                }
                _ => None,
            };
            Ok(CorrectedTerm {
                ms: basis.labels(i),
                amplitude: a * phase,
                exact,
            })
        })
        .collect()
}

fn compare(
    listing: &Listing,
    oracle: &CoupledBasisState,
    basis: &ProductBasis,
    tol: f64,
) -> Result<ErrataEntry> {
    let raw = listing.amplitudes(basis.species())?;
    let norm_sq: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
    let exact_norm = listing.norm_squared().ok();
    let normalized_exactly = match exact_norm {
        Some(r) => r == num_rational::Ratio::from_integer(1),
        None => (norm_sq - 1.0).abs() <= tol,
    };
    let o = oracle.vector.amplitudes();

    let (verdict, phase, max_dev, overlap) = if norm_sq == 0.0 {
        (
            ListingVerdict::AmplitudeMismatch,
            phase_reference(o).conj(),
            None,
            None,
        )
    } else {
        let scale = 1.0 / norm_sq.sqrt();
        let unit: Vec<C64> = raw.iter().map(|a| a * scale).collect();
        let (phase, dev) = align(&unit, o);
        let overlap = o
            .iter()
            .zip(&unit)
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            .norm();
        let raw_dev = raw
            .iter()
            .zip(o)
            .map(|(l, x)| (l - x).norm())
            .fold(0.0, f64::max);
        let verdict = if normalized_exactly && raw_dev <= tol {
            ListingVerdict::ExactMatch
        } else if normalized_exactly && dev <= tol {
            ListingVerdict::GlobalPhaseMatch
        } else if !normalized_exactly && dev <= tol {
            ListingVerdict::NormalizationDefect
        } else {
            ListingVerdict::AmplitudeMismatch
        };
        (verdict, phase, Some(dev), Some(overlap))
    };

    let sign = if (phase - C64::new(1.0, 0.0)).norm() < 1e-9 {
        Some(false)
    } else if (phase + C64::new(1.0, 0.0)).norm() < 1e-9 {
        Some(true)
    } else {
        None
    };
    let corrected = terms(oracle, basis, phase, sign)?;

    Ok(ErrataEntry {
        id: listing.id.clone(),
        numbers: listing.numbers,
        verdict,
        norm_squared_exact: exact_norm.map(|r| (*r.numer(), *r.denom())),
        norm_squared: norm_sq,
        max_deviation: max_dev,
        overlap,
        wrong_m_kets: listing
            .wrong_m_terms()
            .into_iter()
            .map(|k| listing.terms[k].ms.clone())
            .collect(),
        corrected,
    })
}

/// Judges every listing against the computed state carrying the same labels.
/// Listings without a counterpart are reported as [`ListingVerdict::Unmatched`].
pub fn match_listings(
    computed: &[CoupledBasisState],
    listings: &[Listing],
    system: &[SpinSpecies],
    tol: f64,
) -> Result<ErrataReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid!("tolerance must be positive and finite, got {tol}"));
    }
    let basis = ProductBasis::new(system)?;
    if let Some(s) = computed.iter().find(|s| s.vector.dim() != basis.dim()) {
        return Err(invalid!(
            "computed state {} does not live on the given system",
            s.numbers
        ));
    }
    let mut entries = Vec::with_capacity(listings.len());
    for l in listings {
        if entries.iter().any(|e: &ErrataEntry| e.id == l.id) {
            return Err(invalid!("listing id {} appears twice", l.id));
        }
        if l.particles() != system.len() {
            return Err(invalid!(
                "listing {} has {} particles, system has {}",
                l.id,
                l.particles(),
                system.len()
            ));
        }
        let entry = match find(computed, l.numbers) {
            Some(oracle) => compare(l, oracle, &basis, tol)?,
            None => ErrataEntry {
                id: l.id.clone(),
                numbers: l.numbers,
                verdict: ListingVerdict::Unmatched,
                norm_squared_exact: l.norm_squared().ok().map(|r| (*r.numer(), *r.denom())),
                norm_squared: l
                    .amplitudes(system)
                    .map(|a| a.iter().map(|x| x.norm_sqr()).sum())
                    .unwrap_or(f64::NAN),
                max_deviation: None,
                overlap: None,
                wrong_m_kets: l
                    .wrong_m_terms()
                    .into_iter()
                    .map(|k| l.terms[k].ms.clone())
                    .collect(),
                corrected: Vec::new(),
            },
        };
        entries.push(entry);
    }
    let missing = computed
        .iter()
        .filter(|s| !listings.iter().any(|l| l.numbers == s.numbers))
        .map(|s| {
            Ok(MissingState {
                numbers: s.numbers,
                terms: terms(s, &basis, C64::new(1.0, 0.0), Some(false))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrataReport {
        system: system.to_vec(),
        tolerance: tol,
        entries,
        missing,
        remarks: Vec::new(),
    })
}

/// Errata for a bundled listing set against the analytic Clebsch–Gordan basis.
pub fn reference_errata(set: ReferenceSet, tol: f64) -> Result<ErrataReport> {
    let system = set.system();
    let oracle = cg_eigenbasis(&system, set.scheme())?;
    let mut report = match_listings(&oracle, &set.listings()?, &system, tol)?;
    report.remarks = set.remarks().to_vec();
    Ok(report)
}

fn write_kets(f: &mut fmt::Formatter<'_>, ms: &[HalfInt]) -> fmt::Result {
    f.write_str("|")?;
    for (k, m) in ms.iter().enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{m}")?;
    }
    f.write_str(">")
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[CorrectedTerm]) -> fmt::Result {
    for t in terms {
        f.write_str("    ")?;
        write_kets(f, &t.ms)?;
        match t.exact {
            Some(c) => writeln!(f, " {}", c.radical_text())?,
            None => writeln!(f, " {} {}i", sci(t.amplitude.re), sci(t.amplitude.im))?,
        }
    }
    Ok(())
}

/// Plain-text rendering; floats use 17 significant digits.
impl fmt::Display for ErrataReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let system: Vec<String> = self.system.iter().map(|s| alloc::format!("{s}")).collect();
        writeln!(f, "system: {}", system.join(","))?;
        writeln!(f, "tolerance: {}", sci(self.tolerance))?;
        for e in &self.entries {
            writeln!(f, "{} [{}] {}", e.id, e.numbers, e.verdict)?;
            match e.norm_squared_exact {
                Some((n, 1)) => writeln!(f, "  norm^2: {n}")?,
                Some((n, d)) => writeln!(f, "  norm^2: {n}/{d}")?,
                None => writeln!(f, "  norm^2: {}", sci(e.norm_squared))?,
            }
            if let Some(d) = e.max_deviation {
                writeln!(f, "  max deviation: {}", sci(d))?;
            }
            if let Some(o) = e.overlap {
                writeln!(f, "  overlap: {}", sci(o))?;
            }
            for ms in &e.wrong_m_kets {
                f.write_str("  ket with wrong total m: ")?;
                write_kets(f, ms)?;
                writeln!(f)?;
            }
            if !e.verdict.is_consistent() && e.verdict != ListingVerdict::Unmatched {
                writeln!(f, "  corrected:")?;
                write_terms(f, &e.corrected)?;
            }
        }
        for m in &self.missing {
            writeln!(f, "missing listing: [{}]", m.numbers)?;
            writeln!(f, "  computed:")?;
            write_terms(f, &m.terms)?;
        }
        for r in &self.remarks {
            writeln!(f, "remark {}: {}", r.id, r.text)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::coupled_eigenbasis;
    use crate::listing::parse_listings;

    const TOL: f64 = 1e-10;

    #[test]
    fn verdict_kinds() {
        let text = "\
exact - 0 0 | 1/2 -1/2 | 1 2 + \n exact - 0 0 | -1/2 1/2 | 1 2 -
flip - 1 1 | 1/2 1/2 | 1 1 -
scaled - 1 0 | 1/2 -1/2 | 1 1 + \n scaled - 1 0 | -1/2 1/2 | 1 1 +
wrong - 1 -1 | -1/2 -1/2 | 1 2 + \n wrong - 1 -1 | 1/2 -1/2 | 1 2 +
";
        let ls = parse_listings(text).unwrap();
        let sys = [SpinSpecies::ELECTRON; 2];
        let oracle = cg_eigenbasis(&sys, crate::coupling::Scheme::PairOnly).unwrap();
        let r = match_listings(&oracle, &ls, &sys, TOL).unwrap();
        let verdicts: Vec<ListingVerdict> = r.entries.iter().map(|e| e.verdict).collect();
        assert_eq!(
            verdicts,
            alloc::vec![
                ListingVerdict::ExactMatch,
                ListingVerdict::GlobalPhaseMatch,
                ListingVerdict::NormalizationDefect,
                ListingVerdict::AmplitudeMismatch
            ]
        );
        assert_eq!(r.entry("scaled").unwrap().norm_squared_exact, Some((2, 1)));
        assert_eq!(r.entry("wrong").unwrap().wrong_m_kets.len(), 1);
        // Corrected amplitudes follow the listing's sign.
        let c = &r.entry("flip").unwrap().corrected[0];
        assert_eq!(c.exact, Some(Coefficient::new(1, 1, true).unwrap()));
        assert!(r.missing.is_empty());
    }

    #[test]
    fn unmatched_and_missing() {
        let ls = parse_listings("odd - 2 0 | 1/2 -1/2 | 1 1 +").unwrap();
        let sys = [SpinSpecies::ELECTRON; 2];
        let oracle = cg_eigenbasis(&sys, crate::coupling::Scheme::PairOnly).unwrap();
        let r = match_listings(&oracle, &ls, &sys, TOL).unwrap();
        assert_eq!(r.entries[0].verdict, ListingVerdict::Unmatched);
        assert_eq!(r.missing.len(), 4);
        assert!(match_listings(&oracle, &ls, &sys, 0.0).is_err());
    }

    #[test]
    fn diagonalization_basis_gives_same_verdict_classes() {
        for set in ReferenceSet::ALL {
            let sys = set.system();
            let diag = coupled_eigenbasis(&sys, set.scheme()).unwrap();
            let a = match_listings(&diag, &set.listings().unwrap(), &sys, TOL).unwrap();
            let b = reference_errata(set, TOL).unwrap();
            for (x, y) in a.entries.iter().zip(&b.entries) {
                assert_eq!(
                    x.verdict.is_consistent(),
                    y.verdict.is_consistent(),
                    "{}",
                    x.id
                );
            }
        }
    }
}
