//! Serializable views of core results. Floats stay native JSON numbers;
//! exact values are strings such as `-1/sqrt(6)`.

use serde::Serialize;
use spincouple_core::coupling::{CoupledBasisState, QuantumNumbers};
use spincouple_core::entanglement::EntanglementReport;
use spincouple_core::errata::{ErrataEntry, ErrataReport};
use spincouple_core::listing::Coefficient;
use spincouple_core::reference::PublishedVerdict;
use spincouple_core::spin::{ProductBasis, SpinSpecies};
use spincouple_core::{HalfInt, C64};

use crate::error::CliResult;

/// Serializes any `Display` value as a string.
pub fn display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// `+1/sqrt(2)`, `-3/sqrt(60)`, `+1`.
pub fn coefficient_text(c: &Coefficient) -> String {
    c.radical_text()
}

pub fn ket_text(ms: &[HalfInt]) -> String {
    let inner: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
    format!("|{}>", inner.join(" "))
}

pub fn system_text(system: &[SpinSpecies]) -> String {
    system
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn verdict_text(v: PublishedVerdict) -> &'static str {
    match v {
        PublishedVerdict::Entangled => "entangled",
        PublishedVerdict::NotEntangled => "not-entangled",
        PublishedVerdict::Ambiguous => "ambiguous",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumbersDto {
    pub s_pair: Option<String>,
    pub s: String,
    pub m: String,
}

impl From<QuantumNumbers> for NumbersDto {
    fn from(q: QuantumNumbers) -> Self {
        NumbersDto {
            s_pair: q.s_intermediate.map(|s| s.to_string()),
            s: q.s_total.to_string(),
            m: q.m_total.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermDto {
    pub ket: Vec<String>,
    pub re: f64,
    pub im: f64,
    pub exact: Option<String>,
}

impl TermDto {
    fn new(ms: &[HalfInt], amp: C64, exact: Option<&Coefficient>) -> Self {
        TermDto {
            ket: ms.iter().map(|m| m.to_string()).collect(),
            re: amp.re,
            im: amp.im,
            exact: exact.map(coefficient_text),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisStateDto {
    pub numbers: NumbersDto,
    pub terms: Vec<TermDto>,
}

impl BasisStateDto {
    pub fn new(state: &CoupledBasisState, basis: &ProductBasis) -> CliResult<Self> {
        let mut terms = Vec::new();
        for (i, a) in state.vector.amplitudes().iter().enumerate() {
            if a.norm() <= 1e-14 {
                continue;
            }
            let exact = match &state.exact {
                Some(ex) => Some(Coefficient::from_signed_sqrt(&ex[i])?),
                None => None,
            };
            terms.push(TermDto::new(&basis.labels(i), *a, exact.as_ref()));
        }
        Ok(BasisStateDto {
            numbers: state.numbers.into(),
            terms,
        })
    }

    /// `+1/sqrt(2)|1/2 -1/2> -1/sqrt(2)|-1/2 1/2>`, falling back to decimal
    /// amplitudes when no exact value exists.
    pub fn terms_text(&self) -> String {
        self.terms
            .iter()
            .map(|t| {
                let ket = format!("|{}>", t.ket.join(" "));
                match &t.exact {
                    Some(e) => format!("{e}{ket}"),
                    None => format!("({}{:+}i){ket}", t.re, t.im),
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrataEntryDto {
    pub id: String,
    pub numbers: NumbersDto,
    pub verdict: &'static str,
    pub consistent: bool,
    pub norm_squared_exact: Option<String>,
    pub norm_squared: f64,
    pub max_deviation: Option<f64>,
    pub overlap: Option<f64>,
    pub wrong_m_kets: Vec<String>,
    pub corrected: Vec<TermDto>,
}

impl From<&ErrataEntry> for ErrataEntryDto {
    fn from(e: &ErrataEntry) -> Self {
        ErrataEntryDto {
            id: e.id.clone(),
            numbers: e.numbers.into(),
            verdict: e.verdict.as_str(),
            consistent: e.verdict.is_consistent(),
            norm_squared_exact: e.norm_squared_exact.map(|(n, d)| {
                if d == 1 {
                    n.to_string()
                } else {
                    format!("{n}/{d}")
                }
            }),
            norm_squared: e.norm_squared,
            max_deviation: e.max_deviation,
            overlap: e.overlap,
            wrong_m_kets: e.wrong_m_kets.iter().map(|k| ket_text(k)).collect(),
            corrected: if e.verdict.is_consistent() {
                Vec::new()
            } else {
                e.corrected
                    .iter()
                    .map(|t| TermDto::new(&t.ms, t.amplitude, t.exact.as_ref()))
                    .collect()
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RemarkDto {
    pub id: String,
    pub text: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingDto {
    pub numbers: NumbersDto,
    pub terms: Vec<TermDto>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrataDto {
    pub system: String,
    pub tolerance: f64,
    pub entries: Vec<ErrataEntryDto>,
    pub missing: Vec<MissingDto>,
    pub remarks: Vec<RemarkDto>,
}

impl From<&ErrataReport> for ErrataDto {
    fn from(r: &ErrataReport) -> Self {
        ErrataDto {
            system: system_text(&r.system),
            tolerance: r.tolerance,
            entries: r.entries.iter().map(ErrataEntryDto::from).collect(),
            missing: r
                .missing
                .iter()
                .map(|m| MissingDto {
                    numbers: m.numbers.into(),
                    terms: m
                        .terms
                        .iter()
                        .map(|t| TermDto::new(&t.ms, t.amplitude, t.exact.as_ref()))
                        .collect(),
                })
                .collect(),
            remarks: r
                .remarks
                .iter()
                .map(|m| RemarkDto {
                    id: m.id.to_string(),
                    text: m.text.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParticleDto {
    pub particle: usize,
    pub purity: f64,
    pub entropy: f64,
    pub separable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BipartitionDto {
    pub part: Vec<usize>,
    pub complement: Vec<usize>,
    pub schmidt_coefficients: Vec<f64>,
    pub schmidt_rank: usize,
    pub entropy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairDto {
    pub pair: [usize; 2],
    pub purity: f64,
    pub pure: bool,
    pub entangled: Option<bool>,
}

/// Particles are numbered from 1 in documents.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDto {
    pub particles: Vec<ParticleDto>,
    pub bipartitions: Vec<BipartitionDto>,
    pub pairs: Vec<PairDto>,
    pub separable_particles: Vec<usize>,
    pub genuinely_entangled: bool,
    pub entangled: bool,
    pub published: Option<&'static str>,
    pub label_agreement: Option<bool>,
}

impl From<&EntanglementReport> for ReportDto {
    fn from(r: &EntanglementReport) -> Self {
        let one = |v: &[usize]| v.iter().map(|k| k + 1).collect::<Vec<_>>();
        ReportDto {
            particles: r
                .particles
                .iter()
                .map(|p| ParticleDto {
                    particle: p.index + 1,
                    purity: p.purity,
                    entropy: p.entropy,
                    separable: p.separable,
                })
                .collect(),
            bipartitions: r
                .bipartitions
                .iter()
                .map(|b| BipartitionDto {
                    part: one(&b.part),
                    complement: one(&b.complement),
                    schmidt_coefficients: b.schmidt_coefficients.clone(),
                    schmidt_rank: b.schmidt_rank,
                    entropy: b.entropy,
                })
                .collect(),
            pairs: r
                .pairs
                .iter()
                .map(|p| PairDto {
                    pair: [p.pair.0 + 1, p.pair.1 + 1],
                    purity: p.purity,
                    pure: p.pure,
                    entangled: p.entangled,
                })
                .collect(),
            separable_particles: one(&r.separable_particles),
            genuinely_entangled: r.genuinely_entangled,
            entangled: r.entangled,
            published: r.published.map(verdict_text),
            label_agreement: r.label_agreement,
        }
    }
}
