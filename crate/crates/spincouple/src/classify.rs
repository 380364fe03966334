//! `classify`: purity-based entanglement report for one state, or for every
//! bundled listing.

use std::path::PathBuf;

use serde::Serialize;
use spincouple_core::entanglement::separability_report;
use spincouple_core::errata::reference_errata;
use spincouple_core::numfmt::sci;
use spincouple_core::reference::{find_listing, published_verdict, ReferenceSet};
use spincouple_core::spin::SpinSpecies;
use spincouple_core::tensor::StateVector;
use spincouple_core::C64;

use crate::couple::parse_supported_system;
use crate::dto::{verdict_text, ReportDto};
use crate::error::{usage, CliError, CliResult};
use crate::output::{check_tolerance, finish, Format, Output, RunSummary};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Where the state comes from.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Source {
    Listing(String),
    /// Amplitude file over the product basis of `system`.
    Amplitudes {
        path: PathBuf,
        system: String,
    },
    /// Every bundled listing.
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyConfig {
    pub source: Source,
    /// Consistency tolerance for the listing-versus-oracle check.
    pub tolerance: f64,
    pub format: Format,
}

/// Reads `re [im]` per line, one line per product-basis index in order.
/// `#` starts a comment; blank lines are skipped.
pub fn parse_amplitudes(text: &str) -> CliResult<Vec<C64>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() > 2 {
            return Err(usage!(
                "amplitude line {}: expected `re [im]`, got {} fields",
                k + 1,
                fields.len()
            ));
        }
        let num = |s: &str| -> CliResult<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| usage!("amplitude line {}: {s:?} is not a number", k + 1))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(usage!("amplitude line {}: {s:?} is not finite", k + 1))
            }
        };
        let re = num(fields[0])?;
        let im = if fields.len() == 2 {
            num(fields[1])?
        } else {
            0.0
        };
        out.push(C64::new(re, im));
    }
    Ok(out)
}

fn load_state(path: &PathBuf, system: &[SpinSpecies]) -> CliResult<StateVector> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    let amps = parse_amplitudes(&text)?;
    let dims: Vec<usize> = system.iter().map(|s| s.dim()).collect();
    let dim: usize = dims.iter().product();
    if amps.len() != dim {
        return Err(usage!(
            "{} holds {} amplitudes; the system needs {dim}",
            path.display(),
            amps.len()
        ));
    }
    Ok(StateVector::normalized(dims, amps)?)
}

#[derive(Debug, Serialize)]
struct SingleDocument {
    source: String,
    listing_verdict: Option<&'static str>,
    report: ReportDto,
}

#[derive(Debug, Serialize)]
struct Row {
    id: String,
    set: &'static str,
    listing_verdict: &'static str,
    listing_consistent: bool,
    published: &'static str,
    entangled: bool,
    genuinely_entangled: bool,
    label_agreement: Option<bool>,
}

fn report_rows(r: &ReportDto) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for p in &r.particles {
        rows.push(vec![
            "particle".into(),
            p.particle.to_string(),
            sci(p.purity),
            sci(p.entropy),
            String::new(),
            if p.separable {
                "separable"
            } else {
                "entangled"
            }
            .into(),
        ]);
    }
    for b in &r.bipartitions {
        let part = b
            .part
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        rows.push(vec![
            "bipartition".into(),
            part,
            String::new(),
            sci(b.entropy),
            b.schmidt_rank.to_string(),
            if b.schmidt_rank > 1 {
                "entangled"
            } else {
                "product"
            }
            .into(),
        ]);
    }
    for p in &r.pairs {
        let verdict = match p.entangled {
            Some(true) => "entangled",
            Some(false) => "product",
            None => "mixed",
        };
        rows.push(vec![
            "pair".into(),
            format!("{} {}", p.pair[0], p.pair[1]),
            sci(p.purity),
            String::new(),
            String::new(),
            verdict.into(),
        ]);
    }
    rows
}

const REPORT_HEADER: [&str; 6] = [
    "kind",
    "subsystems",
    "purity",
    "entropy",
    "schmidt_rank",
    "verdict",
];

pub fn run(config: &ClassifyConfig, out: Output) -> CliResult<RunSummary> {
    check_tolerance(config.tolerance)?;
    let mut out = out;
    match &config.source {
        Source::Listing(id) => {
            let (set, listing) =
                find_listing(id)?.ok_or_else(|| usage!("unknown listing id {id:?}"))?;
            let system = set.system();
            let errata = reference_errata(set, config.tolerance)?;
            let entry_verdict = errata.entry(id).map(|e| e.verdict.as_str());
            let state = listing.state(&system)?;
            let report = separability_report(&state)?.with_published(published_verdict(id));
            let dto = ReportDto::from(&report);
            out.csv("report.csv", &REPORT_HEADER, &report_rows(&dto))?;
            out.json(
                "report.json",
                &SingleDocument {
                    source: id.clone(),
                    listing_verdict: entry_verdict,
                    report: dto,
                },
            )?;
        }
        Source::Amplitudes { path, system } => {
            let system = parse_supported_system(system)?;
            let state = load_state(path, &system)?;
            let report = separability_report(&state)?;
            let dto = ReportDto::from(&report);
            out.csv("report.csv", &REPORT_HEADER, &report_rows(&dto))?;
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.json(
                "report.json",
                &SingleDocument {
                    source: name,
                    listing_verdict: None,
                    report: dto,
                },
            )?;
        }
        Source::All => {
            let rows = classify_all(config.tolerance)?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        r.set.into(),
                        r.listing_verdict.into(),
                        r.published.into(),
                        r.entangled.to_string(),
                        r.genuinely_entangled.to_string(),
                        r.label_agreement
                            .map_or_else(String::new, |a| a.to_string()),
                    ]
                })
                .collect();
            out.csv(
                "classification.csv",
                &[
                    "id",
                    "set",
                    "listing_verdict",
                    "published",
                    "entangled",
                    "genuinely_entangled",
                    "label_agreement",
                ],
                &table,
            )?;
            out.json("classification.json", &rows)?;
        }
    }
    // Disagreement with a published label is a finding, never a failure.
    finish(out, "classify", config.clone(), Vec::new())
}

fn classify_all(tol: f64) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for set in ReferenceSet::ALL {
        let system = set.system();
        let errata = reference_errata(set, tol)?;
        for listing in set.listings()? {
            let entry = errata
                .entry(&listing.id)
                .expect("every listing has an errata entry");
            let published = published_verdict(&listing.id);
            let report = separability_report(&listing.state(&system)?)?.with_published(published);
            rows.push(Row {
                id: listing.id.clone(),
                set: set.name(),
                listing_verdict: entry.verdict.as_str(),
                listing_consistent: entry.verdict.is_consistent(),
                published: published.map_or("none", verdict_text),
                entangled: report.entangled,
                genuinely_entangled: report.genuinely_entangled,
                label_agreement: report.label_agreement,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_file_parsing() {
        let a = parse_amplitudes("# singlet\n0\n0.5 0.5\n\n-1 # trailing\n0 0\n").unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a[1], C64::new(0.5, 0.5));
        assert_eq!(a[2], C64::new(-1.0, 0.0));
        assert!(parse_amplitudes("1 2 3").is_err());
        assert!(parse_amplitudes("x").is_err());
        assert!(parse_amplitudes("inf").is_err());
    }
}
