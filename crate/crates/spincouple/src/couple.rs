//! `couple`: the coupled basis of a two- or three-spin system, both
//! construction routes, and the errata report for bundled listings.

use serde::Serialize;
use spincouple_core::coupling::{
    cg_eigenbasis, compare_bases, coupled_eigenbasis, invariant_residual, ladder_defect, Scheme,
};
use spincouple_core::errata::reference_errata;
use spincouple_core::listing::{format_listings, Listing};
use spincouple_core::numfmt::sci;
use spincouple_core::reference::ReferenceSet;
use spincouple_core::spin::{parse_system, ProductBasis, SpinSpecies};

use crate::dto::{system_text, BasisStateDto, ErrataDto};
use crate::error::{usage, CliResult};
use crate::output::{check_tolerance, finish, Check, Output, RunSummary};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct CoupleConfig {
    pub system: String,
    pub tolerance: f64,
    pub format: crate::output::Format,
}

#[derive(Debug, Serialize)]
struct BasisDocument {
    system: String,
    scheme: &'static str,
    states: Vec<BasisStateDto>,
}

/// Parses and checks a system spec: two or three spins.
pub fn parse_supported_system(spec: &str) -> CliResult<Vec<SpinSpecies>> {
    let system = parse_system(spec).map_err(|e| usage!("system {spec:?}: {e}"))?;
    if !(2..=3).contains(&system.len()) {
        return Err(usage!(
            "system {spec:?} has {} spins; two or three are supported",
            system.len()
        ));
    }
    Ok(system)
}

pub fn run(config: &CoupleConfig, out: Output) -> CliResult<RunSummary> {
    let system = parse_supported_system(&config.system)?;
    check_tolerance(config.tolerance)?;
    let mut out = out;

    let scheme = Scheme::for_len(system.len())?;
    let basis = ProductBasis::new(&system)?;
    let analytic = cg_eigenbasis(&system, scheme)?;
    let numeric = coupled_eigenbasis(&system, scheme)?;

    let mut checks = vec![Check::at_most(
        "cg-vs-diagonalization",
        compare_bases(&analytic, &numeric)?,
        config.tolerance,
    )];
    let mut residual: f64 = 0.0;
    for s in &analytic {
        residual = residual.max(invariant_residual(s, &system)?);
    }
    checks.push(Check::at_most(
        "eigen-equation-residual",
        residual,
        config.tolerance,
    ));
    checks.push(Check::at_most(
        "ladder-consistency",
        ladder_defect(&analytic, &system)?,
        config.tolerance,
    ));

    let states = analytic
        .iter()
        .map(|s| BasisStateDto::new(s, &basis))
        .collect::<CliResult<Vec<_>>>()?;
    let scheme_name = match scheme {
        Scheme::PairOnly => "pair",
        Scheme::PairThenThird => "pair-then-third",
    };
    let rows: Vec<Vec<String>> = states
        .iter()
        .map(|s| {
            vec![
                s.numbers.s_pair.clone().unwrap_or_default(),
                s.numbers.s.clone(),
                s.numbers.m.clone(),
                s.terms_text(),
            ]
        })
        .collect();
    out.csv("basis.csv", &["s_pair", "s", "m", "terms"], &rows)?;
    out.json(
        "basis.json",
        &BasisDocument {
            system: system_text(&system),
            scheme: scheme_name,
            states,
        },
    )?;

    let listings = analytic
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let exact = s
                .exact
                .as_ref()
                .expect("analytic basis carries exact amplitudes");
            Listing::from_exact(&format!("b{}", k + 1), s.numbers, &system, exact)
        })
        .collect::<spincouple_core::Result<Vec<_>>>()?;
    out.text("basis.txt", &format_listings(&listings))?;

    let mut info = format!(
        "system: {}\nstates: {}\n",
        system_text(&system),
        analytic.len()
    );
    for c in &checks {
        info.push_str(&format!(
            "{}: {} (limit {})\n",
            c.name,
            sci(c.value),
            sci(c.limit)
        ));
    }

    if let Some(set) = ReferenceSet::for_system(&system) {
        let report = reference_errata(set, config.tolerance)?;
        out.text("errata.txt", &report.to_string())?;
        out.json_always("errata.json", &ErrataDto::from(&report))?;
        info.push_str(&format!(
            "reference listings: {} ({} entries, {} inconsistent, {} missing)\n",
            set.name(),
            report.entries.len(),
            report
                .entries
                .iter()
                .filter(|e| !e.verdict.is_consistent())
                .count(),
            report.missing.len()
        ));
    }
    out.text("summary.txt", &info)?;
    finish(out, "couple", config.clone(), checks)
}
