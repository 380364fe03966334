//! `cg-table`: every nonzero Clebsch–Gordan coefficient `⟨j₁m₁; j₂m₂|JM⟩`.

use serde::Serialize;
use spincouple_core::cg::{clebsch_gordan_exact, coupled_values, projections};
use spincouple_core::listing::Coefficient;
use spincouple_core::numfmt::sci;
use spincouple_core::HalfInt;

use crate::dto::coefficient_text;
use crate::error::{usage, CliResult};
use crate::output::{check_tolerance, finish, Check, Format, Output, RunSummary};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Largest `j` accepted, keeping the exact factorial sums in range.
pub const MAX_J: i32 = 6;

#[derive(Clone, Debug, Serialize)]
pub struct CgConfig {
    pub j1: String,
    pub j2: String,
    pub tolerance: f64,
    pub format: Format,
}

#[derive(Clone, Debug, Serialize)]
pub struct CgEntry {
    pub j1: String,
    pub m1: String,
    pub j2: String,
    pub m2: String,
    pub j: String,
    pub m: String,
    pub exact: String,
    pub value: f64,
}

fn parse_j(name: &str, s: &str) -> CliResult<HalfInt> {
    let j: HalfInt = s.parse().map_err(|e| usage!("--{name} {s:?}: {e}"))?;
    if j.doubled() < 0 || j.doubled() > 2 * MAX_J {
        return Err(usage!("--{name} must lie in [0, {MAX_J}], got {j}"));
    }
    Ok(j)
}

/// Nonzero coefficients ordered by `J` descending, then `M`, `m₁`
/// descending, plus the largest orthonormality defect of the table.
pub fn table(j1: HalfInt, j2: HalfInt) -> CliResult<(Vec<CgEntry>, f64)> {
    let mut entries = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for j in coupled_values(j1, j2) {
        for m in projections(j) {
            let mut column = Vec::new();
            for m1 in projections(j1) {
                for m2 in projections(j2) {
                    let c = clebsch_gordan_exact(j1, m1, j2, m2, j, m)?;
                    column.push(c.to_f64());
                    if c.is_zero() {
                        continue;
                    }
                    entries.push(CgEntry {
                        j1: j1.to_string(),
                        m1: m1.to_string(),
                        j2: j2.to_string(),
                        m2: m2.to_string(),
                        j: j.to_string(),
                        m: m.to_string(),
                        exact: coefficient_text(&Coefficient::from_signed_sqrt(&c)?),
                        value: c.to_f64(),
                    });
                }
            }
            columns.push(column);
        }
    }
    let mut defect: f64 = 0.0;
    for (a, ca) in columns.iter().enumerate() {
        for (b, cb) in columns.iter().enumerate() {
            let dot: f64 = ca.iter().zip(cb).map(|(x, y)| x * y).sum();
            defect = defect.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok((entries, defect))
}

pub fn run(config: &CgConfig, out: Output) -> CliResult<RunSummary> {
    check_tolerance(config.tolerance)?;
    let j1 = parse_j("j1", &config.j1)?;
    let j2 = parse_j("j2", &config.j2)?;
    let mut out = out;
    let (entries, defect) = table(j1, j2)?;
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.j1.clone(),
                e.m1.clone(),
                e.j2.clone(),
                e.m2.clone(),
                e.j.clone(),
                e.m.clone(),
                e.exact.clone(),
                sci(e.value),
            ]
        })
        .collect();
    out.csv(
        "cg_table.csv",
        &["j1", "m1", "j2", "m2", "j", "m", "exact", "value"],
        &rows,
    )?;
    out.json("cg_table.json", &entries)?;
    finish(
        out,
        "cg-table",
        config.clone(),
        vec![Check::at_most("orthonormality", defect, config.tolerance)],
    )
}
