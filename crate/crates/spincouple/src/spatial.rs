//! `spatial`: particle entanglement of a space ⊗ spin two-particle state as
//! the packets separate.

use rayon::prelude::*;
use serde::Serialize;
use spincouple_core::numfmt::sci;
use spincouple_core::reference::find_listing;
use spincouple_core::spatial::{
    gaussian_overlap, scan_row, validate_scan, GridSpec, ScanRow, Symmetry, BOUNDARY_SIGMAS,
    DEGENERACY_GUARD, MIN_SIGMA_SPACINGS,
};
use spincouple_core::tensor::StateVector;

use crate::error::{usage, CliResult};
use crate::output::{check_tolerance, finish, Check, Format, Output, RunSummary};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_POINTS: usize = 128;
/// Exchange eigenvalue limit on every constructed state.
pub const SWAP_LIMIT: f64 = 1e-10;
/// Default half-width margin beyond the outermost packet center, in widths.
pub const AUTO_MARGIN_SIGMAS: f64 = 8.0;

#[derive(Clone, Debug, Serialize)]
pub struct SpatialConfig {
    pub sigma: f64,
    pub separations: Vec<f64>,
    /// Two-particle listing id supplying the spin state.
    pub listing: String,
    #[serde(serialize_with = "crate::dto::display")]
    pub symmetry: Symmetry,
    pub points: usize,
    /// Defaults to `max(d)/2 + 8σ`.
    pub half_width: Option<f64>,
    /// Repeat the scan with twice the points and report the change.
    pub refine: bool,
    pub tolerance: f64,
    pub format: Format,
}

impl SpatialConfig {
    pub fn effective_half_width(&self) -> f64 {
        self.half_width.unwrap_or_else(|| {
            let dmax = self.separations.iter().copied().fold(0.0, f64::max);
            0.5 * dmax + AUTO_MARGIN_SIGMAS * self.sigma
        })
    }
}

/// The spin state of a two-particle listing.
pub fn spin_from_listing(id: &str) -> CliResult<StateVector> {
    let (set, listing) = find_listing(id)?.ok_or_else(|| usage!("unknown listing id {id:?}"))?;
    let system = set.system();
    if system.len() != 2 {
        return Err(usage!(
            "listing {id} describes {} particles; the spatial scan needs two",
            system.len()
        ));
    }
    Ok(listing.state(&system)?)
}

/// Rows for every separation, computed in parallel and returned in input
/// order.
pub fn parallel_scan(
    grid: GridSpec,
    sigma: f64,
    spin: &StateVector,
    space: Symmetry,
    ds: &[f64],
) -> CliResult<Vec<ScanRow>> {
    validate_scan(grid, sigma, spin, space, ds)?;
    Ok(ds
        .par_iter()
        .map(|&d| scan_row(grid, sigma, spin, space, d))
        .collect::<spincouple_core::Result<Vec<_>>>()?)
}

#[derive(Debug, Serialize)]
struct Convention {
    amplitude: &'static str,
    overlap_closed_form: &'static str,
    packet_centers: &'static str,
    grid_points: &'static str,
    entropy: &'static str,
    min_sigma_spacings: f64,
    boundary_sigmas: f64,
    degeneracy_guard: f64,
}

#[derive(Debug, Serialize)]
struct GridDoc {
    half_width: f64,
    points: usize,
    spacing: f64,
}

#[derive(Debug, Serialize)]
struct RowDoc {
    d: f64,
    overlap_abs: f64,
    overlap_closed_form: f64,
    entropy: f64,
    swap_defect: f64,
    refined_overlap_abs: Option<f64>,
    refined_entropy: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ScanDocument {
    grid: GridDoc,
    sigma: f64,
    listing: String,
    #[serde(serialize_with = "crate::dto::display")]
    space: Symmetry,
    convention: Convention,
    rows: Vec<RowDoc>,
}

pub fn run(config: &SpatialConfig, out: Output) -> CliResult<RunSummary> {
    check_tolerance(config.tolerance)?;
    let spin = spin_from_listing(&config.listing)?;
    let grid = GridSpec::new(config.effective_half_width(), config.points)?;
    validate_scan(
        grid,
        config.sigma,
        &spin,
        config.symmetry,
        &config.separations,
    )?;
    let fine = config.refine.then(|| grid.refined());
    if let Some(f) = fine {
        validate_scan(f, config.sigma, &spin, config.symmetry, &config.separations)?;
    }
    let mut out = out;

    let rows = parallel_scan(
        grid,
        config.sigma,
        &spin,
        config.symmetry,
        &config.separations,
    )?;
    let refined = match fine {
        Some(f) => Some(parallel_scan(
            f,
            config.sigma,
            &spin,
            config.symmetry,
            &config.separations,
        )?),
        None => None,
    };

    let closed: Vec<f64> = rows
        .iter()
        .map(|r| gaussian_overlap(r.d, config.sigma))
        .collect();
    let mut checks = vec![
        Check::at_most(
            "overlap-vs-closed-form",
            rows.iter()
                .zip(&closed)
                .map(|(r, c)| (r.overlap_abs - c).abs())
                .fold(0.0, f64::max),
            config.tolerance,
        ),
        Check::at_most(
            "exchange-eigenvalue",
            rows.iter().map(|r| r.swap_defect).fold(0.0, f64::max),
            SWAP_LIMIT,
        ),
    ];
    if rows.len() > 1 {
        let rise = rows
            .windows(2)
            .map(|w| w[1].overlap_abs - w[0].overlap_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most("overlap-decreasing", rise, 1e-10));
    }
    if let Some(fine_rows) = &refined {
        let worst = |f: fn(&ScanRow) -> f64| {
            rows.iter()
                .zip(fine_rows)
                .map(|(a, b)| (f(a) - f(b)).abs())
                .fold(0.0, f64::max)
        };
        checks.push(Check::at_most(
            "refinement-overlap",
            worst(|r| r.overlap_abs),
            config.tolerance,
        ));
        checks.push(Check::at_most(
            "refinement-entropy",
            worst(|r| r.entropy),
            config.tolerance,
        ));
        checks.push(Check::at_most(
            "exchange-eigenvalue-refined",
            fine_rows.iter().map(|r| r.swap_defect).fold(0.0, f64::max),
            SWAP_LIMIT,
        ));
    }

    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![sci(r.d), sci(r.overlap_abs), sci(r.entropy)])
        .collect();
    out.csv("spatial_scan.csv", &["d", "overlap_abs", "entropy"], &table)?;
    let doc = ScanDocument {
        grid: GridDoc {
            half_width: grid.half_width(),
            points: grid.points(),
            spacing: grid.spacing(),
        },
        sigma: config.sigma,
        listing: config.listing.clone(),
        space: config.symmetry,
        convention: Convention {
            amplitude: "exp(-(x - x0)^2 / (4 sigma^2)), normalized so that sum |u_i|^2 = 1",
            overlap_closed_form: "exp(-d^2 / (8 sigma^2))",
            packet_centers: "-d/2 and +d/2",
            grid_points: "x_i = -L + (i + 1/2) * 2L/N",
            entropy:
                "von Neumann entropy (natural log) of one particle's grid x spin reduced state",
            min_sigma_spacings: MIN_SIGMA_SPACINGS,
            boundary_sigmas: BOUNDARY_SIGMAS,
            degeneracy_guard: DEGENERACY_GUARD,
        },
        rows: rows
            .iter()
            .enumerate()
            .map(|(k, r)| RowDoc {
                d: r.d,
                overlap_abs: r.overlap_abs,
                overlap_closed_form: closed[k],
                entropy: r.entropy,
                swap_defect: r.swap_defect,
                refined_overlap_abs: refined.as_ref().map(|f| f[k].overlap_abs),
                refined_entropy: refined.as_ref().map(|f| f[k].entropy),
            })
            .collect(),
    };
    out.json_always("spatial_scan.json", &doc)?;
    finish(out, "spatial", config.clone(), checks)
}
