//! Two identical particles with a Gaussian spatial part on a 1D grid and a
//! two-particle spin state.
//!
//! Width convention: a packet of width `σ` has amplitude
//! `∝ exp(−(x − x₀)²/(4σ²))`, so `|φ|²` has variance `σ²` and two packets of
//! equal width a distance `d` apart overlap by `exp(−d²/(8σ²))`.

use alloc::vec::Vec;
use core::fmt;

use crate::entanglement::entropy_of_spectrum;
use crate::error::invalid;
use crate::tensor::{eigvalsh, reduced_density, StateVector, DEFAULT_DIM_CAP};
use crate::{Error, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// Guard on `1 − |⟨φ₁|φ₂⟩|²` below which an antisymmetric spatial part is
/// treated as the zero vector.
pub const DEGENERACY_GUARD: f64 = 1e-8;

/// A packet must keep `center ± BOUNDARY_SIGMAS·σ` inside the grid.
pub const BOUNDARY_SIGMAS: f64 = 3.0;

/// Smallest packet width in grid spacings.
pub const MIN_SIGMA_SPACINGS: f64 = 3.0;

/// `N` cell-centered points on `[−L, L]`: `x_i = −L + (i + ½)·2L/N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(invalid!(
                "grid half-width must be positive and finite, got {half_width}"
            ));
        }
        if points < 16 || !points.is_multiple_of(2) {
            return Err(invalid!(
                "grid needs an even number of points >= 16, got {points}"
            ));
        }
        Ok(GridSpec { half_width, points })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    /// The same interval with twice as many points.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            half_width: self.half_width,
            points: 2 * self.points,
        }
    }
}

/// A real Gaussian sampled on a grid, normalized so that `Σ|uᵢ|² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianPacket {
    grid: GridSpec,
    center: f64,
    sigma: f64,
    amps: Vec<f64>,
}

impl GaussianPacket {
    pub fn new(grid: GridSpec, center: f64, sigma: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(invalid!("packet center must be finite, got {center}"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid!(
                "packet width must be positive and finite, got {sigma}"
            ));
        }
        let h = grid.spacing();
        if sigma < MIN_SIGMA_SPACINGS * h {
            return Err(invalid!(
                "packet width {sigma} is below {MIN_SIGMA_SPACINGS} grid spacings ({}); use more points",
                MIN_SIGMA_SPACINGS * h
            ));
        }
        let reach = BOUNDARY_SIGMAS * sigma;
        if center - reach < -grid.half_width || center + reach > grid.half_width {
            return Err(invalid!(
                "packet at {center} with width {sigma} leaves the grid [-{L}, {L}]; \
                 it needs center +/- {BOUNDARY_SIGMAS} sigma inside",
                L = grid.half_width
            ));
        }
        let mut amps: Vec<f64> = (0..grid.points)
            .map(|i| {
                let u = grid.x(i) - center;
                (-u * u / (4.0 * sigma * sigma)).exp()
            })
            .collect();
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Ok(GaussianPacket {
            grid,
            center,
            sigma,
            amps,
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }
}

/// Discrete `⟨a|b⟩`.
pub fn overlap(a: &GaussianPacket, b: &GaussianPacket) -> Result<C64> {
    if a.grid != b.grid {
        return Err(invalid!("packets live on different grids"));
    }
    Ok(C64::new(
        a.amps.iter().zip(&b.amps).map(|(x, y)| x * y).sum(),
        0.0,
    ))
}

/// `exp(−d²/(8σ²))`.
pub fn gaussian_overlap(d: f64, sigma: f64) -> f64 {
    (-d * d / (8.0 * sigma * sigma)).exp()
}

/// Behavior under exchange of the two particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn sign(self) -> f64 {
        match self {
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
        }
    }

    fn from_sign(s: f64) -> Symmetry {
        if s > 0.0 {
            Symmetry::Symmetric
        } else {
            Symmetry::Antisymmetric
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" | "sym" | "s" => Ok(Symmetry::Symmetric),
            "antisymmetric" | "anti" | "a" => Ok(Symmetry::Antisymmetric),
            _ => Err(invalid!(
                "unknown symmetry {s:?}; expected symmetric or antisymmetric"
            )),
        }
    }
}

/// Exchange eigenvalue of a two-particle spin state, checked to `1e-10`.
pub fn spin_exchange(spin: &StateVector) -> Result<Symmetry> {
    let dims = spin.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(invalid!(
            "spin state must describe two identical particles, got dims {dims:?}"
        ));
    }
    let swapped = spin.permute(&[1, 0])?;
    let lambda = spin.inner(&swapped)?.re;
    let sign = if lambda >= 0.0 { 1.0 } else { -1.0 };
    let defect = spin
        .amplitudes()
        .iter()
        .zip(swapped.amplitudes())
        .map(|(a, b)| (b - a * sign).norm())
        .fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(invalid!(
            "spin state is not an exchange eigenstate (defect {defect:e})"
        ));
    }
    Ok(Symmetry::from_sign(sign))
}

/// Checks that space ⊗ spin has the exchange sign identical particles of
/// this spin need: −1 for half-integer spin, +1 for integer spin.
pub fn check_pairing(space: Symmetry, spin: Symmetry, spin_dim: usize) -> Result<()> {
    let fermion = spin_dim.is_multiple_of(2);
    let total = space.sign() * spin.sign();
    let required = if fermion { -1.0 } else { 1.0 };
    if total != required {
        let (kind, need, rule) = if fermion {
            ("fermions", "antisymmetric", "symmetric space pairs with an antisymmetric spin state and antisymmetric space with a symmetric one")
        } else {
            ("bosons", "symmetric", "symmetric space pairs with a symmetric spin state and antisymmetric space with an antisymmetric one")
        };
        return Err(invalid!(
            "{space} space and {spin} spin give a total state that is {} under exchange, but \
             identical {kind} need one that is {need} (space state x spin state): {rule}",
            Symmetry::from_sign(total)
        ));
    }
    Ok(())
}

/// A two-particle space ⊗ spin state with subsystems
/// `[x₁, spin₁, x₂, spin₂]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalState {
    pub state: StateVector,
    pub symmetry: Symmetry,
    pub space: Symmetry,
    pub overlap: C64,
    /// `1/√(2(1 ± |⟨φ₁|φ₂⟩|²))`.
    pub normalization: f64,
}

impl TotalState {
    /// Largest `|P ψ − λ ψ|` over amplitudes, `P` swapping the particles.
    pub fn swap_defect(&self) -> Result<f64> {
        swap_defect(&self.state, self.symmetry)
    }

    /// Von Neumann entropy of one particle (its grid and spin factors).
    pub fn particle_entropy(&self) -> Result<f64> {
        let rho = reduced_density(&self.state, &[0, 1])?;
        entropy_of_spectrum(&eigvalsh(rho.matrix()))
    }
}

/// `max |P ψ − λ ψ|` for a state with subsystems `[x₁, s₁, x₂, s₂]`.
pub fn swap_defect(state: &StateVector, symmetry: Symmetry) -> Result<f64> {
    if state.subsystems() != 4 {
        return Err(invalid!(
            "expected subsystems [x1, s1, x2, s2], got dims {:?}",
            state.dims()
        ));
    }
    let swapped = state.permute(&[2, 3, 0, 1])?;
    let sign = symmetry.sign();
    Ok(state
        .amplitudes()
        .iter()
        .zip(swapped.amplitudes())
        .map(|(a, b)| (b - a * sign).norm())
        .fold(0.0, f64::max))
}

/// `(φ₁(x₁)φ₂(x₂) ± φ₂(x₁)φ₁(x₂)) / √(2(1 ± |⟨φ₁|φ₂⟩|²)) ⊗ χ`.
///
/// `space` picks the sign. The spin state must be a two-particle exchange
/// eigenstate (for a coupled basis state pass its `vector`), and the product
/// must have the exchange sign its spin statistics demand.
pub fn build_total_state(
    phi1: &GaussianPacket,
    phi2: &GaussianPacket,
    spin: &StateVector,
    space: Symmetry,
) -> Result<TotalState> {
    let spin_sym = spin_exchange(spin)?;
    let d = spin.dims()[0];
    check_pairing(space, spin_sym, d)?;
    let o = overlap(phi1, phi2)?;
    let n = phi1.grid.points;
    let per_particle = n * d;
    let total = per_particle
        .checked_mul(per_particle)
        .filter(|&t| t <= DEFAULT_DIM_CAP);
    if total.is_none() {
        return Err(Error::Capacity {
            requested: per_particle.saturating_mul(per_particle),
            cap: DEFAULT_DIM_CAP,
        });
    }
    let o2 = o.norm_sqr();
    if space == Symmetry::Antisymmetric && 1.0 - o2 < DEGENERACY_GUARD {
        return Err(Error::Degenerate(alloc::format!(
            "antisymmetric spatial part vanishes: packets coincide (1 - |overlap|^2 = {:e})",
            1.0 - o2
        )));
    }
    let sign = space.sign();
    let normalization = 1.0 / (2.0 * (1.0 + sign * o2)).sqrt();
    let (a, b) = (phi1.amplitudes(), phi2.amplitudes());
    let chi = spin.amplitudes();
    let mut amps = Vec::with_capacity(per_particle * per_particle);
    for x1 in 0..n {
        for s1 in 0..d {
            for x2 in 0..n {
                let space_amp = (a[x1] * b[x2] + sign * b[x1] * a[x2]) * normalization;
                amps.extend((0..d).map(|s2| chi[s1 * d + s2] * space_amp));
            }
        }
    }
    let state = StateVector::with_norm_tolerance(alloc::vec![n, d, n, d], amps, 1e-9)?;
    Ok(TotalState {
        state,
        symmetry: Symmetry::from_sign(sign * spin_sym.sign()),
        space,
        overlap: o,
        normalization,
    })
}

/// One separation in a scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub d: f64,
    pub overlap_abs: f64,
    pub entropy: f64,
    pub swap_defect: f64,
}

/// Packets at `∓d/2`, combined and analyzed. Errors name `d`.
pub fn scan_row(
    grid: GridSpec,
    sigma: f64,
    spin: &StateVector,
    space: Symmetry,
    d: f64,
) -> Result<ScanRow> {
    let tag = |e: Error| match e {
        Error::Validation(m) => Error::Validation(alloc::format!("separation d = {d}: {m}")),
        Error::Degenerate(m) => Error::Degenerate(alloc::format!("separation d = {d}: {m}")),
        other => other,
    };
    let phi1 = GaussianPacket::new(grid, -0.5 * d, sigma).map_err(tag)?;
    let phi2 = GaussianPacket::new(grid, 0.5 * d, sigma).map_err(tag)?;
    let total = build_total_state(&phi1, &phi2, spin, space).map_err(tag)?;
    Ok(ScanRow {
        d,
        overlap_abs: total.overlap.norm(),
        entropy: total.particle_entropy()?,
        swap_defect: total.swap_defect()?,
    })
}

/// Validates a separation list: finite, non-negative, strictly ascending,
/// every packet inside the grid. Also checks the pairing once up front.
pub fn validate_scan(
    grid: GridSpec,
    sigma: f64,
    spin: &StateVector,
    space: Symmetry,
    ds: &[f64],
) -> Result<()> {
    if ds.is_empty() {
        return Err(invalid!("separation list is empty"));
    }
    for (k, &d) in ds.iter().enumerate() {
        if !(d.is_finite() && d >= 0.0) {
            return Err(invalid!(
                "separation d = {d} must be finite and non-negative"
            ));
        }
        if k > 0 && d <= ds[k - 1] {
            return Err(invalid!(
                "separations must be strictly ascending: d = {} follows d = {}",
                d,
                ds[k - 1]
            ));
        }
        GaussianPacket::new(grid, 0.5 * d, sigma).map_err(|e| match e {
            Error::Validation(m) => invalid!("separation d = {d}: {m}"),
            other => other,
        })?;
    }
    let spin_sym = spin_exchange(spin)?;
    check_pairing(space, spin_sym, spin.dims()[0])
}

/// [`scan_row`] for every separation, in order.
pub fn separation_scan(
    grid: GridSpec,
    sigma: f64,
    spin: &StateVector,
    space: Symmetry,
    ds: &[f64],
) -> Result<Vec<ScanRow>> {
    validate_scan(grid, sigma, spin, space, ds)?;
    ds.iter()
        .map(|&d| scan_row(grid, sigma, spin, space, d))
        .collect()
}
