//! Finite-difference integrator for the reduced 1D equation
//! u_t = u_ρρ + (d−1)h₁(ρ)u_ρ + f(u) on an interval, with a moving
//! computational window for long-time front runs.
//!
//! The default scheme is an IMEX trapezoidal rule: Crank–Nicolson on the
//! linear diffusion + drift part (one tridiagonal solve per stage) with a
//! two-stage Heun treatment of the reaction — second order in time without
//! splitting error and unconditionally stable in the stiff part. The drift is
//! discretized centered while the cell Péclet number (d−1)|h₁|drho/2 stays
//! ≤ 1 and upwinded otherwise, which keeps the off-diagonal signs that the
//! discrete comparison principle needs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{drift_h1, SymmetryClass};
use crate::num;
use crate::reaction::ReactionFn;

/// Uniform spatial grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub rho_min: f64,
    pub rho_max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(rho_min: f64, rho_max: f64, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::InvalidParameter { what: "grid needs n >= 16" });
        }
        if !(rho_max > rho_min) {
            return Err(Error::InvalidParameter { what: "grid needs rho_max > rho_min" });
        }
        Ok(Self { rho_min, rho_max, n })
    }

    pub fn drho(&self) -> f64 {
        (self.rho_max - self.rho_min) / (self.n - 1) as f64
    }

    pub fn rho(&self, j: usize) -> f64 {
        self.rho_min + self.drho() * j as f64
    }
}

/// A sampled solution state u(·, t) in absolute coordinates.
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// IMEX trapezoidal: Crank–Nicolson linear part, two-stage Heun
    /// reaction (one predictor and one corrector solve per step).
    ImexCn,
    /// Fully explicit first-order step; requires dt ≤ 0.4·drho².
    ExplicitEuler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftBc {
    Neumann0,
    Dirichlet1,
    Dirichlet0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightBc {
    Dirichlet0,
    Neumann0,
}

/// Moving-window policy for front runs: once the leading edge (the rightmost
/// cell above `trigger_level`) eats into the right pad, the window slides
/// right by `shift_chunk` cells, back-filling the left with the boundary
/// value and the right with zeros. Coordinates stay absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingWindow {
    pub trigger_level: f64,
    pub pad_right: f64,
    pub shift_chunk: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub left_bc: LeftBc,
    pub right_bc: RightBc,
    pub window: Option<MovingWindow>,
}

/// A logged window shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftEvent {
    pub time: f64,
    pub cells: usize,
    pub new_rho_min: f64,
}

/// Outcome of [`run`]: requested snapshots plus solver statistics.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub snapshots: Vec<Field>,
    pub steps: usize,
    pub shifts: Vec<ShiftEvent>,
    /// Largest clip applied to keep values in [0,1]; must stay tiny.
    pub max_clip: f64,
}

/// Sample an initial datum onto a grid.
pub fn init_from_datum(
    class: SymmetryClass,
    grid: Grid1D,
    datum: &dyn Fn(f64) -> f64,
) -> Result<Field> {
    if grid.rho_min < class.domain_inf() {
        return Err(Error::OutOfDomain);
    }
    let mut values = Vec::with_capacity(grid.n);
    for j in 0..grid.n {
        let v = datum(grid.rho(j));
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidDatum);
        }
        values.push(v);
    }
    Ok(Field { grid, values, time: 0.0 })
}

/// Max over grid values.
pub fn sup_norm(field: &Field) -> f64 {
    field.values.iter().fold(0.0f64, |m, &v| m.max(v))
}

/// Thomas algorithm for a tridiagonal system; diag is consumed as workspace.
fn solve_tridiag(
    lower: &[f64],
    diag: &mut [f64],
    upper: &[f64],
    rhs: &mut [f64],
) -> Result<()> {
    let n = rhs.len();
    for i in 1..n {
        if num::abs(diag[i - 1]) < 1e-300 {
            return Err(Error::NumericalFailure { detail: "tridiagonal pivot underflow" });
        }
        let m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if num::abs(diag[n - 1]) < 1e-300 {
        return Err(Error::NumericalFailure { detail: "tridiagonal pivot underflow" });
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    Ok(())
}

/// Spatial operator rows (lower, diag, upper) of L = ∂ρρ + (d−1)h₁∂ρ with
/// the boundary closures applied. Dirichlet rows are flagged (all-zero row;
/// the value is pinned separately).
struct LinearRows {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    left_dirichlet: Option<f64>,
    right_dirichlet: Option<f64>,
}

fn effective_left_bc(class: SymmetryClass, grid: &Grid1D, cfg: &SolverConfig) -> LeftBc {
    // The elliptic Neumann condition belongs to the origin; once a window
    // shift moves the left edge off ρ=0 the region behind the front has
    // saturated and the natural closure is u=1.
    if cfg.left_bc == LeftBc::Neumann0
        && class == SymmetryClass::Elliptic
        && grid.rho_min > 0.5 * grid.drho()
    {
        LeftBc::Dirichlet1
    } else {
        cfg.left_bc
    }
}

fn build_rows(
    class: SymmetryClass,
    d: u32,
    grid: &Grid1D,
    cfg: &SolverConfig,
) -> Result<LinearRows> {
    let n = grid.n;
    let h = grid.drho();
    let h2 = h * h;
    let dm1 = (d - 1) as f64;
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];

    for j in 1..n - 1 {
        let b = dm1 * drift_h1(class, grid.rho(j))?;
        if num::abs(b) * h / 2.0 <= 1.0 {
            lower[j] = 1.0 / h2 - b / (2.0 * h);
            diag[j] = -2.0 / h2;
            upper[j] = 1.0 / h2 + b / (2.0 * h);
        } else if b > 0.0 {
            lower[j] = 1.0 / h2;
            diag[j] = -2.0 / h2 - b / h;
            upper[j] = 1.0 / h2 + b / h;
        } else {
            lower[j] = 1.0 / h2 - b / h;
            diag[j] = -2.0 / h2 + b / h;
            upper[j] = 1.0 / h2;
        }
    }

    let mut left_dirichlet = None;
    match effective_left_bc(class, grid, cfg) {
        LeftBc::Dirichlet1 => left_dirichlet = Some(1.0),
        LeftBc::Dirichlet0 => left_dirichlet = Some(0.0),
        LeftBc::Neumann0 => {
            if class == SymmetryClass::Elliptic {
                if grid.rho_min < 0.0 {
                    return Err(Error::OutOfDomain);
                }
                // Origin row: u_ρρ + (d−1)u_ρ/ρ → d·u_ρρ as ρ→0, closed with
                // the even reflection u(−ρ)=u(ρ).
                diag[0] = -2.0 * d as f64 / h2;
                upper[0] = 2.0 * d as f64 / h2;
            } else {
                diag[0] = -2.0 / h2;
                upper[0] = 2.0 / h2;
            }
        }
    }
    let mut right_dirichlet = None;
    match cfg.right_bc {
        RightBc::Dirichlet0 => right_dirichlet = Some(0.0),
        RightBc::Neumann0 => {
            let b = dm1 * drift_h1(class, grid.rho(n - 1))?;
            let _ = b; // u_ρ = 0 kills the drift term at the wall
            diag[n - 1] = -2.0 / h2;
            lower[n - 1] = 2.0 / h2;
        }
    }
    Ok(LinearRows { lower, diag, upper, left_dirichlet, right_dirichlet })
}

fn clip(values: &mut [f64]) -> f64 {
    let mut worst = 0.0f64;
    for v in values.iter_mut() {
        if *v < 0.0 {
            worst = worst.max(-*v);
            *v = 0.0;
        } else if *v > 1.0 {
            worst = worst.max(*v - 1.0);
            *v = 1.0;
        }
    }
    worst
}

fn step_impl(
    f: &ReactionFn,
    field: &mut Field,
    cfg: &SolverConfig,
    rows: &LinearRows,
) -> Result<f64> {
    let n = field.grid.n;
    let dt = cfg.dt;
    match cfg.scheme {
        Scheme::ExplicitEuler => {
            let u = &field.values;
            let mut out = Vec::with_capacity(n);
            for j in 0..n {
                let lu = if j == 0 {
                    rows.diag[0] * u[0] + rows.upper[0] * u[1]
                } else if j == n - 1 {
                    rows.lower[n - 1] * u[n - 2] + rows.diag[n - 1] * u[n - 1]
                } else {
                    rows.lower[j] * u[j - 1] + rows.diag[j] * u[j] + rows.upper[j] * u[j + 1]
                };
                out.push(u[j] + dt * (lu + f.eval(u[j])));
            }
            if let Some(v) = rows.left_dirichlet {
                out[0] = v;
            }
            if let Some(v) = rows.right_dirichlet {
                out[n - 1] = v;
            }
            field.values = out;
        }
        Scheme::ImexCn => {
            // IMEX trapezoid: with A = I − (dt/2)L and base = u + (dt/2)Lu,
            //   A u*   = base + dt·f(u)        (predictor)
            //   A u⁺   = base + dt/2·(f(u)+f(u*))   (corrector)
            // Dirichlet rows pinned in both solves.
            let u = field.values.clone();
            let mut a_low = vec![0.0; n];
            let mut a_diag = vec![0.0; n];
            let mut a_up = vec![0.0; n];
            let mut base = vec![0.0; n];
            for j in 0..n {
                a_low[j] = -0.5 * dt * rows.lower[j];
                a_diag[j] = 1.0 - 0.5 * dt * rows.diag[j];
                a_up[j] = -0.5 * dt * rows.upper[j];
                let lu = if j == 0 {
                    rows.diag[0] * u[0] + rows.upper[0] * u[1]
                } else if j == n - 1 {
                    rows.lower[n - 1] * u[n - 2] + rows.diag[n - 1] * u[n - 1]
                } else {
                    rows.lower[j] * u[j - 1] + rows.diag[j] * u[j] + rows.upper[j] * u[j + 1]
                };
                base[j] = u[j] + 0.5 * dt * lu;
            }
            if let Some(_v) = rows.left_dirichlet {
                a_low[0] = 0.0;
                a_diag[0] = 1.0;
                a_up[0] = 0.0;
            }
            if let Some(_v) = rows.right_dirichlet {
                a_low[n - 1] = 0.0;
                a_diag[n - 1] = 1.0;
                a_up[n - 1] = 0.0;
            }
            let fu: Vec<f64> = u.iter().map(|&v| f.eval(v)).collect();
            let mut rhs: Vec<f64> = (0..n).map(|j| base[j] + dt * fu[j]).collect();
            if let Some(v) = rows.left_dirichlet {
                rhs[0] = v;
            }
            if let Some(v) = rows.right_dirichlet {
                rhs[n - 1] = v;
            }
            let mut diag1 = a_diag.clone();
            solve_tridiag(&a_low, &mut diag1, &a_up, &mut rhs)?;
            clip(&mut rhs);
            let ustar = rhs;
            let mut rhs: Vec<f64> = (0..n)
                .map(|j| base[j] + 0.5 * dt * (fu[j] + f.eval(ustar[j])))
                .collect();
            if let Some(v) = rows.left_dirichlet {
                rhs[0] = v;
            }
            if let Some(v) = rows.right_dirichlet {
                rhs[n - 1] = v;
            }
            solve_tridiag(&a_low, &mut a_diag, &a_up, &mut rhs)?;
            field.values = rhs;
        }
    }
    field.time += dt;
    Ok(clip(&mut field.values))
}

fn validate(class: SymmetryClass, d: u32, field: &Field, cfg: &SolverConfig) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::ConfigError { detail: "dt must be positive" });
    }
    let h = field.grid.drho();
    if cfg.scheme == Scheme::ExplicitEuler && cfg.dt > 0.4 * h * h {
        return Err(Error::ConfigError { detail: "explicit scheme needs dt <= 0.4 drho^2" });
    }
    if field.grid.rho_min < class.domain_inf() {
        return Err(Error::OutOfDomain);
    }
    if class == SymmetryClass::Elliptic
        && field.grid.rho_min < 0.5 * h
        && cfg.left_bc != LeftBc::Neumann0
    {
        return Err(Error::ConfigError { detail: "elliptic origin needs neumann0 on the left" });
    }
    if let Some(w) = cfg.window {
        if !(w.trigger_level > 0.0 && w.trigger_level < 1.0) {
            return Err(Error::ConfigError { detail: "window trigger_level must be in (0,1)" });
        }
        if w.shift_chunk == 0 || w.shift_chunk >= field.grid.n / 2 {
            return Err(Error::ConfigError { detail: "window shift_chunk out of range" });
        }
        if cfg.right_bc != RightBc::Dirichlet0 {
            return Err(Error::ConfigError { detail: "moving window needs dirichlet0 right" });
        }
    }
    Ok(())
}

/// Advance a field by one time step.
pub fn step(
    f: &ReactionFn,
    class: SymmetryClass,
    d: u32,
    field: &Field,
    cfg: &SolverConfig,
) -> Result<Field> {
    validate(class, d, field, cfg)?;
    let rows = build_rows(class, d, &field.grid, cfg)?;
    let mut out = field.clone();
    step_impl(f, &mut out, cfg, &rows)?;
    Ok(out)
}

/// Shift the window right by `cells`, keeping coordinates absolute.
fn shift_window(field: &mut Field, cells: usize, left_fill: f64) {
    let n = field.grid.n;
    let h = field.grid.drho();
    field.values.rotate_left(cells);
    for v in &mut field.values[n - cells..] {
        *v = 0.0;
    }
    field.values[0] = left_fill;
    field.grid.rho_min += cells as f64 * h;
    field.grid.rho_max += cells as f64 * h;
}

/// Integrate to `t_end`, recording snapshots at the step nearest each
/// requested time (actual times are whatever the step lands on).
pub fn run(
    f: &ReactionFn,
    class: SymmetryClass,
    d: u32,
    field: &Field,
    cfg: &SolverConfig,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<RunResult> {
    validate(class, d, field, cfg)?;
    if snapshot_times.windows(2).any(|w| w[1] <= w[0])
        || snapshot_times.iter().any(|&t| t > t_end || t < field.time)
    {
        return Err(Error::ConfigError { detail: "snapshot times must increase and lie in [t0, t_end]" });
    }
    let mut state = field.clone();
    let mut result = RunResult {
        snapshots: Vec::new(),
        steps: 0,
        shifts: Vec::new(),
        max_clip: 0.0,
    };
    let mut next_snap = 0usize;
    // snapshot at t0 if requested
    while next_snap < snapshot_times.len()
        && snapshot_times[next_snap] <= state.time + cfg.dt / 2.0
    {
        result.snapshots.push(state.clone());
        next_snap += 1;
    }
    if t_end <= field.time {
        if result.snapshots.is_empty() {
            result.snapshots.push(state);
        }
        return Ok(result);
    }

    let mut rows = build_rows(class, d, &state.grid, cfg)?;
    let pad_cells = cfg
        .window
        .map(|w| (w.pad_right / state.grid.drho()) as usize)
        .unwrap_or(0);
    if let Some(w) = cfg.window {
        if pad_cells + w.shift_chunk >= state.grid.n {
            return Err(Error::ConfigError { detail: "window pad_right exceeds the grid" });
        }
    }

    while state.time < t_end - cfg.dt / 2.0 {
        let c = step_impl(f, &mut state, cfg, &rows)?;
        result.max_clip = result.max_clip.max(c);
        result.steps += 1;

        if let Some(w) = cfg.window {
            let n = state.grid.n;
            let guard = n - 1 - pad_cells;
            if state.values[guard] > w.trigger_level {
                let left_fill = match effective_left_bc(class, &state.grid, cfg) {
                    LeftBc::Dirichlet1 => 1.0,
                    LeftBc::Dirichlet0 => 0.0,
                    LeftBc::Neumann0 => state.values[w.shift_chunk],
                };
                shift_window(&mut state, w.shift_chunk, left_fill);
                result.shifts.push(ShiftEvent {
                    time: state.time,
                    cells: w.shift_chunk,
                    new_rho_min: state.grid.rho_min,
                });
                rows = build_rows(class, d, &state.grid, cfg)?;
            }
        }

        while next_snap < snapshot_times.len()
            && snapshot_times[next_snap] <= state.time + cfg.dt / 2.0
        {
            result.snapshots.push(state.clone());
            next_snap += 1;
        }
    }
    if result.snapshots.is_empty() {
        result.snapshots.push(state);
    }
    Ok(result)
}
