//! Least-root selection of the Taylor mean-value point.
//!
//! For `t` in `[0, 1]` the remainder `F(x, t)` of [`crate::taylor`] is
//! continuous and has at least one zero whenever the model is smooth enough
//! on the segment from the center to `x`. [`tau`] returns the least such
//! zero, up to numerical tolerance, and [`xi`] maps it onto the segment:
//! `xi = c + tau (x - c)`. Picking the least root makes the selection
//! canonical; the resulting `xi(x)` is measurable but in general not
//! continuous, and [`scan_xi`] exists to chart exactly those jumps.
//!
//! The search has three stages:
//!
//! 1. Zero at the start: accept `t = 0` when `|F(x, 0)|` is already below
//!    the zero tolerance (which is relative to the scale `S(x)`).
//! 2. Left-to-right scan over a uniform grid of `scan_points` cells,
//!    stopping at the first node that passes the zero test or the first cell
//!    whose endpoints change sign; sign changes are refined by bisection.
//! 3. A tangency sweep over the nodes left of that stop: any node whose
//!    sampled `|F|` is a local minimum below `sqrt(zero_tolerance) * S(x)`
//!    seeds a golden-section minimization of `|F|`, catching roots where `F`
//!    touches zero without crossing. Near a double root `F` is quadratic in
//!    `t`, so `|F|` dips below a tolerance `eps` only within an
//!    `O(sqrt(eps))` window; the square-root threshold makes the sweep see
//!    that window at grid resolution.
//!
//! The leftmost accepted root wins. Roots closer together than a grid cell
//! cannot be separated; raising `scan_points` is the remedy.

use crate::expr::FunctionModel;
use crate::taylor::{RemainderFn, TaylorError};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootOptions {
    /// Number of grid cells on `[0, 1]` for the scan stage.
    pub scan_points: usize,
    /// Width below which a bracketing interval counts as converged.
    pub t_tolerance: f64,
    /// Zero test: `|F| <= zero_tolerance * S(x)` accepts a root.
    pub zero_tolerance: f64,
    /// Iteration cap for bisection refinement.
    pub max_bisection_iters: u32,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            scan_points: 4096,
            t_tolerance: 1e-12,
            zero_tolerance: 1e-10,
            max_bisection_iters: 200,
        }
    }
}

impl RootOptions {
    pub fn validate(&self) -> Result<(), RootError> {
        if self.scan_points < 2 {
            return Err(RootError::InvalidOptions("scan_points must be at least 2".into()));
        }
        if !(self.t_tolerance > 0.0) || !(self.zero_tolerance > 0.0) {
            return Err(RootError::InvalidOptions(
                "t_tolerance and zero_tolerance must be positive".into(),
            ));
        }
        if self.max_bisection_iters == 0 {
            return Err(RootError::InvalidOptions("max_bisection_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    /// `|F(x, 0)|` already passed the zero test.
    ZeroAtStart,
    /// Found by a sign change plus bisection.
    SignChange,
    /// Found by minimizing `|F|` where it touches zero without crossing.
    Tangent,
}

impl fmt::Display for RootMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootMethod::ZeroAtStart => "zero-at-start",
            RootMethod::SignChange => "sign-change",
            RootMethod::Tangent => "tangent",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InterpolationResult {
    /// Least root of `F(x, .)` on `[0, 1]`, up to tolerance.
    pub tau: f64,
    /// `c + tau (x - c)`, componentwise on the segment.
    pub xi: Vec<f64>,
    /// `|F(x, tau)| / S(x)`.
    pub residual: f64,
    pub method: RootMethod,
    /// Number of remainder evaluations spent.
    pub iterations: u64,
}

#[derive(Debug)]
pub enum RootError {
    Taylor(TaylorError),
    /// Remainder evaluation failed at a specific segment parameter.
    Domain { t: f64, source: TaylorError },
    InvalidOptions(String),
    InvalidParameter(String),
    /// No grid cell showed a sign change or a tolerable tangency.
    NoRootFound { scan_points: usize },
    /// A bracket was found but `|F|` could not be pushed under tolerance.
    ToleranceNotMet { residual: f64, tolerance: f64 },
    /// No rational grid point passed the `1/n` test.
    ApproximantNotFound { n: u64, depth: u32 },
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::Taylor(e) => write!(f, "{e}"),
            RootError::Domain { t, source } => {
                write!(f, "remainder evaluation failed at t = {t}: {source}")
            }
            RootError::InvalidOptions(msg) => write!(f, "invalid options: {msg}"),
            RootError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            RootError::NoRootFound { scan_points } => write!(
                f,
                "no root of the remainder found on [0, 1] with {scan_points} grid cells; \
                 a larger scan_points may resolve roots narrower than one cell"
            ),
            RootError::ToleranceNotMet { residual, tolerance } => write!(
                f,
                "bracketed a root but the best residual {residual:e} exceeds the zero tolerance {tolerance:e}"
            ),
            RootError::ApproximantNotFound { n, depth } => write!(
                f,
                "no grid point q = j/2^{depth} satisfies |F(x, q)| < 1/{n}; \
                 a deeper grid may be required"
            ),
        }
    }
}

impl std::error::Error for RootError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            RootError::Taylor(e) | RootError::Domain { source: e, .. } => Some(e),
            _ => None,
        }
    }
}

impl From<TaylorError> for RootError {
    fn from(e: TaylorError) -> Self {
        RootError::Taylor(e)
    }
}

/// Remainder probe that counts evaluations and stamps errors with `t`.
struct Probe<'a, 'm> {
    f: &'a mut RemainderFn<'m>,
    evals: u64,
}

impl Probe<'_, '_> {
    fn eval(&mut self, t: f64) -> Result<f64, RootError> {
        self.evals += 1;
        self.f.eval(t).map_err(|source| RootError::Domain { t, source })
    }
}

const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_894_9;
const GOLDEN_MAX_ITERS: u32 = 300;

/// Golden-section minimization of `|F|` on `[a, b]` down to width `t_tol`.
fn golden_min_abs(probe: &mut Probe, a: f64, b: f64, t_tol: f64) -> Result<(f64, f64), RootError> {
    let inv = GOLDEN_RATIO_CONJUGATE;
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - inv * (hi - lo);
    let mut d = lo + inv * (hi - lo);
    let mut fc = probe.eval(c)?.abs();
    let mut fd = probe.eval(d)?.abs();
    for _ in 0..GOLDEN_MAX_ITERS {
        if hi - lo <= t_tol {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv * (hi - lo);
            fc = probe.eval(c)?.abs();
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv * (hi - lo);
            fd = probe.eval(d)?.abs();
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

enum ScanStop {
    /// Grid node `j` passed the zero test.
    Node(usize),
    /// Sign change between nodes `lo` and `lo + 1`.
    Bracket(usize),
    None,
}

/// Least root of the remainder `F(x, .)` on `[0, 1]`.
///
/// On success `tau` is in `[0, 1]`, `xi` lies componentwise on the segment
/// between `center` and `x`, and the scaled residual is at most
/// `options.zero_tolerance`.
pub fn tau(
    model: &dyn FunctionModel,
    center: &[f64],
    order: u32,
    x: &[f64],
    options: &RootOptions,
) -> Result<InterpolationResult, RootError> {
    options.validate()?;
    let mut remainder = RemainderFn::new(model, center, order, x)?;
    let scale = remainder.scale();
    let tol = options.zero_tolerance * scale;
    let tangency_threshold = options.zero_tolerance.sqrt() * scale;
    let mut probe = Probe { f: &mut remainder, evals: 0 };

    let finish = |t: f64, residual_abs: f64, method: RootMethod, evals: u64| InterpolationResult {
        tau: t,
        xi: center.iter().zip(x).map(|(c, xv)| c + t * (xv - c)).collect(),
        residual: residual_abs / scale,
        method,
        iterations: evals,
    };

    // Stage 1: zero at the start.
    let f0 = probe.eval(0.0)?;
    if f0.abs() <= tol {
        let evals = probe.evals;
        return Ok(finish(0.0, f0.abs(), RootMethod::ZeroAtStart, evals));
    }

    // Stage 2: grid scan, stopping at the first zero node or sign change.
    let cells = options.scan_points;
    let node_t = |j: usize| j as f64 / cells as f64;
    let mut values = Vec::with_capacity(cells + 1);
    values.push(f0);
    let mut stop = ScanStop::None;
    for j in 1..=cells {
        let fj = probe.eval(node_t(j))?;
        values.push(fj);
        if fj.abs() <= tol {
            stop = ScanStop::Node(j);
            break;
        }
        if values[j - 1] * fj < 0.0 {
            stop = ScanStop::Bracket(j - 1);
            break;
        }
    }

    // Stage 3: tangency sweep over nodes strictly left of the stop. A node
    // qualifies when its sampled |F| is a local minimum under the tangency
    // threshold; the two adjacent cells are then searched for a touch point.
    let sweep_last = match stop {
        ScanStop::Node(j) => j.saturating_sub(2),
        ScanStop::Bracket(lo) => lo.saturating_sub(1),
        ScanStop::None => cells - 1,
    };
    for m in 1..=sweep_last {
        let vm = values[m].abs();
        if vm < tangency_threshold
            && vm <= values[m - 1].abs()
            && vm <= values[m + 1].abs()
        {
            let (t_min, f_min) =
                golden_min_abs(&mut probe, node_t(m - 1), node_t(m + 1), options.t_tolerance)?;
            if f_min <= tol {
                let evals = probe.evals;
                return Ok(finish(t_min, f_min, RootMethod::Tangent, evals));
            }
        }
    }

    match stop {
        ScanStop::Node(j) => {
            // Classify the node root by the signs around it; with no
            // crossing evidence it is reported as a tangency.
            let left = values[j - 1];
            let right = if j < cells { probe.eval(node_t(j + 1)).ok() } else { None };
            let method = match right {
                Some(r) if left * r < 0.0 => RootMethod::SignChange,
                _ => RootMethod::Tangent,
            };
            let residual = values[j].abs();
            let evals = probe.evals;
            Ok(finish(node_t(j), residual, method, evals))
        }
        ScanStop::Bracket(lo_idx) => {
            let (mut lo, mut hi) = (node_t(lo_idx), node_t(lo_idx + 1));
            let (mut f_lo, mut f_hi) = (values[lo_idx], values[lo_idx + 1]);
            let mut iters = 0;
            while iters < options.max_bisection_iters {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break; // bracket at floating-point resolution
                }
                let fm = probe.eval(mid)?;
                if fm == 0.0 {
                    let evals = probe.evals;
                    return Ok(finish(mid, 0.0, RootMethod::SignChange, evals));
                }
                if (fm > 0.0) == (f_lo > 0.0) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                    f_hi = fm;
                }
                iters += 1;
                if hi - lo <= options.t_tolerance && f_lo.abs().min(f_hi.abs()) <= tol {
                    break;
                }
            }
            let (t_star, residual) = if f_lo.abs() <= f_hi.abs() {
                (lo, f_lo.abs())
            } else {
                (hi, f_hi.abs())
            };
            if residual > tol {
                return Err(RootError::ToleranceNotMet { residual: residual / scale, tolerance: options.zero_tolerance });
            }
            let evals = probe.evals;
            Ok(finish(t_star, residual, RootMethod::SignChange, evals))
        }
        ScanStop::None => Err(RootError::NoRootFound { scan_points: cells }),
    }
}

/// The interpolation point `xi = c + tau (x - c)`.
pub fn xi(
    model: &dyn FunctionModel,
    center: &[f64],
    order: u32,
    x: &[f64],
    options: &RootOptions,
) -> Result<Vec<f64>, RootError> {
    Ok(tau(model, center, order, x, options)?.xi)
}

/// Two-point form: the interpolation point for expanding about `y` and
/// evaluating at `x`. With `x = y` it degenerates to `x` itself.
pub fn xi_symmetric(
    model: &dyn FunctionModel,
    order: u32,
    x: &[f64],
    y: &[f64],
    options: &RootOptions,
) -> Result<InterpolationResult, RootError> {
    tau(model, y, order, x, options)
}

/// Least dyadic grid point `q = j / 2^depth` with `|F(x, q)| < 1/n`.
///
/// These approximants need no root isolation at all: they scan left to right
/// and accept the first grid point whose remainder is small in absolute
/// terms. They are non-decreasing in `n` and approach [`tau`] from below as
/// `n` and the depth grow.
pub fn tau_n(
    model: &dyn FunctionModel,
    center: &[f64],
    order: u32,
    x: &[f64],
    n: u64,
    depth: u32,
) -> Result<f64, RootError> {
    if n == 0 {
        return Err(RootError::InvalidParameter("n must be at least 1".into()));
    }
    if depth == 0 || depth > 32 {
        return Err(RootError::InvalidParameter("depth must be in 1..=32".into()));
    }
    let mut remainder = RemainderFn::new(model, center, order, x)?;
    let mut probe = Probe { f: &mut remainder, evals: 0 };
    let threshold = 1.0 / n as f64;
    let total = 1u64 << depth;
    for j in 0..=total {
        let t = j as f64 / total as f64;
        if probe.eval(t)?.abs() < threshold {
            return Ok(t);
        }
    }
    Err(RootError::ApproximantNotFound { n, depth })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauNEntry {
    pub n: u64,
    pub tau_n: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauNSeries {
    pub entries: Vec<TauNEntry>,
    pub depth: u32,
    /// The limiting value from the full root search, for comparison.
    pub tau: f64,
}

/// Tabulate `tau_n` over `ns` (sorted ascending) together with `tau`.
pub fn tau_n_table(
    model: &dyn FunctionModel,
    center: &[f64],
    order: u32,
    x: &[f64],
    ns: &[u64],
    depth: u32,
    options: &RootOptions,
) -> Result<TauNSeries, RootError> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    let mut entries = Vec::with_capacity(ns.len());
    for n in ns {
        entries.push(TauNEntry {
            n,
            tau_n: tau_n(model, center, order, x, n, depth)?,
        });
    }
    let limit = tau(model, center, order, x, options)?.tau;
    Ok(TauNSeries { entries, depth, tau: limit })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub x: f64,
    pub tau: Option<f64>,
    pub xi: Option<f64>,
    pub residual: Option<f64>,
    pub method: Option<RootMethod>,
    /// Failure description when the root search failed for this row.
    pub error: Option<String>,
    /// True when this row's `xi` jumped relative to the previous row.
    pub jump: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JumpFlag {
    /// Row index of the left edge of the jumping pair.
    pub left_index: usize,
    pub x_left: f64,
    pub x_right: f64,
    pub delta_xi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSeries {
    pub rows: Vec<ScanRow>,
    pub jumps: Vec<JumpFlag>,
}

impl ScanSeries {
    pub fn success_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_none()).count()
    }
}

/// Both-endpoint uniform scan of `xi(x)` for a one-dimensional model, with
/// jump detection.
///
/// Row failures are recorded in the row and do not abort the scan. A pair of
/// consecutive rows is flagged as a jump when `|delta xi|` exceeds ten times
/// the larger neighboring row-to-row change (the local slope estimate times
/// the grid spacing) plus a small absolute floor guarding against quantization
/// jitter where `xi` is locally constant.
pub fn scan_xi(
    model: &dyn FunctionModel,
    center: f64,
    order: u32,
    range: (f64, f64),
    steps: usize,
    options: &RootOptions,
) -> Result<ScanSeries, RootError> {
    options.validate()?;
    if model.dimension() != 1 {
        return Err(RootError::InvalidParameter(
            "scan requires a one-dimensional model".into(),
        ));
    }
    if steps == 0 {
        return Err(RootError::InvalidParameter("steps must be at least 1".into()));
    }
    let (a, b) = range;
    if !(a < b) {
        return Err(RootError::InvalidParameter("range must satisfy a < b".into()));
    }

    use rayon::prelude::*;
    let mut rows: Vec<ScanRow> = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let xv = a + (b - a) * (i as f64 / steps as f64);
            match tau(model, &[center], order, &[xv], options) {
                Ok(r) => ScanRow {
                    x: xv,
                    tau: Some(r.tau),
                    xi: Some(r.xi[0]),
                    residual: Some(r.residual),
                    method: Some(r.method),
                    error: None,
                    jump: false,
                },
                Err(e) => ScanRow {
                    x: xv,
                    tau: None,
                    xi: None,
                    residual: None,
                    method: None,
                    error: Some(e.to_string()),
                    jump: false,
                },
            }
        })
        .collect();

    // Jump detection over consecutive successful pairs.
    let diff = |rows: &[ScanRow], i: usize| -> Option<f64> {
        let (l, r) = (rows[i].xi?, rows[i + 1].xi?);
        Some((r - l).abs())
    };
    let mut jumps = Vec::new();
    for i in 0..rows.len().saturating_sub(1) {
        let Some(d) = diff(&rows, i) else { continue };
        let left_nbr = if i > 0 { diff(&rows, i - 1) } else { None };
        let right_nbr = if i + 2 < rows.len() { diff(&rows, i + 1) } else { None };
        let nbr = match (left_nbr, right_nbr) {
            (Some(l), Some(r)) => l.max(r),
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => continue,
        };
        let floor = 1e-6 * (1.0 + rows[i].xi.unwrap_or(0.0).abs());
        if d > 10.0 * nbr && d > floor {
            rows[i + 1].jump = true;
            jumps.push(JumpFlag {
                left_index: i,
                x_left: rows[i].x,
                x_right: rows[i + 1].x,
                delta_xi: rows[i + 1].xi.unwrap() - rows[i].xi.unwrap(),
            });
        }
    }
    Ok(ScanSeries { rows, jumps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{ExprModel, PolynomialModel};
    use crate::multiindex::MultiIndex;

    fn opts() -> RootOptions {
        RootOptions::default()
    }

    #[test]
    fn square_has_midpoint_root() {
        // f = x^2, c = 0, k = 0: F(x, t) = x^2 (1 - 2t), root at t = 1/2.
        let m = ExprModel::parse("x^2", 1).unwrap();
        let r = tau(&m, &[0.0], 0, &[2.0], &opts()).unwrap();
        assert!((r.tau - 0.5).abs() < 1e-12);
        assert!((r.xi[0] - 1.0).abs() < 1e-12);
        assert_eq!(r.method, RootMethod::SignChange);
        assert!(r.residual <= opts().zero_tolerance);
    }

    #[test]
    fn xi_of_square_halves_the_point() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        for xv in [-7.0, -1.3, 0.4, 3.0, 9.5] {
            let p = xi(&m, &[0.0], 0, &[xv], &opts()).unwrap();
            assert!((p[0] - xv / 2.0).abs() <= 1e-9, "x={xv}: xi={}", p[0]);
        }
    }

    #[test]
    fn endpoint_equal_to_center_returns_zero() {
        let m = ExprModel::parse("exp(x)*sin(x)", 1).unwrap();
        let r = tau(&m, &[0.7], 2, &[0.7], &opts()).unwrap();
        assert_eq!(r.tau, 0.0);
        assert_eq!(r.method, RootMethod::ZeroAtStart);
        assert_eq!(r.xi, vec![0.7]);
    }

    #[test]
    fn low_degree_polynomial_is_flat_remainder() {
        // Total degree <= k makes F identically zero up to rounding.
        let mi = |c: &[u32]| MultiIndex::new(c.to_vec()).unwrap();
        let p = PolynomialModel::new(
            2,
            [(mi(&[1, 1]), 3.0), (mi(&[2, 0]), -2.0), (mi(&[0, 0]), 1.0)],
        )
        .unwrap();
        let r = tau(&p, &[0.5, -0.3], 2, &[1.5, 2.0], &opts()).unwrap();
        assert_eq!(r.tau, 0.0);
        assert_eq!(r.method, RootMethod::ZeroAtStart);
    }

    #[test]
    fn quartic_example_jump_structure() {
        // f = x^3 (x + 1) about c = -1 at order 0. The induced root equation
        // is 4 xi^3 + 3 xi^2 = x^3. At x = 0 the least root is -3/4; at
        // x0 = 4^(-1/3) the level 1/4 touches the local maximum at -1/2.
        let m = ExprModel::parse("x^3*(x+1)", 1).unwrap();
        let x0 = 0.25f64.cbrt();

        let at_zero = tau(&m, &[-1.0], 0, &[0.0], &opts()).unwrap();
        assert!((at_zero.xi[0] + 0.75).abs() < 1e-9, "xi(0) = {}", at_zero.xi[0]);
        assert!((at_zero.tau - 0.25).abs() < 1e-9);
        assert_eq!(at_zero.method, RootMethod::SignChange);

        let at_touch = tau(&m, &[-1.0], 0, &[x0], &opts()).unwrap();
        assert!((at_touch.xi[0] + 0.5).abs() < 1e-6, "xi(x0) = {}", at_touch.xi[0]);
        assert_eq!(at_touch.method, RootMethod::Tangent);

        let past = tau(&m, &[-1.0], 0, &[x0 + 1e-3], &opts()).unwrap();
        assert!(
            past.xi[0] >= 0.25 && past.xi[0] <= 0.2515,
            "xi(x0 + 1e-3) = {}",
            past.xi[0]
        );
        assert_eq!(past.method, RootMethod::SignChange);
    }

    #[test]
    fn reflected_quartic_touches_from_the_right() {
        // g = x^4 - x^3 about c = 1: root equation 4 xi^3 - 3 xi^2 = x^3,
        // tangency at xi = 1/2 when x = -4^(-1/3).
        let m = ExprModel::parse("x^4-x^3", 1).unwrap();
        let x0 = -(0.25f64.cbrt());

        let at_touch = tau(&m, &[1.0], 0, &[x0], &opts()).unwrap();
        assert!((at_touch.xi[0] - 0.5).abs() < 1e-6, "xi(x0) = {}", at_touch.xi[0]);
        assert_eq!(at_touch.method, RootMethod::Tangent);

        let before = tau(&m, &[1.0], 0, &[x0 - 1e-3], &opts()).unwrap();
        assert!(
            before.xi[0] >= -0.2515 && before.xi[0] <= -0.25,
            "xi(x0 - 1e-3) = {}",
            before.xi[0]
        );

        // Right continuity at x0: stepping toward the center moves xi only
        // on the order of sqrt of the step.
        let after = tau(&m, &[1.0], 0, &[x0 + 1e-4], &opts()).unwrap();
        assert!((after.xi[0] - at_touch.xi[0]).abs() <= 1e-2);
    }

    #[test]
    fn symmetric_form_averages_for_square() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        for (xv, yv) in [(3.0, 1.0), (-2.0, 5.0), (0.3, 0.3), (-4.0, -1.0)] {
            let r = xi_symmetric(&m, 0, &[xv], &[yv], &opts()).unwrap();
            let want = if xv == yv { xv } else { (xv + yv) / 2.0 };
            assert!(
                (r.xi[0] - want).abs() <= 1e-9,
                "x={xv} y={yv}: xi={}",
                r.xi[0]
            );
        }
    }

    #[test]
    fn tau_n_matches_closed_form_for_square() {
        // f = x^2, c = 0, x = 2: |F(x, q)| = 4 |1 - 2q| < 1/n first holds at
        // q >= 1/2 - 1/(8n); the dyadic scan lands within one grid step.
        let m = ExprModel::parse("x^2", 1).unwrap();
        let depth = 20;
        let step = (0.5f64).powi(depth as i32);
        for n in [1u64, 10, 100, 1000] {
            let got = tau_n(&m, &[0.0], 0, &[2.0], n, depth).unwrap();
            let want = 0.5 - 1.0 / (8.0 * n as f64);
            assert!(got >= want - 1e-12, "n={n}: {got} below infimum {want}");
            assert!((got - want).abs() <= 2.0 * step, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn tau_n_is_monotone_in_n() {
        let m = ExprModel::parse("x^3*(x+1)", 1).unwrap();
        let mut last = 0.0;
        for n in [1u64, 3, 10, 31, 100, 316, 1000] {
            let v = tau_n(&m, &[-1.0], 0, &[0.0], n, 16).unwrap();
            assert!(v >= last, "tau_n decreased at n={n}: {v} < {last}");
            last = v;
        }
    }

    #[test]
    fn tau_n_table_converges_to_tau() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        let series =
            tau_n_table(&m, &[0.0], 0, &[2.0], &[1, 10, 100, 1000, 10000], 22, &opts()).unwrap();
        assert_eq!(series.entries.len(), 5);
        assert!((series.tau - 0.5).abs() < 1e-12);
        let last = series.entries.last().unwrap();
        assert_eq!(last.n, 10000);
        assert!((last.tau_n - series.tau).abs() <= 1e-3);
    }

    #[test]
    fn tau_n_rejects_bad_parameters() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        assert!(matches!(
            tau_n(&m, &[0.0], 0, &[2.0], 0, 20),
            Err(RootError::InvalidParameter(_))
        ));
        assert!(matches!(
            tau_n(&m, &[0.0], 0, &[2.0], 5, 0),
            Err(RootError::InvalidParameter(_))
        ));
    }

    #[test]
    fn scan_of_square_is_smooth() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        let series = scan_xi(&m, 0.0, 0, (-1.0, 1.0), 100, &opts()).unwrap();
        assert_eq!(series.rows.len(), 101);
        assert!(series.jumps.is_empty(), "unexpected jumps: {:?}", series.jumps);
        assert_eq!(series.success_count(), 101);
        // Row at x = 0 sits at the center: tau = 0 exactly.
        let center_row = &series.rows[50];
        assert_eq!(center_row.x, 0.0);
        assert_eq!(center_row.tau, Some(0.0));
        for row in &series.rows {
            let xi_v = row.xi.unwrap();
            assert!((xi_v - row.x / 2.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn scan_flags_the_quartic_jump_once() {
        let m = ExprModel::parse("x^3*(x+1)", 1).unwrap();
        let series = scan_xi(&m, -1.0, 0, (-0.99, 1.2), 400, &opts()).unwrap();
        assert_eq!(series.jumps.len(), 1, "jumps: {:?}", series.jumps);
        let jump = &series.jumps[0];
        let x0 = 0.25f64.cbrt();
        assert!(
            jump.x_left < x0 && x0 < jump.x_right,
            "jump at [{}, {}] does not bracket {x0}",
            jump.x_left,
            jump.x_right
        );
        assert!(jump.delta_xi > 0.7, "jump size {}", jump.delta_xi);
        let flagged: Vec<_> = series.rows.iter().filter(|r| r.jump).collect();
        assert_eq!(flagged.len(), 1);
    }

    #[test]
    fn scan_records_row_errors_and_continues() {
        // log(1 + x) about c = 0 fails for x <= -1 but succeeds elsewhere.
        let m = ExprModel::parse("log(1+x)", 1).unwrap();
        let series = scan_xi(&m, 0.0, 0, (-1.5, 1.5), 30, &opts()).unwrap();
        assert_eq!(series.rows.len(), 31);
        let failures = series.rows.iter().filter(|r| r.error.is_some()).count();
        assert!(failures >= 4, "expected the x <= -1 rows to fail");
        assert!(series.success_count() >= 20);
        for row in &series.rows {
            assert_eq!(row.error.is_some(), row.xi.is_none());
        }
    }

    #[test]
    fn scan_validates_parameters() {
        let m1 = ExprModel::parse("x^2", 1).unwrap();
        assert!(matches!(
            scan_xi(&m1, 0.0, 0, (1.0, -1.0), 10, &opts()),
            Err(RootError::InvalidParameter(_))
        ));
        assert!(matches!(
            scan_xi(&m1, 0.0, 0, (-1.0, 1.0), 0, &opts()),
            Err(RootError::InvalidParameter(_))
        ));
        let m2 = ExprModel::parse("x1+x2", 2).unwrap();
        assert!(matches!(
            scan_xi(&m2, 0.0, 0, (-1.0, 1.0), 10, &opts()),
            Err(RootError::InvalidParameter(_))
        ));
    }

    #[test]
    fn options_are_validated() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        let bad = RootOptions { scan_points: 1, ..opts() };
        assert!(matches!(
            tau(&m, &[0.0], 0, &[1.0], &bad),
            Err(RootError::InvalidOptions(_))
        ));
        let bad = RootOptions { zero_tolerance: 0.0, ..opts() };
        assert!(matches!(
            tau(&m, &[0.0], 0, &[1.0], &bad),
            Err(RootError::InvalidOptions(_))
        ));
    }

    #[test]
    fn domain_violation_carries_the_parameter() {
        // Segment from c = 1 to x = -5 leaves the log domain; the failure
        // must point at the offending t.
        let m = ExprModel::parse("log(x)", 1).unwrap();
        let err = tau(&m, &[1.0], 0, &[-5.0], &opts()).unwrap_err();
        match err {
            RootError::Taylor(TaylorError::Eval(_)) => {} // endpoint evaluation
            RootError::Domain { .. } => {}
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn result_counts_evaluations() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        let r = tau(&m, &[0.0], 0, &[2.0], &opts()).unwrap();
        assert!(r.iterations >= 2, "at least the start and one scan node");
    }
}
