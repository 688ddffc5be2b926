//! Stochastic demonstrations built on the interpolation point.
//!
//! Two simulations exercise the exactness of the mean-value form under
//! randomness. The delta method demo checks the first-order identity
//! `sqrt(n) (f(X_n) - f(c)) = grad f(xi_n) . Z` for `X_n = c + Z / sqrt(n)`,
//! and tracks how fast `grad f(xi_n)` collapses onto `grad f(c)`. The
//! second-order walk demo telescopes
//! `f(X_N) - f(X_0) = sum f'(X_{j-1}) dX_j + sum 1/2 f''(xi_j) (dX_j)^2`
//! along Brownian increments, which makes the quadratic variation term of
//! the Ito formula appear from pure interpolation, with no stochastic
//! calculus in the code.
//!
//! Randomness is fully reproducible: a [`RandomStream`] wraps the ChaCha12
//! generator, normal deviates come from the Box-Muller transform (never from
//! a platform- or library-version-dependent sampler), and every sample or
//! path draws from its own substream keyed by index, so results do not
//! depend on thread scheduling.

use crate::expr::{EvalError, FunctionModel};
use crate::interpolator::{tau, RootError, RootMethod, RootOptions};
use crate::multiindex::MultiIndex;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Name of the underlying generator, for run metadata.
pub const GENERATOR: &str = "chacha12";
/// Name of the uniform-to-normal transform, for run metadata.
pub const NORMAL_TRANSFORM: &str = "box-muller";

/// Identity tolerance for the delta method demo. A violation means the
/// root search returned a point that does not satisfy the mean-value form,
/// which is a bug, not a statistical fluctuation.
pub const DELTA_IDENTITY_TOLERANCE: f64 = 1e-8;
/// Identity tolerance for the second-order walk demo (looser: it compares
/// sums of ten thousand terms, so rounding accumulates).
pub const ITO_IDENTITY_TOLERANCE: f64 = 1e-7;

/// Scale-aware relative difference: `|a - b| / (1 + |a| + |b|)`.
pub fn relative_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs() + b.abs())
}

/// Deterministic random stream with cheap keyed substreams.
///
/// Every substream is derived from the original seed and an index, never
/// from the parent's current position, so parallel consumers can be keyed
/// by sample or path index and the output is independent of scheduling.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { seed, rng: ChaCha12Rng::seed_from_u64(seed) }
    }

    /// Substream `index` of the root seed. Substreams form a flat namespace:
    /// `s.substream(i)` depends only on the seed and `i`.
    pub fn substream(&self, index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        RandomStream { seed: self.seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on the half-open interval `(0, 1]`; never zero, so it
    /// is always safe to take its logarithm.
    pub fn uniform(&mut self) -> f64 {
        (((self.rng.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Uniform integer in `0..bound` by rejection (no modulo bias).
    pub fn uniform_int(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "uniform_int requires a positive bound");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform draw on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (1.0 - self.uniform())
    }

    /// One Box-Muller pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// A single standard normal. Consumes a full pair; the spare is
    /// discarded so the stream position never depends on call parity.
    pub fn normal(&mut self) -> f64 {
        self.normal_pair().0
    }

    /// `n` independent standard normals, drawn as `ceil(n / 2)` pairs.
    pub fn normal_vec(&mut self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let (a, b) = self.normal_pair();
            out.push(a);
            if out.len() < n {
                out.push(b);
            }
        }
        out
    }
}

#[derive(Debug)]
pub enum StochasticError {
    InvalidParameter(String),
    RootSearch { context: String, source: RootError },
    Eval { context: String, source: EvalError },
    /// The mean-value identity failed beyond tolerance: an interpolator bug.
    IdentityViolation { context: String, lhs: f64, rhs: f64, residual: f64, tolerance: f64 },
}

impl fmt::Display for StochasticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StochasticError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            StochasticError::RootSearch { context, source } => {
                write!(f, "root search failed ({context}): {source}")
            }
            StochasticError::Eval { context, source } => {
                write!(f, "evaluation failed ({context}): {source}")
            }
            StochasticError::IdentityViolation { context, lhs, rhs, residual, tolerance } => write!(
                f,
                "mean-value identity violated ({context}): lhs = {lhs:e}, rhs = {rhs:e}, \
                 residual {residual:e} exceeds {tolerance:e}; this indicates a root-search bug"
            ),
        }
    }
}

impl std::error::Error for StochasticError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            StochasticError::RootSearch { source, .. } => Some(source),
            StochasticError::Eval { source, .. } => Some(source),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaRow {
    pub n: u64,
    /// Samples whose root search succeeded and entered the statistics.
    pub evaluated: u64,
    /// Samples skipped because the model left its domain or no root was
    /// resolvable there.
    pub skipped: u64,
    /// Mean Euclidean distance between `grad f(xi_n)` and `grad f(c)`.
    pub mean_gradient_deviation: f64,
    /// Largest identity residual seen across the evaluated samples.
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub center: Vec<f64>,
    pub seed: u64,
    pub samples: u64,
    pub rows: Vec<DeltaRow>,
}

/// First-order demo: for each `n`, draw `samples` standard normal vectors
/// `Z`, set `X = c + Z / sqrt(n)` and verify
/// `sqrt(n) (f(X) - f(c)) = grad f(xi) . Z` exactly (up to
/// [`DELTA_IDENTITY_TOLERANCE`]) at the interpolation point `xi` of the
/// order-zero expansion about `c`.
///
/// Samples where the model leaves its domain are counted as skipped; an
/// identity violation aborts, because it can only come from a wrong root.
pub fn delta_method_sim(
    model: &dyn FunctionModel,
    center: &[f64],
    ns: &[u64],
    samples: u64,
    seed: u64,
    options: &RootOptions,
) -> Result<DeltaReport, StochasticError> {
    let dim = model.dimension();
    if center.len() != dim {
        return Err(StochasticError::InvalidParameter(format!(
            "center has dimension {}, model expects {dim}",
            center.len()
        )));
    }
    if ns.is_empty() || ns.contains(&0) {
        return Err(StochasticError::InvalidParameter(
            "the list of n values must be nonempty and positive".into(),
        ));
    }
    if samples == 0 || samples >= (1 << 40) {
        return Err(StochasticError::InvalidParameter("samples must be in 1..2^40".into()));
    }
    if ns.len() >= (1 << 24) {
        return Err(StochasticError::InvalidParameter("too many n values".into()));
    }
    options
        .validate()
        .map_err(|source| StochasticError::RootSearch { context: "options".into(), source })?;

    let mut ns_sorted = ns.to_vec();
    ns_sorted.sort_unstable();
    ns_sorted.dedup();

    let grad_indices: Vec<MultiIndex> = (0..dim)
        .map(|i| {
            let mut comp = vec![0u32; dim];
            comp[i] = 1;
            MultiIndex::new(comp).expect("dimension is positive")
        })
        .collect();
    let f_center = model
        .eval(center)
        .map_err(|source| StochasticError::Eval { context: "f at the center".into(), source })?;
    if !f_center.is_finite() {
        return Err(StochasticError::InvalidParameter(
            "f is not finite at the center".into(),
        ));
    }
    let grad_center: Vec<f64> = grad_indices
        .iter()
        .map(|ix| {
            model.partial(ix, center).map_err(|source| StochasticError::Eval {
                context: "gradient at the center".into(),
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let base = RandomStream::new(seed);
    let mut rows = Vec::with_capacity(ns_sorted.len());
    for (n_idx, &n) in ns_sorted.iter().enumerate() {
        let sqrt_n = (n as f64).sqrt();
        // Option = skipped sample; the per-sample substream key packs the
        // n index above the sample index.
        let outcomes: Vec<Option<(f64, f64)>> = (0..samples)
            .into_par_iter()
            .map(|s| -> Result<Option<(f64, f64)>, StochasticError> {
                let mut stream = base.substream(((n_idx as u64) << 40) | s);
                let z = stream.normal_vec(dim);
                let x: Vec<f64> =
                    center.iter().zip(&z).map(|(c, zi)| c + zi / sqrt_n).collect();
                let root = match tau(model, center, 0, &x, options) {
                    Ok(r) => r,
                    Err(RootError::InvalidOptions(m) | RootError::InvalidParameter(m)) => {
                        return Err(StochasticError::InvalidParameter(m));
                    }
                    Err(_) => return Ok(None),
                };
                let fx = match model.eval(&x) {
                    Ok(v) if v.is_finite() => v,
                    _ => return Ok(None),
                };
                let mut grad_xi = Vec::with_capacity(dim);
                for ix in &grad_indices {
                    match model.partial(ix, &root.xi) {
                        Ok(v) if v.is_finite() => grad_xi.push(v),
                        _ => return Ok(None),
                    }
                }
                let lhs = sqrt_n * (fx - f_center);
                let rhs: f64 = grad_xi.iter().zip(&z).map(|(g, zi)| g * zi).sum();
                let residual = relative_residual(lhs, rhs);
                if residual > DELTA_IDENTITY_TOLERANCE {
                    return Err(StochasticError::IdentityViolation {
                        context: format!("n = {n}, sample {s}"),
                        lhs,
                        rhs,
                        residual,
                        tolerance: DELTA_IDENTITY_TOLERANCE,
                    });
                }
                let deviation = grad_xi
                    .iter()
                    .zip(&grad_center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                Ok(Some((deviation, residual)))
            })
            .collect::<Result<_, _>>()?;

        // Sequential reduction in index order keeps the sums bit-stable
        // regardless of thread scheduling.
        let mut evaluated = 0u64;
        let mut dev_sum = 0.0;
        let mut max_residual = 0.0f64;
        for outcome in &outcomes {
            if let Some((dev, res)) = outcome {
                evaluated += 1;
                dev_sum += dev;
                max_residual = max_residual.max(*res);
            }
        }
        if evaluated == 0 {
            return Err(StochasticError::InvalidParameter(format!(
                "every sample was skipped at n = {n}; the model may be undefined near the center"
            )));
        }
        rows.push(DeltaRow {
            n,
            evaluated,
            skipped: samples - evaluated,
            mean_gradient_deviation: dev_sum / evaluated as f64,
            max_residual,
        });
    }
    Ok(DeltaReport { center: center.to_vec(), seed, samples, rows })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ItoPathRow {
    pub path: u64,
    /// `f(X_N) - f(X_0)`.
    pub delta_f: f64,
    /// `sum_j f'(X_{j-1}) dX_j`.
    pub first_order_sum: f64,
    /// `sum_j 1/2 f''(xi_j) (dX_j)^2` at the per-step interpolation points.
    pub second_order_sum: f64,
    /// Telescoping identity residual for this path.
    pub residual: f64,
    /// `sum_j 1/2 f''(X_{j-1}) dt`: what the classical correction term uses.
    pub drift_comparison: f64,
    /// `sum_j (dX_j)^2`.
    pub quadratic_variation: f64,
    /// Steps whose remainder at the left endpoint already passed the zero
    /// test (increments too small for the residual scale).
    pub zero_start_steps: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ItoReport {
    pub seed: u64,
    pub t_end: f64,
    pub steps: u64,
    pub paths: u64,
    pub mean_quadratic_variation: f64,
    pub rows: Vec<ItoPathRow>,
}

/// Second-order walk demo along Brownian paths started at zero.
///
/// Each step expands `f` about the previous point at order one and evaluates
/// at the next, so `f(X_j) - f(X_{j-1}) = f'(X_{j-1}) dX_j +
/// 1/2 f''(xi_j) (dX_j)^2` holds exactly at the interpolation point `xi_j`.
/// Summing telescopes to `f(X_N) - f(X_0)`; the per-path residual must stay
/// under [`ITO_IDENTITY_TOLERANCE`]. For `f(x) = x^2` the second-order sum
/// is exactly the quadratic variation, whose mean tends to `t_end`.
pub fn ito_sim(
    model: &dyn FunctionModel,
    t_end: f64,
    steps: u64,
    paths: u64,
    seed: u64,
    options: &RootOptions,
) -> Result<ItoReport, StochasticError> {
    if model.dimension() != 1 {
        return Err(StochasticError::InvalidParameter(
            "the walk demo requires a one-dimensional model".into(),
        ));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(StochasticError::InvalidParameter("t_end must be positive and finite".into()));
    }
    if steps == 0 || steps > (1 << 31) {
        return Err(StochasticError::InvalidParameter("steps must be in 1..=2^31".into()));
    }
    if paths == 0 {
        return Err(StochasticError::InvalidParameter("paths must be at least 1".into()));
    }
    options
        .validate()
        .map_err(|source| StochasticError::RootSearch { context: "options".into(), source })?;

    let first_deriv = MultiIndex::new(vec![1]).expect("dimension 1");
    let second_deriv = MultiIndex::new(vec![2]).expect("dimension 1");
    let d1 = model.partial_evaluator(&first_deriv).map_err(|source| StochasticError::Eval {
        context: "first derivative".into(),
        source,
    })?;
    let d2 = model.partial_evaluator(&second_deriv).map_err(|source| StochasticError::Eval {
        context: "second derivative".into(),
        source,
    })?;
    let f0 = model
        .eval(&[0.0])
        .map_err(|source| StochasticError::Eval { context: "f at the origin".into(), source })?;

    let dt = t_end / steps as f64;
    let sqrt_dt = dt.sqrt();
    let base = RandomStream::new(seed);

    let rows: Vec<ItoPathRow> = (0..paths)
        .into_par_iter()
        .map(|p| -> Result<ItoPathRow, StochasticError> {
            let mut stream = base.substream(p);
            let normals = stream.normal_vec(steps as usize);
            let mut x_prev = 0.0f64;
            let mut first_sum = 0.0;
            let mut second_sum = 0.0;
            let mut drift = 0.0;
            let mut qv = 0.0;
            let mut zero_start = 0u64;
            for (j, z) in normals.iter().enumerate() {
                let dx = sqrt_dt * z;
                let x_next = x_prev + dx;
                let ctx = || format!("path {p}, step {j}");
                let fp = d1(&[x_prev])
                    .map_err(|source| StochasticError::Eval { context: ctx(), source })?;
                let fpp_prev = d2(&[x_prev])
                    .map_err(|source| StochasticError::Eval { context: ctx(), source })?;
                let root = tau(model, &[x_prev], 1, &[x_next], options)
                    .map_err(|source| StochasticError::RootSearch { context: ctx(), source })?;
                let fpp_xi = d2(&root.xi)
                    .map_err(|source| StochasticError::Eval { context: ctx(), source })?;
                first_sum += fp * dx;
                second_sum += 0.5 * fpp_xi * dx * dx;
                drift += 0.5 * fpp_prev * dt;
                qv += dx * dx;
                if root.method == RootMethod::ZeroAtStart {
                    zero_start += 1;
                }
                x_prev = x_next;
            }
            let f_end = model.eval(&[x_prev]).map_err(|source| StochasticError::Eval {
                context: format!("path {p}, terminal value"),
                source,
            })?;
            let delta_f = f_end - f0;
            let residual = relative_residual(delta_f, first_sum + second_sum);
            if residual > ITO_IDENTITY_TOLERANCE {
                return Err(StochasticError::IdentityViolation {
                    context: format!("path {p}"),
                    lhs: delta_f,
                    rhs: first_sum + second_sum,
                    residual,
                    tolerance: ITO_IDENTITY_TOLERANCE,
                });
            }
            Ok(ItoPathRow {
                path: p,
                delta_f,
                first_order_sum: first_sum,
                second_order_sum: second_sum,
                residual,
                drift_comparison: drift,
                quadratic_variation: qv,
                zero_start_steps: zero_start,
            })
        })
        .collect::<Result<_, _>>()?;

    let mean_qv = rows.iter().map(|r| r.quadratic_variation).sum::<f64>() / rows.len() as f64;
    Ok(ItoReport { seed, t_end, steps, paths, mean_quadratic_variation: mean_qv, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprModel;

    #[test]
    fn uniform_stays_in_half_open_unit_interval() {
        let mut s = RandomStream::new(9);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!(u > 0.0 && u <= 1.0, "u = {u}");
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let mut a = RandomStream::new(1234);
        let mut b = RandomStream::new(1234);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn substreams_ignore_parent_position() {
        let mut parent = RandomStream::new(77);
        let mut early = parent.substream(5);
        for _ in 0..50 {
            parent.uniform();
        }
        let mut late = parent.substream(5);
        for _ in 0..20 {
            assert_eq!(early.uniform().to_bits(), late.uniform().to_bits());
        }
    }

    #[test]
    fn substreams_differ_by_index() {
        let base = RandomStream::new(3);
        let (mut a, mut b) = (base.substream(0), base.substream(1));
        let same = (0..16).filter(|_| a.uniform().to_bits() == b.uniform().to_bits()).count();
        assert!(same < 4, "substreams 0 and 1 look identical");
    }

    #[test]
    fn normal_sample_moments_are_sane() {
        let mut s = RandomStream::new(2024);
        let n = 100_000;
        let draws = s.normal_vec(n);
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean = {mean}");
        assert!((var - 1.0).abs() < 0.04, "var = {var}");
    }

    #[test]
    fn uniform_int_respects_bound() {
        let mut s = RandomStream::new(5);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let v = s.uniform_int(7);
            assert!(v < 7);
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&b| b), "some residues never appeared");
    }

    #[test]
    fn delta_identity_is_exact_for_linear_models() {
        // f = 3x: both sides of the identity equal 3Z, and the gradient
        // never moves, so the deviation column is exactly zero.
        let m = ExprModel::parse("3*x", 1).unwrap();
        let report =
            delta_method_sim(&m, &[2.0], &[4, 100], 500, 11, &RootOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.skipped, 0);
            assert!(row.max_residual <= 1e-12, "residual {}", row.max_residual);
            assert!(row.mean_gradient_deviation <= 1e-12);
        }
    }

    #[test]
    fn delta_gradient_deviation_shrinks_like_root_n() {
        // f = x^2 about any center: grad f(xi) - grad f(c) = Z / sqrt(n),
        // so the mean deviation is E|Z| / sqrt(n) = sqrt(2/pi) / sqrt(n).
        let m = ExprModel::parse("x^2", 1).unwrap();
        let report =
            delta_method_sim(&m, &[1.0], &[100], 2000, 1, &RootOptions::default()).unwrap();
        let row = &report.rows[0];
        let expect = (2.0 / std::f64::consts::PI).sqrt() / 10.0;
        let rel = (row.mean_gradient_deviation - expect).abs() / expect;
        assert!(rel < 0.1, "mean deviation {} vs {expect}", row.mean_gradient_deviation);
        assert!(row.max_residual <= DELTA_IDENTITY_TOLERANCE);
    }

    #[test]
    fn delta_rows_come_back_sorted_and_deduplicated() {
        let m = ExprModel::parse("x^2", 1).unwrap();
        let report =
            delta_method_sim(&m, &[0.5], &[50, 4, 50], 64, 3, &RootOptions::default()).unwrap();
        let ns: Vec<u64> = report.rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![4, 50]);
    }

    #[test]
    fn delta_skips_out_of_domain_samples() {
        // log about c = 0.04 with n = 4: X = 0.04 + Z/2 is frequently
        // negative, and those samples must be skipped, not fatal.
        let m = ExprModel::parse("log(x)", 1).unwrap();
        let report =
            delta_method_sim(&m, &[0.04], &[4], 300, 7, &RootOptions::default()).unwrap();
        let row = &report.rows[0];
        assert!(row.skipped > 0, "expected skips");
        assert!(row.evaluated > 0, "expected some successes");
        assert_eq!(row.skipped + row.evaluated, 300);
        assert!(row.max_residual <= DELTA_IDENTITY_TOLERANCE);
    }

    #[test]
    fn delta_reports_are_bit_reproducible() {
        let m = ExprModel::parse("sin(x1)+x2^2", 2).unwrap();
        let opts = RootOptions::default();
        let a = delta_method_sim(&m, &[0.3, -0.2], &[9, 81], 400, 99, &opts).unwrap();
        let b = delta_method_sim(&m, &[0.3, -0.2], &[9, 81], 400, 99, &opts).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn walk_second_sum_is_quadratic_variation_for_square() {
        // f = x^2 at order one has an identically zero remainder, so every
        // step resolves at the left endpoint and the second-order sum is
        // exactly the quadratic variation.
        let m = ExprModel::parse("x^2", 1).unwrap();
        let report = ito_sim(&m, 1.0, 400, 4, 7, &RootOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 4);
        for row in &report.rows {
            assert!(row.residual <= ITO_IDENTITY_TOLERANCE, "residual {}", row.residual);
            assert_eq!(row.zero_start_steps, 400);
            let gap = (row.second_order_sum - row.quadratic_variation).abs();
            assert!(gap <= 1e-12, "gap {gap}");
        }
        assert!((report.mean_quadratic_variation - 1.0).abs() < 0.4);
    }

    #[test]
    fn walk_resolves_cubic_steps() {
        // f = x^3: each step's remainder is dx^3 (1 - 3t), so most steps
        // need a genuine root search with tau = 1/3.
        let m = ExprModel::parse("x^3", 1).unwrap();
        let report = ito_sim(&m, 1.0, 300, 2, 5, &RootOptions::default()).unwrap();
        for row in &report.rows {
            assert!(row.residual <= ITO_IDENTITY_TOLERANCE, "residual {}", row.residual);
            assert!(row.zero_start_steps < 100, "too many degenerate steps");
        }
    }

    #[test]
    fn walk_reports_are_bit_reproducible() {
        let m = ExprModel::parse("x^3", 1).unwrap();
        let opts = RootOptions::default();
        let a = ito_sim(&m, 0.5, 100, 3, 21, &opts).unwrap();
        let b = ito_sim(&m, 0.5, 100, 3, 21, &opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn simulations_validate_parameters() {
        let m1 = ExprModel::parse("x^2", 1).unwrap();
        let m2 = ExprModel::parse("x1+x2", 2).unwrap();
        let opts = RootOptions::default();
        assert!(matches!(
            delta_method_sim(&m1, &[0.0], &[], 10, 1, &opts),
            Err(StochasticError::InvalidParameter(_))
        ));
        assert!(matches!(
            delta_method_sim(&m1, &[0.0, 1.0], &[4], 10, 1, &opts),
            Err(StochasticError::InvalidParameter(_))
        ));
        assert!(matches!(
            delta_method_sim(&m1, &[0.0], &[0], 10, 1, &opts),
            Err(StochasticError::InvalidParameter(_))
        ));
        assert!(matches!(
            ito_sim(&m2, 1.0, 10, 2, 1, &opts),
            Err(StochasticError::InvalidParameter(_))
        ));
        assert!(matches!(
            ito_sim(&m1, 0.0, 10, 2, 1, &opts),
            Err(StochasticError::InvalidParameter(_))
        ));
        assert!(matches!(
            ito_sim(&m1, 1.0, 0, 2, 1, &opts),
            Err(StochasticError::InvalidParameter(_))
        ));
    }
}
