//! Taylor polynomials and the parametrized remainder.
//!
//! For a model `f`, a center `c`, and an order `k`, the Taylor polynomial is
//!
//! ```text
//! T(x) = sum_{|a| <= k} D^a f(c) / a! * (x - c)^a
//! ```
//!
//! and the remainder bracket, parametrized along the segment from `c` to `x`,
//! is
//!
//! ```text
//! F(x, t) = f(x) - T(x) - sum_{|a| = k+1} D^a f(c + t(x - c)) / a! * (x - c)^a
//! ```
//!
//! for `t` in `[0, 1]`. The mean-value form of the remainder says exactly
//! that `F(x, .)` has a zero on `[0, 1]` whenever `f` is `C^(k+1)` on the
//! segment; locating its least zero is the interpolator's job. Residuals are
//! compared against the scale `S(x) = 1 + |f(x)| + |T(x)|` so tolerances are
//! meaningful for both small and large function values.

use crate::expr::{EvalError, FunctionModel, PartialEvaluator};
use crate::multiindex::{enumerate_exact, enumerate_up_to, MultiIndex, MultiIndexError};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum TaylorError {
    /// The model cannot supply derivatives of the required order.
    OrderUnavailable { required: u32, available: u32 },
    DimensionMismatch { expected: usize, got: usize },
    Eval(EvalError),
    Index(MultiIndexError),
    /// An intermediate value overflowed or was otherwise non-finite.
    NonFinite { context: String },
}

impl fmt::Display for TaylorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaylorError::OrderUnavailable { required, available } => write!(
                f,
                "model provides derivatives up to order {available} but order {required} is required"
            ),
            TaylorError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            TaylorError::Eval(e) => write!(f, "evaluation failed: {e}"),
            TaylorError::Index(e) => write!(f, "multi-index error: {e}"),
            TaylorError::NonFinite { context } => write!(f, "non-finite value in {context}"),
        }
    }
}

impl std::error::Error for TaylorError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            TaylorError::Eval(e) => Some(e),
            TaylorError::Index(e) => Some(e),
            _ => None,
        }
    }
}

impl From<EvalError> for TaylorError {
    fn from(e: EvalError) -> Self {
        TaylorError::Eval(e)
    }
}

impl From<MultiIndexError> for TaylorError {
    fn from(e: MultiIndexError) -> Self {
        TaylorError::Index(e)
    }
}

fn check_capability(model: &dyn FunctionModel, required: u32) -> Result<(), TaylorError> {
    if let Some(available) = model.max_order() {
        if available < required {
            return Err(TaylorError::OrderUnavailable { required, available });
        }
    }
    Ok(())
}

fn check_dimension(expected: usize, got: usize) -> Result<(), TaylorError> {
    if expected != got {
        return Err(TaylorError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Taylor polynomial of a model about a center, stored as one coefficient
/// `D^a f(c) / a!` per multi-index in graded-lex order.
#[derive(Debug, Clone)]
pub struct TaylorPolynomial {
    center: Vec<f64>,
    order: u32,
    coefficients: BTreeMap<MultiIndex, f64>,
}

impl TaylorPolynomial {
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.coefficients
    }

    /// Evaluate the polynomial, summing terms in graded-lex order.
    pub fn eval(&self, x: &[f64]) -> Result<f64, TaylorError> {
        check_dimension(self.center.len(), x.len())?;
        let delta: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let mut acc = 0.0;
        for (alpha, coeff) in &self.coefficients {
            acc += coeff * alpha.monomial(&delta)?;
        }
        Ok(acc)
    }
}

/// Compute the Taylor coefficients of `model` about `center` up to `order`.
pub fn taylor_coefficients(
    model: &dyn FunctionModel,
    center: &[f64],
    order: u32,
) -> Result<TaylorPolynomial, TaylorError> {
    check_dimension(model.dimension(), center.len())?;
    check_capability(model, order)?;
    let mut coefficients = BTreeMap::new();
    for alpha in enumerate_up_to(model.dimension(), order)? {
        let derivative = model.partial(&alpha, center)?;
        let factorial = alpha.factorial()? as f64;
        coefficients.insert(alpha, derivative / factorial);
    }
    Ok(TaylorPolynomial {
        center: center.to_vec(),
        order,
        coefficients,
    })
}

/// The remainder `F(x, .)` for fixed model, center, order, and endpoint,
/// set up once so that evaluating at many `t` values stays cheap.
pub struct RemainderFn<'m> {
    center: Vec<f64>,
    delta: Vec<f64>,
    /// `f(x) - T(x)`.
    constant: f64,
    /// One `(evaluator, (x-c)^a / a!)` pair per `|a| = k+1`.
    terms: Vec<(PartialEvaluator<'m>, f64)>,
    scale: f64,
    point: Vec<f64>,
}

impl<'m> RemainderFn<'m> {
    pub fn new(
        model: &'m dyn FunctionModel,
        center: &[f64],
        order: u32,
        x: &[f64],
    ) -> Result<Self, TaylorError> {
        let dim = model.dimension();
        check_dimension(dim, center.len())?;
        check_dimension(dim, x.len())?;
        check_capability(model, order + 1)?;

        let taylor = taylor_coefficients(model, center, order)?;
        let fx = model.eval(x)?;
        let tx = taylor.eval(x)?;
        if !fx.is_finite() || !tx.is_finite() {
            return Err(TaylorError::NonFinite {
                context: "function or Taylor value at the endpoint".to_string(),
            });
        }
        let delta: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
        let mut terms = Vec::new();
        for alpha in enumerate_exact(dim, order + 1)? {
            let weight = alpha.monomial(&delta)? / alpha.factorial()? as f64;
            let evaluator = model.partial_evaluator(&alpha)?;
            terms.push((evaluator, weight));
        }
        Ok(RemainderFn {
            center: center.to_vec(),
            delta,
            constant: fx - tx,
            terms,
            scale: 1.0 + fx.abs() + tx.abs(),
            point: vec![0.0; dim],
        })
    }

    /// `S(x) = 1 + |f(x)| + |T(x)|`, the residual scale.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `F(x, t)`; `t` outside `[0, 1]` is accepted and evaluated literally.
    pub fn eval(&mut self, t: f64) -> Result<f64, TaylorError> {
        for ((p, c), d) in self.point.iter_mut().zip(&self.center).zip(&self.delta) {
            *p = c + t * d;
        }
        let mut acc = self.constant;
        for (evaluator, weight) in &self.terms {
            acc -= weight * evaluator(&self.point)?;
        }
        if !acc.is_finite() {
            return Err(TaylorError::NonFinite {
                context: format!("remainder evaluation at t = {t}"),
            });
        }
        Ok(acc)
    }
}

/// One-off evaluation of `F(x, t)`.
pub fn remainder_f(
    model: &dyn FunctionModel,
    center: &[f64],
    order: u32,
    x: &[f64],
    t: f64,
) -> Result<f64, TaylorError> {
    RemainderFn::new(model, center, order, x)?.eval(t)
}
