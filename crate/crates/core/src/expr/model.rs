//! Function models: uniform access to a function and its partial derivatives.
//!
//! [`FunctionModel`] is what the Taylor and interpolation machinery consumes.
//! [`ExprModel`] wraps an expression tree and differentiates symbolically,
//! memoizing one derivative tree per multi-index. [`PolynomialModel`] stores
//! explicit coefficients and differentiates exactly by shifting them, which
//! makes it a convenient reference model in tests.

use super::{differentiate, parse, EvalError, Expr, ParseError};
use crate::multiindex::MultiIndex;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

/// Evaluator for one fixed partial derivative, with any per-index lookup
/// already resolved.
pub type PartialEvaluator<'a> = Box<dyn Fn(&[f64]) -> Result<f64, EvalError> + Send + Sync + 'a>;

pub trait FunctionModel: Send + Sync {
    /// Number of variables the model is defined over.
    fn dimension(&self) -> usize;

    /// Largest derivative order the model can supply, or `None` when every
    /// order is available.
    fn max_order(&self) -> Option<u32> {
        None
    }

    fn eval(&self, point: &[f64]) -> Result<f64, EvalError>;

    /// `D^alpha f` at `point`. The zero multi-index must coincide with
    /// [`eval`](FunctionModel::eval).
    fn partial(&self, alpha: &MultiIndex, point: &[f64]) -> Result<f64, EvalError>;

    /// Evaluator for `D^alpha f` intended for tight loops; implementations
    /// should hoist per-index work (cache lookups) out of the returned
    /// closure. Must agree with [`partial`](FunctionModel::partial).
    fn partial_evaluator(&self, alpha: &MultiIndex) -> Result<PartialEvaluator<'_>, EvalError> {
        let alpha = alpha.clone();
        Ok(Box::new(move |point| self.partial(&alpha, point)))
    }
}

fn check_alpha(alpha: &MultiIndex, dimension: usize) -> Result<(), EvalError> {
    if alpha.dimension() != dimension {
        return Err(EvalError::DimensionMismatch {
            expected: dimension,
            got: alpha.dimension(),
        });
    }
    Ok(())
}

/// Expression-backed model with a memoized derivative tree per multi-index.
///
/// The cache is filled on demand. Concurrent fills of the same index are
/// idempotent (symbolic differentiation is deterministic), so readers always
/// observe a single consistent tree.
pub struct ExprModel {
    dimension: usize,
    root: Arc<Expr>,
    cache: RwLock<HashMap<MultiIndex, Arc<Expr>>>,
}

impl ExprModel {
    pub fn new(root: Arc<Expr>, dimension: usize) -> Self {
        ExprModel {
            dimension,
            root,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Parse `src` as a function of `dimension` variables.
    pub fn parse(src: &str, dimension: usize) -> Result<Self, ParseError> {
        Ok(Self::new(parse(src, dimension)?, dimension))
    }

    pub fn root(&self) -> &Arc<Expr> {
        &self.root
    }

    /// The memoized derivative tree for `alpha`, built by repeated
    /// single-variable differentiation in component order.
    pub fn derivative_expr(&self, alpha: &MultiIndex) -> Result<Arc<Expr>, EvalError> {
        check_alpha(alpha, self.dimension)?;
        if alpha.is_zero() {
            return Ok(self.root.clone());
        }
        if let Some(hit) = self.cache.read().unwrap().get(alpha) {
            return Ok(hit.clone());
        }
        // Reduce along the last non-zero component so the first components
        // are differentiated innermost, i.e. in component order.
        let mut parent = alpha.components().to_vec();
        let var = parent.iter().rposition(|&c| c > 0).expect("non-zero index");
        parent[var] -= 1;
        let parent = MultiIndex::new(parent).expect("non-empty index");
        let parent_expr = self.derivative_expr(&parent)?;
        let derived = differentiate(&parent_expr, var);
        let mut cache = self.cache.write().unwrap();
        Ok(cache.entry(alpha.clone()).or_insert(derived).clone())
    }
}

impl FunctionModel for ExprModel {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.check_point(point)?;
        self.root.eval(point)
    }

    fn partial(&self, alpha: &MultiIndex, point: &[f64]) -> Result<f64, EvalError> {
        self.check_point(point)?;
        self.derivative_expr(alpha)?.eval(point)
    }

    fn partial_evaluator(&self, alpha: &MultiIndex) -> Result<PartialEvaluator<'_>, EvalError> {
        let tree = self.derivative_expr(alpha)?;
        Ok(Box::new(move |point| tree.eval(point)))
    }
}

impl ExprModel {
    fn check_point(&self, point: &[f64]) -> Result<(), EvalError> {
        if point.len() != self.dimension {
            return Err(EvalError::DimensionMismatch {
                expected: self.dimension,
                got: point.len(),
            });
        }
        Ok(())
    }
}

/// Dense-coefficient polynomial with exact derivatives.
///
/// Terms are kept in graded-lex order, so evaluation sums them in a fixed,
/// reproducible order. Derivative coefficient maps are memoized per
/// multi-index.
pub struct PolynomialModel {
    dimension: usize,
    terms: BTreeMap<MultiIndex, f64>,
    cache: RwLock<HashMap<MultiIndex, Arc<BTreeMap<MultiIndex, f64>>>>,
}

impl PolynomialModel {
    /// Build from `(exponents, coefficient)` pairs; duplicate exponent
    /// vectors accumulate by addition.
    pub fn new(
        dimension: usize,
        terms: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Result<Self, EvalError> {
        let mut map = BTreeMap::new();
        for (alpha, coeff) in terms {
            check_alpha(&alpha, dimension)?;
            *map.entry(alpha).or_insert(0.0) += coeff;
        }
        Ok(PolynomialModel {
            dimension,
            terms: map,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.terms
    }

    /// Largest exponent-sum among terms with a non-zero coefficient.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, &c)| c != 0.0)
            .map(|(a, _)| a.degree())
            .max()
            .unwrap_or(0)
    }

    fn eval_terms(terms: &BTreeMap<MultiIndex, f64>, point: &[f64]) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for (alpha, coeff) in terms {
            let m = alpha.monomial(point).map_err(|_| EvalError::DimensionMismatch {
                expected: alpha.dimension(),
                got: point.len(),
            })?;
            acc += coeff * m;
        }
        Ok(acc)
    }

    /// Coefficients of `D^alpha p`: each term `c * v^beta` with `beta >= alpha`
    /// contributes `c * prod_i beta_i! / (beta_i - alpha_i)!` at `beta - alpha`.
    fn derivative_terms(&self, alpha: &MultiIndex) -> Arc<BTreeMap<MultiIndex, f64>> {
        if let Some(hit) = self.cache.read().unwrap().get(alpha) {
            return hit.clone();
        }
        let mut out = BTreeMap::new();
        'terms: for (beta, coeff) in &self.terms {
            let mut factor = 1.0;
            let mut shifted = Vec::with_capacity(self.dimension);
            for (&b, &a) in beta.components().iter().zip(alpha.components()) {
                if b < a {
                    continue 'terms;
                }
                for j in 0..a {
                    factor *= f64::from(b - j);
                }
                shifted.push(b - a);
            }
            let shifted = MultiIndex::new(shifted).expect("non-empty index");
            *out.entry(shifted).or_insert(0.0) += coeff * factor;
        }
        let out = Arc::new(out);
        let mut cache = self.cache.write().unwrap();
        cache.entry(alpha.clone()).or_insert(out).clone()
    }
}

impl FunctionModel for PolynomialModel {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        if point.len() != self.dimension {
            return Err(EvalError::DimensionMismatch {
                expected: self.dimension,
                got: point.len(),
            });
        }
        Self::eval_terms(&self.terms, point)
    }

    fn partial(&self, alpha: &MultiIndex, point: &[f64]) -> Result<f64, EvalError> {
        check_alpha(alpha, self.dimension)?;
        if point.len() != self.dimension {
            return Err(EvalError::DimensionMismatch {
                expected: self.dimension,
                got: point.len(),
            });
        }
        if alpha.is_zero() {
            return Self::eval_terms(&self.terms, point);
        }
        Self::eval_terms(&self.derivative_terms(alpha), point)
    }

    fn partial_evaluator(&self, alpha: &MultiIndex) -> Result<PartialEvaluator<'_>, EvalError> {
        check_alpha(alpha, self.dimension)?;
        let terms = if alpha.is_zero() {
            Arc::new(self.terms.clone())
        } else {
            self.derivative_terms(alpha)
        };
        Ok(Box::new(move |point| Self::eval_terms(&terms, point)))
    }
}
