//! Multi-indices for partial derivatives and monomials.
//!
//! A multi-index is a vector of non-negative integer exponents, one per
//! variable. Degree `|a|` is the component sum, `a!` the product of the
//! component factorials, and `v^a` the monomial with the `0^0 = 1`
//! convention. Enumeration is graded lexicographic with the first component
//! dominant: degree ascending, and within a degree the first component
//! decreases first, e.g. for two variables at degree 2 the order is
//! `(2,0), (1,1), (0,2)`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiIndexError {
    /// A multi-index must have at least one component.
    EmptyIndex,
    /// Point or index length differs from the expected dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// `a!` does not fit in 128 bits.
    FactorialOverflow { component: u32 },
}

impl fmt::Display for MultiIndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiIndexError::EmptyIndex => write!(f, "multi-index must have dimension >= 1"),
            MultiIndexError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            MultiIndexError::FactorialOverflow { component } => {
                write!(f, "factorial of component {component} overflows 128-bit arithmetic")
            }
        }
    }
}

impl std::error::Error for MultiIndexError {}

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Result<Self, MultiIndexError> {
        if components.is_empty() {
            return Err(MultiIndexError::EmptyIndex);
        }
        Ok(MultiIndex(components))
    }

    /// Zero multi-index in `dim` variables; identifies the function itself.
    pub fn zero(dim: usize) -> Result<Self, MultiIndexError> {
        Self::new(vec![0; dim])
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|a|`, the sum of the components.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The index with component `var` raised by one.
    pub fn bump(&self, var: usize) -> Result<Self, MultiIndexError> {
        if var >= self.dimension() {
            return Err(MultiIndexError::DimensionMismatch {
                expected: self.dimension(),
                got: var + 1,
            });
        }
        let mut c = self.0.clone();
        c[var] += 1;
        Ok(MultiIndex(c))
    }

    /// `a!` as an exact integer.
    pub fn factorial(&self) -> Result<u128, MultiIndexError> {
        let mut acc: u128 = 1;
        for &c in &self.0 {
            for i in 2..=u128::from(c) {
                acc = acc
                    .checked_mul(i)
                    .ok_or(MultiIndexError::FactorialOverflow { component: c })?;
            }
        }
        Ok(acc)
    }

    /// Monomial `v^a` with `0^0 = 1`. Powers are accumulated by repeated
    /// multiplication so results are reproducible across platforms.
    pub fn monomial(&self, v: &[f64]) -> Result<f64, MultiIndexError> {
        if v.len() != self.dimension() {
            return Err(MultiIndexError::DimensionMismatch {
                expected: self.dimension(),
                got: v.len(),
            });
        }
        let mut acc = 1.0;
        for (&e, &x) in self.0.iter().zip(v) {
            acc *= pow_repeated(x, e);
        }
        Ok(acc)
    }
}

/// `x^e` by left-to-right repeated multiplication; `x^0 = 1` even for `x = 0`.
pub(crate) fn pow_repeated(x: f64, e: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Graded-lex comparison: degree first, then earlier indices are the ones
/// with lexicographically larger components, so sorting ascending reproduces
/// the enumeration order.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of exact degree `degree` in `dim` variables, graded-lex.
pub fn enumerate_exact(dim: usize, degree: u32) -> Result<Vec<MultiIndex>, MultiIndexError> {
    if dim == 0 {
        return Err(MultiIndexError::EmptyIndex);
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dim);
    fill(dim, degree, &mut prefix, &mut out);
    Ok(out)
}

fn fill(remaining: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if remaining == 1 {
        prefix.push(degree);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        fill(remaining - 1, degree - first, prefix, out);
        prefix.pop();
    }
}

/// All multi-indices with `|a| <= max_degree`, degree ascending then graded-lex.
pub fn enumerate_up_to(dim: usize, max_degree: u32) -> Result<Vec<MultiIndex>, MultiIndexError> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        out.extend(enumerate_exact(dim, d)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(c: &[u32]) -> MultiIndex {
        MultiIndex::new(c.to_vec()).unwrap()
    }

    #[test]
    fn enumerates_degree_two_in_two_vars() {
        let got = enumerate_exact(2, 2).unwrap();
        assert_eq!(got, vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
    }

    #[test]
    fn enumerates_degree_one_in_three_vars() {
        let got = enumerate_exact(3, 1).unwrap();
        assert_eq!(got, vec![mi(&[1, 0, 0]), mi(&[0, 1, 0]), mi(&[0, 0, 1])]);
    }

    #[test]
    fn enumerates_degree_two_in_three_vars() {
        // C(2+3-1, 3-1) = 6 indices.
        let got = enumerate_exact(3, 2).unwrap();
        assert_eq!(
            got,
            vec![
                mi(&[2, 0, 0]),
                mi(&[1, 1, 0]),
                mi(&[1, 0, 1]),
                mi(&[0, 2, 0]),
                mi(&[0, 1, 1]),
                mi(&[0, 0, 2]),
            ]
        );
    }

    #[test]
    fn enumerate_up_to_is_graded() {
        let got = enumerate_up_to(2, 2).unwrap();
        assert_eq!(
            got,
            vec![
                mi(&[0, 0]),
                mi(&[1, 0]),
                mi(&[0, 1]),
                mi(&[2, 0]),
                mi(&[1, 1]),
                mi(&[0, 2]),
            ]
        );
    }

    #[test]
    fn ord_matches_enumeration_order() {
        let mut shuffled = vec![mi(&[0, 2]), mi(&[1, 1]), mi(&[0, 0]), mi(&[2, 0]), mi(&[1, 0]), mi(&[0, 1])];
        shuffled.sort();
        assert_eq!(shuffled, enumerate_up_to(2, 2).unwrap());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(mi(&[3, 2]).factorial().unwrap(), 12);
        assert_eq!(mi(&[0, 0, 0]).factorial().unwrap(), 1);
        assert_eq!(mi(&[10]).factorial().unwrap(), 3_628_800);
    }

    #[test]
    fn factorial_overflow_is_reported() {
        // 35! exceeds u128; 34! does not.
        assert_eq!(mi(&[34]).factorial().unwrap(), 295_232_799_039_604_140_847_618_609_643_520_000_000);
        assert!(matches!(
            mi(&[35]).factorial(),
            Err(MultiIndexError::FactorialOverflow { component: 35 })
        ));
    }

    #[test]
    fn monomial_values() {
        assert_eq!(mi(&[2, 1]).monomial(&[3.0, 4.0]).unwrap(), 36.0);
        assert_eq!(mi(&[1, 1]).monomial(&[-2.0, 5.0]).unwrap(), -10.0);
        // 0^0 = 1 by convention.
        assert_eq!(mi(&[0, 0]).monomial(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(mi(&[0]).monomial(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn monomial_checks_dimension() {
        assert!(matches!(
            mi(&[1, 2]).monomial(&[1.0]),
            Err(MultiIndexError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn degree_sums_components() {
        assert_eq!(mi(&[2, 0, 3]).degree(), 5);
        assert!(mi(&[0, 0]).is_zero());
        assert!(!mi(&[0, 1]).is_zero());
    }

    #[test]
    fn bump_raises_one_component() {
        assert_eq!(mi(&[1, 0]).bump(1).unwrap(), mi(&[1, 1]));
        assert!(mi(&[1, 0]).bump(2).is_err());
    }

    #[test]
    fn empty_index_rejected() {
        assert!(matches!(MultiIndex::new(vec![]), Err(MultiIndexError::EmptyIndex)));
        assert!(enumerate_exact(0, 1).is_err());
    }
}
