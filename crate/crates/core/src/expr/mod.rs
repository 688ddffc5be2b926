//! Expression trees for scalar functions of several variables.
//!
//! The surface syntax is a small calculator grammar: `+ - * / ^` with the
//! usual precedence (`^` binds tighter than unary minus, which binds tighter
//! than `*` and `/`), right-associative `^`, the functions `sin cos tan exp
//! log sqrt`, the constants `pi` and `e`, and variables `x` (one dimension)
//! or `x1..xN`. Parsing, evaluation, symbolic differentiation and printing
//! all operate on [`Expr`]; printing an expression and re-parsing it yields a
//! structurally identical tree.
//!
//! Powers with a constant integer exponent are evaluated by repeated
//! multiplication (and `0^0 = 1`); any other exponent goes through
//! `exp(b*log(a))` and therefore requires a positive base.

mod derivative;
mod model;
mod parser;

pub use derivative::differentiate;
pub use model::{ExprModel, FunctionModel, PartialEvaluator, PolynomialModel};
pub use parser::{parse, ParseError};

use std::fmt;
use std::sync::Arc;

/// Largest constant exponent evaluated by repeated multiplication.
const MAX_REPEATED_EXPONENT: f64 = 65536.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    /// Zero-based variable index; `x3` in source is `Variable(2)`.
    Variable(usize),
    Neg(Arc<Expr>),
    Binary {
        op: BinOp,
        lhs: Arc<Expr>,
        rhs: Arc<Expr>,
    },
    Call {
        func: Func,
        arg: Arc<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// The evaluation point has fewer components than the expression uses.
    DimensionMismatch { expected: usize, got: usize },
    /// The argument left the domain of an operation; `expr` is the offending
    /// subexpression as text.
    Domain { expr: String, detail: String },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DimensionMismatch { expected, got } => {
                write!(f, "point has {got} components but the expression uses {expected}")
            }
            EvalError::Domain { expr, detail } => {
                write!(f, "domain violation in `{expr}`: {detail}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

impl Expr {
    pub fn constant(c: f64) -> Arc<Expr> {
        Arc::new(Expr::Constant(c))
    }

    pub fn variable(index: usize) -> Arc<Expr> {
        Arc::new(Expr::Variable(index))
    }

    pub fn neg(e: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Neg(e))
    }

    pub fn binary(op: BinOp, lhs: Arc<Expr>, rhs: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Binary { op, lhs, rhs })
    }

    pub fn call(func: Func, arg: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Call { func, arg })
    }

    /// Smallest dimension whose points this expression can be evaluated at,
    /// i.e. one past the largest variable index used.
    pub fn min_dimension(&self) -> usize {
        match self {
            Expr::Constant(_) => 0,
            Expr::Variable(i) => i + 1,
            Expr::Neg(e) => e.min_dimension(),
            Expr::Binary { lhs, rhs, .. } => lhs.min_dimension().max(rhs.min_dimension()),
            Expr::Call { arg, .. } => arg.min_dimension(),
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        match self {
            Expr::Constant(c) => Ok(*c),
            Expr::Variable(i) => point.get(*i).copied().ok_or(EvalError::DimensionMismatch {
                expected: i + 1,
                got: point.len(),
            }),
            Expr::Neg(e) => Ok(-e.eval(point)?),
            Expr::Binary { op, lhs, rhs } => {
                if *op == BinOp::Pow {
                    return self.eval_pow(lhs, rhs, point);
                }
                let a = lhs.eval(point)?;
                let b = rhs.eval(point)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(self.domain_error(format!("division by zero (denominator `{rhs}` = 0)")))
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => unreachable!(),
                }
            }
            Expr::Call { func, arg } => {
                let a = arg.eval(point)?;
                match func {
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Tan => Ok(a.tan()),
                    Func::Exp => Ok(a.exp()),
                    Func::Log => {
                        if a <= 0.0 {
                            Err(self.domain_error(format!("log of {a} (argument must be positive)")))
                        } else {
                            Ok(a.ln())
                        }
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            Err(self.domain_error(format!("sqrt of {a} (argument must be non-negative)")))
                        } else {
                            Ok(a.sqrt())
                        }
                    }
                }
            }
        }
    }

    fn eval_pow(&self, lhs: &Arc<Expr>, rhs: &Arc<Expr>, point: &[f64]) -> Result<f64, EvalError> {
        let a = lhs.eval(point)?;
        if let Some(n) = constant_integer_exponent(rhs) {
            if n >= 0 {
                return Ok(crate::multiindex::pow_repeated(a, n as u32));
            }
            if a == 0.0 {
                return Err(self.domain_error("zero base with negative exponent".to_string()));
            }
            return Ok(1.0 / crate::multiindex::pow_repeated(a, (-n) as u32));
        }
        let b = rhs.eval(point)?;
        if a > 0.0 {
            Ok((b * a.ln()).exp())
        } else if a == 0.0 && b > 0.0 {
            Ok(0.0)
        } else if a == 0.0 && b == 0.0 {
            Ok(1.0)
        } else {
            Err(self.domain_error(format!(
                "power with base {a} and non-integer exponent (base must be positive)"
            )))
        }
    }

    fn domain_error(&self, detail: String) -> EvalError {
        EvalError::Domain {
            expr: self.to_string(),
            detail,
        }
    }
}

/// Integer value of a constant exponent node, when the integer-power
/// evaluation rule applies to it.
pub(crate) fn constant_integer_exponent(e: &Expr) -> Option<i64> {
    match e {
        Expr::Constant(c)
            if c.fract() == 0.0 && c.abs() <= MAX_REPEATED_EXPONENT =>
        {
            Some(*c as i64)
        }
        _ => None,
    }
}

// Printing precedence levels: 0 additive, 1 multiplicative, 2 unary minus,
// 3 power, 4 atom. A negative constant prints with a leading minus, so it
// carries the precedence of a negation.
fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Constant(c) if *c < 0.0 => 2,
        Expr::Constant(_) | Expr::Variable(_) | Expr::Call { .. } => 4,
        Expr::Neg(_) => 2,
        Expr::Binary { op: BinOp::Pow, .. } => 3,
        Expr::Binary { op: BinOp::Mul | BinOp::Div, .. } => 1,
        Expr::Binary { op: BinOp::Add | BinOp::Sub, .. } => 0,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if precedence(e) < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => write!(f, "{c}"),
            Expr::Variable(i) => write!(f, "x{}", i + 1),
            Expr::Neg(e) => {
                write!(f, "-")?;
                write_child(f, e, 2)
            }
            Expr::Binary { op, lhs, rhs } => match op {
                BinOp::Add => {
                    write_child(f, lhs, 0)?;
                    write!(f, "+")?;
                    write_child(f, rhs, 1)
                }
                BinOp::Sub => {
                    write_child(f, lhs, 0)?;
                    write!(f, "-")?;
                    write_child(f, rhs, 1)
                }
                BinOp::Mul => {
                    write_child(f, lhs, 1)?;
                    write!(f, "*")?;
                    write_child(f, rhs, 2)
                }
                BinOp::Div => {
                    write_child(f, lhs, 1)?;
                    write!(f, "/")?;
                    write_child(f, rhs, 2)
                }
                BinOp::Pow => {
                    write_child(f, lhs, 4)?;
                    write!(f, "^")?;
                    write_child(f, rhs, 2)
                }
            },
            Expr::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}
