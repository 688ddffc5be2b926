//! Symbolic differentiation with conservative cleanup.
//!
//! The derivative builder applies the textbook rules and then a single
//! bottom-up simplification pass: constant folding plus the identities
//! `u*0 = 0`, `u*1 = u`, `u+0 = u`, `u-0 = u`, `0-u = -u`, `u/1 = u`,
//! `u^1 = u`, `u^0 = 1`, and double-negation removal. Nothing is factored,
//! expanded, or reassociated, so derivative trees stay predictable.

use super::{BinOp, Expr, Func};
use std::sync::Arc;

/// Partial derivative of `e` with respect to the zero-based variable `var`.
pub fn differentiate(e: &Arc<Expr>, var: usize) -> Arc<Expr> {
    simplify(&raw_derivative(e, var))
}

fn raw_derivative(e: &Arc<Expr>, var: usize) -> Arc<Expr> {
    match &**e {
        Expr::Constant(_) => Expr::constant(0.0),
        Expr::Variable(i) => Expr::constant(if *i == var { 1.0 } else { 0.0 }),
        Expr::Neg(u) => Expr::neg(raw_derivative(u, var)),
        Expr::Binary { op, lhs, rhs } => {
            let du = || raw_derivative(lhs, var);
            let dv = || raw_derivative(rhs, var);
            match op {
                BinOp::Add => Expr::binary(BinOp::Add, du(), dv()),
                BinOp::Sub => Expr::binary(BinOp::Sub, du(), dv()),
                BinOp::Mul => Expr::binary(
                    BinOp::Add,
                    Expr::binary(BinOp::Mul, du(), rhs.clone()),
                    Expr::binary(BinOp::Mul, lhs.clone(), dv()),
                ),
                BinOp::Div => Expr::binary(
                    BinOp::Div,
                    Expr::binary(
                        BinOp::Sub,
                        Expr::binary(BinOp::Mul, du(), rhs.clone()),
                        Expr::binary(BinOp::Mul, lhs.clone(), dv()),
                    ),
                    Expr::binary(BinOp::Pow, rhs.clone(), Expr::constant(2.0)),
                ),
                BinOp::Pow => {
                    if let Expr::Constant(c) = **rhs {
                        // d(u^c) = c * u^(c-1) * u'
                        return Expr::binary(
                            BinOp::Mul,
                            Expr::binary(
                                BinOp::Mul,
                                Expr::constant(c),
                                Expr::binary(BinOp::Pow, lhs.clone(), Expr::constant(c - 1.0)),
                            ),
                            du(),
                        );
                    }
                    // d(u^v) = u^v * (v' * log(u) + v * u' / u)
                    Expr::binary(
                        BinOp::Mul,
                        e.clone(),
                        Expr::binary(
                            BinOp::Add,
                            Expr::binary(BinOp::Mul, dv(), Expr::call(Func::Log, lhs.clone())),
                            Expr::binary(
                                BinOp::Div,
                                Expr::binary(BinOp::Mul, rhs.clone(), du()),
                                lhs.clone(),
                            ),
                        ),
                    )
                }
            }
        }
        Expr::Call { func, arg } => {
            let du = raw_derivative(arg, var);
            match func {
                Func::Sin => Expr::binary(BinOp::Mul, Expr::call(Func::Cos, arg.clone()), du),
                Func::Cos => Expr::binary(
                    BinOp::Mul,
                    Expr::neg(Expr::call(Func::Sin, arg.clone())),
                    du,
                ),
                Func::Tan => Expr::binary(
                    BinOp::Mul,
                    Expr::binary(
                        BinOp::Div,
                        Expr::constant(1.0),
                        Expr::binary(
                            BinOp::Pow,
                            Expr::call(Func::Cos, arg.clone()),
                            Expr::constant(2.0),
                        ),
                    ),
                    du,
                ),
                Func::Exp => Expr::binary(BinOp::Mul, e.clone(), du),
                Func::Log => Expr::binary(BinOp::Div, du, arg.clone()),
                Func::Sqrt => Expr::binary(
                    BinOp::Div,
                    du,
                    Expr::binary(BinOp::Mul, Expr::constant(2.0), e.clone()),
                ),
            }
        }
    }
}

fn is_const(e: &Expr, want: f64) -> bool {
    matches!(e, Expr::Constant(c) if *c == want)
}

/// One bottom-up cleanup pass; see the module docs for the rule set.
pub(crate) fn simplify(e: &Arc<Expr>) -> Arc<Expr> {
    match &**e {
        Expr::Constant(_) | Expr::Variable(_) => e.clone(),
        Expr::Neg(u) => {
            let u = simplify(u);
            match &*u {
                Expr::Constant(c) => Expr::constant(-c),
                Expr::Neg(inner) => inner.clone(),
                _ => Expr::neg(u),
            }
        }
        Expr::Binary { op, lhs, rhs } => {
            let l = simplify(lhs);
            let r = simplify(rhs);
            if let (Expr::Constant(_), Expr::Constant(_)) = (&*l, &*r) {
                if let Some(folded) = fold(Expr::binary(*op, l.clone(), r.clone())) {
                    return folded;
                }
            }
            match op {
                BinOp::Add => {
                    if is_const(&l, 0.0) {
                        return r;
                    }
                    if is_const(&r, 0.0) {
                        return l;
                    }
                }
                BinOp::Sub => {
                    if is_const(&r, 0.0) {
                        return l;
                    }
                    if is_const(&l, 0.0) {
                        return match &*r {
                            Expr::Constant(c) => Expr::constant(-c),
                            Expr::Neg(inner) => inner.clone(),
                            _ => Expr::neg(r),
                        };
                    }
                }
                BinOp::Mul => {
                    if is_const(&l, 0.0) || is_const(&r, 0.0) {
                        return Expr::constant(0.0);
                    }
                    if is_const(&l, 1.0) {
                        return r;
                    }
                    if is_const(&r, 1.0) {
                        return l;
                    }
                }
                BinOp::Div => {
                    if is_const(&r, 1.0) {
                        return l;
                    }
                }
                BinOp::Pow => {
                    if is_const(&r, 1.0) {
                        return l;
                    }
                    if is_const(&r, 0.0) {
                        // u^0 = 1, consistent with the 0^0 = 1 convention.
                        return Expr::constant(1.0);
                    }
                }
            }
            Expr::binary(*op, l, r)
        }
        Expr::Call { func, arg } => {
            let a = simplify(arg);
            if matches!(&*a, Expr::Constant(_)) {
                if let Some(folded) = fold(Expr::call(*func, a.clone())) {
                    return folded;
                }
            }
            Expr::call(*func, a)
        }
    }
}

/// Fold a constant-operand node to its value when that value is defined and
/// finite; otherwise leave the node so the error surfaces at evaluation.
fn fold(candidate: Arc<Expr>) -> Option<Arc<Expr>> {
    match candidate.eval(&[]) {
        Ok(v) if v.is_finite() => Some(Expr::constant(v)),
        _ => None,
    }
}
