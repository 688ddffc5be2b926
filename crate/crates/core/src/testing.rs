//! Deterministic generators of random models for tests and demos.
//!
//! Everything here draws from a [`RandomStream`], so a fixed seed fixes the
//! generated models exactly. The expression generator only emits shapes that
//! are total on all of `R^d`: denominators and roots are bounded away from
//! zero by construction, exponential arguments are kept small, and tangent
//! arguments stay inside `(-pi/2, pi/2)`. That makes every generated
//! expression safe to evaluate and differentiate on a box around the origin,
//! which randomized comparisons against finite differences rely on.
//!
//! These generators are a testing aid, not a stable API surface.

use crate::expr::{BinOp, Expr, Func, PolynomialModel};
use crate::multiindex::enumerate_up_to;
use crate::stochastic::RandomStream;
use std::sync::Arc;

/// Uniform point in the box `[lo, hi)^dim`.
pub fn random_point(stream: &mut RandomStream, dimension: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dimension).map(|_| stream.uniform_in(lo, hi)).collect()
}

/// Random polynomial with `terms` draws of monomials of total degree at
/// most `max_degree` and coefficients uniform in `[-1, 1)`. Repeated
/// monomials accumulate, so the result can have fewer distinct terms.
pub fn random_polynomial(
    stream: &mut RandomStream,
    dimension: usize,
    max_degree: u32,
    terms: usize,
) -> PolynomialModel {
    let indices = enumerate_up_to(dimension, max_degree).expect("valid dimension");
    let picks = (0..terms.max(1)).map(|_| {
        let ix = indices[stream.uniform_int(indices.len() as u64) as usize].clone();
        (ix, stream.uniform_in(-1.0, 1.0))
    });
    PolynomialModel::new(dimension, picks).expect("indices match the dimension")
}

fn leaf(stream: &mut RandomStream, dimension: usize) -> Arc<Expr> {
    if stream.uniform_int(10) < 6 {
        Expr::variable(stream.uniform_int(dimension as u64) as usize)
    } else {
        Expr::constant(stream.uniform_in(0.3, 2.5))
    }
}

/// `c + u^2` with `c >= floor`: positive everywhere, cheap to bound.
fn positive_shifted_square(
    stream: &mut RandomStream,
    dimension: usize,
    depth: u32,
    trans_budget: u32,
    floor: f64,
    ceil: f64,
) -> Arc<Expr> {
    let c = Expr::constant(stream.uniform_in(floor, ceil));
    let u = gen(stream, dimension, depth, trans_budget);
    Expr::binary(BinOp::Add, c, Expr::binary(BinOp::Pow, u, Expr::constant(2.0)))
}

fn gen(stream: &mut RandomStream, dimension: usize, depth: u32, trans_budget: u32) -> Arc<Expr> {
    if depth == 0 {
        return leaf(stream, dimension);
    }
    let d = depth - 1;
    match stream.uniform_int(100) {
        0..=14 => leaf(stream, dimension),
        15..=34 => Expr::binary(
            BinOp::Add,
            gen(stream, dimension, d, trans_budget),
            gen(stream, dimension, d, trans_budget),
        ),
        35..=49 => Expr::binary(
            BinOp::Sub,
            gen(stream, dimension, d, trans_budget),
            gen(stream, dimension, d, trans_budget),
        ),
        50..=67 => Expr::binary(
            BinOp::Mul,
            gen(stream, dimension, d, trans_budget),
            gen(stream, dimension, d, trans_budget),
        ),
        68..=75 => {
            // Denominator bounded below by its constant shift; the
            // numerator keeps the full budget.
            let den = positive_shifted_square(stream, dimension, d.min(1), 0, 0.8, 2.0);
            Expr::binary(BinOp::Div, gen(stream, dimension, d, trans_budget), den)
        }
        76..=87 => {
            // Base depth is capped so stacked powers cannot blow values up
            // beyond what finite-difference comparisons tolerate.
            let e = 2 + stream.uniform_int(2) as i32;
            let base = gen(stream, dimension, d.min(2), trans_budget);
            Expr::binary(BinOp::Pow, base, Expr::constant(e as f64))
        }
        88..=93 => {
            // Fractional power of a positive base: exercises the general
            // exp(b ln a) path of the derivative rules.
            let base = positive_shifted_square(stream, dimension, d.min(1), 0, 0.8, 1.6);
            let mut exponent = stream.uniform_in(0.4, 1.6);
            if (exponent - exponent.round()).abs() < 0.05 {
                exponent += 0.1;
            }
            Expr::binary(BinOp::Pow, base, Expr::constant(exponent))
        }
        _ => {
            if trans_budget == 0 {
                return Expr::binary(
                    BinOp::Mul,
                    gen(stream, dimension, d, trans_budget),
                    gen(stream, dimension, d, trans_budget),
                );
            }
            let t = trans_budget - 1;
            match stream.uniform_int(6) {
                0 => Expr::call(Func::Sin, gen(stream, dimension, d, t)),
                1 => Expr::call(Func::Cos, gen(stream, dimension, d, t)),
                2 => {
                    // Exponential of a slope-limited linear term stays small
                    // on any modest box.
                    let arg = Expr::binary(
                        BinOp::Mul,
                        Expr::constant(stream.uniform_in(0.3, 0.8)),
                        Expr::variable(stream.uniform_int(dimension as u64) as usize),
                    );
                    Expr::call(Func::Exp, arg)
                }
                3 => Expr::call(
                    Func::Log,
                    positive_shifted_square(stream, dimension, d, t, 1.2, 2.2),
                ),
                4 => Expr::call(
                    Func::Sqrt,
                    positive_shifted_square(stream, dimension, d, t, 0.5, 1.5),
                ),
                _ => {
                    // Tangent of a scaled sine keeps the argument well
                    // inside (-pi/2, pi/2).
                    let arg = Expr::binary(
                        BinOp::Mul,
                        Expr::constant(stream.uniform_in(0.3, 1.2)),
                        Expr::call(Func::Sin, gen(stream, dimension, d, t)),
                    );
                    Expr::call(Func::Tan, arg)
                }
            }
        }
    }
}

/// Random expression on `dimension` variables, total on `R^dimension`,
/// with nesting depth at most `max_depth` and at most two transcendental
/// calls along any root-to-leaf path.
pub fn random_expression(
    stream: &mut RandomStream,
    dimension: usize,
    max_depth: u32,
) -> Arc<Expr> {
    assert!(dimension > 0, "dimension must be positive");
    gen(stream, dimension, max_depth, 2)
}
