//! Shared fixtures: the (11,11)-isogeny over F_19 lifted to Z/19^2.
#![allow(dead_code)]

pub mod invariants;

use std::sync::Arc;

use padiso::isogeny::IsogenyProblem;
use padiso::{CurvePoint, HyperellipticCurve, MumfordDivisor, PadicContext, Poly};

pub const DOMAIN: [i64; 6] = [17, 5, 3, 11, 16, 1];
pub const CODOMAIN: [i64; 6] = [0, -68, 2546, -100, -176, 2];
pub const NORMALIZATION: [i64; 4] = [95, 233, 155, 228];
pub const BASE: (i64, i64) = (0, 146);
pub const SUPPORT: [(i64, i64); 2] = [(-36, -13), (-129, -47)];
pub const ORDER: usize = 110;

/// Reference first 21 coefficients of the two x-series, signed residues mod 19^2.
pub const X1: [i64; 21] = [
    -36, -8, -58, -90, -90, -145, -124, -107, -13, -114, 154, 129, 88, 103, -22, -147, -178, 168, 144, -166, -77,
];
pub const X2: [i64; 21] = [
    -129, 102, 100, 94, 45, 91, 29, 137, -132, -52, 51, 150, 80, 90, -124, -163, 90, 102, 55, 44, 23,
];

/// Reference numerator and denominator of `-sigma_1` over F_19, low to high.
pub const MINUS_SIGMA1_NUM: [i64; 21] = [1, 0, 18, 17, 9, 10, 5, 10, 5, 6, 13, 16, 18, 2, 18, 2, 16, 4, 12, 8, 1];
pub const MINUS_SIGMA1_DEN: [i64; 22] = [
    16, 9, 16, 11, 18, 5, 6, 4, 3, 5, 2, 16, 13, 5, 8, 18, 13, 0, 14, 18, 11, 12,
];

pub fn context() -> Arc<PadicContext> {
    PadicContext::new(19, 2).unwrap()
}

/// Initial divisor through the two support points.
pub fn initial_divisor(
    ctx: &Arc<PadicContext>,
    codomain: &HyperellipticCurve,
    support: [(i64, i64); 2],
) -> MumfordDivisor {
    let [(x1, y1), (x2, y2)] = support;
    let u = Poly::from_i64s(ctx, &[-x1, 1]).mul(&Poly::from_i64s(ctx, &[-x2, 1]));
    let slope = ctx.div(&ctx.from_i64(y2 - y1), &ctx.from_i64(x2 - x1)).unwrap();
    let c = ctx.sub(&ctx.from_i64(y1), &ctx.mul(&slope, &ctx.from_i64(x1)));
    MumfordDivisor::new(codomain, u, Poly::new(ctx, vec![c, slope])).unwrap()
}

pub fn problem_with(normalization: [i64; 4], support: [(i64, i64); 2], base_y: i64) -> IsogenyProblem {
    let ctx = context();
    let domain = HyperellipticCurve::from_i64s(&ctx, &DOMAIN).unwrap();
    let codomain = HyperellipticCurve::from_i64s(&ctx, &CODOMAIN).unwrap();
    let d = initial_divisor(&ctx, &codomain, support);
    let norm = normalization.iter().map(|&v| ctx.from_i64(v)).collect();
    let base = CurvePoint::Affine {
        x: ctx.from_i64(BASE.0),
        y: ctx.from_i64(base_y),
    };
    IsogenyProblem::supplied(domain, codomain, norm, base, d, 11, Some(ORDER), 1).unwrap()
}

pub fn golden_problem() -> IsogenyProblem {
    problem_with(NORMALIZATION, SUPPORT, BASE.1)
}

pub fn residues(ctx: &PadicContext, values: &[i64]) -> Vec<String> {
    values.iter().map(|&v| ctx.format(&ctx.from_i64(v))).collect()
}

/// Whether `a / b == c / d` over F_p, by cross-multiplication.
pub fn same_fraction(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> bool {
    let lhs = a.mul(d);
    let rhs = c.mul(b);
    !lhs.is_zero() && lhs == rhs || (a.is_zero() && c.is_zero())
}

pub fn example_path(name: &str) -> String {
    format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR"))
}
