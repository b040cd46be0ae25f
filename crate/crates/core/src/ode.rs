//! Newton-doubling solver for `H(X) X' = G`, `X(0) = 0`, plus a term-by-term
//! reference solver and the working-precision rule.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{inverse_newton_step, invert_constant, SeriesMatrix, SeriesVector};
use crate::padic::{Elem, PadicContext};
use crate::poly::Poly;
use crate::series::{compose_poly, TruncSeries};

/// Supplies the matrix `H(X)` of the system.
pub trait HEvaluator: Send + Sync {
    fn dim(&self) -> usize;

    fn context(&self) -> &Arc<PadicContext>;

    /// `H(X) mod t^order`. Entries of `x` have zero constant term and are read
    /// as polynomials.
    fn evaluate(&self, x: &SeriesVector, order: usize) -> Result<SeriesMatrix>;

    /// `H(0)`, row-major.
    fn head(&self) -> Result<Vec<Elem>> {
        let zero = SeriesVector::zero(self.context(), self.dim(), 1);
        Ok(self.evaluate(&zero, 1)?.head())
    }

    /// The same evaluator over a context with the same p and modulus.
    fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Box<dyn HEvaluator>>;
}

/// Backed by polynomials `f_ij` with `f_ij` evaluated at `x_i(t)`. The system
/// solved is `sum_i f_ij(x_i) x_i' = g_j`, so the matrix handed to the solver
/// is the transpose: its entry `(r, c)` is `f_cr(x_c)`. Only in this
/// orientation is `H(X) dX` a sum of exact differentials, which the Newton
/// correction relies on.
#[derive(Clone, Debug)]
pub struct GenericSeriesH {
    ctx: Arc<PadicContext>,
    dim: usize,
    entries: Vec<Poly>,
}

impl GenericSeriesH {
    /// `entries` is row-major, `dim * dim` polynomials.
    pub fn new(ctx: &Arc<PadicContext>, dim: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!("expected {} polynomials", dim * dim)));
        }
        for e in &entries {
            if !PadicContext::same(ctx, e.context()) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(GenericSeriesH {
            ctx: ctx.clone(),
            dim,
            entries,
        })
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }
}

fn prepared(x: &SeriesVector, order: usize) -> SeriesVector {
    if x.order() >= order {
        x.truncate(order)
    } else {
        x.resized(order)
    }
}

impl HEvaluator for GenericSeriesH {
    fn dim(&self) -> usize {
        self.dim
    }

    fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    fn evaluate(&self, x: &SeriesVector, order: usize) -> Result<SeriesMatrix> {
        if x.dim() != self.dim {
            return Err(Error::Shape("argument dimension differs from H".into()));
        }
        let x = prepared(x, order);
        let g = self.dim;
        let mut out = Vec::with_capacity(g * g);
        for r in 0..g {
            for c in 0..g {
                out.push(compose_poly(&self.ctx, self.entries[c * g + r].coeffs(), x.entry(c))?);
            }
        }
        SeriesMatrix::new(&self.ctx, g, out)
    }

    fn head(&self) -> Result<Vec<Elem>> {
        let g = self.dim;
        Ok((0..g * g).map(|k| self.entries[(k % g) * g + k / g].coeff(0)).collect())
    }

    fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Box<dyn HEvaluator>> {
        let entries = self
            .entries
            .iter()
            .map(|f| f.to_context(ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(Box::new(GenericSeriesH::new(ctx, self.dim, entries)?))
    }
}

/// Entry `(i, j)` is `u_j^i / y_j` with `u_j = x0_j + x_j(t)` and
/// `y_j = sqrt(f(u_j))`, `y_j(0) = y0_j`, for `i = 0..g`.
#[derive(Clone, Debug)]
pub struct HyperellipticH {
    ctx: Arc<PadicContext>,
    curve: Poly,
    shifted: Vec<Poly>,
    x0: Vec<Elem>,
    y0: Vec<Elem>,
}

impl HyperellipticH {
    pub fn new(curve: &Poly, x0: Vec<Elem>, y0: Vec<Elem>) -> Result<Self> {
        let ctx = curve.context().clone();
        if x0.len() != y0.len() || x0.is_empty() {
            return Err(Error::Shape("need one y0 per x0".into()));
        }
        for (x, y) in x0.iter().zip(&y0) {
            if !ctx.is_unit(y) {
                return Err(Error::Weierstrass);
            }
            if ctx.mul(y, y) != curve.eval(x) {
                return Err(Error::NotOnCurve);
            }
        }
        let shifted = x0.iter().map(|x| curve.taylor_shift(x)).collect();
        Ok(HyperellipticH {
            ctx,
            curve: curve.clone(),
            shifted,
            x0,
            y0,
        })
    }

    pub fn x0(&self) -> &[Elem] {
        &self.x0
    }

    pub fn y0(&self) -> &[Elem] {
        &self.y0
    }

    pub fn curve(&self) -> &Poly {
        &self.curve
    }

    /// `y_j(t) = sqrt(f(x0_j + x(t)))` with `y_j(0) = y0_j`, modulo t^order.
    pub fn y_series(&self, j: usize, x: &TruncSeries, order: usize) -> Result<TruncSeries> {
        let x = if x.order() >= order {
            x.truncate(order)
        } else {
            x.resized(order)
        };
        let fx = compose_poly(&self.ctx, self.shifted[j].coeffs(), &x)?;
        fx.sqrt(&self.y0[j])
    }
}

impl HEvaluator for HyperellipticH {
    fn dim(&self) -> usize {
        self.x0.len()
    }

    fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    fn evaluate(&self, x: &SeriesVector, order: usize) -> Result<SeriesMatrix> {
        let g = self.dim();
        if x.dim() != g {
            return Err(Error::Shape("argument dimension differs from H".into()));
        }
        let x = prepared(x, order);
        let mut cols: Vec<Vec<TruncSeries>> = Vec::with_capacity(g);
        for j in 0..g {
            let y = self.y_series(j, x.entry(j), order)?;
            let mut entry = y.inverse()?;
            let mut u = x.entry(j).clone();
            if order > 0 {
                u.coeffs_mut()[0] = self.ctx.add(&u.coeff(0), &self.x0[j]);
            }
            let mut col = Vec::with_capacity(g);
            for i in 0..g {
                if i > 0 {
                    entry = entry.mul_to(&u, order);
                }
                col.push(entry.clone());
            }
            cols.push(col);
        }
        let mut out = Vec::with_capacity(g * g);
        for i in 0..g {
            for col in &cols {
                out.push(col[i].clone());
            }
        }
        SeriesMatrix::new(&self.ctx, g, out)
    }

    fn head(&self) -> Result<Vec<Elem>> {
        let g = self.dim();
        let mut out = vec![Elem::ZERO; g * g];
        for j in 0..g {
            let mut e = self.ctx.inv(&self.y0[j])?;
            for i in 0..g {
                out[i * g + j] = e;
                e = self.ctx.mul(&e, &self.x0[j]);
            }
        }
        Ok(out)
    }

    fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Box<dyn HEvaluator>> {
        let curve = self.curve.to_context(ctx)?;
        let conv = |v: &[Elem]| v.iter().map(|e| ctx.convert_from(&self.ctx, e)).collect();
        Ok(Box::new(HyperellipticH::new(&curve, conv(&self.x0), conv(&self.y0))?))
    }
}

/// `H(X) X' = G` to be solved modulo t^(n+1) with `target_digits` correct p-adic digits.
pub struct OdeProblem {
    pub h: Box<dyn HEvaluator>,
    pub g: SeriesVector,
    pub n: usize,
    pub target_digits: u32,
}

impl OdeProblem {
    pub fn new(h: Box<dyn HEvaluator>, g: SeriesVector, n: usize, target_digits: u32) -> Result<Self> {
        if !PadicContext::same(h.context(), g.context()) {
            return Err(Error::ContextMismatch);
        }
        if g.dim() != h.dim() {
            return Err(Error::Shape("G and H dimensions differ".into()));
        }
        if g.order() < n {
            return Err(Error::Shape(format!("G is known to order {} < n = {n}", g.order())));
        }
        if target_digits == 0 {
            return Err(Error::InvalidParameter("target precision must be positive".into()));
        }
        Ok(OdeProblem { h, g, n, target_digits })
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.h.context()
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Working precision this problem needs.
    pub fn required_precision(&self) -> u32 {
        required_precision(self.context().prime(), self.target_digits, self.n)
    }

    /// The same problem over a context with the same p and modulus.
    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<OdeProblem> {
        OdeProblem::new(
            self.h.to_context(ctx)?,
            self.g.to_context(ctx)?,
            self.n,
            self.target_digits,
        )
    }
}

/// Largest `e` with `p^e <= n`.
pub fn floor_log(p: u64, n: usize) -> u32 {
    let mut e = 0;
    let mut pe: u128 = p as u128;
    while pe <= n as u128 {
        e += 1;
        pe *= p as u128;
    }
    e
}

/// Working precision guaranteeing `target_digits` correct digits for a
/// solution modulo t^(n+1).
pub fn required_precision(p: u64, target_digits: u32, n: usize) -> u32 {
    let base = match p {
        2 => target_digits.max(3),
        3 => target_digits.max(2),
        _ => target_digits,
    };
    base + floor_log(p, n.max(1))
}

/// Order at which the recursion splits a level `n` into `m` and `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// `m = 2^(ceil(log2(n+1)) - 1) - 1`, i.e. levels 0, 1, 3, 7, 15, ... then n.
    #[default]
    Doubling,
    /// `m = ceil((n - 1) / 2)`.
    Halving,
}

impl Schedule {
    pub fn split(self, n: usize) -> usize {
        debug_assert!(n >= 1);
        match self {
            Schedule::Halving => n / 2,
            Schedule::Doubling => {
                let bits = usize::BITS - n.leading_zeros(); // ceil(log2(n + 1)) for n >= 1
                (1usize << (bits - 1)) - 1
            }
        }
    }
}

/// Solver output.
#[derive(Clone, Debug)]
pub struct OdeSolution {
    /// `X mod t^(n+1)`.
    pub x: SeriesVector,
    /// Inverse of `H(X)` at the accuracy reached by the last level.
    pub hinv: SeriesMatrix,
}

fn check_precision(prob: &OdeProblem) -> Result<()> {
    let need = prob.required_precision();
    let have = prob.context().precision();
    if have < need {
        return Err(Error::InsufficientPrecision { have, need });
    }
    Ok(())
}

/// Newton-doubling solver with the default schedule.
pub fn diff_solve(prob: &OdeProblem) -> Result<OdeSolution> {
    diff_solve_with(prob, Schedule::default())
}

pub fn diff_solve_with(prob: &OdeProblem, schedule: Schedule) -> Result<OdeSolution> {
    check_precision(prob)?;
    let ctx = prob.context();
    let g = prob.dim();
    let head_inv = invert_constant(ctx, g, &prob.h.head()?)?;
    let head_inv = SeriesMatrix::constant(ctx, g, &head_inv)?;
    let (x, hinv) = solve_level(prob, prob.n, schedule, &head_inv)?;
    Ok(OdeSolution { x, hinv })
}

fn solve_level(
    prob: &OdeProblem,
    n: usize,
    schedule: Schedule,
    head_inv: &SeriesMatrix,
) -> Result<(SeriesVector, SeriesMatrix)> {
    let ctx = prob.context();
    if n == 0 {
        return Ok((SeriesVector::zero(ctx, prob.dim(), 1), head_inv.clone()));
    }
    let m = schedule.split(n);
    let (xm, hm) = solve_level(prob, m, schedule, head_inv)?;
    let hx = prob.h.evaluate(&xm, n)?;
    let hn = inverse_newton_step(&hm, &hx.truncate(m + 1), m)?;
    // e = G - H(X_m) X_m' mod t^n
    let dx = xm.derivative().resized(n);
    let e = prob.g.truncate(n).sub(&hx.mul_vec_to(&dx, n))?;
    let correction = hn.mul_vec_to(&e.integrate()?, n + 1);
    let x = xm.resized(n + 1).add(&correction)?;
    Ok((x, hn))
}

/// Term-by-term solver: `X'_k = H_0^{-1} (G_k - sum_{i>=1} H_i X'_{k-i})`.
pub fn naive_solve(prob: &OdeProblem) -> Result<SeriesVector> {
    check_precision(prob)?;
    let ctx = prob.context();
    let g = prob.dim();
    let n = prob.n;
    let h0inv = invert_constant(ctx, g, &prob.h.head()?)?;
    let mut x: Vec<Vec<Elem>> = vec![vec![Elem::ZERO; n + 1]; g];
    let mut dx: Vec<Vec<Elem>> = vec![Vec::with_capacity(n); g];
    let mut hcoeffs: Vec<Vec<Elem>> = Vec::with_capacity(n);
    for k in 0..n {
        let xs = SeriesVector::new(
            ctx,
            x.iter().map(|c| TruncSeries::new(ctx, c[..k + 1].to_vec())).collect(),
        )?;
        let hk = prob.h.evaluate(&xs, k + 1)?;
        hcoeffs.push(hk.entries().iter().map(|e| e.coeff(k)).collect());
        let mut rhs: Vec<Elem> = (0..g).map(|i| prob.g.entry(i).coeff(k)).collect();
        for i in 1..=k {
            let hi = &hcoeffs[i];
            for r in 0..g {
                for c in 0..g {
                    let t = ctx.mul(&hi[r * g + c], &dx[c][k - i]);
                    rhs[r] = ctx.sub(&rhs[r], &t);
                }
            }
        }
        for r in 0..g {
            let mut v = Elem::ZERO;
            for c in 0..g {
                v = ctx.add(&v, &ctx.mul(&h0inv[r * g + c], &rhs[c]));
            }
            dx[r].push(v);
            x[r][k + 1] = ctx.div_u64(&v, k as u64 + 1)?;
        }
    }
    SeriesVector::new(ctx, x.into_iter().map(|c| TruncSeries::new(ctx, c)).collect())
}

/// A random generic problem built around a planted integral solution.
///
/// The polynomials `f_ij` have degree at most `max_degree`, `H(0)` is
/// invertible, and `G = H(X) X'` for a random `X` with `X(0) = 0`; all data
/// live in `ctx`, typically at a precision above the one used for solving.
pub fn random_generic_problem<R: Rng + ?Sized>(
    ctx: &Arc<PadicContext>,
    dim: usize,
    n: usize,
    target_digits: u32,
    max_degree: usize,
    rng: &mut R,
) -> Result<(OdeProblem, SeriesVector)> {
    let entries = loop {
        let entries: Vec<Poly> = (0..dim * dim)
            .map(|_| {
                let deg = rng.gen_range(0..=max_degree);
                Poly::new(ctx, (0..=deg).map(|_| ctx.random(rng)).collect())
            })
            .collect();
        let head: Vec<Elem> = entries.iter().map(|f| f.coeff(0)).collect();
        if invert_constant(ctx, dim, &head).is_ok() {
            break entries;
        }
    };
    let h = GenericSeriesH::new(ctx, dim, entries)?;
    let x = SeriesVector::new(
        ctx,
        (0..dim)
            .map(|_| {
                let mut s = TruncSeries::random(ctx, n + 1, rng);
                s.coeffs_mut()[0] = Elem::ZERO;
                s
            })
            .collect(),
    )?;
    let gvec = h.evaluate(&x, n)?.mul_vec_to(&x.derivative(), n);
    Ok((OdeProblem::new(Box::new(h), gvec, n, target_digits)?, x))
}
