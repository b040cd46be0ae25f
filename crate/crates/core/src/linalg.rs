//! Vectors and square matrices of truncated series sharing one context and order.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::padic::{Elem, PadicContext};
use crate::series::{mul_trunc, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesVector {
    ctx: Arc<PadicContext>,
    order: usize,
    entries: Vec<TruncSeries>,
}

/// Row-major g x g matrix of series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    ctx: Arc<PadicContext>,
    dim: usize,
    order: usize,
    entries: Vec<TruncSeries>,
}

fn check_ctx(a: &Arc<PadicContext>, b: &Arc<PadicContext>) -> Result<()> {
    if PadicContext::same(a, b) {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

fn dot(ctx: &PadicContext, terms: impl Iterator<Item = Vec<Elem>>, order: usize) -> Vec<Elem> {
    let mut acc = vec![Elem::ZERO; order];
    for prod in terms {
        for (a, b) in acc.iter_mut().zip(&prod) {
            *a = ctx.add(a, b);
        }
    }
    acc
}

impl SeriesVector {
    pub fn new(ctx: &Arc<PadicContext>, entries: Vec<TruncSeries>) -> Result<Self> {
        let order = entries.first().map_or(0, |e| e.order());
        for e in &entries {
            check_ctx(ctx, e.context())?;
            if e.order() != order {
                return Err(Error::Shape("vector entries must share one order".into()));
            }
        }
        Ok(SeriesVector {
            ctx: ctx.clone(),
            order,
            entries,
        })
    }

    pub fn zero(ctx: &Arc<PadicContext>, dim: usize, order: usize) -> Self {
        SeriesVector {
            ctx: ctx.clone(),
            order,
            entries: vec![TruncSeries::zero(ctx, order); dim],
        }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<PadicContext>, dim: usize, order: usize, rng: &mut R) -> Self {
        let entries = (0..dim).map(|_| TruncSeries::random(ctx, order, rng)).collect();
        SeriesVector {
            ctx: ctx.clone(),
            order,
            entries,
        }
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[TruncSeries] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &TruncSeries {
        &self.entries[i]
    }

    pub fn into_entries(self) -> Vec<TruncSeries> {
        self.entries
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|e| e.truncate(order), order)
    }

    pub fn resized(&self, order: usize) -> Self {
        self.map(|e| e.resized(order), order)
    }

    fn map(&self, f: impl Fn(&TruncSeries) -> TruncSeries, order: usize) -> Self {
        SeriesVector {
            ctx: self.ctx.clone(),
            order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&TruncSeries, &TruncSeries) -> TruncSeries) -> Result<Self> {
        check_ctx(&self.ctx, &other.ctx)?;
        if self.dim() != other.dim() {
            return Err(Error::Shape("vector dimensions differ".into()));
        }
        let entries: Vec<TruncSeries> = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(SeriesVector {
            ctx: self.ctx.clone(),
            order: self.order.min(other.order),
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add_unchecked(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub_unchecked(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg(), self.order)
    }

    pub fn derivative(&self) -> Self {
        self.map(|e| e.derivative(), self.order.saturating_sub(1))
    }

    pub fn integrate(&self) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.integrate()).collect::<Result<Vec<_>>>()?;
        Ok(SeriesVector {
            ctx: self.ctx.clone(),
            order: self.order + 1,
            entries,
        })
    }

    /// Constant terms.
    pub fn head(&self) -> Vec<Elem> {
        self.entries.iter().map(|e| e.coeff(0)).collect()
    }

    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_context(ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesVector {
            ctx: ctx.clone(),
            order: self.order,
            entries,
        })
    }
}

impl SeriesMatrix {
    pub fn new(ctx: &Arc<PadicContext>, dim: usize, entries: Vec<TruncSeries>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!("expected {} entries", dim * dim)));
        }
        let order = entries.first().map_or(0, |e| e.order());
        for e in &entries {
            check_ctx(ctx, e.context())?;
            if e.order() != order {
                return Err(Error::Shape("matrix entries must share one order".into()));
            }
        }
        Ok(SeriesMatrix {
            ctx: ctx.clone(),
            dim,
            order,
            entries,
        })
    }

    pub fn zero(ctx: &Arc<PadicContext>, dim: usize, order: usize) -> Self {
        SeriesMatrix {
            ctx: ctx.clone(),
            dim,
            order,
            entries: vec![TruncSeries::zero(ctx, order); dim * dim],
        }
    }

    pub fn identity(ctx: &Arc<PadicContext>, dim: usize, order: usize) -> Self {
        let mut m = Self::zero(ctx, dim, order);
        for i in 0..dim {
            m.entries[i * dim + i] = TruncSeries::one(ctx, order);
        }
        m
    }

    /// Constant matrix (order 1) from row-major elements.
    pub fn constant(ctx: &Arc<PadicContext>, dim: usize, values: &[Elem]) -> Result<Self> {
        let entries = values.iter().map(|v| TruncSeries::constant(ctx, *v, 1)).collect();
        Self::new(ctx, dim, entries)
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<PadicContext>, dim: usize, order: usize, rng: &mut R) -> Self {
        let entries = (0..dim * dim).map(|_| TruncSeries::random(ctx, order, rng)).collect();
        SeriesMatrix {
            ctx: ctx.clone(),
            dim,
            order,
            entries,
        }
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncSeries {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[TruncSeries] {
        &self.entries
    }

    /// Constant terms, row-major.
    pub fn head(&self) -> Vec<Elem> {
        self.entries.iter().map(|e| e.coeff(0)).collect()
    }

    fn map(&self, f: impl Fn(&TruncSeries) -> TruncSeries, order: usize) -> Self {
        SeriesMatrix {
            ctx: self.ctx.clone(),
            dim: self.dim,
            order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|e| e.truncate(order), order)
    }

    pub fn resized(&self, order: usize) -> Self {
        self.map(|e| e.resized(order), order)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        check_ctx(&self.ctx, &other.ctx)?;
        if self.dim != other.dim {
            return Err(Error::Shape("matrix dimensions differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_unchecked(b))
            .collect();
        Ok(SeriesMatrix {
            ctx: self.ctx.clone(),
            dim: self.dim,
            order: self.order.min(other.order),
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub_unchecked(b))
            .collect();
        Ok(SeriesMatrix {
            ctx: self.ctx.clone(),
            dim: self.dim,
            order: self.order.min(other.order),
            entries,
        })
    }

    /// Product modulo t^min(order).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.mul_to(other, self.order.min(other.order)))
    }

    /// Product modulo t^order, entries read as polynomials.
    pub fn mul_to(&self, other: &Self, order: usize) -> Self {
        let g = self.dim;
        let ctx = &self.ctx;
        let mut entries = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                let terms =
                    (0..g).map(|k| mul_trunc(ctx, self.entry(i, k).coeffs(), other.entry(k, j).coeffs(), order));
                entries.push(TruncSeries::new(ctx, dot(ctx, terms, order)));
            }
        }
        SeriesMatrix {
            ctx: ctx.clone(),
            dim: g,
            order,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &SeriesVector) -> Result<SeriesVector> {
        check_ctx(&self.ctx, &v.ctx)?;
        if v.dim() != self.dim {
            return Err(Error::Shape("matrix and vector dimensions differ".into()));
        }
        Ok(self.mul_vec_to(v, self.order.min(v.order)))
    }

    pub fn mul_vec_to(&self, v: &SeriesVector, order: usize) -> SeriesVector {
        let g = self.dim;
        let ctx = &self.ctx;
        let entries = (0..g)
            .map(|i| {
                let terms = (0..g).map(|k| mul_trunc(ctx, self.entry(i, k).coeffs(), v.entry(k).coeffs(), order));
                TruncSeries::new(ctx, dot(ctx, terms, order))
            })
            .collect();
        SeriesVector {
            ctx: ctx.clone(),
            order,
            entries,
        }
    }

    pub fn scale(&self, c: &Elem) -> Self {
        self.map(|e| e.scale(c), self.order)
    }

    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_context(ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesMatrix {
            ctx: ctx.clone(),
            dim: self.dim,
            order: self.order,
            entries,
        })
    }
}

/// Inverse of a constant matrix over O_K by Gauss-Jordan elimination.
///
/// The pivot in each column is the first unit found scanning downward, so
/// no division ever involves a non-unit.
pub fn gauss_jordan_inverse(a: &SeriesMatrix) -> Result<SeriesMatrix> {
    let inv = invert_constant(a.context(), a.dim(), &a.head())?;
    SeriesMatrix::constant(a.context(), a.dim(), &inv)
}

/// Row-major constant inverse; shared by the matrix and solver code.
pub fn invert_constant(ctx: &PadicContext, g: usize, values: &[Elem]) -> Result<Vec<Elem>> {
    let mut m = values.to_vec();
    let mut inv = vec![Elem::ZERO; g * g];
    for i in 0..g {
        inv[i * g + i] = ctx.one();
    }
    for col in 0..g {
        let pivot = (col..g)
            .find(|&r| ctx.is_unit(&m[r * g + col]))
            .ok_or_else(|| Error::NotInvertible(format!("no unit pivot in column {col}")))?;
        if pivot != col {
            for k in 0..g {
                m.swap(pivot * g + k, col * g + k);
                inv.swap(pivot * g + k, col * g + k);
            }
        }
        let pinv = ctx.inv(&m[col * g + col])?;
        for k in 0..g {
            m[col * g + k] = ctx.mul(&m[col * g + k], &pinv);
            inv[col * g + k] = ctx.mul(&inv[col * g + k], &pinv);
        }
        for r in 0..g {
            if r == col {
                continue;
            }
            let f = m[r * g + col];
            if ctx.is_zero(&f) {
                continue;
            }
            for k in 0..g {
                m[r * g + k] = ctx.sub(&m[r * g + k], &ctx.mul(&f, &m[col * g + k]));
                inv[r * g + k] = ctx.sub(&inv[r * g + k], &ctx.mul(&f, &inv[col * g + k]));
            }
        }
    }
    Ok(inv)
}

/// One Newton step for a matrix inverse: `2 Hm - Hm A Hm mod t^(m+1)`.
pub fn inverse_newton_step(hm: &SeriesMatrix, a: &SeriesMatrix, m: usize) -> Result<SeriesMatrix> {
    hm.same_shape(a)?;
    let n = m + 1;
    let h = hm.resized(n);
    let a = if a.order() >= n { a.truncate(n) } else { a.resized(n) };
    let ha = h.mul_to(&a, n);
    let hah = ha.mul_to(&h, n);
    let two = h.ctx.from_u64(2);
    h.scale(&two).sub(&hah)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn normalization_matrix_times_identity() {
        let c = PadicContext::new(19, 2).unwrap();
        let vals: Vec<Elem> = [95u64, 233, 155, 228].iter().map(|v| c.from_u64(*v)).collect();
        let a = SeriesMatrix::constant(&c, 2, &vals).unwrap();
        let i = SeriesMatrix::identity(&c, 2, 1);
        assert_eq!(a.mul(&i).unwrap(), a);
    }

    #[test]
    fn gauss_jordan_examples() {
        let c = PadicContext::new(7, 3).unwrap();
        let i = SeriesMatrix::identity(&c, 3, 1);
        assert_eq!(gauss_jordan_inverse(&i).unwrap(), i);
        let bad = SeriesMatrix::constant(&c, 2, &[c.from_u64(7), c.zero(), c.zero(), c.one()]).unwrap();
        assert!(matches!(gauss_jordan_inverse(&bad), Err(Error::NotInvertible(_))));
        // needs a row swap: first column starts with a non-unit
        let a = SeriesMatrix::constant(&c, 2, &[c.from_u64(14), c.one(), c.one(), c.from_u64(3)]).unwrap();
        let inv = gauss_jordan_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), SeriesMatrix::identity(&c, 2, 1));
    }

    #[test]
    fn newton_step_first_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let c = PadicContext::new(7, 2).unwrap();
        let b = SeriesMatrix::random(&c, 3, 1, &mut rng);
        // A = I + t B
        let entries: Vec<TruncSeries> = (0..9)
            .map(|k| {
                let mut s = TruncSeries::zero(&c, 2);
                if k % 4 == 0 {
                    s.coeffs_mut()[0] = c.one();
                }
                s.coeffs_mut()[1] = b.entries()[k].coeff(0);
                s
            })
            .collect();
        let a = SeriesMatrix::new(&c, 3, entries).unwrap();
        let h = inverse_newton_step(&SeriesMatrix::identity(&c, 3, 1), &a, 1).unwrap();
        for k in 0..9 {
            let e = h.entries()[k].coeffs();
            assert_eq!(e[0], if k % 4 == 0 { c.one() } else { c.zero() });
            assert_eq!(e[1], c.neg(&b.entries()[k].coeff(0)));
        }
    }

    #[test]
    fn fixed_point_of_exact_inverse() {
        let c = PadicContext::new(5, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        loop {
            let a = SeriesMatrix::random(&c, 2, 1, &mut rng);
            if let Ok(inv) = gauss_jordan_inverse(&a) {
                assert_eq!(inverse_newton_step(&inv, &a, 0).unwrap(), inv);
                break;
            }
        }
    }
}
