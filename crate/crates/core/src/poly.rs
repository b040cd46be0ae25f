//! Dense univariate polynomials over a [`PadicContext`].

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::padic::{Elem, PadicContext};
use crate::series::mul_full;

/// Polynomial with no trailing zero coefficients; low degree first.
#[derive(Clone, Debug)]
pub struct Poly {
    ctx: Arc<PadicContext>,
    coeffs: Vec<Elem>,
}

/// A polynomial over a precision-1 context.
pub type ResiduePoly = Poly;

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        PadicContext::same(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn new(ctx: &Arc<PadicContext>, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &Arc<PadicContext>) -> Self {
        Self::new(ctx, vec![])
    }

    pub fn one(ctx: &Arc<PadicContext>) -> Self {
        Self::constant(ctx, ctx.one())
    }

    pub fn constant(ctx: &Arc<PadicContext>, c: Elem) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `X - root`.
    pub fn linear(ctx: &Arc<PadicContext>, root: &Elem) -> Self {
        Self::new(ctx, vec![ctx.neg(root), ctx.one()])
    }

    /// `X^k`.
    pub fn monomial(ctx: &Arc<PadicContext>, k: usize) -> Self {
        let mut c = vec![Elem::ZERO; k + 1];
        c[k] = ctx.one();
        Self::new(ctx, c)
    }

    pub fn from_i64s(ctx: &Arc<PadicContext>, values: &[i64]) -> Self {
        Self::new(ctx, values.iter().map(|v| ctx.from_i64(*v)).collect())
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<PadicContext>, degree: usize, rng: &mut R) -> Self {
        let mut c: Vec<Elem> = (0..degree).map(|_| ctx.random(rng)).collect();
        c.push(ctx.random_unit(rng));
        Self::new(ctx, c)
    }

    pub fn random_monic<R: Rng + ?Sized>(ctx: &Arc<PadicContext>, degree: usize, rng: &mut R) -> Self {
        let mut c: Vec<Elem> = (0..degree).map(|_| ctx.random(rng)).collect();
        c.push(ctx.one());
        Self::new(ctx, c)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(Elem::ZERO)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for zero, convenient in comparisons.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.ctx.is_one(c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if PadicContext::same(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.ctx.add(&self.coeff(k), &other.coeff(k))).collect();
        Self::new(&self.ctx, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.ctx.sub(&self.coeff(k), &other.coeff(k))).collect();
        Self::new(&self.ctx, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| self.ctx.neg(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.ctx, mul_full(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Elem) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|x| self.ctx.mul(x, c)).collect())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Multiply by X^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Elem::ZERO; k];
        c.extend_from_slice(&self.coeffs);
        Self::new(&self.ctx, c)
    }

    /// Quotient by X^k (drops the low coefficients).
    pub fn shift_down(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero(&self.ctx);
        }
        Self::new(&self.ctx, self.coeffs[k..].to_vec())
    }

    /// Remainder modulo X^k.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(&self.ctx, self.coeffs[..k.min(self.coeffs.len())].to_vec())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.ctx);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let mut r = Elem::ZERO;
        for c in self.coeffs.iter().rev() {
            r = self.ctx.add(&self.ctx.mul(&r, x), c);
        }
        r
    }

    pub fn derivative(&self) -> Self {
        let c = (1..self.coeffs.len())
            .map(|k| self.ctx.mul_u64(&self.coeffs[k], k as u64))
            .collect();
        Self::new(&self.ctx, c)
    }

    /// `self(X + c)`.
    pub fn taylor_shift(&self, c: &Elem) -> Self {
        let ctx = &self.ctx;
        let mut r: Vec<Elem> = vec![];
        for a in self.coeffs.iter().rev() {
            // r <- r (X + c) + a
            let mut next = vec![Elem::ZERO; r.len() + 1];
            for (i, x) in r.iter().enumerate() {
                next[i + 1] = ctx.add(&next[i + 1], x);
                next[i] = ctx.add(&next[i], &ctx.mul(x, c));
            }
            next[0] = ctx.add(&next[0], a);
            r = next;
        }
        Self::new(ctx, r)
    }

    /// `self(g)` for a polynomial `g`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut r = Self::zero(&self.ctx);
        for a in self.coeffs.iter().rev() {
            r = r.mul(g).add(&Self::constant(&self.ctx, *a));
        }
        r
    }

    /// Scale to a monic polynomial; the leading coefficient must be a unit.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonUnitInversion("zero polynomial has no monic form".into()));
        }
        let inv = self
            .ctx
            .inv(&self.leading())
            .map_err(|_| Error::NonUnitInversion("leading coefficient is not a unit".into()))?;
        Ok(self.scale(&inv))
    }

    /// Euclidean division by a divisor with unit leading coefficient.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        self.check(b)?;
        let ctx = &self.ctx;
        if b.is_zero() {
            return Err(Error::NotInvertible("division by the zero polynomial".into()));
        }
        let inv = ctx
            .inv(&b.leading())
            .map_err(|_| Error::NonUnitInversion("divisor leading coefficient is not a unit".into()))?;
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Self::zero(ctx), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![Elem::ZERO; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = ctx.mul(&r[k + db], &inv);
            q[k] = c;
            if !ctx.is_zero(&c) {
                for (i, y) in b.coeffs.iter().enumerate() {
                    r[k + i] = ctx.sub(&r[k + i], &ctx.mul(&c, y));
                }
            }
        }
        r.truncate(db);
        Ok((Self::new(ctx, q), Self::new(ctx, r)))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.divrem(b)?.1)
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let (g, _, _) = self.xgcd(other)?;
        Ok(g)
    }

    /// `(g, s, t)` with `g = s a + t b` monic (or zero when both are zero).
    /// Needs a field, or at least unit leading coefficients along the way.
    pub fn xgcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.check(other)?;
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(ctx), Self::zero(ctx));
        let (mut t0, mut t1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = ctx
            .inv(&r0.leading())
            .map_err(|_| Error::NonUnitInversion("gcd leading coefficient is not a unit".into()))?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Inverse of `self` modulo `m`, when they are coprime.
    pub fn inv_mod(&self, m: &Self) -> Result<Self> {
        let (g, s, _) = self.rem(m)?.xgcd(m)?;
        if g.deg() != 0 {
            return Err(Error::NonUnitInversion("polynomials are not coprime".into()));
        }
        s.rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Result<Self> {
        let mut r = Self::one(&self.ctx).rem(m)?;
        let mut b = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m)?;
            }
            b = b.mul(&b).rem(m)?;
            e >>= 1;
        }
        Ok(r)
    }

    /// Move coefficients to a context with the same p and modulus.
    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Self> {
        if ctx.prime() != self.ctx.prime() || ctx.degree() != self.ctx.degree() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::new(
            ctx,
            self.coeffs.iter().map(|c| ctx.convert_from(&self.ctx, c)).collect(),
        ))
    }

    pub fn to_residue(&self) -> Self {
        self.to_context(&self.ctx.residue_field()).expect("same prime")
    }

    /// Image under the inclusion of `Z/p^M` into an unramified extension of
    /// the same precision.
    pub fn embed(&self, ext: &Arc<PadicContext>) -> Result<Self> {
        if self.ctx.degree() != 1 || ext.prime() != self.ctx.prime() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::new(ext, self.coeffs.iter().map(|c| ext.embed_base(c)).collect()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| self.ctx.format(c)).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if self.ctx.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = self.ctx.format(c);
            match k {
                0 => write!(f, "{s}")?,
                1 => write!(f, "{s}*X")?,
                _ => write!(f, "{s}*X^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn division_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let c = PadicContext::new(7, 3).unwrap();
        for _ in 0..50 {
            let a = Poly::random(&c, 9, &mut rng);
            let b = Poly::random(&c, 4, &mut rng);
            if !c.is_unit(&b.leading()) {
                continue;
            }
            let (q, r) = a.divrem(&b).unwrap();
            assert_eq!(q.mul(&b).add(&r), a);
            assert!(r.deg() < b.deg());
        }
    }

    #[test]
    fn xgcd_over_field() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let c = PadicContext::unramified(5, 1, 2).unwrap();
        for _ in 0..30 {
            let a = Poly::random(&c, 7, &mut rng);
            let b = Poly::random(&c, 5, &mut rng);
            let (g, s, t) = a.xgcd(&b).unwrap();
            assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
            assert!(g.is_monic());
            assert!(a.rem(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let c = PadicContext::new(19, 2).unwrap();
        let f = Poly::random(&c, 5, &mut rng);
        let s = c.from_u64(17);
        let g = f.taylor_shift(&s);
        for x in 0..10 {
            let x = c.from_u64(x);
            assert_eq!(g.eval(&x), f.eval(&c.add(&x, &s)));
        }
        assert_eq!(f.compose(&Poly::new(&c, vec![s, c.one()])), g);
    }

    #[test]
    fn non_unit_divisor_rejected() {
        let c = PadicContext::new(7, 2).unwrap();
        let a = Poly::from_i64s(&c, &[1, 2, 3]);
        let b = Poly::from_i64s(&c, &[1, 7]);
        assert!(matches!(a.divrem(&b), Err(Error::NonUnitInversion(_))));
    }
}
