//! Truncated power series over a [`PadicContext`].

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ntt;
use crate::padic::{Elem, PadicContext, PadicElement};

const KARATSUBA_THRESHOLD: usize = 32;
const NTT_THRESHOLD: usize = 96;

/// Multiplication kernel selection. `Auto` is what every other routine uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulAlgorithm {
    Auto,
    Schoolbook,
    Karatsuba,
    Ntt,
}

/// Full product of two coefficient slices.
pub fn mul_full(ctx: &PadicContext, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    mul_full_with(ctx, a, b, MulAlgorithm::Auto)
}

pub fn mul_full_with(ctx: &PadicContext, a: &[Elem], b: &[Elem], alg: MulAlgorithm) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    match alg {
        MulAlgorithm::Schoolbook => schoolbook(ctx, a, b),
        MulAlgorithm::Karatsuba => karatsuba(ctx, a, b),
        MulAlgorithm::Ntt => ntt_mul(ctx, a, b).unwrap_or_else(|| karatsuba(ctx, a, b)),
        MulAlgorithm::Auto => {
            let short = a.len().min(b.len());
            if short < KARATSUBA_THRESHOLD {
                schoolbook(ctx, a, b)
            } else if short >= NTT_THRESHOLD {
                ntt_mul(ctx, a, b).unwrap_or_else(|| karatsuba(ctx, a, b))
            } else {
                karatsuba(ctx, a, b)
            }
        }
    }
}

/// Product truncated to `n` coefficients (zero-padded when shorter).
pub fn mul_trunc(ctx: &PadicContext, a: &[Elem], b: &[Elem], n: usize) -> Vec<Elem> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    let mut r = mul_full(ctx, a, b);
    r.resize(n, Elem::ZERO);
    r
}

fn schoolbook(ctx: &PadicContext, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len() + b.len() - 1;
    let m = ctx.modulus();
    if ctx.degree() == 1 && m <= 1 << 32 {
        // Products fit in u64; accumulate in u128 and reduce once.
        let mut acc = vec![0u128; n];
        for (i, x) in a.iter().enumerate() {
            let x = x.0[0];
            if x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                acc[i + j] += (x * y.0[0]) as u128;
            }
        }
        return acc
            .into_iter()
            .map(|v| {
                let mut e = Elem::ZERO;
                e.0[0] = (v % m as u128) as u64;
                e
            })
            .collect();
    }
    let mut r = vec![Elem::ZERO; n];
    for (i, x) in a.iter().enumerate() {
        if ctx.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = ctx.add(&r[i + j], &ctx.mul(x, y));
        }
    }
    r
}

fn add_into(ctx: &PadicContext, dst: &mut [Elem], src: &[Elem]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = ctx.add(d, s);
    }
}

fn karatsuba(ctx: &PadicContext, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (la, lb) = (a.len(), b.len());
    if la.min(lb) < KARATSUBA_THRESHOLD {
        return schoolbook(ctx, a, b);
    }
    let h = la.max(lb).div_ceil(2);
    if la <= h || lb <= h {
        // Unbalanced: cut the longer operand into pieces of the shorter length.
        let (short, long) = if la <= lb { (a, b) } else { (b, a) };
        let mut r = vec![Elem::ZERO; la + lb - 1];
        for (k, piece) in long.chunks(short.len()).enumerate() {
            let part = karatsuba(ctx, short, piece);
            add_into(ctx, &mut r[k * short.len()..], &part);
        }
        return r;
    }
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(ctx, a0, b0);
    let z2 = karatsuba(ctx, a1, b1);
    let mut sa = a0.to_vec();
    add_into(ctx, &mut sa, a1);
    let mut sb = b0.to_vec();
    add_into(ctx, &mut sb, b1);
    let mut z1 = karatsuba(ctx, &sa, &sb);
    for (i, v) in z0.iter().enumerate() {
        z1[i] = ctx.sub(&z1[i], v);
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] = ctx.sub(&z1[i], v);
    }
    let mut r = vec![Elem::ZERO; la + lb - 1];
    add_into(ctx, &mut r, &z0);
    add_into(ctx, &mut r[h..], &z1);
    add_into(ctx, &mut r[2 * h..], &z2);
    r
}

fn ntt_mul(ctx: &PadicContext, a: &[Elem], b: &[Elem]) -> Option<Vec<Elem>> {
    let m = ctx.modulus();
    let d = ctx.degree();
    if d == 1 {
        let da: Vec<u64> = a.iter().map(|e| e.0[0]).collect();
        let db: Vec<u64> = b.iter().map(|e| e.0[0]).collect();
        let prod = ntt::multiply(&da, &db, m)?;
        return Some(
            prod.into_iter()
                .map(|v| {
                    let mut e = Elem::ZERO;
                    e.0[0] = v;
                    e
                })
                .collect(),
        );
    }
    // Kronecker substitution: each coefficient becomes a block of 2d - 1 slots.
    let stride = 2 * d - 1;
    let pack = |s: &[Elem]| {
        let mut v = vec![0u64; s.len() * stride];
        for (i, e) in s.iter().enumerate() {
            v[i * stride..i * stride + d].copy_from_slice(&e.0[..d]);
        }
        v
    };
    let prod = ntt::multiply(&pack(a), &pack(b), m)?;
    let n = a.len() + b.len() - 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let start = i * stride;
        let end = (start + stride).min(prod.len());
        out.push(ctx.reduce_wide(&prod[start..end]));
    }
    Some(out)
}

/// Power series modulo t^order; `coeffs[k]` is the coefficient of t^k.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    ctx: Arc<PadicContext>,
    coeffs: Vec<Elem>,
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        PadicContext::same(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for TruncSeries {}

impl TruncSeries {
    pub fn new(ctx: &Arc<PadicContext>, coeffs: Vec<Elem>) -> Self {
        TruncSeries {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &Arc<PadicContext>, order: usize) -> Self {
        Self::new(ctx, vec![Elem::ZERO; order])
    }

    pub fn one(ctx: &Arc<PadicContext>, order: usize) -> Self {
        Self::constant(ctx, ctx.one(), order)
    }

    pub fn constant(ctx: &Arc<PadicContext>, c: Elem, order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// The series `t` (or `0` when `order < 2`).
    pub fn variable(ctx: &Arc<PadicContext>, order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        if order > 1 {
            s.coeffs[1] = ctx.one();
        }
        s
    }

    pub fn from_i64s(ctx: &Arc<PadicContext>, values: &[i64], order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        for (k, v) in values.iter().enumerate().take(order) {
            s.coeffs[k] = ctx.from_i64(*v);
        }
        s
    }

    pub fn random<R: Rng + ?Sized>(ctx: &Arc<PadicContext>, order: usize, rng: &mut R) -> Self {
        Self::new(ctx, (0..order).map(|_| ctx.random(rng)).collect())
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Elem] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(Elem::ZERO)
    }

    pub fn coefficient(&self, k: usize) -> PadicElement {
        PadicElement::new(&self.ctx, self.coeff(k))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ctx.is_zero(c))
    }

    /// Reduce to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncate cannot raise the order");
        Self::new(&self.ctx, self.coeffs[..order].to_vec())
    }

    /// Change order, reading the known coefficients as a polynomial (zero-padding).
    pub fn resized(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order, Elem::ZERO);
        Self::new(&self.ctx, c)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if PadicContext::same(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let c = (0..n)
            .map(|k| self.ctx.add(&self.coeffs[k], &other.coeffs[k]))
            .collect();
        Self::new(&self.ctx, c)
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let c = (0..n)
            .map(|k| self.ctx.sub(&self.coeffs[k], &other.coeffs[k]))
            .collect();
        Self::new(&self.ctx, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| self.ctx.neg(c)).collect())
    }

    pub fn scale(&self, c: &Elem) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|x| self.ctx.mul(x, c)).collect())
    }

    /// Product modulo t^min(order).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_to(other, self.order().min(other.order())))
    }

    /// Product modulo t^order; operands are read as polynomials.
    pub fn mul_to(&self, other: &Self, order: usize) -> Self {
        Self::new(&self.ctx, mul_trunc(&self.ctx, &self.coeffs, &other.coeffs, order))
    }

    pub fn mul_with(&self, other: &Self, alg: MulAlgorithm) -> Result<Self> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let mut r = mul_full_with(&self.ctx, &self.coeffs[..n], &other.coeffs[..n], alg);
        r.resize(n, Elem::ZERO);
        Ok(Self::new(&self.ctx, r))
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Result<Self> {
        let mut c = Vec::with_capacity(self.order() + 1);
        c.push(Elem::ZERO);
        for (k, a) in self.coeffs.iter().enumerate() {
            c.push(self.ctx.div_u64(a, k as u64 + 1)?);
        }
        Ok(Self::new(&self.ctx, c))
    }

    /// Termwise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        let c = (1..self.order())
            .map(|k| self.ctx.mul_u64(&self.coeffs[k], k as u64))
            .collect();
        Self::new(&self.ctx, c)
    }

    /// `self(x)` modulo t^order(x), where `self` is read as a polynomial and
    /// `x` has zero constant term.
    pub fn compose(&self, x: &Self) -> Result<Self> {
        self.check(x)?;
        compose_poly(&self.ctx, &self.coeffs, x)
    }

    /// Multiplicative inverse by Newton doubling. The constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let ctx = &self.ctx;
        let mut b = vec![ctx
            .inv(&self.coeffs[0])
            .map_err(|_| Error::NotInvertible("series constant term is not a unit".into()))?];
        let two = ctx.from_u64(2);
        let mut k = 1;
        while k < n {
            let k2 = (2 * k).min(n);
            let mut e = mul_trunc(ctx, &self.coeffs[..k2], &b, k2);
            for c in e.iter_mut() {
                *c = ctx.neg(c);
            }
            e[0] = ctx.add(&e[0], &two);
            b = mul_trunc(ctx, &b, &e, k2);
            k = k2;
        }
        Ok(Self::new(ctx, b))
    }

    /// Square root with prescribed constant term `y0`, `y0^2 = self(0)`.
    pub fn sqrt(&self, y0: &Elem) -> Result<Self> {
        let ctx = &self.ctx;
        if ctx.prime() == 2 {
            return Err(Error::SquareRoot("p = 2 is not supported".into()));
        }
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !ctx.is_unit(y0) {
            return Err(Error::SquareRoot("initial value is not a unit".into()));
        }
        if ctx.mul(y0, y0) != self.coeffs[0] {
            return Err(Error::SquareRoot(
                "initial value does not square to the constant term".into(),
            ));
        }
        let half = ctx.inv(&ctx.from_u64(2))?;
        let two = ctx.from_u64(2);
        let mut y = vec![*y0];
        let mut z = vec![ctx.inv(y0)?];
        let mut k = 1;
        while k < n {
            let k2 = (2 * k).min(n);
            // y <- y - (y^2 - a) z / 2
            let mut r = mul_trunc(ctx, &y, &y, k2);
            for (i, c) in r.iter_mut().enumerate() {
                *c = ctx.sub(c, &self.coeffs[i]);
            }
            let corr = mul_trunc(ctx, &r, &z, k2);
            y.resize(k2, Elem::ZERO);
            for i in 0..k2 {
                y[i] = ctx.sub(&y[i], &ctx.mul(&corr[i], &half));
            }
            if k2 < n {
                // z <- z (2 - y z)
                let mut e = mul_trunc(ctx, &y, &z, k2);
                for c in e.iter_mut() {
                    *c = ctx.neg(c);
                }
                e[0] = ctx.add(&e[0], &two);
                z = mul_trunc(ctx, &z, &e, k2);
            }
            k = k2;
        }
        Ok(Self::new(ctx, y))
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

    /// Image under the inclusion of `Z/p^M` into an unramified extension.
    pub fn embed(&self, ext: &Arc<PadicContext>) -> Result<Self> {
        if self.ctx.degree() != 1 || ext.prime() != self.ctx.prime() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::new(ext, self.coeffs.iter().map(|c| ext.embed_base(c)).collect()))
    }

    /// Coefficients reduced modulo p.
    pub fn to_residue(&self) -> Self {
        let r = self.ctx.residue_field();
        self.to_context(&r).expect("same prime")
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| self.ctx.format(c)).collect()
    }
}

/// Evaluate the polynomial `f` (coefficient slice) at a series with zero
/// constant term, by Horner's rule.
pub fn compose_poly(ctx: &Arc<PadicContext>, f: &[Elem], x: &TruncSeries) -> Result<TruncSeries> {
    let n = x.order();
    if n > 0 && !ctx.is_zero(&x.coeffs[0]) {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut f = f;
    while let Some((last, rest)) = f.split_last() {
        if ctx.is_zero(last) {
            f = rest;
        } else {
            break;
        }
    }
    // Powers x^k with k >= n vanish modulo t^n.
    let f = &f[..f.len().min(n.max(1))];
    if n == 0 {
        return Ok(TruncSeries::zero(ctx, 0));
    }
    let mut r = vec![Elem::ZERO; n];
    if let Some(top) = f.last() {
        r[0] = *top;
    }
    for c in f.iter().rev().skip(1) {
        r = mul_trunc(ctx, &r, &x.coeffs, n);
        r[0] = ctx.add(&r[0], c);
    }
    Ok(TruncSeries::new(ctx, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ints(s: &TruncSeries) -> Vec<u64> {
        s.coeffs().iter().map(|c| c.0[0]).collect()
    }

    #[test]
    fn difference_of_squares() {
        let c = PadicContext::new(7, 1).unwrap();
        let a = TruncSeries::from_i64s(&c, &[1, 1], 3);
        let b = TruncSeries::from_i64s(&c, &[1, -1], 3);
        assert_eq!(ints(&a.mul(&b).unwrap()), vec![1, 0, 6]);
    }

    #[test]
    fn square_of_curve_root_series() {
        let c = PadicContext::new(19, 2).unwrap();
        let y = TruncSeries::from_i64s(&c, &[146, -21, 179], 3);
        assert_eq!(ints(&y.mul(&y).unwrap()), vec![17, 5, 3]);
    }

    #[test]
    fn integrate_known_values() {
        let c = PadicContext::new(7, 3).unwrap();
        let a = TruncSeries::from_i64s(&c, &[1, 1, 1], 3);
        assert_eq!(ints(&a.integrate().unwrap()), vec![0, 1, 172, 229]);
        let mut t6 = TruncSeries::zero(&c, 7);
        t6.coeffs_mut()[6] = c.one();
        assert!(matches!(t6.integrate(), Err(Error::DivisionPrecision { .. })));
        assert!(TruncSeries::zero(&c, 4).integrate().unwrap().is_zero());
    }

    #[test]
    fn derivative_basics() {
        let c = PadicContext::new(7, 3).unwrap();
        assert_eq!(ints(&TruncSeries::variable(&c, 3).derivative()), vec![1, 0]);
        assert!(TruncSeries::constant(&c, c.from_u64(5), 4).derivative().is_zero());
    }

    #[test]
    fn compose_examples() {
        let c = PadicContext::new(7, 1).unwrap();
        let f = TruncSeries::from_i64s(&c, &[0, 3, 1], 3);
        let x = TruncSeries::from_i64s(&c, &[0, 1, 1], 4);
        assert_eq!(ints(&f.compose(&x).unwrap()), vec![0, 3, 4, 2]);
        let g = TruncSeries::from_i64s(&c, &[1, 1], 2);
        let t = TruncSeries::variable(&c, 3);
        assert_eq!(ints(&g.compose(&t).unwrap()), vec![1, 1, 0]);
        let z = TruncSeries::zero(&c, 3);
        assert_eq!(ints(&f.compose(&z).unwrap()), vec![0, 0, 0]);
        let bad = TruncSeries::from_i64s(&c, &[1, 1], 3);
        assert_eq!(f.compose(&bad), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn inverse_examples() {
        let c = PadicContext::new(7, 2).unwrap();
        let a = TruncSeries::from_i64s(&c, &[1, -1], 4);
        assert_eq!(ints(&a.inverse().unwrap()), vec![1, 1, 1, 1]);
        let b = TruncSeries::from_i64s(&c, &[7, 1], 4);
        assert!(matches!(b.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn sqrt_examples() {
        let c = PadicContext::new(19, 2).unwrap();
        let f = TruncSeries::from_i64s(&c, &[17, 5, 3, 11, 16, 1], 3);
        assert_eq!(ints(&f.sqrt(&c.from_u64(146)).unwrap()), vec![146, 340, 179]);
        let c = PadicContext::new(7, 3).unwrap();
        let a = TruncSeries::from_i64s(&c, &[1, 2], 3);
        assert_eq!(ints(&a.sqrt(&c.one()).unwrap()), vec![1, 1, 171]);
        let one = TruncSeries::one(&c, 5);
        assert_eq!(one.sqrt(&c.one()).unwrap(), one);
        assert!(a.sqrt(&c.from_u64(2)).is_err());
        let c2 = PadicContext::new(2, 4).unwrap();
        let o = TruncSeries::one(&c2, 3);
        assert!(o.sqrt(&c2.one()).is_err());
    }

    #[test]
    fn kernels_agree_including_extensions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, m, d) in [(7u64, 3u32, 1usize), (5, 4, 3), (19, 2, 2), (3, 30, 1), (7, 15, 2)] {
            let c = PadicContext::unramified(p, m, d).unwrap();
            for n in [1usize, 31, 33, 100, 257] {
                let a = TruncSeries::random(&c, n, &mut rng);
                let b = TruncSeries::random(&c, n, &mut rng);
                let s = a.mul_with(&b, MulAlgorithm::Schoolbook).unwrap();
                assert_eq!(s, a.mul_with(&b, MulAlgorithm::Karatsuba).unwrap());
                assert_eq!(s, a.mul_with(&b, MulAlgorithm::Ntt).unwrap());
                assert_eq!(s, a.mul(&b).unwrap());
            }
        }
    }

    #[test]
    fn unbalanced_karatsuba() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let c = PadicContext::new(19, 2).unwrap();
        let a: Vec<Elem> = (0..40).map(|_| c.random(&mut rng)).collect();
        let b: Vec<Elem> = (0..333).map(|_| c.random(&mut rng)).collect();
        assert_eq!(
            mul_full_with(&c, &a, &b, MulAlgorithm::Karatsuba),
            mul_full_with(&c, &a, &b, MulAlgorithm::Schoolbook)
        );
    }
}
