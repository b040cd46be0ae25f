//! Hyperelliptic curves `y^2 = f(x)` (p odd), Mumford divisors and Cantor
//! arithmetic, Hensel lifting of points and roots, and extraction of the
//! support points of a divisor over an unramified extension.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::padic::{Elem, PadicContext};
use crate::poly::Poly;

/// Exhaustive root search is used up to this field size.
const SCAN_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    ctx: Arc<PadicContext>,
    f: Poly,
    genus: usize,
}

impl HyperellipticCurve {
    /// Checks that p is odd, `deg f` is `2g+1` or `2g+2` with `g >= 1`, and
    /// that `f` has a unit discriminant (unit leading coefficient and no
    /// repeated factor mod p).
    pub fn new(f: Poly) -> Result<Self> {
        let ctx = f.context().clone();
        if ctx.prime() == 2 {
            return Err(Error::InvalidParameter("characteristic 2 is not supported".into()));
        }
        let deg = f.deg();
        if deg < 3 {
            return Err(Error::InvalidParameter(format!(
                "curve polynomial has degree {deg}, need at least 3"
            )));
        }
        let genus = ((deg - 1) / 2) as usize;
        if !ctx.is_unit(&f.leading()) {
            return Err(Error::SingularCurve("leading coefficient is not a unit".into()));
        }
        let fr = f.to_residue();
        if fr.gcd(&fr.derivative())?.deg() != 0 {
            return Err(Error::SingularCurve("f has a repeated factor mod p".into()));
        }
        Ok(HyperellipticCurve { ctx, f, genus })
    }

    pub fn from_i64s(ctx: &Arc<PadicContext>, coeffs: &[i64]) -> Result<Self> {
        Self::new(Poly::from_i64s(ctx, coeffs))
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn is_odd_degree(&self) -> bool {
        self.f.deg() as usize == 2 * self.genus + 1
    }

    /// Same curve over a context with the same p and extension; moving up in
    /// precision lifts coefficients with zero upper digits.
    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Self> {
        Self::new(self.f.to_context(ctx)?)
    }

    pub fn to_residue(&self) -> Result<Self> {
        self.to_context(&self.ctx.residue_field())
    }

    /// Base change of a curve over `Z/p^M` into an unramified extension.
    pub fn base_change(&self, ext: &Arc<PadicContext>) -> Result<Self> {
        if self.ctx.degree() != 1 || ext.prime() != self.ctx.prime() {
            return Err(Error::ContextMismatch);
        }
        Self::new(self.f.embed(ext)?)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        self.f.eval(x)
    }

    pub fn contains(&self, x: &Elem, y: &Elem) -> bool {
        self.ctx.mul(y, y) == self.f.eval(x)
    }

    /// Random affine non-Weierstrass point; needs a residue-field context.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CurvePoint> {
        if !self.ctx.is_field() {
            return Err(Error::InvalidParameter("random points need a residue field".into()));
        }
        for _ in 0..10_000 {
            let x = self.ctx.random(rng);
            let a = self.f.eval(&x);
            if self.ctx.is_zero(&a) {
                continue;
            }
            if let Some(y) = field_sqrt(&self.ctx, &a)? {
                let y = if rng.gen::<bool>() { self.ctx.neg(&y) } else { y };
                return Ok(CurvePoint::Affine { x, y });
            }
        }
        Err(Error::Genericity("no affine point found".into()))
    }

    /// Random curve `y^2 = f(x)` with `f` monic squarefree of degree
    /// `2 genus + 1` over `F_p` (`ctx` of precision 1).
    pub fn random<R: Rng + ?Sized>(ctx: &Arc<PadicContext>, genus: usize, rng: &mut R) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidParameter("genus must be positive".into()));
        }
        if !ctx.is_field() {
            return Err(Error::InvalidParameter("random curves need a residue field".into()));
        }
        for _ in 0..1000 {
            match HyperellipticCurve::new(Poly::random_monic(ctx, 2 * genus + 1, rng)) {
                Ok(c) => return Ok(c),
                Err(Error::SingularCurve(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Genericity("no squarefree polynomial found".into()))
    }
}

/// A point of a curve; coordinates live in the context the caller tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Elem, y: Elem },
}

impl CurvePoint {
    pub fn x(&self) -> Option<Elem> {
        match self {
            CurvePoint::Affine { x, .. } => Some(*x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<Elem> {
        match self {
            CurvePoint::Affine { y, .. } => Some(*y),
            CurvePoint::Infinity => None,
        }
    }
}

/// Reduced divisor class in Mumford form: `U` monic, `deg V < deg U`,
/// `V^2 = f mod U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MumfordDivisor {
    u: Poly,
    v: Poly,
}

impl MumfordDivisor {
    pub fn new(curve: &HyperellipticCurve, u: Poly, v: Poly) -> Result<Self> {
        if !PadicContext::same(curve.context(), u.context()) || !PadicContext::same(curve.context(), v.context()) {
            return Err(Error::ContextMismatch);
        }
        if !u.is_monic() {
            return Err(Error::InvalidParameter("U must be monic".into()));
        }
        if u.deg() as usize > curve.genus() {
            return Err(Error::Degree(format!("deg U = {} exceeds the genus", u.deg())));
        }
        if v.deg() >= u.deg() {
            return Err(Error::Degree("deg V must be below deg U".into()));
        }
        if !v.mul(&v).sub(curve.f()).rem(&u)?.is_zero() {
            return Err(Error::NotOnCurve);
        }
        Ok(MumfordDivisor { u, v })
    }

    /// The neutral class `(1, 0)`.
    pub fn identity(ctx: &Arc<PadicContext>) -> Self {
        MumfordDivisor {
            u: Poly::one(ctx),
            v: Poly::zero(ctx),
        }
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn degree(&self) -> usize {
        self.u.deg() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.u.deg() == 0
    }

    pub fn neg(&self) -> Self {
        MumfordDivisor {
            u: self.u.clone(),
            v: self.v.neg(),
        }
    }

    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Self> {
        Ok(MumfordDivisor {
            u: self.u.to_context(ctx)?,
            v: self.v.to_context(ctx)?,
        })
    }

    pub fn to_residue(&self) -> Self {
        MumfordDivisor {
            u: self.u.to_residue(),
            v: self.v.to_residue(),
        }
    }
}

fn require_odd(curve: &HyperellipticCurve) -> Result<()> {
    if !curve.is_odd_degree() {
        return Err(Error::InvalidParameter(
            "Jacobian arithmetic needs an odd-degree model".into(),
        ));
    }
    Ok(())
}

/// Reduce an arbitrary pair with `V^2 = f mod U` (U monic) to `deg U <= g`.
pub fn reduce_pair(curve: &HyperellipticCurve, u: Poly, v: Poly) -> Result<MumfordDivisor> {
    require_odd(curve)?;
    let g = curve.genus() as isize;
    let mut u = u;
    let mut v = v.rem(&u)?;
    while u.deg() > g {
        let (q, r) = curve.f().sub(&v.mul(&v)).divrem(&u)?;
        if !r.is_zero() {
            return Err(Error::NotOnCurve);
        }
        u = q.monic()?;
        v = v.neg().rem(&u)?;
    }
    Ok(MumfordDivisor { u, v })
}

/// Sum of two divisor classes (composition then reduction).
pub fn cantor_add(curve: &HyperellipticCurve, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor> {
    require_odd(curve)?;
    if a.is_identity() {
        return Ok(b.clone());
    }
    if b.is_identity() {
        return Ok(a.clone());
    }
    let (d1, e1, e2) = a.u.xgcd(&b.u)?;
    let (d, c1, c2) = d1.xgcd(&a.v.add(&b.v))?;
    let s1 = c1.mul(&e1);
    let s2 = c1.mul(&e2);
    let (u, r) = a.u.mul(&b.u).divrem(&d.mul(&d))?;
    debug_assert!(r.is_zero());
    let num = s1
        .mul(&a.u)
        .mul(&b.v)
        .add(&s2.mul(&b.u).mul(&a.v))
        .add(&c2.mul(&a.v.mul(&b.v).add(curve.f())));
    let (v, r) = num.divrem(&d)?;
    if !r.is_zero() {
        return Err(Error::NonUnitInversion("inexact composition".into()));
    }
    reduce_pair(curve, u, v)
}

/// `[k] D` by double-and-add.
pub fn scalar_mul(curve: &HyperellipticCurve, k: u64, d: &MumfordDivisor) -> Result<MumfordDivisor> {
    let mut acc = MumfordDivisor::identity(curve.context());
    for bit in (0..64 - k.leading_zeros()).rev() {
        acc = cantor_add(curve, &acc, &acc)?;
        if (k >> bit) & 1 == 1 {
            acc = cantor_add(curve, &acc, d)?;
        }
    }
    Ok(acc)
}

/// The class of `Q - infinity`: `(X - x_Q, y_Q)`.
pub fn divisor_from_point(curve: &HyperellipticCurve, q: &CurvePoint) -> Result<MumfordDivisor> {
    require_odd(curve)?;
    match q {
        CurvePoint::Infinity => Err(Error::InvalidParameter("point at infinity".into())),
        CurvePoint::Affine { x, y } => {
            if !curve.contains(x, y) {
                return Err(Error::NotOnCurve);
            }
            let ctx = curve.context();
            Ok(MumfordDivisor {
                u: Poly::linear(ctx, x),
                v: Poly::constant(ctx, *y),
            })
        }
    }
}

/// The divisor with the given affine support: `U = prod (X - x_i)` and `V`
/// the Lagrange interpolant through the points. The x-coordinates must be
/// pairwise distinct mod p.
pub fn divisor_from_points(curve: &HyperellipticCurve, points: &[CurvePoint]) -> Result<MumfordDivisor> {
    let ctx = curve.context();
    let mut coords = Vec::with_capacity(points.len());
    for q in points {
        match q {
            CurvePoint::Infinity => return Err(Error::InvalidParameter("point at infinity".into())),
            CurvePoint::Affine { x, y } => {
                if !curve.contains(x, y) {
                    return Err(Error::NotOnCurve);
                }
                coords.push((*x, *y));
            }
        }
    }
    let mut u = Poly::one(ctx);
    let mut v = Poly::zero(ctx);
    for (j, (xj, yj)) in coords.iter().enumerate() {
        u = u.mul(&Poly::linear(ctx, xj));
        let mut basis = Poly::constant(ctx, *yj);
        for (i, (xi, _)) in coords.iter().enumerate() {
            if i != j {
                let gap = ctx.inv(&ctx.sub(xj, xi)).map_err(|_| Error::RepeatedRoot)?;
                basis = basis.mul(&Poly::linear(ctx, xi)).scale(&gap);
            }
        }
        v = v.add(&basis);
    }
    MumfordDivisor::new(curve, u, v)
}

/// The class of `k (Q - infinity)` for an affine non-Weierstrass `Q`, built
/// from `U = (X - x_Q)^k` and the Taylor expansion of `sqrt f` at `Q`, then
/// reduced. Unlike double-and-add this never composes divisors with a
/// common support point, so it works over `Z/p^M`.
pub fn multiple_of_point(curve: &HyperellipticCurve, k: u64, q: &CurvePoint) -> Result<MumfordDivisor> {
    use crate::series::TruncSeries;
    require_odd(curve)?;
    let (x, y) = match q {
        CurvePoint::Infinity => return Ok(MumfordDivisor::identity(curve.context())),
        CurvePoint::Affine { x, y } => (*x, *y),
    };
    let ctx = curve.context();
    if !curve.contains(&x, &y) {
        return Err(Error::NotOnCurve);
    }
    if k == 0 {
        return Ok(MumfordDivisor::identity(ctx));
    }
    if !ctx.is_unit(&y) {
        return Err(Error::Weierstrass);
    }
    let k = k as usize;
    let mut shifted = curve.f().taylor_shift(&x).into_coeffs();
    shifted.resize(k.max(shifted.len()), Elem::ZERO);
    shifted.truncate(k);
    let root = TruncSeries::new(ctx, shifted).sqrt(&y)?;
    let lin = Poly::linear(ctx, &x);
    let v = Poly::new(ctx, root.into_coeffs()).compose(&lin);
    reduce_pair(curve, lin.pow(k as u64), v)
}

/// Newton lift of `y^2 = f(x0)` from a residue-field value `y0`.
pub fn hensel_lift_point(curve: &HyperellipticCurve, x0: &Elem, y0_residue: &Elem) -> Result<CurvePoint> {
    let ctx = curve.context();
    let res = ctx.residue_field();
    if res.is_zero(y0_residue) {
        return Err(Error::Weierstrass);
    }
    let a = curve.eval(x0);
    if res.mul(y0_residue, y0_residue) != res.convert_from(ctx, &a) {
        return Err(Error::NotOnCurve);
    }
    let mut y = ctx.convert_from(&res, y0_residue);
    let mut digits = 1;
    while digits < ctx.precision() {
        let err = ctx.sub(&ctx.mul(&y, &y), &a);
        let step = ctx.div(&err, &ctx.mul_u64(&y, 2))?;
        y = ctx.sub(&y, &step);
        digits *= 2;
    }
    Ok(CurvePoint::Affine { x: *x0, y })
}

/// Field size `p^d`, when it fits in a u64.
fn field_size(ctx: &PadicContext) -> Option<u64> {
    ctx.prime().checked_pow(ctx.degree() as u32)
}

/// The `k`-th element of a residue field in a fixed enumeration.
fn element_at(ctx: &PadicContext, mut k: u64) -> Elem {
    let p = ctx.prime();
    let digits: Vec<u64> = (0..ctx.degree())
        .map(|_| {
            let d = k % p;
            k /= p;
            d
        })
        .collect();
    ctx.from_digits(&digits).expect("digits below p")
}

/// A square root in a finite field (Tonelli-Shanks), `None` for non-squares.
pub fn field_sqrt(ctx: &PadicContext, a: &Elem) -> Result<Option<Elem>> {
    if !ctx.is_field() {
        return Err(Error::InvalidParameter("square roots need a residue field".into()));
    }
    let q = field_size(ctx).ok_or_else(|| Error::InvalidParameter("residue field too large".into()))?;
    if ctx.is_zero(a) {
        return Ok(Some(*a));
    }
    let minus_one = ctx.neg(&ctx.one());
    let euler = ctx.pow(a, (q - 1) / 2);
    if euler == minus_one {
        return Ok(None);
    }
    let mut s = 0;
    let mut t = q - 1;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    let z = (1..q)
        .map(|k| element_at(ctx, k))
        .find(|z| ctx.pow(z, (q - 1) / 2) == minus_one)
        .expect("odd field has non-squares");
    let mut m = s;
    let mut c = ctx.pow(&z, t);
    let mut tt = ctx.pow(a, t);
    let mut r = ctx.pow(a, t.div_ceil(2));
    while !ctx.is_one(&tt) {
        let mut i = 0;
        let mut sq = tt;
        while !ctx.is_one(&sq) {
            sq = ctx.mul(&sq, &sq);
            i += 1;
        }
        let mut b = c;
        for _ in 0..m - i - 1 {
            b = ctx.mul(&b, &b);
        }
        m = i;
        c = ctx.mul(&b, &b);
        tt = ctx.mul(&tt, &c);
        r = ctx.mul(&r, &b);
    }
    Ok(Some(r))
}

/// Roots in a residue field of a squarefree polynomial that splits there,
/// in enumeration order for small fields.
pub fn field_roots(h: &Poly) -> Result<Vec<Elem>> {
    let ctx = h.context();
    if !ctx.is_field() {
        return Err(Error::InvalidParameter("root finding needs a residue field".into()));
    }
    let q = field_size(ctx);
    match q {
        Some(q) if q <= SCAN_LIMIT => {
            let mut out = Vec::new();
            for k in 0..q {
                let x = element_at(ctx, k);
                if ctx.is_zero(&h.eval(&x)) {
                    out.push(x);
                    if out.len() as isize == h.deg() {
                        break;
                    }
                }
            }
            Ok(out)
        }
        _ => {
            let q = (ctx.prime() as u128)
                .checked_pow(ctx.degree() as u32)
                .ok_or_else(|| Error::InvalidParameter("residue field too large".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut out = Vec::new();
            split_roots(&h.monic()?, q, &mut rng, &mut out)?;
            Ok(out)
        }
    }
}

/// Equal-degree splitting into linear factors (Cantor-Zassenhaus, q odd).
fn split_roots(h: &Poly, q: u128, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) -> Result<()> {
    let ctx = h.context();
    match h.deg() {
        d if d <= 0 => return Ok(()),
        1 => {
            out.push(ctx.neg(&h.coeff(0)));
            return Ok(());
        }
        _ => {}
    }
    loop {
        let a = ctx.random(rng);
        let lin = Poly::new(ctx, vec![a, ctx.one()]);
        let w = lin.powmod((q - 1) / 2, h)?.sub(&Poly::one(ctx));
        let g = w.gcd(h)?;
        if g.deg() > 0 && g.deg() < h.deg() {
            let (other, _) = h.divrem(&g)?;
            split_roots(&g, q, rng, out)?;
            split_roots(&other.monic()?, q, rng, out)?;
            return Ok(());
        }
    }
}

/// Support of a divisor, over an unramified extension large enough to hold it.
#[derive(Clone, Debug)]
pub struct DivisorSupport {
    pub ctx: Arc<PadicContext>,
    pub points: Vec<CurvePoint>,
}

impl DivisorSupport {
    pub fn xs(&self) -> Vec<Elem> {
        self.points.iter().filter_map(|p| p.x()).collect()
    }

    pub fn ys(&self) -> Vec<Elem> {
        self.points.iter().filter_map(|p| p.y()).collect()
    }
}

/// Smallest `d` such that the squarefree `h` over F_p splits over F_{p^d}.
fn splitting_degree(h: &Poly) -> Result<usize> {
    let ctx = h.context();
    let x = Poly::monomial(ctx, 1);
    let mut frob = x.rem(h)?;
    for d in 1..=crate::padic::MAX_EXT_DEGREE {
        frob = frob.powmod(ctx.prime() as u128, h)?;
        if frob == x.rem(h)? {
            return Ok(d);
        }
    }
    Err(Error::InvalidParameter(format!(
        "U does not split over an extension of degree <= {}",
        crate::padic::MAX_EXT_DEGREE
    )))
}

/// The `g` points `(x_i, V(x_i))` with `U(x_i) = 0`, Hensel-lifted to the
/// curve's precision over the smallest unramified extension where U mod p
/// splits. The curve must be defined over `Z/p^M`.
pub fn divisor_points(curve: &HyperellipticCurve, d: &MumfordDivisor) -> Result<DivisorSupport> {
    let ctx = curve.context();
    if ctx.degree() != 1 {
        return Err(Error::InvalidParameter("curve must be defined over Z/p^M".into()));
    }
    if d.degree() < curve.genus() {
        return Err(Error::Degree(format!(
            "divisor has degree {} below the genus {}",
            d.degree(),
            curve.genus()
        )));
    }
    let ur = d.u().to_residue();
    if ur.gcd(&ur.derivative())?.deg() != 0 {
        return Err(Error::RepeatedRoot);
    }
    let deg = splitting_degree(&ur)?;
    let ext = PadicContext::unramified(ctx.prime(), ctx.precision(), deg)?;
    let res = ext.residue_field();
    let u = d.u().embed(&ext)?;
    let v = d.v().embed(&ext)?;
    let du = u.derivative();
    let mut points = Vec::with_capacity(d.degree());
    for r in field_roots(&ur.embed(&res)?)? {
        let mut x = ext.convert_from(&res, &r);
        let mut digits = 1;
        while digits < ext.precision() {
            x = ext.sub(&x, &ext.div(&u.eval(&x), &du.eval(&x))?);
            digits *= 2;
        }
        let y = v.eval(&x);
        if !ext.is_unit(&y) {
            return Err(Error::Weierstrass);
        }
        points.push(CurvePoint::Affine { x, y });
    }
    if points.len() != d.degree() {
        return Err(Error::Degree("U mod p did not split into distinct roots".into()));
    }
    Ok(DivisorSupport { ctx: ext, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> HyperellipticCurve {
        let c = PadicContext::new(19, 2).unwrap();
        HyperellipticCurve::from_i64s(&c, &[17, 5, 3, 11, 16, 1]).unwrap()
    }

    fn f7() -> HyperellipticCurve {
        let c = PadicContext::new(7, 1).unwrap();
        HyperellipticCurve::from_i64s(&c, &[2, 3, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn base_point_divisor() {
        let c = c1();
        let ctx = c.context();
        let q = CurvePoint::Affine {
            x: ctx.zero(),
            y: ctx.from_u64(146),
        };
        let d = divisor_from_point(&c, &q).unwrap();
        assert_eq!(d.u(), &Poly::monomial(ctx, 1));
        assert_eq!(d.v(), &Poly::constant(ctx, ctx.from_u64(146)));
        assert!(cantor_add(&c, &d, &d.neg()).unwrap().is_identity());
    }

    #[test]
    fn lifts_base_point() {
        let c = c1();
        let ctx = c.context();
        let res = ctx.residue_field();
        let p = hensel_lift_point(&c, &ctx.zero(), &res.from_u64(13)).unwrap();
        assert_eq!(p.y(), Some(ctx.from_u64(146)));
        let p = hensel_lift_point(&c, &ctx.zero(), &res.from_u64(6)).unwrap();
        assert_eq!(p.y(), Some(ctx.from_u64(215)));
        assert_eq!(
            hensel_lift_point(&c, &ctx.zero(), &res.zero()).unwrap_err(),
            Error::Weierstrass
        );
    }

    #[test]
    fn rejects_bad_curves() {
        let c = PadicContext::new(7, 1).unwrap();
        assert!(matches!(
            HyperellipticCurve::from_i64s(&c, &[0, 0, 1, 0, 0, 1]),
            Err(Error::SingularCurve(_))
        ));
        let c2 = PadicContext::new(2, 3).unwrap();
        assert!(HyperellipticCurve::from_i64s(&c2, &[1, 1, 0, 0, 0, 1]).is_err());
    }

    #[test]
    fn support_points_of_golden_divisor() {
        let c = PadicContext::new(19, 2).unwrap();
        let c = HyperellipticCurve::from_i64s(&c, &[0, -68, 2546, -100, -176, 2]).unwrap();
        let ctx = c.context();
        let u = Poly::from_i64s(ctx, &[36, 1]).mul(&Poly::from_i64s(ctx, &[129, 1]));
        // V through (-36, -13) and (-129, -47)
        let slope = ctx.div(&ctx.from_i64(-47 + 13), &ctx.from_i64(-129 + 36)).unwrap();
        let v = Poly::new(
            ctx,
            vec![ctx.add(&ctx.from_i64(-13), &ctx.mul(&slope, &ctx.from_i64(36))), slope],
        );
        let d = MumfordDivisor::new(&c, u, v).unwrap();
        let s = divisor_points(&c, &d).unwrap();
        assert_eq!(s.xs(), vec![ctx.from_i64(-36), ctx.from_i64(-129)]);
        assert_eq!(s.ys(), vec![ctx.from_i64(-13), ctx.from_i64(-47)]);
    }

    #[test]
    fn repeated_root_rejected() {
        let c = c1();
        let ctx = c.context();
        // (X - 2)(X - 21) has a double root mod 19
        let u = Poly::from_i64s(ctx, &[42, -23, 1]);
        let d = MumfordDivisor { u, v: Poly::zero(ctx) };
        assert_eq!(divisor_points(&c, &d).unwrap_err(), Error::RepeatedRoot);
    }

    #[test]
    fn four_times_is_repeated_addition() {
        let c = f7();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let d = divisor_from_point(&c, &c.random_point(&mut rng).unwrap()).unwrap();
            let e = divisor_from_point(&c, &c.random_point(&mut rng).unwrap()).unwrap();
            let d = cantor_add(&c, &d, &e).unwrap();
            let mut acc = MumfordDivisor::identity(c.context());
            for _ in 0..4 {
                acc = cantor_add(&c, &acc, &d).unwrap();
            }
            assert_eq!(scalar_mul(&c, 4, &d).unwrap(), acc);
            assert_eq!(scalar_mul(&c, 1, &d).unwrap(), d);
            assert!(scalar_mul(&c, 0, &d).unwrap().is_identity());
        }
    }

    #[test]
    fn multiple_of_point_matches_double_and_add() {
        let c = f7();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let q = c.random_point(&mut rng).unwrap();
            let d = divisor_from_point(&c, &q).unwrap();
            for k in 0..8 {
                assert_eq!(multiple_of_point(&c, k, &q).unwrap(), scalar_mul(&c, k, &d).unwrap());
            }
        }
    }

    #[test]
    fn sqrt_and_roots_in_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, d) in [(7u64, 1usize), (7, 3), (11, 2), (1_000_003, 1), (101, 3)] {
            let ctx = PadicContext::unramified(p, 1, d).unwrap();
            for _ in 0..20 {
                let a = ctx.random(&mut rng);
                let sq = ctx.mul(&a, &a);
                let r = field_sqrt(&ctx, &sq).unwrap().unwrap();
                assert_eq!(ctx.mul(&r, &r), sq);
            }
            let roots: Vec<Elem> = (0..3).map(|_| ctx.random(&mut rng)).collect();
            if roots[0] == roots[1] || roots[1] == roots[2] || roots[0] == roots[2] {
                continue;
            }
            let h = roots
                .iter()
                .fold(Poly::one(&ctx), |acc, r| acc.mul(&Poly::linear(&ctx, r)));
            let mut found = field_roots(&h).unwrap();
            let mut want = roots.clone();
            found.sort_by_key(|e| *e.digits());
            want.sort_by_key(|e| *e.digits());
            assert_eq!(found, want, "p={p} d={d}");
        }
    }
}
