//! Padé approximation over a residue field, by partial extended Euclid
//! (quadratic) or by half-gcd (divide and conquer).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{Elem, PadicContext};
use crate::poly::Poly;

/// 2x2 polynomial matrix acting on remainder pairs: `(a, b) -> (m00 a + m01 b, m10 a + m11 b)`.
#[derive(Clone, Debug)]
struct Transform {
    m: [Poly; 4],
}

impl Transform {
    fn identity(ctx: &Arc<PadicContext>) -> Self {
        Transform {
            m: [Poly::one(ctx), Poly::zero(ctx), Poly::zero(ctx), Poly::one(ctx)],
        }
    }

    /// The single Euclid step `(a, b) -> (b, a - q b)`.
    fn step(q: &Poly) -> Self {
        let ctx = q.context();
        Transform {
            m: [Poly::zero(ctx), Poly::one(ctx), Poly::one(ctx), q.neg()],
        }
    }

    fn apply(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let [m00, m01, m10, m11] = &self.m;
        (m00.mul(a).add(&m01.mul(b)), m10.mul(a).add(&m11.mul(b)))
    }

    /// `self * other`, i.e. apply `other` first.
    fn compose(&self, other: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        Transform {
            m: [
                a.mul(e).add(&b.mul(g)),
                a.mul(f).add(&b.mul(h)),
                c.mul(e).add(&d.mul(g)),
                c.mul(f).add(&d.mul(h)),
            ],
        }
    }
}

/// Transform reaching the consecutive remainders straddling `ceil(deg a / 2)`:
/// the result `(a', b')` has `deg a' >= ceil(deg a / 2) > deg b'`.
fn half_gcd(a: &Poly, b: &Poly) -> Result<Transform> {
    let ctx = a.context();
    debug_assert!(a.deg() > b.deg());
    let m = ((a.deg() + 1) / 2) as usize;
    if b.deg() < m as isize {
        return Ok(Transform::identity(ctx));
    }
    let first = half_gcd(&a.shift_down(m), &b.shift_down(m))?;
    let (a1, b1) = first.apply(a, b);
    if b1.deg() < m as isize {
        return Ok(first);
    }
    let (q, r) = a1.divrem(&b1)?;
    let t = Transform::step(&q).compose(&first);
    let (a2, b2) = (b1, r);
    let k = (2 * m as isize - a2.deg()).max(0) as usize;
    let second = half_gcd(&a2.shift_down(k), &b2.shift_down(k))?;
    Ok(second.compose(&t))
}

/// Transform reaching the consecutive remainders straddling `k`:
/// `deg a' >= k > deg b'`. Requires `deg a >= k` and `deg a > deg b`.
fn partial_gcd(a: &Poly, b: &Poly, k: usize) -> Result<Transform> {
    let ctx = a.context();
    let mut total = Transform::identity(ctx);
    let (mut a, mut b) = (a.clone(), b.clone());
    let k = k as isize;
    while b.deg() >= k {
        let n = a.deg();
        let t = if 2 * k >= n {
            let s = (2 * k - n) as usize;
            half_gcd(&a.shift_down(s), &b.shift_down(s))?
        } else {
            half_gcd(&a, &b)?
        };
        let (a1, b1) = t.apply(&a, &b);
        total = t.compose(&total);
        a = a1;
        b = b1;
        if b.deg() >= k {
            let (q, r) = a.divrem(&b)?;
            total = Transform::step(&q).compose(&total);
            a = b;
            b = r;
        }
    }
    Ok(total)
}

/// Result of a reconstruction: `numerator / denominator` with `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeApproximant {
    pub numerator: Poly,
    pub denominator: Poly,
}

fn finish(ctx: &Arc<PadicContext>, num: Poly, den: Poly, dd: usize) -> Result<PadeApproximant> {
    if den.deg() > dd as isize {
        return Err(Error::Reconstruction(format!(
            "denominator degree {} exceeds bound {dd}",
            den.deg()
        )));
    }
    let d0 = den.coeff(0);
    if ctx.is_zero(&d0) {
        return Err(Error::Reconstruction("denominator vanishes at t = 0".into()));
    }
    let inv = ctx.inv(&d0)?;
    Ok(PadeApproximant {
        numerator: num.scale(&inv),
        denominator: den.scale(&inv),
    })
}

/// Find `N/D` with `N ≡ s D mod t^n` (`n = s.len()`), `deg N <= dn`,
/// `deg D <= dd`, `D(0) = 1`. `fast` selects half-gcd over plain Euclid;
/// both give identical output.
pub fn pade_reconstruct(
    ctx: &Arc<PadicContext>,
    s: &[Elem],
    dn: usize,
    dd: usize,
    fast: bool,
) -> Result<PadeApproximant> {
    let n = s.len();
    if n < dn + dd + 1 {
        return Err(Error::InvalidParameter(format!(
            "{n} terms cannot determine a ({dn}, {dd}) approximant"
        )));
    }
    if !ctx.is_field() {
        return Err(Error::InvalidParameter(
            "reconstruction needs residue-field coefficients".into(),
        ));
    }
    let a = Poly::monomial(ctx, n);
    let b = Poly::new(ctx, s.to_vec());
    let (num, den) = if fast {
        let t = partial_gcd(&a, &b, dn + 1)?;
        let (_, r) = t.apply(&a, &b);
        (r, t.m[3].clone())
    } else {
        let (mut r0, mut r1) = (a, b);
        let (mut v0, mut v1) = (Poly::zero(ctx), Poly::one(ctx));
        while r1.deg() > dn as isize {
            let (q, r) = r0.divrem(&r1)?;
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            v0 = v1;
            v1 = v;
        }
        (r1, v1)
    };
    finish(ctx, num, den, dd)
}

/// True when the fraction found from `terms` coefficients is forced to equal
/// any fraction with numerator degree `<= dn` and denominator degree `<= dd`
/// matching the same terms: `max(deg N + dd, dn + deg D) < terms`.
pub fn is_certified(approx: &PadeApproximant, dn: usize, dd: usize, terms: usize) -> bool {
    let deg_n = approx.numerator.deg().max(0) as usize;
    let deg_d = approx.denominator.deg().max(0) as usize;
    (deg_n + dd).max(dn + deg_d) < terms
}

/// Power series expansion of `num / den` to `n` terms (`den(0)` a unit).
pub fn expand(num: &Poly, den: &Poly, n: usize) -> Result<Vec<Elem>> {
    use crate::series::TruncSeries;
    let ctx = num.context();
    let mut dc = den.coeffs().to_vec();
    dc.resize(n.max(dc.len()), Elem::ZERO);
    dc.truncate(n);
    let inv = TruncSeries::new(ctx, dc).inverse()?;
    let mut nc = num.coeffs().to_vec();
    nc.truncate(n);
    let out = TruncSeries::new(ctx, nc).mul_to(&inv, n);
    Ok(out.into_coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn geometric_series() {
        let c = PadicContext::new(7, 1).unwrap();
        let s = vec![c.one(); 2];
        for fast in [false, true] {
            let r = pade_reconstruct(&c, &s, 0, 1, fast).unwrap();
            assert_eq!(r.numerator, Poly::one(&c));
            assert_eq!(r.denominator, Poly::from_i64s(&c, &[1, -1]));
        }
    }

    #[test]
    fn polynomial_input() {
        let c = PadicContext::new(19, 1).unwrap();
        let p = Poly::from_i64s(&c, &[3, 0, 5, 1]);
        let mut s = p.coeffs().to_vec();
        s.resize(10, Elem::ZERO);
        for fast in [false, true] {
            let r = pade_reconstruct(&c, &s, 3, 6, fast).unwrap();
            assert_eq!(r.numerator, p);
            assert_eq!(r.denominator, Poly::one(&c));
        }
    }

    #[test]
    fn random_fractions_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let c = PadicContext::new(19, 1).unwrap();
        for _ in 0..100 {
            let n = Poly::random(&c, 10, &mut rng);
            let mut d = Poly::random(&c, 11, &mut rng);
            if c.is_zero(&d.coeff(0)) {
                d = d.add(&Poly::one(&c));
            }
            let s = expand(&n, &d, 22).unwrap();
            let slow = pade_reconstruct(&c, &s, 10, 11, false).unwrap();
            let fast = pade_reconstruct(&c, &s, 10, 11, true).unwrap();
            assert_eq!(slow, fast);
            assert_eq!(slow.numerator.mul(&d), n.mul(&slow.denominator));
        }
    }

    #[test]
    fn fast_matches_naive_on_long_random_series() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for (p, d) in [(7u64, 1usize), (5, 2), (2, 1)] {
            let c = PadicContext::unramified(p, 1, d).unwrap();
            for n in [1usize, 2, 5, 17, 64, 130, 301] {
                let s: Vec<Elem> = (0..n).map(|_| c.random(&mut rng)).collect();
                for dn in [0, n / 3, n / 2, n.saturating_sub(1)] {
                    let dd = n - 1 - dn;
                    let slow = pade_reconstruct(&c, &s, dn, dd, false);
                    let fast = pade_reconstruct(&c, &s, dn, dd, true);
                    assert_eq!(slow, fast, "p={p} n={n} dn={dn}");
                }
            }
        }
    }

    #[test]
    fn failure_is_reported() {
        let c = PadicContext::new(7, 1).unwrap();
        // t has no expansion with D(0) != 0 and deg N = 0
        let s = vec![c.zero(), c.one(), c.zero()];
        assert!(matches!(
            pade_reconstruct(&c, &s, 0, 2, false),
            Err(Error::Reconstruction(_))
        ));
        assert!(matches!(
            pade_reconstruct(&c, &s, 0, 2, true),
            Err(Error::Reconstruction(_))
        ));
    }
}
