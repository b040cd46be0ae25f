//! Fixed-point arithmetic in (Z/p^M)[x]/(modulus) for unramified extensions.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 6;

/// Raw element: `degree` digits in `[0, p^M)`, higher slots zero.
///
/// Carries no context; every operation goes through a [`PadicContext`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Elem(pub(crate) [u64; MAX_EXT_DEGREE]);

impl Elem {
    pub const ZERO: Elem = Elem([0; MAX_EXT_DEGREE]);

    pub fn digits(&self) -> &[u64; MAX_EXT_DEGREE] {
        &self.0
    }
}

#[inline]
pub(crate) fn addm(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn subm(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

#[inline]
pub(crate) fn mulm(a: u64, b: u64, m: u64) -> u64 {
    if m <= 1 << 32 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub(crate) fn powm(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, m);
        }
        a = mulm(a, a, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn invm(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense polynomials over F_p as `Vec<u64>`, low degree first. Only used for
/// small-degree modulus handling.
mod fp {
    use super::{addm, invm, mulm, subm};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![0; a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            r[i] = *x;
        }
        for (i, x) in b.iter().enumerate() {
            r[i] = subm(r[i], *x, p);
        }
        trim(&mut r);
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = addm(r[i + j], mulm(*x, *y, p), p);
            }
        }
        trim(&mut r);
        r
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv = invm(b[db], p).expect("nonzero leading coefficient");
        if r.len() < b.len() {
            return (vec![], r);
        }
        let mut q = vec![0; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + db], inv, p);
            q[k] = c;
            if c != 0 {
                for (i, y) in b.iter().enumerate() {
                    r[k + i] = subm(r[k + i], mulm(c, *y, p), p);
                }
            }
        }
        r.truncate(db);
        trim(&mut r);
        (q, r)
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Inverse of `a` modulo `m` over F_p, if coprime.
    pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r0 = m.to_vec();
        let mut r1 = rem(a, m, p);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = invm(r0[0], p)?;
        let mut out: Vec<u64> = s0.iter().map(|x| mulm(*x, c, p)).collect();
        out = rem(&out, m, p);
        Some(out)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        r
    }

    /// Irreducibility of a monic `f` of degree `d`: gcd(x^{p^i} - x, f) = 1 for i <= d/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 0..d / 2 {
            xp = powmod(&xp, p, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Immutable description of O_K / p^M O_K for an unramified K of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    precision: u32,
    degree: usize,
    pm: u64,
    ext: [u64; MAX_EXT_DEGREE + 1],
}

impl PadicContext {
    /// Z/p^M.
    pub fn new(p: u64, precision: u32) -> Result<Arc<Self>> {
        Self::build(p, precision, &[0, 1])
    }

    /// Unramified extension of degree `degree` with the lexicographically
    /// first monic irreducible modulus over F_p.
    pub fn unramified(p: u64, precision: u32, degree: usize) -> Result<Arc<Self>> {
        Self::check_base(p, precision)?;
        if degree == 0 || degree > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree must be in 1..={MAX_EXT_DEGREE}"
            )));
        }
        if degree == 1 {
            return Self::new(p, precision);
        }
        let mut f = vec![0u64; degree + 1];
        f[degree] = 1;
        loop {
            if f[0] != 0 && fp::is_irreducible(&f, p) {
                return Self::build(p, precision, &f);
            }
            let mut i = 0;
            loop {
                f[i] += 1;
                if f[i] < p {
                    break;
                }
                f[i] = 0;
                i += 1;
                if i == degree {
                    unreachable!("irreducible polynomials exist in every degree");
                }
            }
        }
    }

    /// Unramified extension with a random monic irreducible modulus.
    pub fn unramified_random<R: Rng + ?Sized>(p: u64, precision: u32, degree: usize, rng: &mut R) -> Result<Arc<Self>> {
        Self::check_base(p, precision)?;
        if degree == 0 || degree > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree must be in 1..={MAX_EXT_DEGREE}"
            )));
        }
        if degree == 1 {
            return Self::new(p, precision);
        }
        loop {
            let mut f: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..p)).collect();
            f.push(1);
            if f[0] != 0 && fp::is_irreducible(&f, p) {
                return Self::build(p, precision, &f);
            }
        }
    }

    /// Extension defined by a supplied monic modulus, coefficients low to high.
    pub fn with_modulus(p: u64, precision: u32, modulus: &[u64]) -> Result<Arc<Self>> {
        Self::check_base(p, precision)?;
        let d = modulus.len().saturating_sub(1);
        if d == 0 || d > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree must be in 1..={MAX_EXT_DEGREE}"
            )));
        }
        if modulus[d] != 1 {
            return Err(Error::InvalidParameter("modulus must be monic".into()));
        }
        let reduced: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !fp::is_irreducible(&reduced, p) {
            return Err(Error::ReducibleModulus);
        }
        Self::build(p, precision, modulus)
    }

    fn check_base(p: u64, precision: u32) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        let mut pm: u64 = 1;
        for _ in 0..precision {
            pm = pm
                .checked_mul(p)
                .filter(|v| *v < 1 << 63)
                .ok_or(Error::PrecisionOverflow { p, precision })?;
        }
        Ok(pm)
    }

    fn build(p: u64, precision: u32, modulus: &[u64]) -> Result<Arc<Self>> {
        let pm = Self::check_base(p, precision)?;
        let degree = modulus.len() - 1;
        let mut ext = [0u64; MAX_EXT_DEGREE + 1];
        for (i, c) in modulus.iter().enumerate() {
            ext[i] = c % pm;
        }
        Ok(Arc::new(PadicContext {
            p,
            precision,
            degree,
            pm,
            ext,
        }))
    }

    /// Same p and modulus at another precision. Modulus digits are truncated
    /// or zero-extended.
    pub fn with_precision(&self, precision: u32) -> Result<Arc<Self>> {
        let m: Vec<u64> = self.ext[..=self.degree].to_vec();
        Self::build(self.p, precision, &m)
    }

    /// F_q with q = p^degree.
    pub fn residue_field(&self) -> Arc<Self> {
        self.with_precision(1).expect("precision 1 always fits")
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// p^M.
    pub fn modulus(&self) -> u64 {
        self.pm
    }

    /// Monic extension modulus, low to high; `[0, 1]` when `degree == 1`.
    pub fn ext_modulus(&self) -> &[u64] {
        &self.ext[..=self.degree]
    }

    /// Residue field cardinality p^d, saturating.
    pub fn residue_cardinality(&self) -> u64 {
        (0..self.degree).fold(1u64, |a, _| a.saturating_mul(self.p))
    }

    pub fn is_field(&self) -> bool {
        self.precision == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> Elem {
        let mut e = Elem::ZERO;
        e.0[0] = v % self.pm;
        e
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        let mut e = Elem::ZERO;
        e.0[0] = (v as i128).rem_euclid(self.pm as i128) as u64;
        e
    }

    /// Element from its digit vector; digits are reduced mod p^M.
    pub fn from_digits(&self, digits: &[u64]) -> Result<Elem> {
        if digits.len() > self.degree {
            return Err(Error::InvalidParameter(format!(
                "expected at most {} digits, got {}",
                self.degree,
                digits.len()
            )));
        }
        let mut e = Elem::ZERO;
        for (i, c) in digits.iter().enumerate() {
            e.0[i] = c % self.pm;
        }
        Ok(e)
    }

    /// Parse a base-10 integer, possibly negative and of any length.
    pub fn parse_integer(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidParameter(format!("not an integer: {s:?}")));
        }
        let m = self.pm as u128;
        let mut v: u128 = 0;
        for b in body.bytes() {
            v = (v * 10 + (b - b'0') as u128) % m;
        }
        let v = v as u64;
        Ok(if neg { subm(0, v, self.pm) } else { v })
    }

    /// Canonical representative in (-p^M/2, p^M/2].
    pub fn signed_digit(&self, c: u64) -> i128 {
        if c > self.pm / 2 {
            c as i128 - self.pm as i128
        } else {
            c as i128
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let mut e = Elem::ZERO;
        for i in 0..self.degree {
            e.0[i] = rng.gen_range(0..self.pm);
        }
        e
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if self.is_unit(&e) {
                return e;
            }
        }
    }

    #[inline]
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let mut r = Elem::ZERO;
        for i in 0..self.degree {
            r.0[i] = addm(a.0[i], b.0[i], self.pm);
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let mut r = Elem::ZERO;
        for i in 0..self.degree {
            r.0[i] = subm(a.0[i], b.0[i], self.pm);
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: &Elem) -> Elem {
        self.sub(&Elem::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if self.degree == 1 {
            let mut r = Elem::ZERO;
            r.0[0] = mulm(a.0[0], b.0[0], self.pm);
            return r;
        }
        self.ext_mul(a, b, self.pm)
    }

    /// Multiply by an integer scalar.
    #[inline]
    pub fn mul_u64(&self, a: &Elem, k: u64) -> Elem {
        let k = k % self.pm;
        let mut r = Elem::ZERO;
        for i in 0..self.degree {
            r.0[i] = mulm(a.0[i], k, self.pm);
        }
        r
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut r = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    fn ext_mul(&self, a: &Elem, b: &Elem, m: u64) -> Elem {
        let d = self.degree;
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..d {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = addm(prod[i + j], mulm(a.0[i], b.0[j], m), m);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..d {
                    let t = mulm(c, self.ext[i] % m, m);
                    prod[k - d + i] = subm(prod[k - d + i], t, m);
                }
            }
        }
        let mut r = Elem::ZERO;
        r.0[..d].copy_from_slice(&prod[..d]);
        r
    }

    /// Reduce a digit vector of length up to `2d - 1` (a product in
    /// (Z/p^M)[y] before reduction) modulo the extension modulus.
    pub(crate) fn reduce_wide(&self, wide: &[u64]) -> Elem {
        let d = self.degree;
        let m = self.pm;
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE - 1];
        prod[..wide.len()].copy_from_slice(wide);
        for k in (d..wide.len()).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..d {
                    let t = mulm(c, self.ext[i], m);
                    prod[k - d + i] = subm(prod[k - d + i], t, m);
                }
            }
        }
        let mut r = Elem::ZERO;
        r.0[..d].copy_from_slice(&prod[..d]);
        r
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.0[..self.degree].iter().all(|c| *c == 0)
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    fn int_valuation(&self, mut c: u64) -> u32 {
        if c == 0 {
            return self.precision;
        }
        let mut v = 0;
        while c.is_multiple_of(self.p) {
            c /= self.p;
            v += 1;
        }
        v
    }

    /// p-adic valuation, `M` for zero.
    pub fn valuation(&self, a: &Elem) -> u32 {
        a.0[..self.degree]
            .iter()
            .map(|c| self.int_valuation(*c))
            .min()
            .unwrap_or(self.precision)
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.valuation(a) == 0
    }

    /// Inverse of a unit modulo `m = p^k`, `k <= M`.
    fn unit_inverse_mod(&self, a: &Elem, m: u64) -> Option<Elem> {
        let d = self.degree;
        if d == 1 {
            let mut r = Elem::ZERO;
            r.0[0] = invm(a.0[0] % m, m)?;
            return Some(r);
        }
        let p = self.p;
        let a_res: Vec<u64> = {
            let mut v: Vec<u64> = a.0[..d].iter().map(|c| c % p).collect();
            fp::trim(&mut v);
            v
        };
        if a_res.is_empty() {
            return None;
        }
        let modp: Vec<u64> = self.ext[..=d].iter().map(|c| c % p).collect();
        let inv0 = fp::inv_mod(&a_res, &modp, p)?;
        let mut b = Elem::ZERO;
        for (i, c) in inv0.iter().enumerate() {
            b.0[i] = *c;
        }
        let a_m = {
            let mut t = Elem::ZERO;
            for i in 0..d {
                t.0[i] = a.0[i] % m;
            }
            t
        };
        let mut two = Elem::ZERO;
        two.0[0] = 2 % m;
        let mut pk = p;
        while pk < m {
            let ab = self.ext_mul(&a_m, &b, m);
            let mut t = Elem::ZERO;
            for i in 0..d {
                t.0[i] = subm(two.0[i], ab.0[i], m);
            }
            b = self.ext_mul(&b, &t, m);
            pk = pk.saturating_mul(pk);
        }
        Some(b)
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible(format!(
                "element of valuation {} is not a unit",
                self.valuation(a)
            )));
        }
        Ok(self.unit_inverse_mod(a, self.pm).expect("units are invertible"))
    }

    /// Fixed-point division: `0 / b = 0`; otherwise requires `v(b) <= v(a)`,
    /// cancels `p^v(b)`, inverts the unit part modulo `p^(M - v(b))` and lifts
    /// with zero upper digits.
    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Ok(Elem::ZERO);
        }
        let va = self.valuation(a);
        let vb = self.valuation(b);
        if vb > va {
            return Err(Error::DivisionPrecision {
                dividend: va,
                divisor: vb,
            });
        }
        if vb == 0 {
            let inv = self.unit_inverse_mod(b, self.pm).expect("unit");
            return Ok(self.mul(a, &inv));
        }
        let pk = self.p.pow(vb);
        let m = self.pm / pk;
        let mut a2 = Elem::ZERO;
        let mut b2 = Elem::ZERO;
        for i in 0..self.degree {
            a2.0[i] = (a.0[i] / pk) % m;
            b2.0[i] = (b.0[i] / pk) % m;
        }
        let inv = self.unit_inverse_mod(&b2, m).expect("unit after cancellation");
        if self.degree == 1 {
            let mut r = Elem::ZERO;
            r.0[0] = mulm(a2.0[0], inv.0[0], m);
            return Ok(r);
        }
        Ok(self.ext_mul(&a2, &inv, m))
    }

    /// Divide by a small integer with the fixed-point rule.
    pub fn div_u64(&self, a: &Elem, k: u64) -> Result<Elem> {
        self.div(a, &self.from_u64(k))
    }

    /// Map an element of a context with the same p and modulus to this one,
    /// truncating or zero-extending digits.
    pub fn convert_from(&self, from: &PadicContext, a: &Elem) -> Elem {
        debug_assert_eq!(from.p, self.p);
        debug_assert_eq!(from.degree, self.degree);
        let mut r = Elem::ZERO;
        for i in 0..self.degree {
            r.0[i] = a.0[i] % self.pm;
        }
        r
    }

    /// Embed an element of the degree-1 context with the same p (any precision).
    pub fn embed_base(&self, a: &Elem) -> Elem {
        self.from_u64(a.0[0])
    }

    /// The element represented by x (the generator), when `degree > 1`.
    pub fn generator(&self) -> Elem {
        let mut e = Elem::ZERO;
        if self.degree > 1 {
            e.0[1] = 1;
        } else {
            e.0[0] = self.pm - self.ext[0] % self.pm;
            e.0[0] %= self.pm;
        }
        e
    }

    /// True when `a` lies in the prime subring (all higher digits zero).
    pub fn is_base(&self, a: &Elem) -> bool {
        a.0[1..self.degree].iter().all(|c| *c == 0)
    }

    /// Decimal rendering: an integer when `degree == 1`, else `(c0, c1, ...)`.
    pub fn format(&self, a: &Elem) -> String {
        if self.degree == 1 {
            a.0[0].to_string()
        } else {
            let parts: Vec<String> = a.0[..self.degree].iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(", "))
        }
    }

    /// Same context, compared by pointer first then by value.
    pub fn same(a: &Arc<PadicContext>, b: &Arc<PadicContext>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Display for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "Z/{}^{}", self.p, self.precision)
        } else {
            write!(f, "(Z/{}^{})[x]/({:?})", self.p, self.precision, self.ext_modulus())
        }
    }
}

/// Context-carrying element with checked operations.
#[derive(Clone, Debug)]
pub struct PadicElement {
    ctx: Arc<PadicContext>,
    value: Elem,
}

/// An element of a precision-1 context.
pub type ResidueElement = PadicElement;

impl PartialEq for PadicElement {
    fn eq(&self, other: &Self) -> bool {
        PadicContext::same(&self.ctx, &other.ctx) && self.value == other.value
    }
}

impl Eq for PadicElement {}

impl PadicElement {
    pub fn new(ctx: &Arc<PadicContext>, value: Elem) -> Self {
        PadicElement {
            ctx: ctx.clone(),
            value,
        }
    }

    pub fn from_i64(ctx: &Arc<PadicContext>, v: i64) -> Self {
        Self::new(ctx, ctx.from_i64(v))
    }

    pub fn from_digits(ctx: &Arc<PadicContext>, digits: &[u64]) -> Result<Self> {
        Ok(Self::new(ctx, ctx.from_digits(digits)?))
    }

    pub fn zero(ctx: &Arc<PadicContext>) -> Self {
        Self::new(ctx, Elem::ZERO)
    }

    pub fn one(ctx: &Arc<PadicContext>) -> Self {
        Self::new(ctx, ctx.one())
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn raw(&self) -> Elem {
        self.value
    }

    pub fn digits(&self) -> &[u64] {
        &self.value.0[..self.ctx.degree]
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
        Ok(Self::new(&self.ctx, self.ctx.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.ctx, self.ctx.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.ctx, self.ctx.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.ctx, self.ctx.div(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.ctx.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::new(&self.ctx, self.ctx.inv(&self.value)?))
    }

    pub fn valuation(&self) -> u32 {
        self.ctx.valuation(&self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.ctx.is_zero(&self.value)
    }

    /// Truncate to, or zero-extend to, precision `target`.
    pub fn reduce_lift(&self, target: u32) -> Result<Self> {
        let ctx = self.ctx.with_precision(target)?;
        let v = ctx.convert_from(&self.ctx, &self.value);
        Ok(Self::new(&ctx, v))
    }

    /// Move into another context with the same p and modulus.
    pub fn to_context(&self, ctx: &Arc<PadicContext>) -> Result<Self> {
        if ctx.p != self.ctx.p || ctx.degree != self.ctx.degree {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::new(ctx, ctx.convert_from(&self.ctx, &self.value)))
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + O({}^{})",
            self.ctx.format(&self.value),
            self.ctx.p,
            self.ctx.precision
        )
    }
}
