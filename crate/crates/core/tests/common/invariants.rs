//! Invariant checks driven by a seed, shared by the property tests and the
//! acceptance run. Each returns a description of the first violation.

use std::sync::Arc;

use padiso::isogeny::{
    compute_multiplication, reconstruct_representation, verify_representation, IsogenySeries, PipelineOptions,
};
use padiso::ode::random_generic_problem;
use padiso::pade::expand;
use padiso::series::compose_poly;
use padiso::{
    cantor_add, diff_solve, diff_solve_with, divisor_from_point, naive_solve, pade_reconstruct, required_precision,
    scalar_mul, HyperellipticCurve, MulAlgorithm, MumfordDivisor, PadicContext, Poly, Schedule, SeriesVector,
    TruncSeries,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 19];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn context(seed: u64) -> Arc<PadicContext> {
    let mut r = rng(seed ^ 0xc0de);
    let p = PRIMES[r.gen_range(0..PRIMES.len())];
    let m = r.gen_range(1..=6);
    let d = r.gen_range(1..=3);
    PadicContext::unramified(p, m, d).unwrap()
}

fn random_curve(p: u64, g: usize, r: &mut ChaCha8Rng) -> HyperellipticCurve {
    HyperellipticCurve::random(&PadicContext::new(p, 1).unwrap(), g, r).unwrap()
}

/// Coefficients reduced mod p^digits.
pub fn low_digits(x: &SeriesVector, digits: u32) -> Vec<Vec<Vec<u64>>> {
    let ctx = x.context();
    let modulus = ctx.prime().pow(digits);
    x.entries()
        .iter()
        .map(|s| {
            s.coeffs()
                .iter()
                .map(|c| c.digits()[..ctx.degree()].iter().map(|v| v % modulus).collect())
                .collect()
        })
        .collect()
}

pub fn ring_laws(seed: u64) -> Check {
    let ctx = context(seed);
    let mut r = rng(seed);
    let (a, b, c) = (ctx.random(&mut r), ctx.random(&mut r), ctx.random(&mut r));
    ensure!(
        ctx.mul(&a, &ctx.add(&b, &c)) == ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c)),
        "distributivity fails in {ctx}"
    );
    ensure!(
        ctx.mul(&ctx.mul(&a, &b), &c) == ctx.mul(&a, &ctx.mul(&b, &c)),
        "associativity fails in {ctx}"
    );
    ensure!(ctx.sub(&ctx.add(&a, &b), &b) == a, "subtraction fails in {ctx}");
    let u = ctx.random_unit(&mut r);
    ensure!(
        ctx.is_one(&ctx.mul(&u, &ctx.inv(&u).unwrap())),
        "unit inverse fails in {ctx}"
    );
    match ctx.div(&a, &b) {
        Ok(q) => {
            let back = ctx.mul(&q, &b);
            let err = ctx.valuation(&ctx.sub(&back, &a));
            ensure!(err >= ctx.precision() - ctx.valuation(&b), "inexact quotient in {ctx}");
        }
        Err(_) => ensure!(ctx.valuation(&b) > ctx.valuation(&a), "division refused in {ctx}"),
    }
    Ok(())
}

pub fn multiplication_kernels(seed: u64) -> Check {
    let ctx = context(seed);
    let mut r = rng(seed);
    let len = r.gen_range(1..160);
    let a = TruncSeries::random(&ctx, len, &mut r);
    let b = TruncSeries::random(&ctx, len, &mut r);
    let reference = a.mul_with(&b, MulAlgorithm::Schoolbook).unwrap();
    for alg in [MulAlgorithm::Karatsuba, MulAlgorithm::Ntt, MulAlgorithm::Auto] {
        ensure!(
            a.mul_with(&b, alg).unwrap() == reference,
            "{alg:?} differs at length {len} in {ctx}"
        );
    }
    Ok(())
}

pub fn inverse_and_sqrt(seed: u64) -> Check {
    let ctx = context(seed);
    let mut r = rng(seed);
    let len = r.gen_range(1..100);
    let mut a = TruncSeries::random(&ctx, len, &mut r);
    a.coeffs_mut()[0] = ctx.random_unit(&mut r);
    ensure!(
        a.mul(&a.inverse().unwrap()).unwrap() == TruncSeries::one(&ctx, len),
        "inverse fails in {ctx}"
    );
    if ctx.prime() != 2 {
        let y0 = a.coeff(0);
        let sq = a.mul(&a).unwrap();
        let root = sq.sqrt(&y0).unwrap();
        ensure!(
            root.mul(&root).unwrap() == sq && root.coeff(0) == y0,
            "square root fails in {ctx}"
        );
    }
    Ok(())
}

pub fn pade(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(1..PRIMES.len())];
    let fp = PadicContext::new(p, 1).unwrap();
    let (dn, dd) = (r.gen_range(0..30), r.gen_range(0..30));
    let num = Poly::random(&fp, dn, &mut r);
    let mut den = Poly::random(&fp, dd, &mut r).into_coeffs();
    den.resize(dd + 1, fp.zero());
    den[0] = fp.one();
    let den = Poly::new(&fp, den);
    let n = dn + dd + 1 + r.gen_range(0..5);
    let s = expand(&num, &den, n).unwrap();
    let fast = pade_reconstruct(&fp, &s, dn, dd, true).map_err(|e| e.to_string())?;
    let naive = pade_reconstruct(&fp, &s, dn, dd, false).map_err(|e| e.to_string())?;
    ensure!(fast == naive, "half-gcd and Euclid differ for ({dn}, {dd}) over F_{p}");
    ensure!(
        fast.numerator.mul(&den) == num.mul(&fast.denominator),
        "wrong fraction for ({dn}, {dd}) over F_{p}"
    );
    Ok(())
}

pub fn cantor_group_laws(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = [3u64, 5, 7, 11, 13][r.gen_range(0..5)];
    let g = r.gen_range(1..=3);
    // tiny fields can have no non-Weierstrass points at all
    let degree = (1..).find(|&d| p.pow(d) >= 100).unwrap() as usize;
    let ext = PadicContext::unramified(p, 1, degree).unwrap();
    let curve = random_curve(p, g, &mut r).base_change(&ext).unwrap();
    let d: Vec<_> = (0..3)
        .map(|_| divisor_from_point(&curve, &curve.random_point(&mut r).unwrap()).unwrap())
        .collect();
    let add = |a: &MumfordDivisor, b: &MumfordDivisor| -> MumfordDivisor { cantor_add(&curve, a, b).unwrap() };
    ensure!(
        add(&add(&d[0], &d[1]), &d[2]) == add(&d[0], &add(&d[1], &d[2])),
        "addition not associative"
    );
    ensure!(add(&d[0], &d[1]) == add(&d[1], &d[0]), "addition not commutative");
    ensure!(add(&d[0], &d[0].neg()).is_identity(), "negation fails");
    let (j, k) = (r.gen_range(0..40u64), r.gen_range(0..40u64));
    let mul = |k| scalar_mul(&curve, k, &d[2]).unwrap();
    ensure!(
        mul(j + k) == add(&mul(j), &mul(k)),
        "[{j}+{k}] differs from [{j}] + [{k}]"
    );
    Ok(())
}

/// Solutions at the required precision and four digits above agree on the
/// target digits.
pub fn precision_stability_for(p: u64, seed: u64) -> Check {
    let mut r = rng(seed);
    let dim = r.gen_range(1..=3);
    let n = r.gen_range(1..=200);
    let digits = r.gen_range(1..=3);
    let m = required_precision(p, digits, n);
    let high = PadicContext::new(p, m + 4).unwrap();
    let (prob_high, _) = random_generic_problem(&high, dim, n, digits, 3, &mut r).unwrap();
    let low = PadicContext::new(p, m).unwrap();
    let prob_low = prob_high.to_context(&low).unwrap();
    let x_high = diff_solve(&prob_high).map_err(|e| e.to_string())?.x;
    let x_low = diff_solve(&prob_low).map_err(|e| e.to_string())?.x;
    ensure!(
        low_digits(&x_high, digits) == low_digits(&x_low, digits),
        "p = {p}, g = {dim}, n = {n}, N = {digits}: M = {m} and M + 4 disagree"
    );
    Ok(())
}

fn small_prime(seed: u64) -> u64 {
    [2u64, 3, 5, 7][rng(seed ^ 0xbeef).gen_range(0..4)]
}

pub fn precision_stability(seed: u64) -> Check {
    precision_stability_for(small_prime(seed), seed)
}

/// Newton solver (both schedules) against the term-by-term solver, mod p^N.
pub fn newton_matches_naive_for(p: u64, seed: u64) -> Check {
    let mut r = rng(seed);
    let dim = r.gen_range(1..=3);
    let n = r.gen_range(1..=200);
    let digits = r.gen_range(1..=3);
    let ctx = PadicContext::new(p, required_precision(p, digits, n)).unwrap();
    let (prob, _) = random_generic_problem(&ctx, dim, n, digits, 3, &mut r).unwrap();
    let naive = low_digits(&naive_solve(&prob).map_err(|e| e.to_string())?, digits);
    for schedule in [Schedule::Doubling, Schedule::Halving] {
        let x = diff_solve_with(&prob, schedule).map_err(|e| e.to_string())?.x;
        ensure!(
            low_digits(&x, digits) == naive,
            "p = {p}, g = {dim}, n = {n}: {schedule:?} differs from naive"
        );
    }
    Ok(())
}

pub fn newton_matches_naive(seed: u64) -> Check {
    newton_matches_naive_for(small_prime(seed), seed)
}

/// Multiplication by l for g in {2, 3}, p in {7, 11}: curve equation for the
/// image series, degree bounds, independence from the order of the image
/// points, and agreement with Cantor arithmetic.
pub fn multiplication_mode(seed: u64, trials: usize) -> Check {
    let mut r = rng(seed);
    let p = [7u64, 11][r.gen_range(0..2)];
    let g = r.gen_range(2..=3);
    let ell = r.gen_range(1..=3);
    let curve = random_curve(p, g, &mut r);
    let out =
        compute_multiplication(&curve, ell, None, &PipelineOptions::default(), &mut r).map_err(|e| e.to_string())?;
    let rep = &out.representation;
    let tag = format!("(g, p, l) = ({g}, {p}, {ell})");
    if let (Some(prob), Some(series)) = (&out.problem, &out.series) {
        let image = prob.codomain.base_change(&series.ctx).unwrap();
        for (x, y) in series.xs.iter().zip(&series.ys) {
            let x0 = x.coeff(0);
            let mut shifted = x.clone();
            shifted.coeffs_mut()[0] = series.ctx.zero();
            let fx = compose_poly(&series.ctx, image.f().taylor_shift(&x0).coeffs(), &shifted).unwrap();
            ensure!(y.mul(y).unwrap() == fx, "{tag}: image point off the curve");
        }
        let fits = |f: &padiso::isogeny::Fraction, b: usize| {
            f.numerator.deg() <= b as isize && f.denominator.deg() <= b as isize
        };
        ensure!(
            rep.sigma.iter().all(|f| fits(f, prob.bounds.sigma)),
            "{tag}: sigma degree above bound"
        );
        ensure!(
            rep.rho_over_v.iter().zip(&prob.bounds.rho).all(|(f, &b)| fits(f, b)),
            "{tag}: rho degree above bound"
        );
        let mut perm: Vec<usize> = (0..series.xs.len()).collect();
        perm.rotate_left(1);
        let permuted = IsogenySeries {
            ctx: series.ctx.clone(),
            xs: perm.iter().map(|&i| series.xs[i].clone()).collect(),
            ys: perm.iter().map(|&i| series.ys[i].clone()).collect(),
            v: series.v.clone(),
        };
        ensure!(
            reconstruct_representation(&permuted, prob, true).map_err(|e| e.to_string())? == *rep,
            "{tag}: depends on the order of image points"
        );
    }
    let report = verify_representation(rep, &curve, ell, trials, &mut r).map_err(|e| e.to_string())?;
    ensure!(report.all_passed(), "{tag}: {report:?}");
    Ok(())
}
