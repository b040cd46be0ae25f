//! From curve data to the rational representation of an isogeny between
//! hyperelliptic Jacobians: build the differential system, solve it,
//! reconstruct fractions over the residue field, and check them against
//! Jacobian arithmetic.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hyperelliptic::{
    divisor_from_point, divisor_points, hensel_lift_point, multiple_of_point, scalar_mul, CurvePoint, DivisorSupport,
    HyperellipticCurve, MumfordDivisor,
};
use crate::linalg::SeriesVector;
use crate::ode::{diff_solve_with, required_precision, HyperellipticH, OdeProblem, Schedule};
use crate::pade::{is_certified, pade_reconstruct};
use crate::padic::{Elem, PadicContext};
use crate::poly::Poly;
use crate::series::{compose_poly, TruncSeries};

/// Degree bounds for the fractions in `u`, and the series order they need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    /// `l` for an (l,...,l)-isogeny, `l^2` for multiplication by `l`.
    pub ell_eff: u64,
    /// Numerator and denominator bound shared by every `sigma_i`.
    pub sigma: usize,
    /// Bound for `rho_i / v`, `i = 1..g`.
    pub rho: Vec<usize>,
    /// Default series order `2 * max bound + 2`.
    pub order: usize,
}

pub fn degree_bounds(multiplication: bool, g: usize, ell: u64, degf2: usize) -> DegreeBounds {
    let ell_eff = if multiplication { ell * ell } else { ell };
    let gl = g * ell_eff as usize;
    let odd = degf2 == 2 * g + 1;
    let rho: Vec<usize> = (1..=g)
        .map(|i| {
            if odd {
                (2 * i + 1) * gl + 3
            } else {
                (2 * i + 2) * gl + 3
            }
        })
        .collect();
    let max = rho.iter().copied().max().unwrap_or(0).max(gl);
    DegreeBounds {
        ell_eff,
        sigma: gl,
        rho,
        order: 2 * max + 2,
    }
}

/// What the isogeny is.
#[derive(Clone, Debug)]
pub enum IsogenyKind {
    /// Multiplication by `l` on the domain's Jacobian.
    Multiplication,
    /// An (l,...,l)-isogeny given by its codomain, normalization matrix and
    /// the image of the base point's class.
    Supplied,
}

#[derive(Clone, Debug)]
pub struct IsogenyProblem {
    pub kind: IsogenyKind,
    pub ell: u64,
    /// Domain curve over `Z/p^M`.
    pub domain: HyperellipticCurve,
    /// Codomain curve over `Z/p^M` (the domain in multiplication mode).
    pub codomain: HyperellipticCurve,
    /// `g x g`, row-major.
    pub normalization: Vec<Elem>,
    /// Base point `(u_Q, v_Q)` on the domain, `v_Q` a unit.
    pub base: CurvePoint,
    /// Class of the image of `Q - infinity` on the codomain.
    pub initial_divisor: MumfordDivisor,
    /// Series order `n`: the solution is computed modulo `t^(n+1)`.
    pub order: usize,
    pub target_digits: u32,
    pub bounds: DegreeBounds,
}

fn base_coords(q: &CurvePoint) -> Result<(Elem, Elem)> {
    match q {
        CurvePoint::Affine { x, y } => Ok((*x, *y)),
        CurvePoint::Infinity => Err(Error::InvalidParameter("base point must be affine".into())),
    }
}

impl IsogenyProblem {
    /// Supplied isogeny; every datum already lives at the working precision.
    #[allow(clippy::too_many_arguments)]
    pub fn supplied(
        domain: HyperellipticCurve,
        codomain: HyperellipticCurve,
        normalization: Vec<Elem>,
        base: CurvePoint,
        initial_divisor: MumfordDivisor,
        ell: u64,
        order: Option<usize>,
        target_digits: u32,
    ) -> Result<Self> {
        let g = domain.genus();
        if codomain.genus() != g {
            return Err(Error::InvalidParameter("domain and codomain genera differ".into()));
        }
        if normalization.len() != g * g {
            return Err(Error::Shape(format!("normalization matrix needs {} entries", g * g)));
        }
        let bounds = degree_bounds(false, g, ell, codomain.f().deg() as usize);
        let prob = IsogenyProblem {
            kind: IsogenyKind::Supplied,
            ell,
            domain,
            codomain,
            normalization,
            base,
            initial_divisor,
            order: order.unwrap_or(bounds.order),
            target_digits,
            bounds,
        };
        prob.check()?;
        Ok(prob)
    }

    /// Multiplication by `l` on the Jacobian of `curve` (over F_p or any
    /// precision; lifted with zero upper digits), from a residue-field base
    /// point. The working precision is `precision`, or the one required by
    /// the solver.
    pub fn multiplication(
        curve: &HyperellipticCurve,
        ell: u64,
        base: &CurvePoint,
        order: Option<usize>,
        precision: Option<u32>,
        target_digits: u32,
    ) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParameter("l must be positive".into()));
        }
        let ctx = curve.context();
        if ctx.degree() != 1 {
            return Err(Error::InvalidParameter("curve must be defined over Z/p^M".into()));
        }
        let g = curve.genus();
        let bounds = degree_bounds(true, g, ell, curve.f().deg() as usize);
        let order = order.unwrap_or(bounds.order);
        let p = ctx.prime();
        let m = precision.unwrap_or_else(|| required_precision(p, target_digits, order));
        let work = PadicContext::new(p, m)?;
        let domain = curve.to_context(&work)?;
        let (bx, by) = base_coords(base)?;
        let res = ctx.residue_field();
        let q = hensel_lift_point(
            &domain,
            &work.convert_from(&res, &res.convert_from(ctx, &bx)),
            &res.convert_from(ctx, &by),
        )?;
        let initial_divisor = multiple_of_point(&domain, ell, &q)?;
        let scalar = work.from_u64(ell);
        let normalization = (0..g * g)
            .map(|k| if k % (g + 1) == 0 { scalar } else { work.zero() })
            .collect();
        let prob = IsogenyProblem {
            kind: IsogenyKind::Multiplication,
            ell,
            codomain: domain.clone(),
            domain,
            normalization,
            base: q,
            initial_divisor,
            order,
            target_digits,
            bounds,
        };
        prob.check()?;
        Ok(prob)
    }

    fn check(&self) -> Result<()> {
        let ctx = self.domain.context();
        if ctx.degree() != 1 {
            return Err(Error::InvalidParameter("curves must be defined over Z/p^M".into()));
        }
        if !PadicContext::same(ctx, self.codomain.context()) {
            return Err(Error::ContextMismatch);
        }
        let (x, y) = base_coords(&self.base)?;
        if !self.domain.contains(&x, &y) {
            return Err(Error::NotOnCurve);
        }
        if !ctx.is_unit(&y) {
            return Err(Error::Weierstrass);
        }
        let g = self.genus();
        crate::linalg::invert_constant(ctx, g, &self.normalization)
            .map_err(|_| Error::NotInvertible("normalization matrix is not invertible".into()))?;
        if self.order == 0 {
            return Err(Error::InvalidParameter("series order must be positive".into()));
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.domain.genus()
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.domain.context()
    }

    pub fn required_precision(&self) -> u32 {
        required_precision(self.context().prime(), self.target_digits, self.order)
    }
}

/// The differential system of an isogeny problem, over the extension
/// holding the initial divisor's support.
pub struct IsogenySystem {
    pub ode: OdeProblem,
    pub support: DivisorSupport,
    /// `v(t) = sqrt(f_1(u_Q + t))` over `Z/p^M`, modulo `t^(n+1)`.
    pub v: TruncSeries,
}

pub fn build_system(prob: &IsogenyProblem) -> Result<IsogenySystem> {
    let ctx = prob.context();
    let g = prob.genus();
    let n = prob.order;
    let (uq, vq) = base_coords(&prob.base)?;
    let support = divisor_points(&prob.codomain, &prob.initial_divisor)?;
    let ext = support.ctx.clone();

    let t = TruncSeries::variable(ctx, n + 1);
    let f_at = compose_poly(ctx, prob.domain.f().taylor_shift(&uq).coeffs(), &t)?;
    let v = f_at.sqrt(&vq)?;
    let vinv = v.truncate(n).inverse()?;
    // row i: (m_i1 + m_i2 u + ... + m_ig u^(g-1)) / v at u = u_Q + t
    let mut rows = Vec::with_capacity(g);
    for i in 0..g {
        let row = Poly::new(ctx, prob.normalization[i * g..(i + 1) * g].to_vec());
        let num = TruncSeries::new(ctx, row.taylor_shift(&uq).into_coeffs()).resized(n);
        rows.push(num.mul_to(&vinv, n).embed(&ext)?);
    }
    let gvec = SeriesVector::new(&ext, rows)?;
    let curve = prob.codomain.base_change(&ext)?;
    let h = HyperellipticH::new(curve.f(), support.xs(), support.ys())?;
    let ode = OdeProblem::new(Box::new(h), gvec, n, prob.target_digits)?;
    Ok(IsogenySystem { ode, support, v })
}

/// The image of the formal point: `x_i(t), y_i(t)` modulo `t^(n+1)` over the
/// support's extension, and `v(t)` over `Z/p^M`.
#[derive(Clone, Debug)]
pub struct IsogenySeries {
    pub ctx: Arc<PadicContext>,
    pub xs: Vec<TruncSeries>,
    pub ys: Vec<TruncSeries>,
    pub v: TruncSeries,
}

pub fn solve_isogeny(prob: &IsogenyProblem, schedule: Schedule) -> Result<IsogenySeries> {
    let sys = build_system(prob)?;
    let sol = diff_solve_with(&sys.ode, schedule)?;
    let ext = sys.support.ctx.clone();
    let curve = prob.codomain.base_change(&ext)?;
    let n = prob.order;
    let mut xs = Vec::with_capacity(prob.genus());
    let mut ys = Vec::with_capacity(prob.genus());
    for (j, (x0, y0)) in sys.support.xs().iter().zip(sys.support.ys()).enumerate() {
        let shifted = sol.x.entry(j).clone();
        let fx = compose_poly(&ext, curve.f().taylor_shift(x0).coeffs(), &shifted)?;
        ys.push(fx.sqrt(&y0)?);
        let mut x = shifted;
        x.coeffs_mut()[0] = *x0;
        xs.push(x);
    }
    debug_assert!(xs.iter().all(|x| x.order() == n + 1));
    Ok(IsogenySeries {
        ctx: ext,
        xs,
        ys,
        v: sys.v,
    })
}

/// A fraction in `u` over the residue field, denominator monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub numerator: Poly,
    pub denominator: Poly,
    /// Reconstructed from enough terms for the proven degree bounds (always
    /// true for closed forms).
    pub certified: bool,
}

impl Fraction {
    fn normalized(numerator: Poly, denominator: Poly, certified: bool) -> Result<Self> {
        let g = numerator.gcd(&denominator)?;
        let (mut num, _) = numerator.divrem(&g)?;
        let (mut den, _) = denominator.divrem(&g)?;
        let inv = num.context().inv(&den.leading())?;
        num = num.scale(&inv);
        den = den.scale(&inv);
        Ok(Fraction {
            numerator: num,
            denominator: den,
            certified,
        })
    }

    /// Value at `u` in an extension of the residue field, `None` at a pole.
    pub fn eval(&self, ext: &Arc<PadicContext>, u: &Elem) -> Result<Option<Elem>> {
        let d = self.denominator.embed(ext)?.eval(u);
        if ext.is_zero(&d) {
            return Ok(None);
        }
        Ok(Some(ext.div(&self.numerator.embed(ext)?.eval(u), &d)?))
    }
}

/// `(sigma_1..sigma_d, rho_1/v..rho_d/v)` with `U = X^d + sigma_1 X^(d-1) + ...`
/// and `V = rho_1 X^(d-1) + ... + rho_d` the image of `Q - infinity` for a
/// generic point `Q = (u, v)`; `d` is `image_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRepresentation {
    pub image_degree: usize,
    pub sigma: Vec<Fraction>,
    pub rho_over_v: Vec<Fraction>,
}

/// Series coefficients of a base-ring quantity computed in an extension,
/// reduced to F_p.
fn project_to_residue(s: &TruncSeries) -> Result<Vec<Elem>> {
    let ext = s.context();
    let res = ext.residue_field();
    let base = PadicContext::new(ext.prime(), 1)?;
    s.to_residue()
        .coeffs()
        .iter()
        .map(|c| {
            if !res.is_base(c) {
                return Err(Error::Reconstruction(
                    "symmetric function is not defined over the base".into(),
                ));
            }
            Ok(base.from_u64(c.digits()[0]))
        })
        .collect()
}

/// Padé-reconstruct a series in `t = u - u_Q` within `(bound, bound)`, or
/// within the largest balanced bounds the available terms allow (then
/// flagged uncertified), and move it back to the variable `u`.
fn reconstruct_component(
    fp: &Arc<PadicContext>,
    coeffs: &[Elem],
    bound: usize,
    uq: &Elem,
    fast: bool,
) -> Result<Fraction> {
    let terms = coeffs.len();
    let (b, full) = if terms > 2 * bound {
        (bound, true)
    } else {
        ((terms.max(1) - 1) / 2, false)
    };
    let approx = pade_reconstruct(fp, coeffs, b, b, fast)?;
    let certified = full && is_certified(&approx, b, b, terms);
    let back = fp.neg(uq);
    Fraction::normalized(
        approx.numerator.taylor_shift(&back),
        approx.denominator.taylor_shift(&back),
        certified,
    )
}

/// Coefficients, low to high in `X`, of `prod (X - r_j)` for series `r_j`.
fn product_of_linears(ctx: &Arc<PadicContext>, roots: &[&TruncSeries], order: usize) -> Vec<TruncSeries> {
    let mut acc = vec![TruncSeries::one(ctx, order)];
    for r in roots {
        let mut next = vec![TruncSeries::zero(ctx, order); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].add_unchecked(c);
            next[k] = next[k].sub_unchecked(&c.mul_to(r, order));
        }
        acc = next;
    }
    acc
}

/// Symmetric functions of the image points, reduced mod p and turned into
/// fractions in `u`.
pub fn reconstruct_representation(
    series: &IsogenySeries,
    prob: &IsogenyProblem,
    fast: bool,
) -> Result<RationalRepresentation> {
    let ext = &series.ctx;
    let g = series.xs.len();
    let order = series.xs.first().map(|x| x.order()).unwrap_or(0);
    let fp = PadicContext::new(ext.prime(), 1)?;
    let (uq, _) = base_coords(&prob.base)?;
    let uq = fp.from_u64(uq.digits()[0]);

    let xs: Vec<&TruncSeries> = series.xs.iter().collect();
    let u_coeffs = product_of_linears(ext, &xs, order);
    let mut v_coeffs = vec![TruncSeries::zero(ext, order); g];
    for j in 0..g {
        let others: Vec<&TruncSeries> = (0..g).filter(|&i| i != j).map(|i| xs[i]).collect();
        let mut denom = TruncSeries::one(ext, order);
        for o in &others {
            denom = denom.mul_to(&xs[j].sub_unchecked(o), order);
        }
        let weight = series.ys[j].mul_to(&denom.inverse()?, order);
        for (k, c) in product_of_linears(ext, &others, order).iter().enumerate() {
            v_coeffs[k] = v_coeffs[k].add_unchecked(&c.mul_to(&weight, order));
        }
    }
    let vinv = series.v.truncate(order).inverse()?.embed(ext)?;

    let mut sigma = Vec::with_capacity(g);
    let mut rho_over_v = Vec::with_capacity(g);
    for i in 1..=g {
        let s = project_to_residue(&u_coeffs[g - i])?;
        sigma.push(reconstruct_component(&fp, &s, prob.bounds.sigma, &uq, fast)?);
        let r = project_to_residue(&v_coeffs[g - i].mul_to(&vinv, order))?;
        rho_over_v.push(reconstruct_component(&fp, &r, prob.bounds.rho[i - 1], &uq, fast)?);
    }
    Ok(RationalRepresentation {
        image_degree: g,
        sigma,
        rho_over_v,
    })
}

fn binomials(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![1u64]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let row = (0..=m)
            .map(|k| {
                let a = if k > 0 { prev[k - 1] } else { 0 };
                let b = if k < m { prev[k] } else { 0 };
                (a + b) % p
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Multiplication by `l <= g`: `[l](Q - inf)` is `l Q - l inf`, already
/// reduced, so `U = (X - u)^l` and `V` is the degree `< l` Taylor polynomial
/// of `sqrt f` at `u`. Writing `sqrt f(u + s) = v sum r_k s^k` with
/// `r_k = A_k / f^k`, the recurrence `A_0 = 1`,
/// `A_k = (F_k f^(k-1) - sum_{0<i<k} A_i A_{k-i}) / 2` with `F_k` the `s^k`
/// coefficient of `f(u + s)` gives everything as fractions in `u`.
pub fn closed_form_representation(curve: &HyperellipticCurve, ell: u64) -> Result<RationalRepresentation> {
    let fp = curve.context().residue_field();
    let p = fp.prime();
    let f = curve.f().to_residue();
    let g = curve.genus();
    let l = ell as usize;
    if l == 0 || l > g {
        return Err(Error::InvalidParameter(format!(
            "closed form needs 1 <= l <= g, got l = {ell}"
        )));
    }
    let degf = f.deg() as usize;
    let binom = binomials(degf.max(l), p);
    let monomial_scaled = |c: u64, k: usize| Poly::monomial(&fp, k).scale(&fp.from_u64(c));
    // F_k(u) = sum_m C(m, k) f_m u^(m - k)
    let taylor: Vec<Poly> = (0..l)
        .map(|k| {
            (k..=degf).fold(Poly::zero(&fp), |acc, m| {
                acc.add(&monomial_scaled(binom[m][k], m - k).scale(&f.coeff(m)))
            })
        })
        .collect();
    let half = fp.inv(&fp.from_u64(2))?;
    let mut a = vec![Poly::one(&fp)];
    for k in 1..l {
        let mut t = taylor[k].mul(&f.pow(k as u64 - 1));
        for i in 1..k {
            t = t.sub(&a[i].mul(&a[k - i]));
        }
        a.push(t.scale(&half));
    }
    let minus_u = Poly::monomial(&fp, 1).neg();
    let den = f.pow(l as u64 - 1);
    let mut sigma = Vec::with_capacity(l);
    let mut rho_over_v = Vec::with_capacity(l);
    for i in 1..=l {
        let s = minus_u.pow(i as u64).scale(&fp.from_u64(binom[l][i]));
        sigma.push(Fraction::normalized(s, Poly::one(&fp), true)?);
        let j = l - i;
        let mut num = Poly::zero(&fp);
        for k in j..l {
            let term = a[k]
                .mul(&f.pow((l - 1 - k) as u64))
                .mul(&minus_u.pow((k - j) as u64))
                .scale(&fp.from_u64(binom[k][j]));
            num = num.add(&term);
        }
        rho_over_v.push(Fraction::normalized(num, den.clone(), true)?);
    }
    Ok(RationalRepresentation {
        image_degree: l,
        sigma,
        rho_over_v,
    })
}

/// Outcome of checking a representation of multiplication by `l` against
/// Cantor arithmetic at random points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Points skipped because they hit a pole or a non-generic image.
    pub skipped: usize,
    /// Field size the points were drawn from.
    pub field_size: u64,
    pub first_counterexample: Option<String>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.passed == self.trials
    }
}

/// Smallest extension degree making the residue field hold at least 1000
/// elements, so random points avoid the few exceptional ones.
fn verification_degree(p: u64) -> usize {
    let mut d = 1;
    let mut q = p;
    while q < 1000 && d < crate::padic::MAX_EXT_DEGREE {
        q = q.saturating_mul(p);
        d += 1;
    }
    d
}

/// Compare `rep` with `[l](Q' - inf)` computed by double-and-add for
/// `trials` random points `Q'` over an extension of the residue field.
pub fn verify_representation<R: Rng + ?Sized>(
    rep: &RationalRepresentation,
    curve: &HyperellipticCurve,
    ell: u64,
    trials: usize,
    rng: &mut R,
) -> Result<VerifyReport> {
    let base = curve.to_residue()?;
    let p = base.context().prime();
    let ext = PadicContext::unramified(p, 1, verification_degree(p))?;
    let curve = base.base_change(&ext)?;
    let d = rep.image_degree;
    let mut report = VerifyReport {
        trials,
        passed: 0,
        failed: 0,
        skipped: 0,
        field_size: p.pow(ext.degree() as u32),
        first_counterexample: None,
    };
    let mut attempts = 0;
    while report.passed + report.failed < trials {
        attempts += 1;
        if attempts > 50 * trials.max(1) {
            return Err(Error::Genericity("too many points skipped during verification".into()));
        }
        let q = curve.random_point(rng)?;
        let (u, v) = (q.x().expect("affine"), q.y().expect("affine"));
        let image = scalar_mul(&curve, ell, &divisor_from_point(&curve, &q)?)?;
        if image.degree() != d {
            report.skipped += 1;
            continue;
        }
        let mut values = Vec::with_capacity(2 * d);
        for frac in rep.sigma.iter().chain(&rep.rho_over_v) {
            values.push(frac.eval(&ext, &u)?);
        }
        if values.iter().any(|x| x.is_none()) {
            report.skipped += 1;
            continue;
        }
        let values: Vec<Elem> = values.into_iter().map(|x| x.expect("checked")).collect();
        let mut mismatch = None;
        for i in 1..=d {
            let want_u = image.u().coeff(d - i);
            let want_v = image.v().coeff(d - i);
            if values[i - 1] != want_u {
                mismatch = Some(format!("sigma_{i}"));
                break;
            }
            if ext.mul(&values[d + i - 1], &v) != want_v {
                mismatch = Some(format!("rho_{i}"));
                break;
            }
        }
        match mismatch {
            None => report.passed += 1,
            Some(which) => {
                report.failed += 1;
                if report.first_counterexample.is_none() {
                    report.first_counterexample = Some(format!(
                        "{which} disagrees at u = {}, v = {}",
                        ext.format(&u),
                        ext.format(&v)
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Tuning knobs shared by the pipeline entry points.
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub order: Option<usize>,
    pub precision: Option<u32>,
    pub target_digits: u32,
    pub fast_gcd: bool,
    pub schedule: Schedule,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            order: None,
            precision: None,
            target_digits: 1,
            fast_gcd: true,
            schedule: Schedule::default(),
        }
    }
}

/// Result of a pipeline run.
#[derive(Clone, Debug)]
pub struct IsogenyOutcome {
    /// Absent when a closed form was used.
    pub problem: Option<IsogenyProblem>,
    pub series: Option<IsogenySeries>,
    pub representation: RationalRepresentation,
    /// Base points tried.
    pub attempts: usize,
    /// Seconds per phase.
    pub timings: Vec<(String, f64)>,
}

const MAX_ATTEMPTS: usize = 10;

/// Errors that a different base point may avoid.
fn is_genericity_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NonUnitInversion(_)
            | Error::RepeatedRoot
            | Error::Weierstrass
            | Error::Degree(_)
            | Error::NotInvertible(_)
            | Error::Genericity(_)
            | Error::Reconstruction(_)
    )
}

type Timings = Vec<(String, f64)>;

fn run_problem(
    prob: &IsogenyProblem,
    opts: &PipelineOptions,
) -> Result<(IsogenySeries, RationalRepresentation, Timings)> {
    let start = Instant::now();
    let series = solve_isogeny(prob, opts.schedule)?;
    let solved = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let rep = reconstruct_representation(&series, prob, opts.fast_gcd)?;
    let rebuilt = start.elapsed().as_secs_f64();
    Ok((
        series,
        rep,
        vec![("solve".into(), solved), ("reconstruct".into(), rebuilt)],
    ))
}

/// Run a supplied problem as given.
pub fn compute_supplied(prob: IsogenyProblem, opts: &PipelineOptions) -> Result<IsogenyOutcome> {
    let (series, representation, timings) = run_problem(&prob, opts)?;
    Ok(IsogenyOutcome {
        problem: Some(prob),
        series: Some(series),
        representation,
        attempts: 1,
        timings,
    })
}

/// Rational representation of multiplication by `l` on the Jacobian of
/// `curve`. Uses the closed form when `l <= g`, else the differential
/// system from a random base point (or `base` first), retrying up to 10
/// base points on genericity failures.
pub fn compute_multiplication<R: Rng + ?Sized>(
    curve: &HyperellipticCurve,
    ell: u64,
    base: Option<CurvePoint>,
    opts: &PipelineOptions,
    rng: &mut R,
) -> Result<IsogenyOutcome> {
    if !curve.is_odd_degree() {
        return Err(Error::InvalidParameter(
            "multiplication by l needs an odd-degree model".into(),
        ));
    }
    if ell == 0 {
        return Err(Error::InvalidParameter("l must be positive".into()));
    }
    if ell as usize <= curve.genus() {
        let start = Instant::now();
        let representation = closed_form_representation(curve, ell)?;
        return Ok(IsogenyOutcome {
            problem: None,
            series: None,
            representation,
            attempts: 0,
            timings: vec![("closed_form".into(), start.elapsed().as_secs_f64())],
        });
    }
    let residue = curve.to_residue()?;
    let mut last = None;
    for attempt in 1..=MAX_ATTEMPTS {
        let q = match (attempt, &base) {
            (1, Some(q)) => *q,
            _ => residue.random_point(rng)?,
        };
        let result = IsogenyProblem::multiplication(curve, ell, &q, opts.order, opts.precision, opts.target_digits)
            .and_then(|prob| run_problem(&prob, opts).map(|r| (prob, r)));
        match result {
            Ok((prob, (series, representation, timings))) => {
                return Ok(IsogenyOutcome {
                    problem: Some(prob),
                    series: Some(series),
                    representation,
                    attempts: attempt,
                    timings,
                })
            }
            Err(e) if is_genericity_failure(&e) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}
