mod common;

use common::*;
use padiso::isogeny::{
    compute_multiplication, compute_supplied, degree_bounds, verify_representation, PipelineOptions,
    RationalRepresentation,
};
use padiso::{divisor_from_point, scalar_mul, CurvePoint, HyperellipticCurve, PadicContext, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_curve(p: u64, g: usize, rng: &mut ChaCha8Rng) -> HyperellipticCurve {
    let ctx = PadicContext::new(p, 1).unwrap();
    loop {
        if let Ok(c) = HyperellipticCurve::new(Poly::random_monic(&ctx, 2 * g + 1, rng)) {
            return c;
        }
    }
}

fn mult(p: u64, g: usize, ell: u64, seed: u64) -> (HyperellipticCurve, RationalRepresentation, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = random_curve(p, g, &mut rng);
    let out = compute_multiplication(&curve, ell, None, &PipelineOptions::default(), &mut rng).unwrap();
    (curve, out.representation, rng)
}

#[test]
fn multiplication_passes_cantor_oracle() {
    for (g, p, ell) in [
        (2, 7, 1),
        (2, 7, 2),
        (2, 7, 3),
        (2, 11, 3),
        (3, 7, 2),
        (3, 11, 1),
        (3, 11, 3),
    ] {
        let (curve, rep, mut rng) = mult(p, g, ell, 17 + ell);
        let report = verify_representation(&rep, &curve, ell, 30, &mut rng).unwrap();
        assert!(report.all_passed(), "(g, p, l) = ({g}, {p}, {ell}): {report:?}");
    }
}

#[test]
fn multiplication_by_one_is_the_identity() {
    let (_, rep, _) = mult(7, 2, 1, 3);
    let fp = PadicContext::new(7, 1).unwrap();
    assert_eq!(rep.image_degree, 1);
    // U = X - u, V = v
    assert_eq!(rep.sigma[0].numerator, Poly::monomial(&fp, 1).neg());
    assert_eq!(rep.sigma[0].denominator, Poly::one(&fp));
    assert_eq!(rep.rho_over_v[0].numerator, Poly::one(&fp));
    assert_eq!(rep.rho_over_v[0].denominator, Poly::one(&fp));
}

#[test]
fn doubling_matches_cantor_at_points_of_the_base_field() {
    let (curve, rep, mut rng) = mult(7, 2, 2, 5);
    let fp = curve.context().clone();
    let mut checked = 0;
    for _ in 0..200 {
        if checked == 20 {
            break;
        }
        let q = curve.random_point(&mut rng).unwrap();
        let (u, v) = (q.x().unwrap(), q.y().unwrap());
        let image = scalar_mul(&curve, 2, &divisor_from_point(&curve, &q).unwrap()).unwrap();
        let values: Option<Vec<_>> = rep
            .sigma
            .iter()
            .chain(&rep.rho_over_v)
            .map(|f| f.eval(&fp, &u).unwrap())
            .collect();
        let Some(values) = values else { continue };
        if image.degree() != 2 {
            continue;
        }
        assert_eq!(values[0], image.u().coeff(1));
        assert_eq!(values[1], image.u().coeff(0));
        assert_eq!(fp.mul(&values[2], &v), image.v().coeff(1));
        assert_eq!(fp.mul(&values[3], &v), image.v().coeff(0));
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} usable points");
}

#[test]
fn corrupted_representation_is_reported() {
    let (curve, mut rep, mut rng) = mult(7, 2, 3, 9);
    let fp = curve.context().clone();
    let num = &mut rep.sigma[1].numerator;
    *num = num.add(&Poly::monomial(&fp, 2));
    let report = verify_representation(&rep, &curve, 3, 20, &mut rng).unwrap();
    assert!(!report.all_passed());
    assert!(report.failed > 0);
    let example = report.first_counterexample.unwrap();
    assert!(example.starts_with("sigma_2"), "{example}");
}

#[test]
fn reconstructed_degrees_respect_bounds() {
    for (g, p, ell) in [(2, 7, 3), (2, 11, 4), (3, 7, 4)] {
        let (curve, rep, _) = mult(p, g, ell, 23);
        let b = degree_bounds(true, g, ell, curve.f().deg() as usize);
        for f in &rep.sigma {
            assert!(f.numerator.deg() <= b.sigma as isize && f.denominator.deg() <= b.sigma as isize);
            assert!(f.certified);
        }
        for (f, &bound) in rep.rho_over_v.iter().zip(&b.rho) {
            assert!(f.numerator.deg() <= bound as isize && f.denominator.deg() <= bound as isize);
            assert!(f.certified);
        }
    }
    let out = compute_supplied(golden_problem(), &PipelineOptions::default()).unwrap();
    let b = &out.problem.as_ref().unwrap().bounds;
    for f in &out.representation.sigma {
        assert!(f.numerator.deg() <= b.sigma as isize && f.denominator.deg() <= b.sigma as isize);
    }
}

#[test]
fn support_order_does_not_change_the_representation() {
    let a = compute_supplied(golden_problem(), &PipelineOptions::default()).unwrap();
    let b = compute_supplied(
        problem_with(NORMALIZATION, [SUPPORT[1], SUPPORT[0]], BASE.1),
        &PipelineOptions::default(),
    )
    .unwrap();
    assert_eq!(a.representation.sigma, b.representation.sigma);
    assert_eq!(a.representation.rho_over_v, b.representation.rho_over_v);
}

#[test]
fn conjugate_data_negates_rho_and_fixes_sigma() {
    let a = compute_supplied(golden_problem(), &PipelineOptions::default()).unwrap();
    let conj = SUPPORT.map(|(x, y)| (x, -y));
    let b = compute_supplied(problem_with(NORMALIZATION, conj, -BASE.1), &PipelineOptions::default()).unwrap();
    let (sa, sb) = (a.series.unwrap(), b.series.unwrap());
    // one digit is guaranteed at this precision
    let digit = |s: &padiso::TruncSeries| s.to_residue().to_strings();
    for (xa, xb) in sa.xs.iter().zip(&sb.xs) {
        assert_eq!(digit(xa), digit(xb));
    }
    // y_i, hence the V coefficients, change sign, and so does v
    for (ya, yb) in sa.ys.iter().zip(&sb.ys) {
        assert_eq!(digit(&ya.neg()), digit(yb));
    }
    assert_eq!(sa.v.neg(), sb.v);
    assert_eq!(a.representation.sigma, b.representation.sigma);
    assert_eq!(a.representation.rho_over_v, b.representation.rho_over_v);
}

#[test]
fn conjugate_base_point_in_multiplication_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let curve = random_curve(7, 2, &mut rng);
    let q = curve.random_point(&mut rng).unwrap();
    let (u, v) = (q.x().unwrap(), q.y().unwrap());
    let qbar = CurvePoint::Affine {
        x: u,
        y: curve.context().neg(&v),
    };
    let opts = PipelineOptions::default();
    let a = compute_multiplication(&curve, 3, Some(q), &opts, &mut rng).unwrap();
    let b = compute_multiplication(&curve, 3, Some(qbar), &opts, &mut rng).unwrap();
    // the fractions are functions of u alone, so both base points give the same map
    assert_eq!(a.representation, b.representation);
}

#[test]
fn rejects_even_degree_models_for_multiplication() {
    let ctx = PadicContext::new(7, 1).unwrap();
    let curve = HyperellipticCurve::from_i64s(&ctx, &[1, 2, 0, 3, 0, 1, 1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(compute_multiplication(&curve, 3, None, &PipelineOptions::default(), &mut rng).is_err());
}
