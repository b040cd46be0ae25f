pub mod error;
pub mod hyperelliptic;
pub mod isogeny;
pub mod job;
pub mod linalg;
pub mod ntt;
pub mod ode;
pub mod pade;
pub mod padic;
pub mod poly;
pub mod series;

pub use error::{Error, Result};
pub use hyperelliptic::{
    cantor_add, divisor_from_point, divisor_from_points, divisor_points, hensel_lift_point, multiple_of_point,
    scalar_mul, CurvePoint, DivisorSupport, HyperellipticCurve, MumfordDivisor,
};
pub use linalg::{gauss_jordan_inverse, inverse_newton_step, SeriesMatrix, SeriesVector};
pub use ode::{
    diff_solve, diff_solve_with, naive_solve, required_precision, GenericSeriesH, HEvaluator, HyperellipticH,
    OdeProblem, OdeSolution, Schedule,
};
pub use pade::{pade_reconstruct, PadeApproximant};
pub use padic::{Elem, PadicContext, PadicElement, ResidueElement};
pub use poly::{Poly, ResiduePoly};
pub use series::{MulAlgorithm, TruncSeries};
