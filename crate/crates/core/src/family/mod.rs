//! One-parameter elliptic families over the λ-line.
//!
//! A family is a long Weierstrass model whose coefficients are rational
//! functions of λ over `F_p`. Fibers are converted to short Weierstrass form
//! on specialization, which is lossless for `p > 3`.

mod builtin;
mod parse;
mod scan;

use crate::ec::{Curve, Point};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem, Poly, RationalFunction};
use crate::predict::PredictionModel;

pub use builtin::{builtin_family, BUILTIN_FAMILIES};
pub use parse::{parse_expression, parse_family};
pub use scan::{
    equality_report, scan_closed_points, scan_rational, ClosedPointScan, DegreeStats,
    EqualityReport, EqualityRow, ScanReport, ScanRow, Verdict,
};

/// A rational point `(x(λ), y(λ))` on the generic fiber, expected to have
/// exact order `order` on every good fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub x: RationalFunction,
    pub y: RationalFunction,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: String,
    pub p: u64,
    /// `[a1, a2, a3, a4, a6]`.
    pub coeffs: [RationalFunction; 5],
    /// Vanishes at every bad fiber: user-declared factors, coefficient
    /// poles and zeros of the discriminant.
    pub bad_locus: Poly,
    pub discriminant: RationalFunction,
    pub j_map: RationalFunction,
    /// Separable degree of the j-map as claimed for built-ins.
    pub declared_j_degree: Option<u64>,
    pub marked_point: Option<MarkedPoint>,
    /// Admissible traces satisfy `t = q^k + 1 (mod gate)`.
    pub gate: Option<u64>,
    pub model: Option<PredictionModel>,
    /// Level for the pair-counting oracle, when the family is universal
    /// for points of that order.
    pub oracle_level: Option<u64>,
    pub warnings: Vec<String>,
}

/// Outcome of specializing a family at one parameter value.
#[derive(Clone, Copy, Debug)]
pub enum Fiber<'a> {
    Good(Curve<'a>),
    Bad,
}

/// `(c4, c6)` of a long Weierstrass model.
fn long_model(a: &[RationalFunction; 5]) -> (RationalFunction, RationalFunction) {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1.mul(a1).add(&a2.scale(4));
    let b4 = a4.scale(2).add(&a1.mul(a3));
    let b6 = a3.mul(a3).add(&a6.scale(4));
    let c4 = b2.mul(&b2).sub(&b4.scale(24));
    let c6 = b2
        .pow(3)
        .neg()
        .add(&b2.mul(&b4).scale(36))
        .sub(&b6.scale(216));
    (c4, c6)
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.modulus());
    }
    let g = a.gcd(b);
    a.mul(b).div_rem(&g).expect("nonzero gcd").0.make_monic()
}

impl FamilySpec {
    /// Builds a family from long Weierstrass coefficients, deriving the
    /// discriminant, j-map and bad locus.
    pub fn from_long_weierstrass(
        name: impl Into<String>,
        p: u64,
        coeffs: [RationalFunction; 5],
        declared_bad: Option<Poly>,
    ) -> Result<FamilySpec> {
        let (c4, c6) = long_model(&coeffs);
        let c4_cubed = c4.pow(3);
        let disc = c4_cubed
            .sub(&c6.pow(2))
            .div(&RationalFunction::constant(p, 1728))?;
        if disc.is_zero() {
            return Err(Error::SingularFamily);
        }
        let j_map = c4_cubed.div(&disc)?;
        let mut bad = declared_bad.unwrap_or_else(|| Poly::one(p)).make_monic();
        bad = lcm(&bad, &disc.numerator().make_monic());
        for c in &coeffs {
            bad = lcm(&bad, c.denominator());
        }
        let mut warnings = Vec::new();
        if j_map.is_constant() {
            warnings.push("ConstantJ: j-map is constant; bound reports suppressed".to_string());
        }
        Ok(FamilySpec {
            name: name.into(),
            p,
            coeffs,
            bad_locus: bad,
            discriminant: disc,
            j_map,
            declared_j_degree: None,
            marked_point: None,
            gate: None,
            model: None,
            oracle_level: None,
            warnings,
        })
    }

    /// `(degree, separable degree)` of the j-map.
    pub fn j_degree(&self) -> Result<(u64, u64)> {
        self.j_map.degree_and_separability()
    }

    pub fn is_isotrivial(&self) -> bool {
        self.j_map.is_constant()
    }

    /// Whether `t` passes the congruence gate over a field of size `q`.
    pub fn gate_passes(&self, q: u64, t: i64) -> bool {
        match self.gate {
            None => true,
            Some(m) => (t as i128 - q as i128 - 1).rem_euclid(m as i128) == 0,
        }
    }

    /// Roots of the bad locus in `F_p`.
    pub fn bad_roots_fp(&self) -> Vec<u64> {
        self.bad_locus.roots_fp()
    }

    /// The fiber at `λ`, converted to `y^2 = x^3 - 27 c4 x - 54 c6`.
    ///
    /// When the family has a marked point, its image must lie on the fiber
    /// with exactly the expected order; anything else is a broken family
    /// definition and is reported as an error.
    pub fn specialize<'a>(&self, ctx: &'a FieldCtx, lambda: FieldElem) -> Result<Fiber<'a>> {
        if ctx.p() != self.p {
            return Err(Error::ContextMismatch);
        }
        if self.bad_locus.eval(ctx, lambda) == ctx.zero() {
            return Ok(Fiber::Bad);
        }
        let mut a = [ctx.zero(); 5];
        for (slot, c) in a.iter_mut().zip(&self.coeffs) {
            match c.eval(ctx, lambda) {
                Some(v) => *slot = v,
                None => return Ok(Fiber::Bad),
            }
        }
        let [a1, a2, a3, a4, a6] = a;
        let f = |c: i64| ctx.from_i64(c);
        let b2 = ctx.add(ctx.square(a1), ctx.mul(f(4), a2));
        let b4 = ctx.add(ctx.mul(f(2), a4), ctx.mul(a1, a3));
        let b6 = ctx.add(ctx.square(a3), ctx.mul(f(4), a6));
        let c4 = ctx.sub(ctx.square(b2), ctx.mul(f(24), b4));
        let c6 = ctx.sub(
            ctx.add(
                ctx.neg(ctx.mul(ctx.square(b2), b2)),
                ctx.mul(f(36), ctx.mul(b2, b4)),
            ),
            ctx.mul(f(216), b6),
        );
        let Ok(curve) = Curve::new(ctx, ctx.mul(f(-27), c4), ctx.mul(f(-54), c6)) else {
            return Ok(Fiber::Bad);
        };
        if let Some(mp) = &self.marked_point {
            self.check_marked_point(&curve, mp, lambda, a1, a3, b2)?;
        }
        Ok(Fiber::Good(curve))
    }

    fn check_marked_point(
        &self,
        curve: &Curve,
        mp: &MarkedPoint,
        lambda: FieldElem,
        a1: FieldElem,
        a3: FieldElem,
        b2: FieldElem,
    ) -> Result<()> {
        let ctx = curve.ctx();
        let violation = |found: String| Error::MarkedPointOrderViolation {
            lambda: lambda.index(),
            expected: mp.order,
            found,
        };
        let (Some(x), Some(y)) = (mp.x.eval(ctx, lambda), mp.y.eval(ctx, lambda)) else {
            return Err(violation("a pole".into()));
        };
        // (x, y) -> (36x + 3 b2, 108 (2y + a1 x + a3))
        let f = |c: i64| ctx.from_i64(c);
        let xs = ctx.add(ctx.mul(f(36), x), ctx.mul(f(3), b2));
        let ys = ctx.mul(
            f(108),
            ctx.add(ctx.add(ctx.mul(f(2), y), ctx.mul(a1, x)), a3),
        );
        let pt = Point::Affine(xs, ys);
        if !curve.contains(&pt) {
            return Err(violation("a point off the fiber".into()));
        }
        if !curve.has_exact_order(&pt, mp.order) {
            let n = curve.count_points();
            return Err(violation(curve.point_order(&pt, n).to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn legendre_fiber_examples() {
        let ctx = make_field(5, 1).unwrap();
        let fam = builtin_family("legendre", 5).unwrap();
        match fam.specialize(&ctx, ctx.from_i64(2)).unwrap() {
            Fiber::Good(c) => {
                assert_eq!(c.count_points(), 8);
                assert_eq!(c.trace(), -2);
            }
            Fiber::Bad => panic!("λ = 2 is a good fiber"),
        }
        assert!(matches!(
            fam.specialize(&ctx, ctx.from_i64(1)).unwrap(),
            Fiber::Bad
        ));
        assert!(matches!(
            fam.specialize(&ctx, ctx.zero()).unwrap(),
            Fiber::Bad
        ));
    }

    #[test]
    fn x1_5_marked_point_has_order_five() {
        let ctx = make_field(11, 1).unwrap();
        let fam = builtin_family("x1_5", 11).unwrap();
        let Fiber::Good(c) = fam.specialize(&ctx, ctx.from_i64(2)).unwrap() else {
            panic!("λ = 2 is a good fiber");
        };
        assert_eq!(c.count_points() % 5, 0);
    }

    #[test]
    fn wrong_marked_order_is_a_hard_failure() {
        let ctx = make_field(11, 1).unwrap();
        let mut fam = builtin_family("x1_5", 11).unwrap();
        fam.marked_point.as_mut().unwrap().order = 7;
        assert!(matches!(
            fam.specialize(&ctx, ctx.from_i64(2)),
            Err(Error::MarkedPointOrderViolation { expected: 7, .. })
        ));
    }

    #[test]
    fn context_must_match() {
        let ctx = make_field(7, 1).unwrap();
        let fam = builtin_family("legendre", 5).unwrap();
        assert!(matches!(
            fam.specialize(&ctx, ctx.one()),
            Err(Error::ContextMismatch)
        ));
    }

    #[test]
    fn bad_locus_covers_singular_fibers() {
        for name in BUILTIN_FAMILIES {
            for p in [11u64, 13] {
                let fam = builtin_family(name, p).unwrap();
                let ctx = make_field(p, 1).unwrap();
                for lambda in ctx.elements() {
                    let in_locus = fam.bad_locus.eval(&ctx, lambda) == ctx.zero();
                    let fiber = fam.specialize(&ctx, lambda).unwrap();
                    assert_eq!(in_locus, matches!(fiber, Fiber::Bad), "{name} p={p}");
                }
            }
        }
    }
}
