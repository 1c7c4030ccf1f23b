use std::fmt;

use super::poly::inv_mod;
use super::{FieldCtx, FieldElem, Poly};
use crate::error::{Error, Result};

/// A rational function `num / den` over `F_p`, kept in lowest terms with a
/// monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Normalizes `num / den`. Fails when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = num.modulus();
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Poly::one(p),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g).expect("gcd is nonzero");
        let (den, _) = den.div_rem(&g).expect("gcd is nonzero");
        let lead_inv = inv_mod(den.leading(), p);
        Ok(RationalFunction {
            num: num.scale(lead_inv),
            den: den.scale(lead_inv),
        })
    }

    pub fn from_poly(num: Poly) -> Self {
        let p = num.modulus();
        RationalFunction {
            num,
            den: Poly::one(p),
        }
    }

    pub fn constant(p: u64, c: i64) -> Self {
        RationalFunction::from_poly(Poly::constant(p, c))
    }

    /// The identity function `λ`.
    pub fn lambda(p: u64) -> Self {
        RationalFunction::from_poly(Poly::x(p))
    }

    pub fn modulus(&self) -> u64 {
        self.num.modulus()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// `max(deg num, deg den)`, with the zero function given degree 0.
    pub fn degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RationalFunction::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn scale(&self, c: i64) -> Self {
        self.mul(&RationalFunction::constant(self.modulus(), c))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFunction::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Evaluates at `λ` in an extension of `F_p`; `None` at a pole.
    pub fn eval(&self, ctx: &FieldCtx, lambda: FieldElem) -> Option<FieldElem> {
        let d = self.den.eval(ctx, lambda);
        let n = self.num.eval(ctx, lambda);
        ctx.div(n, d)
    }

    /// Degree and separable degree of the map `P^1 -> P^1` defined by self.
    ///
    /// An inseparable map is written `g(λ^{p^m})` with `g` separable, and its
    /// separable degree is `deg g = degree / p^m`.
    pub fn degree_and_separability(&self) -> Result<(u64, u64)> {
        let degree = self.degree() as u64;
        if degree == 0 {
            return Err(Error::ConstantMap);
        }
        let p = self.modulus();
        let mut g = self.clone();
        let mut insep = 1u64;
        while g.derivative().is_zero() {
            // coprime num/den with vanishing derivative are both p-th powers
            let num = g.num.deflate().expect("numerator is a polynomial in λ^p");
            let den = g.den.deflate().expect("denominator is a polynomial in λ^p");
            g = RationalFunction::new(num, den)?;
            insep *= p;
        }
        Ok((degree, degree / insep))
    }
}

/// `rf_degree_and_separability` as a free function.
pub fn degree_and_separability(f: &RationalFunction) -> Result<(u64, u64)> {
    f.degree_and_separability()
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({}) mod {}", self.num, self.den, self.modulus())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.to_string().replace('x', "λ");
        if self.den.is_one() {
            write!(f, "{num}")
        } else {
            let den = self.den.to_string().replace('x', "λ");
            write!(f, "({num})/({den})")
        }
    }
}
