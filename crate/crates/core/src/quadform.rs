//! Positive definite binary quadratic forms, class numbers `h(D)` and the
//! Kronecker (Hurwitz) class numbers `H(D) = sum_f h(D/f^2)`.
//!
//! Reduced forms follow the usual Gauss convention: `|b| <= a <= c`, with
//! `b >= 0` whenever `|b| = a` or `a = c`.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_rational::Rational64;

use crate::error::{Error, Result};

/// `D < 0` with `D = 0 or 1 (mod 4)`.
pub fn is_valid_discriminant(d: i64) -> bool {
    d < 0 && matches!(d.rem_euclid(4), 0 | 1)
}

/// A validated negative discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_valid_discriminant(d) {
            Ok(Discriminant(d))
        } else {
            Err(Error::InvalidDiscriminant(d))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// Discriminants `D/f^2` of the orders containing the order of
    /// discriminant `D`, paired with the conductor ratio `f`.
    pub fn overorders(self) -> impl Iterator<Item = (i64, Discriminant)> {
        let d = self.0;
        (1i64..)
            .take_while(move |f| f * f <= -d)
            .filter(move |f| d % (f * f) == 0 && is_valid_discriminant(d / (f * f)))
            .map(move |f| (f, Discriminant(d / (f * f))))
    }
}

impl TryFrom<i64> for Discriminant {
    type Error = Error;

    fn try_from(d: i64) -> Result<Self> {
        Discriminant::new(d)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// A 2x2 integer matrix `[[alpha, beta], [gamma, delta]]` acting on forms by
/// `f(x, y) -> f(alpha x + beta y, gamma x + delta y)`.
pub type Transform = [[i64; 2]; 2];

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Applies a transformation matrix.
    pub fn act(&self, m: &Transform) -> QuadForm {
        let QuadForm { a, b, c } = *self;
        let [[al, be], [ga, de]] = *m;
        QuadForm {
            a: a * al * al + b * al * ga + c * ga * ga,
            b: 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
            c: a * be * be + b * be * de + c * de * de,
        }
    }

    fn check(&self) -> Result<()> {
        if self.a <= 0 || self.discriminant() >= 0 {
            return Err(Error::InvalidForm {
                a: self.a,
                b: self.b,
                c: self.c,
            });
        }
        Ok(())
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn reduce_form(f: QuadForm) -> Result<QuadForm> {
    reduce_form_with_transform(f).map(|(g, _)| g)
}

/// Reduces a positive definite form, also returning the determinant-one
/// matrix `M` with `f.act(M) == reduced`.
pub fn reduce_form_with_transform(f: QuadForm) -> Result<(QuadForm, Transform)> {
    f.check()?;
    let mut g = f;
    let mut m: Transform = [[1, 0], [0, 1]];
    loop {
        // translate b into (-a, a]
        let n = (g.a - g.b).div_euclid(2 * g.a);
        if n != 0 {
            g = QuadForm {
                a: g.a,
                b: g.b + 2 * g.a * n,
                c: g.a * n * n + g.b * n + g.c,
            };
            m = mat_mul(&m, &[[1, n], [0, 1]]);
        }
        if g.a > g.c || (g.a == g.c && g.b < 0) {
            g = QuadForm {
                a: g.c,
                b: -g.b,
                c: g.a,
            };
            m = mat_mul(&m, &[[0, -1], [1, 0]]);
            continue;
        }
        break;
    }
    debug_assert!(g.is_reduced());
    Ok((g, m))
}

fn mat_mul(x: &Transform, y: &Transform) -> Transform {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

/// Reduced primitive forms of discriminant `d`, in enumeration order.
pub fn reduced_forms(d: Discriminant) -> Vec<QuadForm> {
    let d = d.get();
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            let f = QuadForm { a, b, c };
            if f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// `h(D)`: the number of classes of primitive forms of discriminant `D`.
pub fn class_number_h(d: i64) -> Result<u64> {
    Ok(reduced_forms(Discriminant::new(d)?).len() as u64)
}

/// `H(D) = sum h(D/f^2)` over `f` with `D/f^2` a discriminant.
pub fn kronecker_h(d: i64) -> Result<u64> {
    let d = Discriminant::new(d)?;
    Ok(d.overorders()
        .map(|(_, e)| reduced_forms(e).len() as u64)
        .sum())
}

/// `h_w(D)`: `h(D)` with the forms of `D = -3, -4` weighted by 1/3, 1/2.
pub fn weighted_h_w(d: i64) -> Result<Rational64> {
    let h = class_number_h(d)? as i64;
    Ok(match d {
        -3 => Rational64::new(1, 3),
        -4 => Rational64::new(1, 2),
        _ => Rational64::from_integer(h),
    })
}

/// `H_w(D) = sum h_w(D/f^2)`.
pub fn kronecker_h_w(d: i64) -> Result<Rational64> {
    let d = Discriminant::new(d)?;
    d.overorders().map(|(_, e)| weighted_h_w(e.get())).sum()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Memo table for `h`, shared between scan workers.
#[derive(Default)]
pub struct ClassNumberCache {
    h: RwLock<HashMap<i64, u64>>,
}

impl ClassNumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn h(&self, d: i64) -> Result<u64> {
        if let Some(&h) = self.h.read().expect("cache lock").get(&d) {
            return Ok(h);
        }
        let h = class_number_h(d)?;
        self.h.write().expect("cache lock").insert(d, h);
        Ok(h)
    }

    pub fn big_h(&self, d: i64) -> Result<u64> {
        Discriminant::new(d)?
            .overorders()
            .map(|(_, e)| self.h(e.get()))
            .sum()
    }

    pub fn big_h_w(&self, d: i64) -> Result<Rational64> {
        Discriminant::new(d)?
            .overorders()
            .map(|(_, e)| {
                Ok(match e.get() {
                    -3 => Rational64::new(1, 3),
                    -4 => Rational64::new(1, 2),
                    e => Rational64::from_integer(self.h(e)? as i64),
                })
            })
            .sum()
    }
}
