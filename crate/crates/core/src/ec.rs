//! Short Weierstrass curves `y^2 = x^3 + a4 x + a6` over `F_q`, `p > 3`.
//!
//! Ordinarity uses the standard orientation: `E` is ordinary iff `p` does
//! not divide its trace.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{prime_divisors, FieldCtx, FieldElem};

/// Above this field size `count_points` switches to baby-step giant-step.
pub const BSGS_THRESHOLD: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine(FieldElem, FieldElem),
}

#[derive(Clone, Copy, Debug)]
pub struct Curve<'a> {
    ctx: &'a FieldCtx,
    pub a4: FieldElem,
    pub a6: FieldElem,
}

/// Invariants of one curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveSummary {
    pub j: FieldElem,
    pub t: i64,
    pub ordinary: bool,
    pub aut_order: u64,
    pub group_order: u64,
}

impl CurveSummary {
    /// Panics if `t` breaks the Hasse bound; that would mean the point
    /// counter is broken.
    pub fn new(ctx: &FieldCtx, j: FieldElem, t: i64, aut_order: u64) -> Self {
        let q = ctx.q();
        assert!(
            (t as i128) * (t as i128) <= 4 * q as i128,
            "Hasse bound violated: t = {t}, q = {q}"
        );
        CurveSummary {
            j,
            t,
            ordinary: t.rem_euclid(ctx.p() as i64) != 0,
            aut_order,
            group_order: (q as i64 + 1 - t) as u64,
        }
    }
}

impl<'a> Curve<'a> {
    pub fn new(ctx: &'a FieldCtx, a4: FieldElem, a6: FieldElem) -> Result<Self> {
        let c = Curve { ctx, a4, a6 };
        if c.disc_core() == ctx.zero() {
            return Err(Error::Singular);
        }
        Ok(c)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(ctx: &'a FieldCtx, a4: i64, a6: i64) -> Result<Self> {
        Curve::new(ctx, ctx.from_i64(a4), ctx.from_i64(a6))
    }

    /// A curve with the given j-invariant.
    pub fn with_j(ctx: &'a FieldCtx, j: FieldElem) -> Self {
        let (a4, a6) = if j == ctx.zero() {
            (ctx.zero(), ctx.one())
        } else if j == ctx.from_i64(1728) {
            (ctx.one(), ctx.zero())
        } else {
            // y^2 = x^3 + 3j(1728-j) x + 2j(1728-j)^2
            let m = ctx.mul(j, ctx.sub(ctx.from_i64(1728), j));
            let a4 = ctx.mul(ctx.from_i64(3), m);
            let a6 = ctx.mul(ctx.from_i64(2), ctx.mul(m, ctx.sub(ctx.from_i64(1728), j)));
            (a4, a6)
        };
        Curve::new(ctx, a4, a6).expect("j-model is nonsingular")
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// `4 a4^3 + 27 a6^2`; the discriminant is `-16` times this.
    fn disc_core(&self) -> FieldElem {
        let ctx = self.ctx;
        let a4c = ctx.mul(ctx.square(self.a4), self.a4);
        ctx.add(
            ctx.mul(ctx.from_i64(4), a4c),
            ctx.mul(ctx.from_i64(27), ctx.square(self.a6)),
        )
    }

    pub fn discriminant(&self) -> FieldElem {
        self.ctx.mul(self.ctx.from_i64(-16), self.disc_core())
    }

    /// `1728 * 4 a4^3 / (4 a4^3 + 27 a6^2)`.
    pub fn j_invariant(&self) -> FieldElem {
        let ctx = self.ctx;
        let num = ctx.mul(
            ctx.from_i64(1728 * 4),
            ctx.mul(ctx.square(self.a4), self.a4),
        );
        ctx.div(num, self.disc_core()).expect("nonsingular")
    }

    /// Right-hand side `x^3 + a4 x + a6`.
    pub fn rhs(&self, x: FieldElem) -> FieldElem {
        let ctx = self.ctx;
        ctx.add(ctx.mul(ctx.add(ctx.square(x), self.a4), x), self.a6)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match *pt {
            Point::Infinity => true,
            Point::Affine(x, y) => self.ctx.square(y) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match *pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x, self.ctx.neg(y)),
        }
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let ctx = self.ctx;
        let (x1, y1, x2, y2) = match (*p1, *p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return q,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if ctx.add(y1, y2) == ctx.zero() {
                return Point::Infinity;
            }
            let num = ctx.add(ctx.mul(ctx.from_i64(3), ctx.square(x1)), self.a4);
            ctx.div(num, ctx.add(y1, y1)).expect("y1 != 0")
        } else {
            ctx.div(ctx.sub(y2, y1), ctx.sub(x2, x1)).expect("x1 != x2")
        };
        let x3 = ctx.sub(ctx.sub(ctx.square(slope), x1), x2);
        let y3 = ctx.sub(ctx.mul(slope, ctx.sub(x1, x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, pt: &Point, mut n: u64) -> Point {
        let mut acc = Point::Infinity;
        let mut base = *pt;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// All rational points, infinity first, then by x.
    pub fn points(&self) -> Vec<Point> {
        let ctx = self.ctx;
        let mut out = vec![Point::Infinity];
        for x in ctx.elements() {
            let r = self.rhs(x);
            if let Some(y) = ctx.sqrt(r) {
                out.push(Point::Affine(x, y));
                if y != ctx.zero() {
                    out.push(Point::Affine(x, ctx.neg(y)));
                }
            }
        }
        out
    }

    /// `#E(F_q)`, naive below [`BSGS_THRESHOLD`], BSGS above it.
    pub fn count_points(&self) -> u64 {
        if self.ctx.q() > BSGS_THRESHOLD {
            self.count_points_bsgs()
        } else {
            self.count_points_naive()
        }
    }

    /// `1 + sum_x (1 + chi(x^3 + a4 x + a6))`.
    pub fn count_points_naive(&self) -> u64 {
        let sum: i64 = self
            .ctx
            .elements()
            .map(|x| 1 + self.ctx.chi(self.rhs(x)) as i64)
            .sum();
        (1 + sum) as u64
    }

    /// Point count by baby-step giant-step on random points of the curve and
    /// its quadratic twist, using `#E + #E' = 2q + 2`. Falls back to the
    /// naive sum if the group orders stay ambiguous.
    pub fn count_points_bsgs(&self) -> u64 {
        let q = self.ctx.q();
        let width = isqrt(4 * q);
        let (lo, hi) = (q + 1 - width, q + 1 + width);
        let twist = self.quadratic_twist();
        let seed = self.a4.index() ^ self.a6.index().rotate_left(32) ^ q;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut cand_e: Option<BTreeSet<u64>> = None;
        let mut cand_t: Option<BTreeSet<u64>> = None;
        for round in 0..48 {
            let (curve, slot) = if round % 2 == 0 {
                (self, &mut cand_e)
            } else {
                (&twist, &mut cand_t)
            };
            let pt = curve.random_point(&mut rng);
            let found = curve.orders_in_interval(&pt, lo, hi);
            *slot = Some(match slot.take() {
                Some(prev) => prev.intersection(&found).copied().collect(),
                None => found,
            });
            if let (Some(e), Some(t)) = (&cand_e, &cand_t) {
                let joint: Vec<u64> = e
                    .iter()
                    .copied()
                    .filter(|&m| t.contains(&(2 * q + 2 - m)))
                    .collect();
                if joint.len() == 1 {
                    return joint[0];
                }
            }
        }
        self.count_points_naive()
    }

    fn random_point(&self, rng: &mut impl Rng) -> Point {
        let ctx = self.ctx;
        loop {
            let x = ctx.elem(rng.gen_range(0..ctx.q()));
            if let Some(y) = ctx.sqrt(self.rhs(x)) {
                let y = if rng.gen::<bool>() { y } else { ctx.neg(y) };
                return Point::Affine(x, y);
            }
        }
    }

    /// All `m` in `[lo, hi]` with `m * pt = O`.
    fn orders_in_interval(&self, pt: &Point, lo: u64, hi: u64) -> BTreeSet<u64> {
        let steps = isqrt(hi - lo) + 1;
        let mut baby = HashMap::with_capacity(steps as usize);
        let mut cur = Point::Infinity;
        for j in 0..steps {
            if j > 0 && cur == Point::Infinity {
                // small order: every multiple of j qualifies
                return (lo.div_ceil(j) * j..=hi).step_by(j as usize).collect();
            }
            baby.insert(cur, j);
            cur = self.add(&cur, pt);
        }
        let giant = self.mul(pt, steps);
        let mut r = self.mul(pt, lo);
        let mut out = BTreeSet::new();
        let mut base = lo;
        while base <= hi {
            if let Some(&j) = baby.get(&self.neg(&r)) {
                if base + j <= hi {
                    out.insert(base + j);
                }
            }
            r = self.add(&r, &giant);
            base += steps;
        }
        out
    }

    /// `(d^2 a4, d^3 a6)` for a fixed nonresidue `d`.
    pub fn quadratic_twist(&self) -> Curve<'a> {
        let ctx = self.ctx;
        let d = ctx.nonresidue();
        let d2 = ctx.square(d);
        Curve {
            ctx,
            a4: ctx.mul(d2, self.a4),
            a6: ctx.mul(ctx.mul(d2, d), self.a6),
        }
    }

    pub fn trace(&self) -> i64 {
        self.ctx.q() as i64 + 1 - self.count_points() as i64
    }

    pub fn is_ordinary(&self) -> bool {
        self.trace().rem_euclid(self.ctx.p() as i64) != 0
    }

    /// Scalings `u` with `(u^4 a4, u^6 a6) = (a4, a6)`, i.e. `Aut_{F_q}(E)`
    /// acting by `(x, y) -> (u^2 x, u^3 y)`.
    pub fn automorphisms(&self) -> Vec<FieldElem> {
        let ctx = self.ctx;
        let n = self.root_order();
        let g = gcd_u64(n, ctx.q() - 1);
        // the g-th roots of unity; found by scanning, fine at desk scale
        let mut out: Vec<FieldElem> = Vec::with_capacity(g as usize);
        if g == 2 {
            return vec![ctx.one(), ctx.from_i64(-1)];
        }
        for u in ctx.elements().skip(1) {
            if ctx.pow(u, g) == ctx.one() {
                out.push(u);
                if out.len() as u64 == g {
                    break;
                }
            }
        }
        out
    }

    fn root_order(&self) -> u64 {
        let ctx = self.ctx;
        if self.a4 == ctx.zero() {
            6
        } else if self.a6 == ctx.zero() {
            4
        } else {
            2
        }
    }

    /// `#Aut_{F_q}(E)`: `gcd(6, q-1)` at `j = 0`, `gcd(4, q-1)` at
    /// `j = 1728`, else 2.
    pub fn automorphism_order(&self) -> u64 {
        gcd_u64(self.root_order(), self.ctx.q() - 1)
    }

    /// Applies the automorphism `(x, y) -> (u^2 x, u^3 y)`.
    pub fn apply_automorphism(&self, u: FieldElem, pt: &Point) -> Point {
        let ctx = self.ctx;
        match *pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let u2 = ctx.square(u);
                Point::Affine(ctx.mul(u2, x), ctx.mul(ctx.mul(u2, u), y))
            }
        }
    }

    pub fn summary(&self) -> CurveSummary {
        CurveSummary::new(
            self.ctx,
            self.j_invariant(),
            self.trace(),
            self.automorphism_order(),
        )
    }

    /// Order of `pt`, as the least divisor `d` of `group_order` with `d pt = O`.
    pub fn point_order(&self, pt: &Point, group_order: u64) -> u64 {
        let mut ord = group_order;
        for r in prime_divisors(group_order) {
            while ord % r == 0 && self.mul(pt, ord / r) == Point::Infinity {
                ord /= r;
            }
        }
        ord
    }

    /// Whether `pt` has exact order `m`: `m pt = O` and `(m/r) pt != O` for
    /// every prime `r | m`.
    pub fn has_exact_order(&self, pt: &Point, m: u64) -> bool {
        m > 0
            && self.mul(pt, m) == Point::Infinity
            && prime_divisors(m)
                .into_iter()
                .all(|r| self.mul(pt, m / r) != Point::Infinity)
    }

    /// Number of rational points of exact order `m`.
    pub fn count_exact_order_points(&self, m: u64) -> u64 {
        self.exact_order_points(m).len() as u64
    }

    /// Rational points of exact order `m`.
    pub fn exact_order_points(&self, m: u64) -> Vec<Point> {
        self.points()
            .into_iter()
            .filter(|pt| self.has_exact_order(pt, m))
            .collect()
    }
}

/// Whether two curves over the same field are isomorphic over it, by
/// exhaustive search for `u` with `a4' = u^4 a4`, `a6' = u^6 a6`.
pub fn are_isomorphic(c1: &Curve, c2: &Curve) -> Result<bool> {
    if c1.ctx != c2.ctx {
        return Err(Error::ContextMismatch);
    }
    let ctx = c1.ctx;
    Ok(ctx.elements().skip(1).any(|u| {
        let u2 = ctx.square(u);
        let u4 = ctx.square(u2);
        let u6 = ctx.mul(u4, u2);
        ctx.mul(u4, c1.a4) == c2.a4 && ctx.mul(u6, c1.a6) == c2.a6
    }))
}

/// Trace over `F_{q^k}` from the trace over `F_q`:
/// `t_k = t_1 t_{k-1} - q t_{k-2}`, `t_0 = 2`.
pub fn trace_extension(t1: i64, q: u64, k: u32) -> Result<i64> {
    if (t1 as i128).pow(2) > 4 * q as i128 {
        return Err(Error::HasseViolation { t: t1, q });
    }
    let (mut prev, mut cur) = (2i128, t1 as i128);
    for _ in 1..k {
        (prev, cur) = (cur, t1 as i128 * cur - q as i128 * prev);
    }
    let out = if k == 0 { prev } else { cur };
    i64::try_from(out).map_err(|_| Error::HasseViolation { t: t1, q })
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn j_invariant_examples() {
        let f5 = make_field(5, 1).unwrap();
        let j = |a4, a6| Curve::from_ints(&f5, a4, a6).unwrap().j_invariant();
        assert_eq!(j(1, 0), f5.from_i64(3));
        assert_eq!(j(0, 1), f5.zero());
        assert_eq!(j(1, 1), f5.from_i64(2));
        assert_eq!(Curve::from_ints(&f5, 0, 0).unwrap_err(), Error::Singular);
    }

    #[test]
    fn point_count_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(Curve::from_ints(&f5, 1, 0).unwrap().count_points(), 4);
        // x(x-1)(x-2) = (X+1)X(X-1) after x = X + 1
        assert_eq!(Curve::from_ints(&f5, -1, 0).unwrap().count_points(), 8);
        assert_eq!(Curve::from_ints(&f7, 0, 1).unwrap().count_points(), 12);
    }

    #[test]
    fn trace_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(Curve::from_ints(&f5, 1, 0).unwrap().trace(), 2);
        assert_eq!(Curve::from_ints(&f5, -1, 0).unwrap().trace(), -2);
        assert_eq!(Curve::from_ints(&f7, 0, 1).unwrap().trace(), -4);
    }

    #[test]
    fn trace_extension_examples() {
        assert_eq!(trace_extension(2, 5, 2).unwrap(), -6);
        let f25 = make_field(5, 2).unwrap();
        let c = Curve::from_ints(&f25, 1, 0).unwrap();
        assert_eq!(c.count_points(), 32);
        assert_eq!(trace_extension(3, 11, 1).unwrap(), 3);
        assert_eq!(trace_extension(0, 7, 2).unwrap(), -14);
        assert!(matches!(
            trace_extension(5, 5, 2),
            Err(Error::HasseViolation { .. })
        ));
    }

    #[test]
    fn ordinarity_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        assert!(Curve::from_ints(&f5, 1, 0).unwrap().is_ordinary());
        let ss = Curve::from_ints(&f5, 0, 1).unwrap();
        assert_eq!(ss.count_points(), 6);
        assert!(!ss.is_ordinary());
        assert!(Curve::from_ints(&f7, 0, 1).unwrap().is_ordinary());
    }

    #[test]
    fn automorphism_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        let f13 = make_field(13, 1).unwrap();
        assert_eq!(Curve::from_ints(&f5, 1, 1).unwrap().automorphism_order(), 2);
        assert_eq!(
            Curve::from_ints(&f13, 1, 0).unwrap().automorphism_order(),
            4
        );
        assert_eq!(Curve::from_ints(&f7, 1, 0).unwrap().automorphism_order(), 2);
        assert_eq!(Curve::from_ints(&f7, 0, 1).unwrap().automorphism_order(), 6);
    }

    #[test]
    fn automorphism_order_matches_exhaustive_search() {
        for p in [5u64, 7, 11, 13] {
            let ctx = make_field(p, 1).unwrap();
            for (a4, a6) in [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (3, 2)] {
                let Ok(c) = Curve::from_ints(&ctx, a4, a6) else {
                    continue;
                };
                let brute = ctx
                    .elements()
                    .skip(1)
                    .filter(|&u| {
                        let u4 = ctx.pow(u, 4);
                        ctx.mul(u4, c.a4) == c.a4 && ctx.mul(ctx.pow(u, 6), c.a6) == c.a6
                    })
                    .count() as u64;
                assert_eq!(c.automorphism_order(), brute);
                assert_eq!(c.automorphisms().len() as u64, brute);
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let f5 = make_field(5, 1).unwrap();
        let c = Curve::from_ints(&f5, 1, 0).unwrap();
        assert!(are_isomorphic(&c, &c).unwrap());
        let c16 = Curve::from_ints(&f5, 16, 0).unwrap();
        assert!(are_isomorphic(&c, &c16).unwrap());
        let c2 = Curve::from_ints(&f5, 2, 0).unwrap();
        assert!(!are_isomorphic(&c, &c2).unwrap());

        let f7 = make_field(7, 1).unwrap();
        let d = Curve::from_ints(&f7, 1, 0).unwrap();
        assert_eq!(are_isomorphic(&c, &d), Err(Error::ContextMismatch));
    }

    #[test]
    fn exact_order_examples() {
        let f11 = make_field(11, 1).unwrap();
        let c = Curve::from_ints(&f11, 1, 1).unwrap();
        assert_eq!(c.count_exact_order_points(1), 1);
        let n = c.count_points();
        if n % 5 != 0 {
            assert_eq!(c.count_exact_order_points(5), 0);
        }
    }

    #[test]
    fn point_order_agrees_with_repeated_addition() {
        let ctx = make_field(13, 1).unwrap();
        let c = Curve::from_ints(&ctx, 2, 5).unwrap();
        let pts = c.points();
        let n = pts.len() as u64;
        for pt in &pts {
            let mut acc = *pt;
            let mut ord = 1;
            while acc != Point::Infinity {
                acc = c.add(&acc, pt);
                ord += 1;
            }
            assert_eq!(c.point_order(pt, n), ord);
        }
    }

    #[test]
    fn twist_traces_are_opposite() {
        let ctx = make_field(17, 1).unwrap();
        let c = Curve::from_ints(&ctx, 3, 7).unwrap();
        assert_eq!(c.trace(), -c.quadratic_twist().trace());
    }

    #[test]
    fn with_j_has_that_j() {
        let ctx = make_field(11, 2).unwrap();
        for j in ctx.elements() {
            assert_eq!(Curve::with_j(&ctx, j).j_invariant(), j);
        }
    }
}
