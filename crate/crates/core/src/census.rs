//! Exhaustive enumeration of `F_q`-isomorphism classes of elliptic curves
//! and the trace census `N(t)` built on it.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use rayon::prelude::*;

use crate::ec::{Curve, CurveSummary};
use crate::error::{Error, Result};
use crate::ff::{is_prime, make_field, FieldCtx, FieldElem};
use crate::quadform::ClassNumberCache;

/// Largest field for which classes are enumerated (the partition bitmap
/// has `q^2` entries).
pub const CENSUS_CEILING: u64 = 1 << 12;

/// Counts indexed by trace, sorted ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceTally {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    counts: BTreeMap<i64, u64>,
}

impl TraceTally {
    pub fn new(p: u64, k: u32, q: u64) -> Self {
        TraceTally {
            p,
            k,
            q,
            counts: BTreeMap::new(),
        }
    }

    pub fn for_field(ctx: &FieldCtx) -> Self {
        TraceTally::new(ctx.p(), ctx.k(), ctx.q())
    }

    pub fn add(&mut self, t: i64, n: u64) {
        debug_assert!((t as i128).pow(2) <= 4 * self.q as i128);
        if n > 0 {
            *self.counts.entry(t).or_insert(0) += n;
        }
    }

    /// Pointwise sum; metadata must agree.
    pub fn merge(mut self, other: TraceTally) -> TraceTally {
        debug_assert_eq!((self.p, self.k, self.q), (other.p, other.k, other.q));
        for (t, n) in other.counts {
            self.add(t, n);
        }
        self
    }

    pub fn get(&self, t: i64) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts.iter().map(|(&t, &n)| (t, n))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(t, n)| self.get(-t) == n)
    }
}

/// One `F_q`-isomorphism class with its lexicographically least member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub a4: FieldElem,
    pub a6: FieldElem,
    /// Number of `(a4, a6)` pairs in the class.
    pub size: u64,
    pub summary: CurveSummary,
}

impl IsoClass {
    pub fn curve<'a>(&self, ctx: &'a FieldCtx) -> Curve<'a> {
        Curve::new(ctx, self.a4, self.a6).expect("class representatives are nonsingular")
    }
}

fn check_size(ctx: &FieldCtx) -> Result<()> {
    if ctx.q() > CENSUS_CEILING {
        return Err(Error::SizeExceeded {
            p: ctx.p(),
            k: ctx.k(),
            ceiling: CENSUS_CEILING,
        });
    }
    Ok(())
}

fn summarize(ctx: &FieldCtx, reps: Vec<(FieldElem, FieldElem, u64)>) -> Vec<IsoClass> {
    reps.into_par_iter()
        .map(|(a4, a6, size)| {
            let curve = Curve::new(ctx, a4, a6).expect("nonsingular");
            IsoClass {
                a4,
                a6,
                size,
                summary: curve.summary(),
            }
        })
        .collect()
}

/// All isomorphism classes, by brute-force partition of the nonsingular
/// pairs into orbits of `(a4, a6) -> (u^4 a4, u^6 a6)`.
pub fn enumerate_classes(ctx: &FieldCtx) -> Result<Vec<IsoClass>> {
    check_size(ctx)?;
    let q = ctx.q() as usize;
    let scalings: Vec<(FieldElem, FieldElem)> = ctx
        .elements()
        .skip(1)
        .map(|u| {
            let u2 = ctx.square(u);
            let u4 = ctx.square(u2);
            (u4, ctx.mul(u4, u2))
        })
        .collect();
    let mut seen = vec![false; q * q];
    let mut reps = Vec::new();
    for a4 in ctx.elements() {
        for a6 in ctx.elements() {
            let idx = a4.index() as usize * q + a6.index() as usize;
            if seen[idx] || Curve::new(ctx, a4, a6).is_err() {
                continue;
            }
            let mut size = 0;
            for &(u4, u6) in &scalings {
                let (b4, b6) = (ctx.mul(u4, a4), ctx.mul(u6, a6));
                let slot = &mut seen[b4.index() as usize * q + b6.index() as usize];
                if !*slot {
                    *slot = true;
                    size += 1;
                }
            }
            reps.push((a4, a6, size));
        }
    }
    Ok(summarize(ctx, reps))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum ClassKey {
    /// `j = 0`: coset of `a6` modulo sixth powers.
    J0(FieldElem),
    /// `j = 1728`: coset of `a4` modulo fourth powers.
    J1728(FieldElem),
    /// Other `j`: the twist is detected by the character of `a4 a6`.
    Generic(FieldElem, i8),
}

/// Same partition as [`enumerate_classes`], computed by classifying every
/// pair by its j-invariant and twist invariant. Parallel over `a4`.
pub fn enumerate_classes_fast(ctx: &FieldCtx) -> Result<Vec<IsoClass>> {
    check_size(ctx)?;
    let q = ctx.q();
    let e6 = (q - 1) / crate::ec::gcd_u64(6, q - 1);
    let e4 = (q - 1) / crate::ec::gcd_u64(4, q - 1);
    let groups = ctx
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a4| {
            let mut local: HashMap<ClassKey, (FieldElem, FieldElem, u64)> = HashMap::new();
            for a6 in ctx.elements() {
                let Ok(curve) = Curve::new(ctx, a4, a6) else {
                    continue;
                };
                let key = if a4 == ctx.zero() {
                    ClassKey::J0(ctx.pow(a6, e6))
                } else if a6 == ctx.zero() {
                    ClassKey::J1728(ctx.pow(a4, e4))
                } else {
                    ClassKey::Generic(curve.j_invariant(), ctx.chi(ctx.mul(a4, a6)))
                };
                local.entry(key).or_insert((a4, a6, 0)).2 += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut acc, part| {
            for (key, (a4, a6, n)) in part {
                let slot = acc.entry(key).or_insert((a4, a6, 0));
                if (a4, a6) < (slot.0, slot.1) {
                    (slot.0, slot.1) = (a4, a6);
                }
                slot.2 += n;
            }
            acc
        });
    let mut reps: Vec<_> = groups.into_values().collect();
    reps.sort();
    Ok(summarize(ctx, reps))
}

/// Ordinary and supersingular trace tallies over the isomorphism classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub ordinary: TraceTally,
    pub supersingular: TraceTally,
    pub classes: usize,
}

/// `N(t)` for every trace, ordinary classes only; supersingular classes are
/// tallied separately.
pub fn trace_census(ctx: &FieldCtx) -> Result<Census> {
    let classes = enumerate_classes(ctx)?;
    check_twist_duality(ctx, &classes);
    let mut ordinary = TraceTally::for_field(ctx);
    let mut supersingular = TraceTally::for_field(ctx);
    for c in &classes {
        if c.summary.ordinary {
            ordinary.add(c.summary.t, 1);
        } else {
            supersingular.add(c.summary.t, 1);
        }
    }
    Ok(Census {
        ordinary,
        supersingular,
        classes: classes.len(),
    })
}

/// For ordinary `j` outside `{0, 1728}` the classes with that `j` are
/// exactly two quadratic twists with traces `t` and `-t`.
fn check_twist_duality(ctx: &FieldCtx, classes: &[IsoClass]) {
    let mut by_j: BTreeMap<FieldElem, Vec<i64>> = BTreeMap::new();
    for c in classes {
        by_j.entry(c.summary.j).or_default().push(c.summary.t);
    }
    for (j, traces) in by_j {
        if j == ctx.zero() || j == ctx.from_i64(1728) {
            continue;
        }
        if traces.iter().all(|t| t.rem_euclid(ctx.p() as i64) != 0) {
            assert!(
                traces.len() == 2 && traces[0] == -traces[1],
                "twist duality fails at j = {}: traces {traces:?}",
                ctx.format(j)
            );
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cor1Status {
    Match,
    Mismatch,
    ExcludedSupersingular,
}

impl Cor1Status {
    pub fn label(self) -> &'static str {
        match self {
            Cor1Status::Match => "match",
            Cor1Status::Mismatch => "MISMATCH",
            Cor1Status::ExcludedSupersingular => "excluded (supersingular)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor1Row {
    pub t: i64,
    pub count: u64,
    pub h: Option<u64>,
    pub h_w: Option<Rational64>,
    pub status: Cor1Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor1Report {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub rows: Vec<Cor1Row>,
    pub pass: bool,
}

/// Compares `N(t)` with `H(t^2 - 4q)` for every `t` in the Hasse range.
pub fn verify_cor1(ctx: &FieldCtx) -> Result<Cor1Report> {
    let census = trace_census(ctx)?;
    let cache = ClassNumberCache::new();
    let q = ctx.q() as i64;
    let p = ctx.p() as i64;
    let bound = crate::ec::isqrt(4 * ctx.q()) as i64;
    let mut rows = Vec::new();
    for t in -bound..=bound {
        if t.rem_euclid(p) == 0 {
            rows.push(Cor1Row {
                t,
                count: census.supersingular.get(t),
                h: None,
                h_w: None,
                status: Cor1Status::ExcludedSupersingular,
            });
            continue;
        }
        let d = t * t - 4 * q;
        let h = cache.big_h(d)?;
        let count = census.ordinary.get(t);
        rows.push(Cor1Row {
            t,
            count,
            h: Some(h),
            h_w: Some(cache.big_h_w(d)?),
            status: if count == h {
                Cor1Status::Match
            } else {
                Cor1Status::Mismatch
            },
        });
    }
    let pass = rows.iter().all(|r| r.status != Cor1Status::Mismatch);
    Ok(Cor1Report {
        p: ctx.p(),
        k: ctx.k(),
        q: ctx.q(),
        rows,
        pass,
    })
}

/// Supersingular j-invariants in `F_{p^2}`, with the field they live in.
pub fn supersingular_j_invariants(p: u64) -> Result<(FieldCtx, Vec<FieldElem>)> {
    let ctx = make_field(p, 2)?;
    let js = ctx
        .elements()
        .filter(|&j| !Curve::with_j(&ctx, j).is_ordinary())
        .collect();
    Ok((ctx, js))
}

/// `sum 1/#Aut(j)` over supersingular `j`, with geometric automorphism
/// counts 6, 4, 2 at `j = 0`, `1728`, elsewhere.
pub fn supersingular_mass(p: u64) -> Result<Rational64> {
    let (ctx, js) = supersingular_j_invariants(p)?;
    Ok(js
        .into_iter()
        .map(|j| {
            let aut = if j == ctx.zero() {
                6
            } else if j == ctx.from_i64(1728) {
                4
            } else {
                2
            };
            Rational64::new(1, aut)
        })
        .sum())
}

fn check_level(ctx: &FieldCtx, l: u64) -> Result<()> {
    if !is_prime(l) {
        return Err(Error::BadLevel {
            level: l,
            reason: "level must be prime",
        });
    }
    if l == 2 || l == 3 || l == ctx.p() {
        return Err(Error::BadLevel {
            level: l,
            reason: "level must differ from 2, 3 and p",
        });
    }
    Ok(())
}

/// Number of isomorphism classes of pairs `(E, P)` with `P` of exact order
/// `l`, tallied by the (ordinary) trace of `E`.
pub fn gamma1_oracle(ctx: &FieldCtx, l: u64) -> Result<TraceTally> {
    check_level(ctx, l)?;
    let classes = enumerate_classes(ctx)?;
    let parts: Vec<(i64, u64)> = classes
        .par_iter()
        .filter(|c| c.summary.ordinary && c.summary.group_order % l == 0)
        .map(|c| {
            let curve = c.curve(ctx);
            (c.summary.t, count_orbits(&curve, l))
        })
        .collect();
    let mut tally = TraceTally::for_field(ctx);
    for (t, n) in parts {
        tally.add(t, n);
    }
    Ok(tally)
}

/// Orbits of `Aut_{F_q}(E)` on the points of exact order `l`.
fn count_orbits(curve: &Curve, l: u64) -> u64 {
    let autos = curve.automorphisms();
    let mut remaining: std::collections::HashSet<_> =
        curve.exact_order_points(l).into_iter().collect();
    let mut orbits = 0;
    while let Some(&pt) = remaining.iter().next() {
        for &u in &autos {
            remaining.remove(&curve.apply_automorphism(u, &pt));
        }
        orbits += 1;
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f5_has_twelve_classes() {
        let ctx = make_field(5, 1).unwrap();
        let classes = enumerate_classes(&ctx).unwrap();
        assert_eq!(classes.len(), 12);
        let total: u64 = classes.iter().map(|c| c.size).sum();
        assert_eq!(total, 25 - 5);
    }

    #[test]
    fn f5_census() {
        let ctx = make_field(5, 1).unwrap();
        let census = trace_census(&ctx).unwrap();
        let expected = [
            (-4, 1),
            (-3, 1),
            (-2, 2),
            (-1, 1),
            (1, 1),
            (2, 2),
            (3, 1),
            (4, 1),
        ];
        assert_eq!(census.ordinary.iter().collect::<Vec<_>>(), expected);
        assert!(census.ordinary.is_symmetric());
        assert!(census.supersingular.iter().all(|(t, _)| t % 5 == 0));
    }

    #[test]
    fn f7_census_anchor() {
        let ctx = make_field(7, 1).unwrap();
        let census = trace_census(&ctx).unwrap();
        assert_eq!(census.ordinary.get(1), 2);
    }

    #[test]
    fn cor1_report_marks_supersingular_rows() {
        let ctx = make_field(5, 1).unwrap();
        let report = verify_cor1(&ctx).unwrap();
        assert!(report.pass);
        let row0 = report.rows.iter().find(|r| r.t == 0).unwrap();
        assert_eq!(row0.status, Cor1Status::ExcludedSupersingular);
    }

    #[test]
    fn mass_examples() {
        assert_eq!(supersingular_mass(5).unwrap(), Rational64::new(1, 6));
        assert_eq!(supersingular_mass(7).unwrap(), Rational64::new(1, 4));
        assert_eq!(supersingular_mass(13).unwrap(), Rational64::new(1, 2));
        let (ctx, js) = supersingular_j_invariants(13).unwrap();
        assert_eq!(js, vec![ctx.from_i64(5)]);
    }

    #[test]
    fn gamma1_oracle_anchor() {
        let ctx = make_field(11, 1).unwrap();
        let tally = gamma1_oracle(&ctx, 5).unwrap();
        assert_eq!(tally.iter().collect::<Vec<_>>(), vec![(-3, 4), (2, 4)]);
        assert_eq!(tally.total(), 8);
        assert!(matches!(
            gamma1_oracle(&ctx, 11),
            Err(Error::BadLevel { .. })
        ));
        assert!(matches!(
            gamma1_oracle(&ctx, 3),
            Err(Error::BadLevel { .. })
        ));
    }

    #[test]
    fn size_ceiling() {
        let ctx = make_field(4099, 1).unwrap();
        assert!(matches!(
            enumerate_classes(&ctx),
            Err(Error::SizeExceeded { .. })
        ));
    }
}
