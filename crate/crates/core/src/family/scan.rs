//! Exhaustive scans of a family over the rational and closed points of the
//! λ-line.

use num_rational::Rational64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::census::{gamma1_oracle, TraceTally, CENSUS_CEILING};
use crate::ec::isqrt;
use crate::error::{Error, Result};
use crate::ff::{make_field, FieldCtx};
use crate::predict::{Outcome, Prediction, PredictionModel};
use crate::quadform::ClassNumberCache;

use super::{FamilySpec, Fiber};

/// How an observed count compares with `deg_s(J) H` and `deg_s(J) H_w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    EqualH,
    EqualHw,
    BoundOnly,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::EqualH => "EQUAL_H",
            Verdict::EqualHw => "EQUAL_HW",
            Verdict::BoundOnly => "BOUND_ONLY",
        }
    }

    fn classify(count: u64, bound_h: u64, bound_hw: Rational64) -> Verdict {
        if count == bound_h {
            Verdict::EqualH
        } else if Rational64::from_integer(count as i64) == bound_hw {
            Verdict::EqualHw
        } else {
            Verdict::BoundOnly
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub t: i64,
    pub count: u64,
    /// `deg_s(J) H(t^2 - 4q)`; absent for isotrivial families.
    pub bound: Option<u64>,
    pub h: u64,
    pub h_w: Rational64,
    pub prediction: Option<Outcome>,
    pub oracle: Option<u64>,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub family: String,
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// `(degree, separable degree)` of the j-map, when non-constant.
    pub j_degree: Option<(u64, u64)>,
    pub declared_j_degree: Option<u64>,
    pub model: Option<PredictionModel>,
    pub gate: Option<u64>,
    pub tally: TraceTally,
    pub oracle: Option<TraceTally>,
    pub rows: Vec<ScanRow>,
    pub good: u64,
    pub bad: u64,
    pub supersingular: u64,
    pub warnings: Vec<String>,
}

impl ScanReport {
    pub fn deg_s(&self) -> Option<u64> {
        self.j_degree.map(|(_, s)| s)
    }

    /// Whether the scan tally matches the pair-counting oracle.
    pub fn oracle_agrees(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| *o == self.tally)
    }
}

#[derive(Default)]
struct Fragment {
    tally: BTreeMap<i64, u64>,
    good: u64,
    bad: u64,
    supersingular: u64,
}

impl Fragment {
    fn merge(mut self, other: Fragment) -> Fragment {
        for (t, n) in other.tally {
            *self.tally.entry(t).or_insert(0) += n;
        }
        self.good += other.good;
        self.bad += other.bad;
        self.supersingular += other.supersingular;
        self
    }
}

/// Tallies the traces of the ordinary good fibers over every `λ` in the
/// field, checking the bound `count <= deg_s(J) H(t^2 - 4q)` on each row.
///
/// Runs on the current rayon pool; the result does not depend on its size.
pub fn scan_rational(spec: &FamilySpec, ctx: &FieldCtx) -> Result<ScanReport> {
    if ctx.p() != spec.p {
        return Err(Error::ContextMismatch);
    }
    let frag = (0..ctx.q())
        .into_par_iter()
        .map(|i| ctx.elem(i))
        .try_fold(Fragment::default, |mut acc, lambda| {
            match spec.specialize(ctx, lambda)? {
                Fiber::Bad => acc.bad += 1,
                Fiber::Good(curve) => {
                    let t = curve.trace();
                    if t.rem_euclid(ctx.p() as i64) == 0 {
                        acc.supersingular += 1;
                    } else {
                        acc.good += 1;
                        *acc.tally.entry(t).or_insert(0) += 1;
                    }
                }
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(Fragment::default, |a, b| Ok(a.merge(b)))?;
    debug_assert_eq!(frag.good + frag.bad + frag.supersingular, ctx.q());

    let mut tally = TraceTally::for_field(ctx);
    for (&t, &n) in &frag.tally {
        tally.add(t, n);
    }
    let oracle = match spec.oracle_level {
        Some(l) if ctx.q() <= CENSUS_CEILING => Some(gamma1_oracle(ctx, l)?),
        _ => None,
    };
    let j_degree = spec.j_degree().ok();
    let deg_s = j_degree.map(|(_, s)| s);

    let mut ts: Vec<i64> = tally.iter().map(|(t, _)| t).collect();
    if let Some(o) = &oracle {
        ts.extend(o.iter().map(|(t, _)| t));
    }
    ts.sort_unstable();
    ts.dedup();

    let cache = ClassNumberCache::new();
    let q = ctx.q() as i64;
    let mut rows = Vec::with_capacity(ts.len());
    for t in ts {
        let count = tally.get(t);
        let disc = t * t - 4 * q;
        let h = cache.big_h(disc)?;
        let h_w = cache.big_h_w(disc)?;
        let bound = deg_s.map(|s| s * h);
        if let Some(bound) = bound {
            if count > bound {
                return Err(Error::BoundViolation { t, count, bound });
            }
        }
        let prediction = spec
            .model
            .map(|m| m.predict(ctx.p(), ctx.k(), t))
            .transpose()?;
        rows.push(ScanRow {
            t,
            count,
            bound,
            h,
            h_w,
            prediction,
            oracle: oracle.as_ref().map(|o| o.get(t)),
            verdict: deg_s
                .map(|s| Verdict::classify(count, s * h, h_w * Rational64::from_integer(s as i64))),
        });
    }

    Ok(ScanReport {
        family: spec.name.clone(),
        p: ctx.p(),
        k: ctx.k(),
        q: ctx.q(),
        j_degree,
        declared_j_degree: spec.declared_j_degree,
        model: spec.model,
        gate: spec.gate,
        tally,
        oracle,
        rows,
        good: frag.good,
        bad: frag.bad,
        supersingular: frag.supersingular,
        warnings: spec.warnings.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityRow {
    pub t: i64,
    pub count: u64,
    pub bound_h: u64,
    pub bound_hw: Rational64,
    pub prediction: Option<Prediction>,
    pub oracle: Option<u64>,
    pub verdict: Verdict,
    /// `count / bound_h`.
    pub ratio: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityReport {
    pub family: String,
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub deg_s: Option<u64>,
    pub rows: Vec<EqualityRow>,
    pub warnings: Vec<String>,
}

/// Compares a finished scan with `deg_s(J) H` and `deg_s(J) H_w` at every
/// ordinary trace passing the family's gate, including traces never
/// observed. Equality is only reported, never enforced.
pub fn equality_report(spec: &FamilySpec, scan: &ScanReport) -> EqualityReport {
    let mut warnings = scan.warnings.clone();
    let mut rows = Vec::new();
    match scan.deg_s() {
        None => warnings.push("equality report suppressed for a constant j-map".into()),
        Some(s) => {
            let cache = ClassNumberCache::new();
            let q = scan.q as i64;
            let tmax = isqrt(4 * scan.q) as i64;
            for t in -tmax..=tmax {
                if t * t >= 4 * q
                    || t.rem_euclid(scan.p as i64) == 0
                    || !spec.gate_passes(scan.q, t)
                {
                    continue;
                }
                let disc = t * t - 4 * q;
                let h = cache.big_h(disc).expect("valid discriminant");
                let h_w = cache.big_h_w(disc).expect("valid discriminant");
                let count = scan.tally.get(t);
                let bound_h = s * h;
                let bound_hw = h_w * Rational64::from_integer(s as i64);
                let prediction = scan
                    .rows
                    .iter()
                    .find(|r| r.t == t)
                    .and_then(|r| r.prediction.clone())
                    .or_else(|| spec.model.and_then(|m| m.predict(scan.p, scan.k, t).ok()))
                    .and_then(|o| o.admissible().cloned());
                rows.push(EqualityRow {
                    t,
                    count,
                    bound_h,
                    bound_hw,
                    prediction,
                    oracle: scan.oracle.as_ref().map(|o| o.get(t)),
                    verdict: Verdict::classify(count, bound_h, bound_hw),
                    ratio: Rational64::new(count as i64, bound_h as i64),
                });
            }
        }
    }
    EqualityReport {
        family: scan.family.clone(),
        p: scan.p,
        k: scan.k,
        q: scan.q,
        deg_s: scan.deg_s(),
        rows,
        warnings,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub degree: u32,
    pub closed_points: u64,
    /// Closed points whose fiber is good and ordinary.
    pub good_closed_points: u64,
    /// Good closed points whose fiber has trace `t` over the residue field.
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPointScan {
    pub t: i64,
    pub max_degree: u32,
    pub count: u64,
    /// `deg_s(J) sum_{k <= B, t^2 < 4q^k} H(t^2 - 4q^k)`.
    pub bound: Option<u64>,
    pub per_degree: Vec<DegreeStats>,
}

impl ClosedPointScan {
    /// `sum_{d | k} d * (good closed points of degree d)`, which must equal
    /// the number of good rational fibers over the degree-`k` extension.
    pub fn good_points_over(&self, k: u32) -> u64 {
        self.per_degree
            .iter()
            .filter(|s| k % s.degree == 0)
            .map(|s| s.degree as u64 * s.good_closed_points)
            .sum()
    }
}

/// Counts closed points of degree at most `max_degree` whose fiber has
/// trace `t`. A closed point of degree `d` is an orbit of size `d` of the
/// `q`-power Frobenius on the degree-`d` extension; each orbit is visited
/// through its least element. Fails if the count exceeds the bound.
pub fn scan_closed_points(
    spec: &FamilySpec,
    base: &FieldCtx,
    max_degree: u32,
    t: i64,
) -> Result<ClosedPointScan> {
    if base.p() != spec.p {
        return Err(Error::ContextMismatch);
    }
    if max_degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = base.q();
    let mut per_degree = Vec::with_capacity(max_degree as usize);
    for d in 1..=max_degree {
        let ctx = make_field(base.p(), base.k() * d)?;
        let (closed, good, count) = (0..ctx.q())
            .into_par_iter()
            .map(|i| ctx.elem(i))
            .try_fold(
                || (0u64, 0u64, 0u64),
                |(mut closed, mut good, mut count), lambda| {
                    let mut orbit_min = lambda;
                    let mut y = lambda;
                    let mut size = 0;
                    loop {
                        y = ctx.pow(y, q);
                        size += 1;
                        if y == lambda {
                            break;
                        }
                        orbit_min = orbit_min.min(y);
                    }
                    if size == d && orbit_min == lambda {
                        closed += 1;
                        if let Fiber::Good(curve) = spec.specialize(&ctx, lambda)? {
                            let tr = curve.trace();
                            if tr.rem_euclid(ctx.p() as i64) != 0 {
                                good += 1;
                                count += u64::from(tr == t);
                            }
                        }
                    }
                    Ok::<_, Error>((closed, good, count))
                },
            )
            .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
        per_degree.push(DegreeStats {
            degree: d,
            closed_points: closed,
            good_closed_points: good,
            count,
        });
    }

    let bound = match spec.j_degree() {
        Ok((_, s)) => {
            let mut sum = 0u64;
            let mut qk = 1i128;
            for _ in 1..=max_degree {
                qk *= q as i128;
                let disc = (t as i128) * (t as i128) - 4 * qk;
                if disc < 0 {
                    sum += crate::quadform::kronecker_h(disc as i64)?;
                }
            }
            Some(s * sum)
        }
        Err(_) => None,
    };
    let count = per_degree.iter().map(|s| s.count).sum();
    if let Some(bound) = bound {
        if count > bound {
            return Err(Error::BoundViolation { t, count, bound });
        }
    }
    Ok(ClosedPointScan {
        t,
        max_degree,
        count,
        bound,
        per_degree,
    })
}
