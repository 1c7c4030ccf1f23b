use proptest::prelude::*;

use frobtrace::family::{
    builtin_family, parse_family, scan_closed_points, scan_rational, Fiber, BUILTIN_FAMILIES,
};
use frobtrace::ff::make_field;
use frobtrace::report::{scan_table, tally_from_csv};
use frobtrace::Error;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn config_legendre_scans_like_builtin() {
    let parsed = parse_family(&fixture("legendre.conf")).unwrap();
    let builtin = builtin_family("legendre", 7).unwrap();
    assert_eq!(parsed.coeffs, builtin.coeffs);
    assert_eq!(parsed.bad_locus, builtin.bad_locus);
    let ctx = make_field(7, 2).unwrap();
    let a = scan_rational(&parsed, &ctx).unwrap();
    let b = scan_rational(&builtin, &ctx).unwrap();
    assert_eq!(a.tally, b.tally);
    assert_eq!(
        (a.good, a.bad, a.supersingular),
        (b.good, b.bad, b.supersingular)
    );
}

#[test]
fn config_x1_5_matches_builtin_and_oracle() {
    let parsed = parse_family(&fixture("x1_5.conf")).unwrap();
    assert_eq!(parsed.j_degree().unwrap(), (12, 12));
    let ctx = make_field(11, 1).unwrap();
    let scan = scan_rational(&parsed, &ctx).unwrap();
    let builtin = scan_rational(&builtin_family("x1_5", 11).unwrap(), &ctx).unwrap();
    assert_eq!(scan.tally, builtin.tally);
    let pred = scan.rows[0].prediction.as_ref().unwrap();
    assert!(pred.is_admissible());
}

#[test]
fn wrong_marked_order_stops_the_scan() {
    let spec = parse_family(&fixture("x1_5_wrong_order.conf")).unwrap();
    let ctx = make_field(11, 1).unwrap();
    match scan_rational(&spec, &ctx) {
        Err(Error::MarkedPointOrderViolation {
            expected, found, ..
        }) => {
            assert_eq!(expected, 7);
            assert_eq!(found, "5");
        }
        other => panic!("expected a marked-point violation, got {other:?}"),
    }
}

#[test]
fn marked_points_have_exact_order_on_every_good_fiber() {
    for (name, ps) in [
        ("x1_5", &[7u64, 11, 13, 19][..]),
        ("x1_7", &[5, 11, 13][..]),
    ] {
        for &p in ps {
            let spec = builtin_family(name, p).unwrap();
            for k in [1, 2] {
                let ctx = make_field(p, k).unwrap();
                for lambda in ctx.elements() {
                    spec.specialize(&ctx, lambda).unwrap();
                }
            }
        }
    }
}

#[test]
fn closed_and_rational_counts_agree() {
    for (name, p, ks) in [
        ("legendre", 7u64, &[2u32, 3][..]),
        ("jline", 5, &[2, 3]),
        ("x1_5", 11, &[2]),
    ] {
        let spec = builtin_family(name, p).unwrap();
        let base = make_field(p, 1).unwrap();
        for &k in ks {
            let ext = make_field(p, k).unwrap();
            let rational = scan_rational(&spec, &ext).unwrap();
            let cp = scan_closed_points(&spec, &base, k, 1).unwrap();
            assert_eq!(cp.good_points_over(k), rational.good, "{name} p={p} k={k}");
        }
    }
}

#[test]
fn worker_count_does_not_change_reports() {
    let spec = builtin_family("x1_7", 13).unwrap();
    let ctx = make_field(13, 2).unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| scan_rational(&spec, &ctx).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn good_fibers_are_nonsingular() {
    let spec = builtin_family("jline", 13).unwrap();
    let ctx = make_field(13, 1).unwrap();
    for lambda in ctx.elements() {
        if let Fiber::Good(c) = spec.specialize(&ctx, lambda).unwrap() {
            assert_ne!(c.discriminant(), ctx.zero());
            assert_eq!(c.j_invariant(), lambda);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scan_csv_round_trips(fi in 0..BUILTIN_FAMILIES.len(), pi in 0..4usize, k in 1u32..=2) {
        let p = [11u64, 13, 17, 19][pi];
        let name = BUILTIN_FAMILIES[fi];
        let spec = builtin_family(name, p).unwrap();
        let ctx = make_field(p, k).unwrap();
        let scan = scan_rational(&spec, &ctx).unwrap();
        let csv = scan_table(&scan).to_csv();
        prop_assert_eq!(tally_from_csv(&csv, p, k, ctx.q()).unwrap(), scan.tally);
    }
}
