mod common;

use proptest::prelude::*;

use frobtrace::census::{enumerate_classes, enumerate_classes_fast};
use frobtrace::ec::Curve;
use frobtrace::ff::{make_field, quadratic_character, FieldCtx};
use frobtrace::quadform::{class_number_h, reduce_form, reduce_form_with_transform, QuadForm};

fn fields() -> Vec<FieldCtx> {
    [(13, 1), (7, 2), (5, 3), (101, 1), (11, 2)]
        .into_iter()
        .map(|(p, k)| make_field(p, k).unwrap())
        .collect()
}

fn arb_field_elems() -> impl Strategy<Value = (usize, u64, u64, u64)> {
    (0..5usize, any::<u64>(), any::<u64>(), any::<u64>())
}

proptest! {
    #[test]
    fn field_axioms((i, a, b, c) in arb_field_elems()) {
        let fs = fields();
        let f = &fs[i];
        let (a, b, c) = (f.elem(a % f.q()), f.elem(b % f.q()), f.elem(c % f.q()));
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if a != f.zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn frobenius_is_additive_and_of_order_k((i, a, b, _) in arb_field_elems()) {
        let fs = fields();
        let f = &fs[i];
        let (a, b) = (f.elem(a % f.q()), f.elem(b % f.q()));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(a), f.pow(a, f.p()));
        let mut x = a;
        for _ in 0..f.k() {
            x = f.frobenius(x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn character_is_multiplicative((i, a, b, _) in arb_field_elems()) {
        let fs = fields();
        let f = &fs[i];
        let (a, b) = (f.elem(a % f.q()), f.elem(b % f.q()));
        prop_assert_eq!(f.chi(f.mul(a, b)), f.chi(a) * f.chi(b));
        prop_assert_eq!(f.chi(a), quadratic_character(f, a));
    }

    #[test]
    fn bsgs_matches_naive(pi in 0..4usize, a4 in any::<u64>(), a6 in any::<u64>()) {
        let (p, k) = [(16411, 1), (32003, 1), (131, 2), (23, 3)][pi];
        let f = make_field(p, k).unwrap();
        if let Ok(e) = Curve::new(&f, f.elem(a4 % f.q()), f.elem(a6 % f.q())) {
            prop_assert_eq!(e.count_points_bsgs(), e.count_points_naive());
            prop_assert_eq!(e.quadratic_twist().trace(), -e.trace());
        }
    }

    #[test]
    fn reduction_is_idempotent_and_class_invariant(
        a in 1i64..=50, b in -50i64..=50, c in 1i64..=50,
        word in proptest::collection::vec(0..3u8, 0..12),
    ) {
        let f = QuadForm::new(a, b, c);
        prop_assume!(f.discriminant() < 0);
        let g = reduce_form(f).unwrap();
        prop_assert!(g.is_reduced());
        prop_assert_eq!(reduce_form(g).unwrap(), g);
        let (_, m) = reduce_form_with_transform(f).unwrap();
        prop_assert_eq!(f.act(&m), g);
        let mut moved = f;
        for w in word {
            let m = match w {
                0 => [[0, -1], [1, 0]],
                1 => [[1, 1], [0, 1]],
                _ => [[1, -1], [0, 1]],
            };
            moved = moved.act(&m);
        }
        prop_assert_eq!(reduce_form(moved).unwrap(), g);
    }
}

#[test]
fn small_class_numbers_match_orbit_count() {
    let spf = common::spf_sieve((400 * 400 + 400) / 4);
    for d in (-400i64..=-3).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
        assert_eq!(
            class_number_h(d).unwrap(),
            common::brute_class_number(d, &spf),
            "D = {d}"
        );
        assert_eq!(
            frobtrace::quadform::kronecker_h(d).unwrap(),
            common::brute_kronecker_h(d, &spf),
            "D = {d}"
        );
    }
}

#[test]
fn class_partition_agrees_with_orbit_bitmap() {
    for (p, k) in [(5, 1), (7, 1), (11, 1), (13, 1), (5, 2), (7, 2)] {
        let f = make_field(p, k).unwrap();
        let brute = enumerate_classes(&f).unwrap();
        let fast = enumerate_classes_fast(&f).unwrap();
        assert_eq!(brute, fast, "F_{}", f.q());
        let total: u64 = brute.iter().map(|c| c.size).sum();
        assert_eq!(total, f.q() * f.q() - f.q(), "F_{}", f.q());
    }
}
