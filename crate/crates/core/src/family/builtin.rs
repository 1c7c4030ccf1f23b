use crate::error::{Error, Result};
use crate::ff::{is_prime, Poly, RationalFunction};
use crate::predict::PredictionModel;

use super::{FamilySpec, MarkedPoint};

pub const BUILTIN_FAMILIES: [&str; 4] = ["legendre", "jline", "x1_5", "x1_7"];

fn poly(p: u64, coeffs: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(Poly::from_ints(p, coeffs))
}

/// Tate normal form `y^2 + (1 - c)xy - by = x^3 - bx^2` with `(0, 0)` of
/// exact order `l`.
fn tate_normal(
    name: &str,
    p: u64,
    l: u64,
    b: RationalFunction,
    c: RationalFunction,
    bad: Option<Poly>,
) -> Result<FamilySpec> {
    if p == l {
        return Err(Error::BadCharacteristic {
            family: name.to_string(),
            p,
        });
    }
    let zero = RationalFunction::constant(p, 0);
    let a1 = RationalFunction::constant(p, 1).sub(&c);
    let coeffs = [a1, b.neg(), b.neg(), zero.clone(), zero.clone()];
    let mut spec = FamilySpec::from_long_weierstrass(name, p, coeffs, bad)?;
    spec.marked_point = Some(MarkedPoint {
        x: zero.clone(),
        y: zero,
        order: l,
    });
    spec.declared_j_degree = Some((l * l - 1) / 2);
    spec.gate = Some(l);
    spec.model = Some(PredictionModel::Gamma1 { l });
    spec.oracle_level = Some(l);
    Ok(spec)
}

/// Looks up one of the built-in families over `F_p`.
pub fn builtin_family(name: &str, p: u64) -> Result<FamilySpec> {
    if !BUILTIN_FAMILIES.contains(&name) {
        return Err(Error::UnknownFamily(name.to_string()));
    }
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if p <= 3 {
        return Err(Error::BadCharacteristic {
            family: name.to_string(),
            p,
        });
    }
    let zero = RationalFunction::constant(p, 0);
    match name {
        "legendre" => {
            // y^2 = x(x - 1)(x - λ)
            let coeffs = [
                zero.clone(),
                poly(p, &[-1, -1]),
                zero.clone(),
                RationalFunction::lambda(p),
                zero,
            ];
            let bad = Poly::from_ints(p, &[0, -1, 1]);
            let mut spec = FamilySpec::from_long_weierstrass(name, p, coeffs, Some(bad))?;
            spec.declared_j_degree = Some(6);
            Ok(spec)
        }
        "jline" => {
            let shifted = poly(p, &[-1728, 1]);
            let one = RationalFunction::constant(p, 1);
            let coeffs = [
                one.clone(),
                zero.clone(),
                zero.clone(),
                RationalFunction::constant(p, -36).div(&shifted)?,
                one.neg().div(&shifted)?,
            ];
            let bad = Poly::from_ints(p, &[0, -1728, 1]);
            let mut spec = FamilySpec::from_long_weierstrass(name, p, coeffs, Some(bad))?;
            spec.declared_j_degree = Some(1);
            Ok(spec)
        }
        "x1_5" => {
            let lambda = RationalFunction::lambda(p);
            // λ^5 (λ^2 - 11λ - 1)
            let bad = Poly::from_ints(p, &[0, 0, 0, 0, 0, -1, -11, 1]);
            tate_normal(name, p, 5, lambda.clone(), lambda, Some(bad))
        }
        "x1_7" => {
            let b = poly(p, &[0, 0, -1, 1]);
            let c = poly(p, &[0, -1, 1]);
            tate_normal(name, p, 7, b, c, None)
        }
        _ => unreachable!("checked against BUILTIN_FAMILIES"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_degrees_match_computed() {
        for name in BUILTIN_FAMILIES {
            for p in [5u64, 7, 11, 13, 19, 23] {
                let spec = match builtin_family(name, p) {
                    Ok(s) => s,
                    Err(Error::BadCharacteristic { .. }) => continue,
                    Err(e) => panic!("{name} p={p}: {e}"),
                };
                let (_, sep) = spec.j_degree().unwrap();
                assert_eq!(Some(sep), spec.declared_j_degree, "{name} p={p}");
            }
        }
    }

    #[test]
    fn legendre_j_map() {
        let spec = builtin_family("legendre", 5).unwrap();
        // 2^8 (λ^2 - λ + 1)^3 / (λ^2 (λ - 1)^2)
        let num = Poly::from_ints(5, &[1, -1, 1]).pow(3).scale(256 % 5);
        let den = Poly::from_ints(5, &[0, 0, 1, -2, 1]);
        let expected = RationalFunction::new(num, den).unwrap();
        assert_eq!(spec.j_map, expected);
        assert_eq!(spec.j_degree().unwrap(), (6, 6));
    }

    #[test]
    fn jline_j_map_is_identity() {
        for p in [5u64, 7, 11, 13] {
            let spec = builtin_family("jline", p).unwrap();
            assert_eq!(spec.j_map, RationalFunction::lambda(p), "p={p}");
        }
    }

    #[test]
    fn x1_5_bad_roots() {
        let spec = builtin_family("x1_5", 11).unwrap();
        assert_eq!(spec.bad_roots_fp(), vec![0, 1, 10]);
    }

    #[test]
    fn lookup_errors() {
        assert!(matches!(
            builtin_family("x1_5", 5),
            Err(Error::BadCharacteristic { .. })
        ));
        assert!(matches!(
            builtin_family("x1_7", 7),
            Err(Error::BadCharacteristic { .. })
        ));
        assert!(matches!(
            builtin_family("legendre", 3),
            Err(Error::BadCharacteristic { .. })
        ));
        assert!(matches!(
            builtin_family("x1_11", 13),
            Err(Error::UnknownFamily(_))
        ));
    }
}
