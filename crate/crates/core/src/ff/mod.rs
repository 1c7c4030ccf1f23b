//! Finite fields `F_{p^k}` in a polynomial basis, plus polynomials and
//! rational functions over the prime field.
//!
//! Elements are packed as integers `sum c_i p^i` in `[0, q)`, which is the
//! canonical coefficient vector written in base p. Element order is therefore
//! lexicographic on `(c_{k-1}, ..., c_0)`, and `0..q` enumerates the field.

mod poly;
mod ratfn;

use std::fmt;
use std::sync::OnceLock;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) use poly::reduce_i64;
pub use poly::{is_prime, prime_divisors, Poly};
pub use ratfn::{degree_and_separability, RationalFunction};

/// Default ceiling on `q = p^k` for anything that enumerates the field.
pub const DEFAULT_CEILING: u64 = 1 << 20;

/// Hard limit: prime-field products must fit in a u64.
const MAX_CEILING: u64 = 1 << 32;

/// Square-root tables are built lazily for fields up to this size.
const TABLE_LIMIT: u64 = 1 << 22;

type Digits = SmallVec<[u64; 8]>;

/// An element of `F_{p^k}`. Only meaningful together with its [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    /// Position of the element in the canonical enumeration `0..q`.
    pub fn index(self) -> u64 {
        self.0
    }
}

/// Immutable description of `F_{p^k}` with a fixed irreducible modulus.
pub struct FieldCtx {
    p: u64,
    k: u32,
    q: u64,
    /// Monic, lowest degree first, length k + 1.
    modulus: Vec<u64>,
    roots: OnceLock<Vec<u32>>,
    nonresidue: OnceLock<FieldElem>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus_poly())
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Builds `F_{p^k}` with the default size ceiling.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx> {
    FieldCtx::with_ceiling(p, k, DEFAULT_CEILING)
}

impl FieldCtx {
    /// Builds `F_{p^k}`, refusing fields larger than `ceiling`.
    ///
    /// The modulus is the least monic irreducible polynomial of degree k,
    /// ordered lexicographically from the `x^{k-1}` coefficient down.
    pub fn with_ceiling(p: u64, k: u32, ceiling: u64) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p <= 3 {
            return Err(Error::CharTooSmall(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let ceiling = ceiling.min(MAX_CEILING);
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= ceiling)
            .ok_or(Error::SizeExceeded { p, k, ceiling })?;
        let modulus = least_irreducible(p, k as usize);
        Ok(FieldCtx {
            p,
            k,
            q,
            modulus,
            roots: OnceLock::new(),
            nonresidue: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus_poly(&self) -> Poly {
        Poly::new(self.p, self.modulus.clone())
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Element with the given enumeration index.
    pub fn elem(&self, index: u64) -> FieldElem {
        assert!(index < self.q, "index {index} outside F_{}", self.q);
        FieldElem(index)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_i64(&self, c: i64) -> FieldElem {
        FieldElem(reduce_i64(c, self.p))
    }

    pub fn from_u64(&self, c: u64) -> FieldElem {
        FieldElem(c % self.p)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.k as usize);
        FieldElem(
            coeffs
                .iter()
                .rev()
                .fold(0, |acc, &c| acc * self.p + c % self.p),
        )
    }

    /// Coefficient vector of length k, lowest degree first.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        self.digits(a).into_vec()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(FieldElem)
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    fn digits(&self, a: FieldElem) -> Digits {
        let mut v = a.0;
        (0..self.k)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn pack(&self, digits: &[u64]) -> FieldElem {
        FieldElem(digits.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= self.p { s - self.p } else { s });
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Digits = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem((self.p - a.0) % self.p);
        }
        let d: Digits = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.pack(&d)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p;
        if self.k == 1 {
            return FieldElem(a.0 * b.0 % p);
        }
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * k - 1);
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = i - k + j;
                prod[idx] = (prod[idx] + p - c * m % p) % p;
            }
        }
        self.pack(&prod[..k])
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        Some(self.pow(a, self.q - 2))
    }

    /// `a / b`; `None` when b is zero.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// Quadratic character via a lookup table when one is available.
    /// Agrees with [`quadratic_character`].
    pub fn chi(&self, a: FieldElem) -> i8 {
        if a.0 == 0 {
            return 0;
        }
        match self.root_table() {
            Some(t) if t[a.0 as usize] != u32::MAX => 1,
            Some(_) => -1,
            None => quadratic_character(self, a),
        }
    }

    /// A square root of `a`, if one exists.
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return Some(a);
        }
        if let Some(t) = self.root_table() {
            let r = t[a.0 as usize];
            return (r != u32::MAX).then_some(FieldElem(r as u64));
        }
        self.tonelli_shanks(a)
    }

    /// Some fixed quadratic nonresidue.
    pub fn nonresidue(&self) -> FieldElem {
        *self.nonresidue.get_or_init(|| {
            self.elements()
                .skip(1)
                .find(|&x| quadratic_character(self, x) == -1)
                .expect("odd field has nonresidues")
        })
    }

    fn root_table(&self) -> Option<&[u32]> {
        if self.q > TABLE_LIMIT {
            return None;
        }
        Some(self.roots.get_or_init(|| {
            let mut table = vec![u32::MAX; self.q as usize];
            for y in self.elements() {
                let s = self.square(y);
                let slot = &mut table[s.0 as usize];
                if *slot == u32::MAX || (y.0 as u32) < *slot {
                    *slot = y.0 as u32;
                }
            }
            table
        }))
    }

    fn tonelli_shanks(&self, a: FieldElem) -> Option<FieldElem> {
        if quadratic_character(self, a) != 1 {
            return None;
        }
        let mut s = 0;
        let mut m = self.q - 1;
        while m % 2 == 0 {
            m /= 2;
            s += 1;
        }
        let z = self.nonresidue();
        let mut c = self.pow(z, m);
        let mut x = self.pow(a, (m + 1) / 2);
        let mut t = self.pow(a, m);
        let mut r = s;
        while t != self.one() {
            let mut i = 0;
            let mut tt = t;
            while tt != self.one() {
                tt = self.square(tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..r - i - 1 {
                b = self.square(b);
            }
            x = self.mul(x, b);
            c = self.square(b);
            t = self.mul(t, c);
            r = i;
        }
        Some(x)
    }

    /// Human-readable element: an integer for prime fields, otherwise a
    /// polynomial in the generator `z`.
    pub fn format(&self, a: FieldElem) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        let s = Poly::new(self.p, self.coeffs(a)).to_string();
        s.replace('x', "z")
    }
}

/// Legendre symbol of `x` in `F_q`, computed as `x^((q-1)/2)`.
pub fn quadratic_character(ctx: &FieldCtx, x: FieldElem) -> i8 {
    if x == ctx.zero() {
        return 0;
    }
    let r = ctx.pow(x, (ctx.q - 1) / 2);
    if r == ctx.one() {
        1
    } else {
        debug_assert_eq!(r, ctx.from_i64(-1));
        -1
    }
}

/// Least monic irreducible of degree k in the enumeration order used by
/// [`FieldElem`].
fn least_irreducible(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k as u32);
    for idx in 0..count {
        let mut coeffs: Vec<u64> = (0..k).map(|i| (idx / p.pow(i as u32)) % p).collect();
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        if Poly::new(p, coeffs.clone()).is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.q(), 5);
        assert_eq!(f5.modulus_poly(), Poly::x(5));

        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.q(), 25);
        assert_eq!(f25.modulus_poly(), Poly::from_ints(5, &[2, 0, 1]));

        assert_eq!(make_field(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(make_field(3, 1).unwrap_err(), Error::CharTooSmall(3));
        assert!(matches!(make_field(5, 9), Err(Error::SizeExceeded { .. })));
        assert_eq!(make_field(5, 0).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn modulus_is_lexicographically_least() {
        // exhaustive scan of monic quadratics x^2 + b x + c ordered by (b, c)
        for p in [5u64, 7, 11] {
            let ctx = make_field(p, 2).unwrap();
            let mut expected = None;
            'scan: for b in 0..p {
                for c in 0..p {
                    let has_root = (0..p).any(|x| (x * x + b * x + c) % p == 0);
                    if !has_root {
                        expected = Some(Poly::new(p, vec![c, b, 1]));
                        break 'scan;
                    }
                }
            }
            assert_eq!(Some(ctx.modulus_poly()), expected);
        }
    }

    #[test]
    fn deterministic_construction() {
        assert_eq!(make_field(7, 3).unwrap(), make_field(7, 3).unwrap());
    }

    #[test]
    fn character_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(quadratic_character(&f5, f5.from_i64(4)), 1);
        assert_eq!(quadratic_character(&f5, f5.zero()), 0);
        assert_eq!(quadratic_character(&f5, f5.from_i64(2)), -1);
    }

    #[test]
    fn tonelli_shanks_agrees_with_table() {
        for (p, k) in [(13, 1), (17, 1), (5, 3), (7, 2)] {
            let ctx = make_field(p, k).unwrap();
            for a in ctx.elements().skip(1) {
                let ts = ctx.tonelli_shanks(a);
                assert_eq!(ts.is_some(), ctx.sqrt(a).is_some());
                if let Some(r) = ts {
                    assert_eq!(ctx.square(r), a);
                }
            }
        }
    }

    #[test]
    fn embedding_of_integers() {
        let ctx = make_field(7, 2).unwrap();
        assert_eq!(ctx.from_i64(-1), ctx.neg(ctx.one()));
        assert_eq!(ctx.coeffs(ctx.from_i64(10)), vec![3, 0]);
        let z = ctx.from_coeffs(&[0, 1]);
        assert_eq!(ctx.format(z), "z");
    }
}
