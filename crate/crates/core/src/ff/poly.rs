//! Dense univariate polynomials over a prime field.

use std::fmt;

use super::{FieldCtx, FieldElem};

/// Polynomial over `F_p`, coefficients stored lowest degree first with no
/// trailing zeros. The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = Poly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    /// Builds a polynomial from signed integer coefficients, reducing mod p.
    pub fn from_ints(p: u64, coeffs: &[i64]) -> Self {
        Poly::new(p, coeffs.iter().map(|&c| reduce_i64(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Poly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(p: u64, c: i64) -> Self {
        Poly::from_ints(p, &[c])
    }

    pub fn one(p: u64) -> Self {
        Poly::constant(p, 1)
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Poly::new(p, vec![0, 1])
    }

    pub fn monomial(p: u64, c: u64, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Poly::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        Poly::new(self.p, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let p = self.p;
        Poly::new(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Poly {
        let p = self.p;
        Poly::new(p, self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Poly::new(p, out)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Returns `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let p = self.p;
        let inv_lead = inv_mod(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(p), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], inv_lead, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - mul_mod(c, d, p)) % p;
            }
        }
        Some((Poly::new(p, quot), Poly::new(p, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Option<Poly> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        Poly::new(p, coeffs)
    }

    /// If every exponent with a nonzero coefficient is a multiple of p,
    /// returns `g` with `self(x) = g(x^p)`.
    pub fn deflate(&self) -> Option<Poly> {
        let p = self.p as usize;
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, &c)| c != 0 && i % p != 0)
        {
            return None;
        }
        Some(Poly::new(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        ))
    }

    /// Evaluates at a prime-field value.
    pub fn eval_fp(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x % p, p) + c) % p)
    }

    /// Evaluates at an element of an extension of `F_p`.
    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        debug_assert_eq!(ctx.p(), self.p);
        self.coeffs.iter().rev().fold(ctx.zero(), |acc, &c| {
            ctx.add(ctx.mul(acc, x), ctx.from_u64(c))
        })
    }

    /// `self * other mod modulus`.
    pub fn mul_mod_poly(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus).expect("nonzero modulus")
    }

    pub fn pow_mod_poly(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Poly::one(self.p).rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod_poly(&base, modulus);
            }
            base = base.mul_mod_poly(&base, modulus);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test over `F_p`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.make_monic();
        let x = Poly::x(self.p);
        // x^(p^i) mod f for i = 0..=n
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(x.rem(&f).expect("nonzero modulus"));
        for i in 1..=n {
            let next = frob[i - 1].pow_mod_poly(self.p, &f);
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|r| {
            let h = frob[n / r as usize].sub(&x);
            f.gcd(&h).is_one()
        })
    }

    /// Roots in `F_p` by exhaustive evaluation, ascending.
    pub fn roots_fp(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval_fp(x) == 0).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn reduce_i64(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod p.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Distinct prime divisors, ascending, by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let a = Poly::from_ints(7, &[3, 0, 5, 1, 6]);
        let b = Poly::from_ints(7, &[1, 2, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
        assert!(a.div_rem(&Poly::zero(7)).is_none());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let p = 11;
        let common = Poly::from_ints(p, &[-2, 1]);
        let a = common.mul(&Poly::from_ints(p, &[1, 0, 1]));
        let b = common.mul(&Poly::from_ints(p, &[5, 1]));
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn irreducibility_matches_exhaustive_factor_search() {
        // brute force: a degree-n polynomial over F_p is reducible iff it has
        // a monic factor of degree 1..=n/2
        for p in [5u64, 7] {
            for n in 2..=4usize {
                let count = p.pow(n as u32);
                for idx in 0..count {
                    let mut coeffs: Vec<u64> =
                        (0..n).map(|i| (idx / p.pow(i as u32)) % p).collect();
                    coeffs.push(1);
                    let f = Poly::new(p, coeffs);
                    let mut reducible = false;
                    'outer: for d in 1..=n / 2 {
                        for gi in 0..p.pow(d as u32) {
                            let mut gc: Vec<u64> =
                                (0..d).map(|i| (gi / p.pow(i as u32)) % p).collect();
                            gc.push(1);
                            let g = Poly::new(p, gc);
                            if f.rem(&g).unwrap().is_zero() {
                                reducible = true;
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(f.is_irreducible(), !reducible, "{f:?}");
                }
            }
        }
    }

    #[test]
    fn deflate_and_derivative() {
        let f = Poly::from_ints(5, &[1, 0, 0, 0, 0, 3]);
        assert!(f.derivative().is_zero());
        assert_eq!(f.deflate().unwrap(), Poly::from_ints(5, &[1, 3]));
        assert!(Poly::from_ints(5, &[0, 1]).deflate().is_none());
    }

    #[test]
    fn primes() {
        assert!(is_prime(5) && is_prime(101) && !is_prime(1) && !is_prime(91));
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
    }
}
