//! Closed-form predictions for `π(k,t)''` on universal families with level
//! structure, with their congruence gates.
//!
//! Each prediction is returned twice: multiplied by `H(D)` and by the
//! weighted `H_w(D)`. The two differ exactly when an overorder has
//! discriminant -3 or -4.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::ff::{is_prime, prime_divisors};
use crate::quadform::{is_valid_discriminant, kronecker_h, kronecker_h_w};

pub fn euler_phi(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, l| acc / l * (l - 1))
}

/// `ψ(N) = N prod_{l | N} (1 + 1/l)`.
pub fn dedekind_psi(n: u64) -> u64 {
    prime_divisors(n)
        .into_iter()
        .fold(n, |acc, l| acc / l * (l + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredictionModel {
    /// Igusa structure of level `p^n`.
    Igusa { p: u64, n: u32 },
    /// Full level `N` structure; the formula is implemented as stated.
    FullLevel { level: u64 },
    /// A point of exact prime order `l`.
    Gamma1 { l: u64 },
}

impl fmt::Display for PredictionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictionModel::Igusa { p, n } => write!(f, "igusa(p={p}, n={n})"),
            PredictionModel::FullLevel { level } => write!(f, "fulllevel(N={level}, as stated)"),
            PredictionModel::Gamma1 { l } => write!(f, "gamma1(l={l})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub model: PredictionModel,
    pub t: i64,
    /// Discriminant fed to `H`.
    pub disc: i64,
    pub h: u64,
    pub h_w: Rational64,
    pub value_h: Rational64,
    pub value_hw: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Admissible(Prediction),
    Inadmissible { t: i64, reason: &'static str },
}

impl Outcome {
    pub fn admissible(&self) -> Option<&Prediction> {
        match self {
            Outcome::Admissible(p) => Some(p),
            Outcome::Inadmissible { .. } => None,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible().is_some()
    }
}

impl PredictionModel {
    /// Degree of the j-map the prediction multiplies by.
    pub fn multiplier(&self) -> Rational64 {
        match *self {
            PredictionModel::Igusa { p, n } => Rational64::new(euler_phi(p.pow(n)) as i64, 2),
            PredictionModel::FullLevel { level } => {
                Rational64::new((level * euler_phi(level) * dedekind_psi(level)) as i64, 2)
            }
            PredictionModel::Gamma1 { l } => Rational64::new((l * l - 1) as i64, 2),
        }
    }

    /// Modulus `m` of the gate `t = q^k + 1 (mod m)`.
    pub fn gate_modulus(&self) -> u64 {
        match *self {
            PredictionModel::Igusa { p, n } => p.pow(n),
            PredictionModel::FullLevel { level } => level * level,
            PredictionModel::Gamma1 { l } => l,
        }
    }

    fn check_level(&self, p: u64) -> Result<()> {
        match *self {
            PredictionModel::Igusa { p: ip, n } => {
                if ip != p || n == 0 {
                    return Err(Error::BadLevel {
                        level: ip.pow(n),
                        reason: "Igusa level must be a positive power of p",
                    });
                }
            }
            PredictionModel::FullLevel { level } => {
                if level <= 2 {
                    return Err(Error::BadLevel {
                        level,
                        reason: "full level needs N > 2",
                    });
                }
                if level % p == 0 {
                    return Err(Error::BadLevel {
                        level,
                        reason: "full level must be prime to p",
                    });
                }
            }
            PredictionModel::Gamma1 { l } => {
                if !is_prime(l) || l == 2 || l == 3 || l == p {
                    return Err(Error::BadLevel {
                        level: l,
                        reason: "level must be a prime different from 2, 3 and p",
                    });
                }
            }
        }
        Ok(())
    }

    /// Evaluates the prediction for trace `t` over `F_{q^k}`.
    pub fn predict(&self, q: u64, k: u32, t: i64) -> Result<Outcome> {
        let p = *prime_divisors(q).first().ok_or(Error::NonPrime(q))?;
        if prime_divisors(q).len() != 1 {
            return Err(Error::NonPrime(q));
        }
        if p <= 3 {
            return Err(Error::CharTooSmall(p));
        }
        self.check_level(p)?;
        let qk = (q as i128)
            .checked_pow(k)
            .filter(|&v| v < i64::MAX as i128 / 8)
            .ok_or(Error::HasseViolation { t, q })?;
        let t128 = t as i128;
        if t128 * t128 > 4 * qk {
            return Err(Error::HasseViolation { t, q: qk as u64 });
        }
        if t.rem_euclid(p as i64) == 0 {
            return Err(Error::PDividesTrace { p, t });
        }
        let m = self.gate_modulus() as i128;
        if (t128 - qk - 1).rem_euclid(m) != 0 {
            return Ok(Outcome::Inadmissible {
                t,
                reason: "t != q^k + 1 mod gate modulus",
            });
        }
        let full = (t128 * t128 - 4 * qk) as i64;
        let disc = match *self {
            PredictionModel::FullLevel { level } => {
                let n = level as i128;
                if (qk - 1).rem_euclid(n) != 0 {
                    return Ok(Outcome::Inadmissible {
                        t,
                        reason: "q^k != 1 mod N",
                    });
                }
                let n2 = (level * level) as i64;
                if full % n2 != 0 || !is_valid_discriminant(full / n2) {
                    return Ok(Outcome::Inadmissible {
                        t,
                        reason: "(t^2 - 4q^k)/N^2 is not a discriminant",
                    });
                }
                full / n2
            }
            _ => full,
        };
        let h = kronecker_h(disc)?;
        let h_w = kronecker_h_w(disc)?;
        let mult = self.multiplier();
        Ok(Outcome::Admissible(Prediction {
            model: *self,
            t,
            disc,
            h,
            h_w,
            value_h: mult * Rational64::from_integer(h as i64),
            value_hw: mult * h_w,
        }))
    }
}

/// `(φ(p^n)/2) H(t^2 - 4p^k)`, gated by `t = p^k + 1 (mod p^n)`.
pub fn igusa_prediction(p: u64, n: u32, k: u32, t: i64) -> Result<Outcome> {
    PredictionModel::Igusa { p, n }.predict(p, k, t)
}

/// `(1/2) N φ(N) ψ(N) H((t^2 - 4q^k)/N^2)`, gated by `t = q^k + 1 (mod N^2)`
/// and `q^k = 1 (mod N)`.
pub fn full_level_prediction(level: u64, q: u64, k: u32, t: i64) -> Result<Outcome> {
    PredictionModel::FullLevel { level }.predict(q, k, t)
}

/// `(1/2)(l^2 - 1) H(t^2 - 4p^k)`, gated by `t = p^k + 1 (mod l)`.
pub fn gamma1_prediction(l: u64, p: u64, k: u32, t: i64) -> Result<Outcome> {
    PredictionModel::Gamma1 { l }.predict(p, k, t)
}
