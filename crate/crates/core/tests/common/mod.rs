//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

/// Smallest-prime-factor table for `0..=n`.
pub fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn divisors(mut n: u64, spf: &[u32], out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    while n > 1 {
        let p = spf[n as usize] as u64;
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Number of SL2(Z)-orbits of primitive positive definite forms of
/// discriminant `d`, found by closing every form with coefficients bounded by
/// `|d|` under `S: (a,b,c) -> (c,-b,a)` and `T: (a,b,c) -> (a,b+2a,a+b+c)`.
///
/// `spf` must cover `(d^2 + |d|) / 4`.
pub fn brute_class_number(d: i64, spf: &[u32]) -> u64 {
    let bound = -d;
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut forms = Vec::new();
    let mut divs = Vec::new();
    for b in -bound..=bound {
        if (b - d).rem_euclid(2) != 0 {
            continue;
        }
        let n = ((b * b - d) / 4) as u64;
        divisors(n, spf, &mut divs);
        for &a in &divs {
            let (a, c) = (a as i64, (n / a) as i64);
            if a <= bound && c <= bound && gcd(gcd(a, b), c) == 1 {
                index.insert((a, b), forms.len());
                forms.push((a, b, c));
            }
        }
    }
    let mut uf = UnionFind((0..forms.len()).collect());
    for (i, &(a, b, c)) in forms.iter().enumerate() {
        if let Some(&j) = index.get(&(c, -b)) {
            uf.union(i, j);
        }
        if let Some(&j) = index.get(&(a, b + 2 * a)) {
            debug_assert!(forms[j].2 == a + b + c);
            uf.union(i, j);
        }
    }
    (0..forms.len()).filter(|&i| uf.find(i) == i).count() as u64
}

/// `H(d)` from the brute-force class numbers of the overorders.
pub fn brute_kronecker_h(d: i64, spf: &[u32]) -> u64 {
    (1i64..)
        .take_while(|f| f * f <= -d)
        .filter(|f| d % (f * f) == 0 && matches!((d / (f * f)).rem_euclid(4), 0 | 1))
        .map(|f| brute_class_number(d / (f * f), spf))
        .sum()
}
