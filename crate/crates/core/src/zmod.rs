//! Exact modular arithmetic on 64-bit moduli.
//!
//! Primality is deterministic Miller-Rabin over the first twelve prime bases,
//! which is exact for every `u64`. Factoring is trial division followed by
//! Brent's variant of Pollard rho. Discrete logarithms to a primitive root
//! use a dense table for small primes and baby-step giant-step above it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primes up to this bound get a dense index table; larger ones use BSGS.
pub const DEFAULT_TABLE_THRESHOLD: u64 = 1 << 16;

/// An element of `Z_n`, always stored in canonical form `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces a signed integer into `Z_modulus`.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus {
                modulus,
                reason: "modulus must be at least 2".into(),
            });
        }
        Ok(Residue {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn from_u64(value: u64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus {
                modulus,
                reason: "modulus must be at least 2".into(),
            });
        }
        Ok(Residue {
            value: value % modulus,
            modulus,
        })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn pow(self, exp: u64) -> Self {
        Residue {
            value: pow_mod(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Option<Self> {
        inv_mod(self.value, self.modulus).map(|value| Residue {
            value,
            modulus: self.modulus,
        })
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Canonical representative of `value` modulo `modulus`.
#[inline]
pub fn reduce(value: i64, modulus: u64) -> u64 {
    let m = modulus as i128;
    (value as i128).rem_euclid(m) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `n` together with its canonical prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    pub n: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of `p^e`; equals `n` by construction.
    pub fn recompose(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }
}

pub fn factorize(n: u64) -> FactoredInteger {
    let mut primes = Vec::new();
    let mut rest = n;
    if rest > 0 {
        for p in [2u64, 3, 5] {
            while rest % p == 0 {
                primes.push(p);
                rest /= p;
            }
        }
        let mut d = 7u64;
        let mut wheel = [4u64, 2, 4, 2, 4, 6, 2, 6].iter().cycle();
        while d <= 1000 && d * d <= rest {
            while rest % d == 0 {
                primes.push(d);
                rest /= d;
            }
            d += wheel.next().unwrap();
        }
        if rest > 1 {
            split_into(rest, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    FactoredInteger { n, factors }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Finds a nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x;
        let mut ys;
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..128.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Multiplicative order of a unit, computed by stripping prime factors off
/// the group order `phi(n)`.
pub fn order(a: Residue) -> Result<u64> {
    if !a.is_unit() {
        return Err(Error::domain(format!("{a} is not a unit")));
    }
    let n = a.modulus;
    let group_order = euler_phi(n);
    let mut t = group_order;
    for (q, _) in factorize(group_order).factors {
        while t % q == 0 && pow_mod(a.value, t / q, n) == 1 {
            t /= q;
        }
    }
    Ok(t)
}

/// The smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<Residue> {
    if !is_prime(p) {
        return Err(Error::not_prime(p));
    }
    if p == 2 {
        return Residue::from_u64(1, 2);
    }
    let qs: Vec<u64> = factorize(p - 1).primes().collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .map(|g| Residue { value: g, modulus: p })
        .ok_or_else(|| Error::not_prime(p))
}

/// Discrete logarithms to a fixed primitive root modulo a prime.
#[derive(Debug, Clone)]
pub struct DiscreteLog {
    p: u64,
    g: u64,
    method: Method,
}

#[derive(Debug, Clone)]
enum Method {
    /// `table[b] = ind_g(b)`.
    Table(Vec<u32>),
    BabyGiant {
        m: u64,
        baby: HashMap<u64, u64>,
        /// `g^(-m)`.
        giant: u64,
    },
}

impl DiscreteLog {
    pub fn new(g: Residue) -> Result<Self> {
        Self::with_threshold(g, DEFAULT_TABLE_THRESHOLD)
    }

    /// Like [`DiscreteLog::new`], choosing the dense table iff `p <= threshold`.
    pub fn with_threshold(g: Residue, threshold: u64) -> Result<Self> {
        let p = g.modulus;
        if !is_prime(p) {
            return Err(Error::not_prime(p));
        }
        if g.value == 0 || order(g)? != p - 1 {
            return Err(Error::domain(format!("{g} is not a primitive root")));
        }
        let method = if p <= threshold {
            Method::Table(index_table(p, g.value))
        } else {
            let m = ((p - 1) as f64).sqrt().ceil() as u64;
            let mut baby = HashMap::with_capacity(m as usize);
            let mut x = 1u64;
            for j in 0..m {
                baby.entry(x).or_insert(j);
                x = mul_mod(x, g.value, p);
            }
            let giant = inv_mod(pow_mod(g.value, m, p), p).expect("g is a unit");
            Method::BabyGiant { m, baby, giant }
        };
        Ok(DiscreteLog { p, g: g.value, method })
    }

    /// Uses the smallest primitive root of `p`.
    pub fn for_prime(p: u64) -> Result<Self> {
        Self::new(primitive_root(p)?)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn base(&self) -> u64 {
        self.g
    }

    /// `ind_g(b)` in `[0, p - 2]`.
    pub fn index(&self, b: u64) -> Result<u64> {
        let b = b % self.p;
        if b == 0 {
            return Err(Error::domain("index of zero is undefined"));
        }
        match &self.method {
            Method::Table(t) => Ok(t[b as usize] as u64),
            Method::BabyGiant { m, baby, giant } => {
                let mut y = b;
                for i in 0..*m {
                    if let Some(&j) = baby.get(&y) {
                        return Ok((i * m + j) % (self.p - 1));
                    }
                    y = mul_mod(y, *giant, self.p);
                }
                unreachable!("g is primitive, so every unit has an index")
            }
        }
    }

    /// Index of a signed integer, reduced mod `p` first.
    pub fn index_of(&self, b: i64) -> Result<u64> {
        self.index(reduce(b, self.p))
    }
}

/// `ind_g(b)` modulo the prime `g.modulus()`.
pub fn index(g: Residue, b: Residue) -> Result<u64> {
    if g.modulus != b.modulus {
        return Err(Error::domain("base and argument have different moduli"));
    }
    DiscreteLog::new(g)?.index(b.value)
}

/// Dense table `t[b] = ind_g(b)` for `b in 1..p` (entry 0 unused).
pub fn index_table(p: u64, g: u64) -> Vec<u32> {
    let mut table = vec![0u32; p as usize];
    let mut x = 1u64;
    for i in 0..p - 1 {
        table[x as usize] = i as u32;
        x = mul_mod(x, g, p);
    }
    table
}

/// `ind_g(a) mod d` for a divisor `d` of `p - 1`, read off from
/// `a^((p-1)/d)` against the powers of `g^((p-1)/d)`. Costs `O(d)` to build
/// and one exponentiation per lookup.
#[derive(Debug, Clone)]
pub struct IndexMod {
    p: u64,
    exponent: u64,
    powers: Vec<(u64, u64)>,
}

impl IndexMod {
    pub fn new(p: u64, g: u64, d: u64) -> Result<Self> {
        if d == 0 || (p - 1) % d != 0 {
            return Err(Error::domain(format!("{d} does not divide {p} - 1")));
        }
        let exponent = (p - 1) / d;
        let zeta = pow_mod(g, exponent, p);
        let mut powers = Vec::with_capacity(d as usize);
        let mut z = 1u64;
        for j in 0..d {
            powers.push((z, j));
            z = mul_mod(z, zeta, p);
        }
        powers.sort_unstable();
        Ok(IndexMod {
            p,
            exponent,
            powers,
        })
    }

    /// `None` when `a = 0 (mod p)`.
    pub fn index(&self, a: i64) -> Option<u64> {
        let a = reduce(a, self.p);
        if a == 0 {
            return None;
        }
        let x = pow_mod(a, self.exponent, self.p);
        let i = self.powers.binary_search_by_key(&x, |&(z, _)| z).ok()?;
        Some(self.powers[i].1)
    }
}

/// Primes in `[lo, hi]` congruent to `1` modulo `step` (all primes if `step <= 1`).
pub fn primes_one_mod(step: u64, lo: u64, hi: u64) -> Vec<u64> {
    let step = step.max(1);
    let first = if lo <= 1 {
        1 + step
    } else {
        lo + (step + 1 - lo % step) % step
    };
    let mut out = Vec::new();
    let mut p = first;
    if step == 1 && lo <= 2 && hi >= 2 {
        p = 2;
    }
    while p <= hi {
        if is_prime(p) {
            out.push(p);
        }
        p += step;
    }
    out
}
