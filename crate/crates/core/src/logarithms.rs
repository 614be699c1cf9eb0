//! Logarithm tables `f: M -> Z_k` and the route from a direct logarithm to
//! concrete primes `p` where `M` splits `Z_p`.
//!
//! A *logarithm function* satisfies `f(xy) = f(x) + f(y)` whenever `x`, `y`
//! and `xy` all lie in `M`; a *logarithm* is additionally a bijection onto
//! `Z_k`. A *direct logarithm* is an injective logarithm function whose image
//! is a direct factor of `Z_k`.
//!
//! Given a direct logarithm into `Z_k` and a prime `p = 1 (mod k)`, the
//! power map `a -> a^((p-1)/k)` sends `Z_p*` onto the order-`k` subgroup.
//! Writing that subgroup additively as exponents of a fixed generator, if
//! `M` maps injectively onto a direct factor `E` with complement `C`, then
//! the preimage of `C` is a splitter set of `M` in `Z_p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{find_complement, verify_factorization, GroupContext};
use crate::parallel::map_range;
use crate::search::{SearchOutcome, DEFAULT_BUDGET};
use crate::splitting::{
    find_splitter, reduce_multipliers, MultiplierSet, SearchConfig, SplittingCertificate,
};
use crate::zmod::{gcd, is_prime, mul_mod, primitive_root, reduce, DiscreteLog, IndexMod};

/// A map `M -> Z_k`, stored as values aligned with the sorted domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LogTableJson", into = "LogTableJson")]
pub struct LogTable {
    domain: MultiplierSet,
    k: u64,
    values: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct LogTableJson {
    domain: Vec<i64>,
    k: u64,
    values: Vec<i64>,
}

impl TryFrom<LogTableJson> for LogTable {
    type Error = Error;

    fn try_from(raw: LogTableJson) -> Result<Self> {
        if raw.domain.len() != raw.values.len() {
            return Err(Error::LengthMismatch {
                expected: raw.domain.len(),
                actual: raw.values.len(),
            });
        }
        let pairs: Vec<(i64, i64)> = raw.domain.into_iter().zip(raw.values).collect();
        LogTable::from_pairs(&pairs, raw.k)
    }
}

impl From<LogTable> for LogTableJson {
    fn from(t: LogTable) -> Self {
        LogTableJson {
            domain: t.domain.elements().to_vec(),
            k: t.k,
            values: t.values.iter().map(|&v| v as i64).collect(),
        }
    }
}

impl LogTable {
    /// `values[i]` is the image of the `i`-th smallest domain element.
    pub fn new(domain: MultiplierSet, k: u64, values: Vec<u64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("codomain modulus k must be positive"));
        }
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                actual: values.len(),
            });
        }
        let values = values.into_iter().map(|v| v % k).collect();
        Ok(LogTable { domain, k, values })
    }

    /// Builds a table from `(m, f(m))` pairs in any order; values are reduced mod `k`.
    pub fn from_pairs(pairs: &[(i64, i64)], k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("codomain modulus k must be positive"));
        }
        let mut pairs = pairs.to_vec();
        pairs.sort_unstable();
        let domain = MultiplierSet::new(pairs.iter().map(|&(m, _)| m))?;
        let values = pairs.iter().map(|&(_, v)| reduce(v, k)).collect();
        Self::new(domain, k, values)
    }

    pub fn domain(&self) -> &MultiplierSet {
        &self.domain
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, m: i64) -> Option<u64> {
        let i = self.domain.elements().binary_search(&m).ok()?;
        Some(self.values[i])
    }

    /// The image `f(M)` as a sorted set.
    pub fn image(&self) -> Vec<u64> {
        let mut image = self.values.clone();
        image.sort_unstable();
        image.dedup();
        image
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("bad log table json: {e}")))
    }
}

/// Pairs `(i, j, l)` of domain positions with `m_i * m_j = m_l`, `i <= j`.
fn product_triples(domain: &MultiplierSet) -> Vec<(usize, usize, usize)> {
    let el = domain.elements();
    let mut out = Vec::new();
    for i in 0..el.len() {
        for j in i..el.len() {
            if let Some(prod) = el[i].checked_mul(el[j]) {
                if let Ok(l) = el.binary_search(&prod) {
                    out.push((i, j, l));
                }
            }
        }
    }
    out
}

/// True iff `f(xy) = f(x) + f(y)` whenever `x, y, xy` lie in the domain.
/// Bijectivity is not required; see [`is_bijective_logarithm`].
pub fn is_logarithm(t: &LogTable) -> bool {
    product_triples(&t.domain)
        .into_iter()
        .all(|(i, j, l)| (t.values[i] + t.values[j]) % t.k == t.values[l])
}

pub fn is_injective(t: &LogTable) -> bool {
    t.image().len() == t.values.len()
}

/// A logarithm in the strict sense: additive and a bijection onto `Z_k`.
pub fn is_bijective_logarithm(t: &LogTable) -> bool {
    t.values.len() as u64 == t.k && is_injective(t) && is_logarithm(t)
}

/// Complement `B` of `f(M)` in `Z_k` if `t` is a direct logarithm.
///
/// Tables that are not injective logarithm functions come back `Exhausted`.
pub fn direct_complement(t: &LogTable, budget: u64) -> SearchOutcome<Vec<u64>> {
    if !is_injective(t) || !is_logarithm(t) {
        return SearchOutcome::Exhausted;
    }
    if t.k == 1 {
        return SearchOutcome::Found(vec![0]);
    }
    let ctx = GroupContext::additive(t.k).expect("k >= 2");
    find_complement(&t.values, &ctx, budget).expect("values lie in Z_k")
}

/// Injective logarithm function whose image is a direct factor of `Z_k`.
pub fn is_direct_logarithm(t: &LogTable) -> Result<bool> {
    Ok(direct_complement(t, DEFAULT_BUDGET).decided()?.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KmMode {
    /// The Kummer-Mills conditions exactly as printed.
    AsStated,
    /// As printed, plus: when `8 | k`, the value at 2 must be even.
    Strict,
}

/// Which Kummer-Mills clause applied, by the 2-adic shape of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KmClause {
    /// `k` odd, no `-1` in the domain.
    Odd,
    /// `k = 2m`, `m` odd, no `-1`.
    TwiceOdd,
    /// `4 | k`, no `-1`.
    MultipleOfFour,
    /// `k` odd with `-1` in the domain: `-1` must map to 0.
    MinusOneOdd,
    /// `k = 2m`, `m` odd, with `-1`.
    MinusOneTwiceOdd,
    /// `k = 4m`, `m` odd, with `-1`.
    MinusOneFourTimesOdd,
    /// `8 | k`, with `-1`.
    MinusOneMultipleOfEight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmVerdict {
    pub admissible: bool,
    pub clause: KmClause,
    pub mode: KmMode,
    /// Human-readable reasons for rejection; empty when admissible.
    pub violations: Vec<String>,
}

/// Checks the Kummer-Mills realizability conditions on `t`.
///
/// The constrained points are `-1` and the positive primes of the domain;
/// composite elements are fixed by additivity and carry no clause.
pub fn km_check(t: &LogTable, mode: KmMode) -> Result<KmVerdict> {
    if !is_injective(t) || !is_logarithm(t) {
        return Err(Error::domain("km_check needs an injective logarithm function"));
    }
    let k = t.k;
    let primes: Vec<(u64, u64)> = t
        .domain
        .elements()
        .iter()
        .zip(&t.values)
        .filter(|&(&m, _)| m > 1 && is_prime(m as u64))
        .map(|(&m, &v)| (m as u64, v))
        .collect();
    let minus_one = t.value(-1);
    let two_adic = k.trailing_zeros();
    let odd_part = k >> two_adic;
    let mut violations = Vec::new();
    let mut require = |ok: bool, why: String| {
        if !ok {
            violations.push(why);
        }
    };
    let even = |v: u64| v % 2 == 0;

    let clause = match (minus_one, two_adic) {
        (None, 0) => KmClause::Odd,
        (None, 1) => {
            let m = odd_part;
            for &(p, b) in &primes {
                if p % 4 == 1 && m % p == 0 {
                    require(even(b), format!("f({p}) = {b} must be even"));
                }
            }
            let parities: Vec<u64> = primes
                .iter()
                .filter(|&&(p, _)| p % 4 == 3 && m % p == 0)
                .map(|&(_, b)| b % 2)
                .collect();
            require(
                parities.windows(2).all(|w| w[0] == w[1]),
                "values at primes = 3 (mod 4) dividing k/2 differ in parity".into(),
            );
            KmClause::TwiceOdd
        }
        (None, _) => {
            let m = k / 4;
            for &(p, b) in &primes {
                if m % p == 0 {
                    require(even(b), format!("f({p}) = {b} must be even"));
                }
            }
            KmClause::MultipleOfFour
        }
        (Some(b1), 0) => {
            require(b1 == 0, format!("f(-1) = {b1} must be 0 for odd k"));
            KmClause::MinusOneOdd
        }
        (Some(b1), 1) => {
            let m = odd_part;
            for &(p, b) in &primes {
                if p % 4 == 1 && m % p == 0 {
                    require(even(b), format!("f({p}) = {b} must be even"));
                }
                if p % 4 == 3 && m % p == 0 {
                    require(!even(b), format!("f({p}) = {b} must be odd"));
                }
            }
            require(b1 == k / 2, format!("f(-1) = {b1} must equal k/2 = {}", k / 2));
            KmClause::MinusOneTwiceOdd
        }
        (Some(b1), 2) => {
            let m = odd_part;
            for &(p, b) in &primes {
                if p != 2 && m % p == 0 {
                    require(even(b), format!("f({p}) = {b} must be even"));
                }
                if p == 2 {
                    require(!even(b), format!("f(2) = {b} must be odd"));
                }
            }
            require(b1 == k / 2, format!("f(-1) = {b1} must equal k/2 = {}", k / 2));
            KmClause::MinusOneFourTimesOdd
        }
        (Some(_), _) => {
            let m = k / 8;
            for &(p, b) in &primes {
                if m % p == 0 {
                    require(even(b), format!("f({p}) = {b} must be even"));
                }
            }
            KmClause::MinusOneMultipleOfEight
        }
    };
    if mode == KmMode::Strict && k % 8 == 0 {
        if let Some(b) = t.value(2) {
            require(even(b), format!("f(2) = {b} must be even when 8 | k"));
        }
    }
    Ok(KmVerdict {
        admissible: violations.is_empty(),
        clause,
        mode,
        violations,
    })
}

/// `g(m) = 8 f(m) (mod 8k)`, always a direct KM-logarithm when `f` is direct.
pub fn lift_8k(t: &LogTable) -> Result<LogTable> {
    lift_8k_with_complement(t).map(|(table, _)| table)
}

/// The lift together with its block complement `8B + {0, ..., 7}`.
pub fn lift_8k_with_complement(t: &LogTable) -> Result<(LogTable, Vec<u64>)> {
    let complement = direct_complement(t, DEFAULT_BUDGET)
        .decided()?
        .ok_or_else(|| Error::domain("lift_8k needs a direct logarithm"))?;
    let k = 8 * t.k;
    let table = LogTable::new(
        t.domain.clone(),
        k,
        t.values.iter().map(|&v| 8 * v).collect(),
    )?;
    Ok((table, lift_complement(&complement)))
}

/// `{8b + j : b in B, 0 <= j < 8}`, sorted.
pub fn lift_complement(complement: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = complement
        .iter()
        .flat_map(|&b| (0..8).map(move |j| 8 * b + j))
        .collect();
    out.sort_unstable();
    out
}

/// All bijective logarithms `[-k1, k2]* -> Z_k`, sorted lexicographically by
/// value vector. Empty unless `k = k1 + k2`.
pub fn enumerate_logarithms(k1: u64, k2: u64, k: u64) -> Result<Vec<LogTable>> {
    if k1 + k2 < 3 {
        return Err(Error::domain("enumerate_logarithms needs k1 + k2 >= 3"));
    }
    let domain = MultiplierSet::interval(k1, k2)?;
    if k != k1 + k2 {
        return Ok(Vec::new());
    }
    let mut out: Vec<LogTable> = enumerate_tables(&domain, k, true)
        .into_iter()
        .map(|values| LogTable {
            domain: domain.clone(),
            k,
            values,
        })
        .collect();
    out.sort_by(|a, b| a.values.cmp(&b.values));
    Ok(out)
}

/// Every logarithm function on `domain` into `Z_k` (bijective ones only if
/// `bijective`). Elements are assigned by increasing absolute value, so
/// products are forced by their factors and only the free points branch.
pub fn enumerate_tables(domain: &MultiplierSet, k: u64, bijective: bool) -> Vec<Vec<u64>> {
    let el = domain.elements();
    let mut order: Vec<usize> = (0..el.len()).collect();
    order.sort_by_key(|&i| (el[i].unsigned_abs(), el[i] < 0));
    let triples = product_triples(domain);
    // constraints checkable once position `order[step]` is assigned
    let mut rank = vec![0usize; el.len()];
    for (step, &i) in order.iter().enumerate() {
        rank[i] = step;
    }
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); el.len()];
    for &(i, j, l) in &triples {
        let last = rank[i].max(rank[j]).max(rank[l]);
        checks[last].push((i, j, l));
    }

    struct Walk<'a> {
        k: u64,
        order: &'a [usize],
        checks: &'a [Vec<(usize, usize, usize)>],
        bijective: bool,
        values: Vec<u64>,
        used: Vec<bool>,
        out: Vec<Vec<u64>>,
    }
    impl Walk<'_> {
        fn go(&mut self, step: usize) {
            if step == self.order.len() {
                self.out.push(self.values.clone());
                return;
            }
            let pos = self.order[step];
            for v in 0..self.k {
                if self.bijective && self.used[v as usize] {
                    continue;
                }
                self.values[pos] = v;
                let ok = self.checks[step]
                    .iter()
                    .all(|&(i, j, l)| (self.values[i] + self.values[j]) % self.k == self.values[l]);
                if !ok {
                    continue;
                }
                if self.bijective {
                    self.used[v as usize] = true;
                }
                self.go(step + 1);
                if self.bijective {
                    self.used[v as usize] = false;
                }
            }
        }
    }
    let mut walk = Walk {
        k,
        order: &order,
        checks: &checks,
        bijective,
        values: vec![0; el.len()],
        used: vec![false; k as usize],
        out: Vec::new(),
    };
    if !bijective || el.len() as u64 == k {
        walk.go(0);
    }
    walk.out
}

/// Knobs for the split-prime scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads; output is identical for every value.
    pub jobs: usize,
    /// Node budget for each per-prime complement search.
    pub budget: u64,
    /// Keep only the first this many certificates (by `p`).
    pub max_results: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            jobs: 1,
            budget: 1_000_000,
            max_results: None,
        }
    }
}

/// A prime where the power map realizes a direct factor.
struct Hit {
    p: u64,
    /// Primitive root used for exponents.
    g: u64,
    /// The twist `t'` coprime to `k`.
    twist: u64,
    complement: Vec<u64>,
}

/// Scans primes `p = 1 (mod k)` up to `bound` for splittings of the table's
/// domain, following the direct-logarithm construction. Certificates come
/// back sorted by `p`, each verified.
pub fn find_split_primes(
    t: &LogTable,
    bound: u64,
    options: &ScanOptions,
) -> Result<Vec<SplittingCertificate>> {
    let base_complement = direct_complement(t, DEFAULT_BUDGET)
        .decided()?
        .ok_or_else(|| Error::domain("find_split_primes needs a direct logarithm"))?;
    let k = t.k;
    let count = bound.saturating_sub(1) / k;
    let hits = map_range(1, count.max(1), options.jobs, |lo, hi| {
        (lo..=hi)
            .map(|i| i * k + 1)
            .filter(|&p| p <= bound && is_prime(p))
            .filter_map(|p| split_hit(t, &base_complement, p, options.budget))
            .collect()
    });
    let take = options.max_results.unwrap_or(usize::MAX);
    hits.into_iter()
        .take(take)
        .map(|hit| materialize(t, &hit))
        .collect()
}

fn split_hit(t: &LogTable, base_complement: &[u64], p: u64, budget: u64) -> Option<Hit> {
    let k = t.k;
    let images = reduce_multipliers(&t.domain, p)?;
    let g = primitive_root(p).ok()?.value();
    let index = IndexMod::new(p, g, k).ok()?;
    let base: Vec<u64> = images.iter().map(|&a| index.index(a as i64)).collect::<Option<_>>()?;

    let ctx = GroupContext::additive(k.max(2)).ok()?;
    let mut searched = false;
    for twist in (1..k.max(2)).filter(|&u| gcd(u, k) == 1) {
        let twisted: Vec<u64> = base.iter().map(|&x| x * twist % k).collect();
        if twisted == t.values {
            return Some(Hit {
                p,
                g,
                twist,
                complement: base_complement.to_vec(),
            });
        }
        if searched {
            continue;
        }
        // A unit twist is an automorphism of Z_k, so one complement search
        // decides every twist.
        searched = true;
        let mut sorted = twisted.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != twisted.len() {
            return None;
        }
        match find_complement(&twisted, &ctx, budget).ok()? {
            SearchOutcome::Found(complement) => {
                return Some(Hit {
                    p,
                    g,
                    twist,
                    complement,
                })
            }
            SearchOutcome::Exhausted => return None,
            SearchOutcome::Inconclusive { .. } => {}
        }
    }
    None
}

fn materialize(t: &LogTable, hit: &Hit) -> Result<SplittingCertificate> {
    let k = t.k;
    let mut in_complement = vec![false; k as usize];
    for &c in &hit.complement {
        in_complement[c as usize] = true;
    }
    let mut splitters = Vec::with_capacity(((hit.p - 1) / k * hit.complement.len() as u64) as usize);
    let mut a = 1u64;
    for i in 0..hit.p - 1 {
        if in_complement[(i % k * hit.twist % k) as usize] {
            splitters.push(a);
        }
        a = mul_mod(a, hit.g, hit.p);
    }
    SplittingCertificate::new(t.domain.clone(), splitters, hit.p)
}

/// The direct logarithm `m -> ind_g(m) mod (q - 1)` of a splitting of the
/// prime field `Z_q`, with the complement `ind_g(S)`.
pub fn index_logarithm(cert: &SplittingCertificate) -> Result<(LogTable, Vec<u64>)> {
    let q = cert.modulus();
    let log = DiscreteLog::for_prime(q)?;
    let values = cert
        .multipliers()
        .elements()
        .iter()
        .map(|&m| log.index_of(m))
        .collect::<Result<Vec<_>>>()?;
    let table = LogTable::new(cert.multipliers().clone(), q - 1, values)?;
    let mut complement = cert
        .splitters()
        .iter()
        .map(|&s| log.index(s))
        .collect::<Result<Vec<_>>>()?;
    complement.sort_unstable();
    if q > 2 {
        let ctx = GroupContext::additive(q - 1)?;
        debug_assert!(verify_factorization(&table.image(), &complement, &ctx)?);
    }
    Ok((table, complement))
}

/// From one prime `q` where `M` splits, produces more: the index logarithm
/// of the splitting is lifted to `Z_{8(q-1)}` and scanned up to `bound`.
pub fn bootstrap_from_prime(
    m: &MultiplierSet,
    q: u64,
    bound: u64,
    options: &ScanOptions,
) -> Result<Vec<SplittingCertificate>> {
    if !is_prime(q) {
        return Err(Error::not_prime(q));
    }
    let cert = find_splitter(m, q, &SearchConfig::default())
        .decided()?
        .ok_or_else(|| Error::domain(format!("{m} does not split Z_{q}")))?;
    let (table, _) = index_logarithm(&cert)?;
    let lifted = lift_8k(&table)?;
    find_split_primes(&lifted, bound, options)
}
