//! Splittings `Z_n \ {0} = M * S`.
//!
//! Here `m * s` for an integer `m` is repeated addition in `Z_n`, which is
//! the same as multiplying `s` by `m mod n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::cover::{Branching, ExactCover, Walk};
use crate::parallel::map_range;
use crate::search::{Budget, SearchOutcome, DEFAULT_BUDGET};
use crate::zmod::{factorize, gcd, is_prime, mul_mod, reduce};

/// A finite set of nonzero integers, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct MultiplierSet {
    elements: Vec<i64>,
}

impl MultiplierSet {
    /// Rejects zero and duplicates; the order of `elements` is irrelevant.
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        if elements.is_empty() {
            return Err(Error::InvalidMultipliers("empty set".into()));
        }
        if elements.contains(&0) {
            return Err(Error::InvalidMultipliers("0 is not a multiplier".into()));
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidMultipliers(format!("duplicate element {}", w[0])));
        }
        if elements.iter().any(|m| m.unsigned_abs() > i64::MAX as u64 / 2) {
            return Err(Error::InvalidMultipliers("element too large".into()));
        }
        Ok(MultiplierSet { elements })
    }

    /// `[-k1, k2]* = {-k1, ..., -1, 1, ..., k2}`.
    pub fn interval(k1: u64, k2: u64) -> Result<Self> {
        Self::range(-(k1 as i64), k2 as i64)
    }

    /// `[a, b]*`, the integers from `a` to `b` with zero removed.
    pub fn range(a: i64, b: i64) -> Result<Self> {
        Self::new((a..=b).filter(|&x| x != 0))
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: i64) -> bool {
        self.elements.binary_search(&m).is_ok()
    }

    /// `(k1, k2)` when the set equals `[-k1, k2]*`.
    pub fn interval_form(&self) -> Option<(u64, u64)> {
        let lo = *self.elements.first()?;
        let hi = *self.elements.last()?;
        let k1 = if lo < 0 { lo.unsigned_abs() } else { 0 };
        let k2 = if hi > 0 { hi as u64 } else { 0 };
        if lo > 1 || hi < -1 {
            return None;
        }
        let expected = (k1 + k2) as usize;
        (self.elements.len() == expected).then_some((k1, k2))
    }
}

impl TryFrom<Vec<i64>> for MultiplierSet {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        MultiplierSet::new(v)
    }
}

impl From<MultiplierSet> for Vec<i64> {
    fn from(m: MultiplierSet) -> Self {
        m.elements
    }
}

/// Accepts `a..b` for `[a, b]*` or a comma-separated list.
impl FromStr for MultiplierSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |_| Error::InvalidMultipliers(format!("cannot parse {s:?}"));
        // also accept the display forms `[a,b]`, `[a,b]*` and `{x,y,..}`
        let interval = s
            .strip_suffix('*')
            .unwrap_or(s)
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .and_then(|t| t.split_once(','));
        let (range, s) = match (interval, s.strip_prefix('{').and_then(|t| t.strip_suffix('}'))) {
            (Some(ab), _) => (Some(ab), s),
            (None, Some(inner)) => (None, inner),
            (None, None) => (s.split_once(".."), s),
        };
        if let Some((a, b)) = range {
            let a: i64 = a.trim().parse().map_err(bad)?;
            let b: i64 = b.trim().parse().map_err(bad)?;
            if a > b {
                return Err(Error::InvalidMultipliers(format!("empty range {s:?}")));
            }
            return MultiplierSet::range(a, b);
        }
        let elements = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(bad)?;
        MultiplierSet::new(elements)
    }
}

impl fmt::Display for MultiplierSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.interval_form() {
            Some((k1, k2)) if k1 > 0 => write!(f, "[-{k1},{k2}]*"),
            Some((_, k2)) => write!(f, "[1,{k2}]"),
            None => {
                let parts: Vec<String> = self.elements.iter().map(i64::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// A verified splitting of `Z_n`. Every value of this type has been checked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingCertificate {
    modulus: u64,
    multipliers: MultiplierSet,
    splitters: Vec<u64>,
    nonsingular: bool,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    modulus: u64,
    multipliers: Vec<i64>,
    splitters: Vec<u64>,
    nonsingular: bool,
    verified: bool,
}

impl SplittingCertificate {
    /// Verifies `(M, S)` on `Z_n`; `S` is canonicalized to ascending order.
    pub fn new(multipliers: MultiplierSet, splitters: Vec<u64>, modulus: u64) -> Result<Self> {
        let mut splitters = splitters;
        splitters.sort_unstable();
        if !verify_splitting(&multipliers, &splitters, modulus) {
            return Err(Error::domain(format!(
                "{multipliers} with splitters {splitters:?} does not split Z_{modulus}"
            )));
        }
        Ok(SplittingCertificate {
            nonsingular: is_nonsingular(&multipliers, modulus),
            modulus,
            multipliers,
            splitters,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn multipliers(&self) -> &MultiplierSet {
        &self.multipliers
    }

    pub fn splitters(&self) -> &[u64] {
        &self.splitters
    }

    pub fn nonsingular(&self) -> bool {
        self.nonsingular
    }

    /// The certificate JSON, with a fixed field order and ascending arrays.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// Parses certificate JSON and re-verifies it; the `verified` field is not trusted.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CertificateJson = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("bad certificate json: {e}")))?;
        let cert = Self::new(MultiplierSet::new(raw.multipliers)?, raw.splitters, raw.modulus)?;
        if cert.nonsingular != raw.nonsingular {
            return Err(Error::domain("certificate nonsingular flag is wrong"));
        }
        Ok(cert)
    }
}

impl Serialize for SplittingCertificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateJson {
            modulus: self.modulus,
            multipliers: self.multipliers.elements.clone(),
            splitters: self.splitters.clone(),
            nonsingular: self.nonsingular,
            verified: true,
        }
        .serialize(serializer)
    }
}

/// Images of `M` in `Z_n`, in the order of `M`, if they are nonzero and
/// pairwise distinct. Otherwise `M` cannot split `Z_n`.
pub fn reduce_multipliers(m: &MultiplierSet, n: u64) -> Option<Vec<u64>> {
    if n < 2 {
        return None;
    }
    let images: Vec<u64> = m.elements.iter().map(|&x| reduce(x, n)).collect();
    let mut sorted = images.clone();
    sorted.sort_unstable();
    let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
    (distinct && sorted[0] != 0).then_some(images)
}

/// True iff `{m * s}` hits every nonzero residue of `Z_n` exactly once.
pub fn verify_splitting(m: &MultiplierSet, splitters: &[u64], n: u64) -> bool {
    let Some(images) = reduce_multipliers(m, n) else {
        return false;
    };
    if (images.len() * splitters.len()) as u64 != n - 1 {
        return false;
    }
    let mut hit = vec![false; n as usize];
    hit[0] = true;
    for &s in splitters {
        if s >= n {
            return false;
        }
        for &a in &images {
            let x = mul_mod(a, s, n) as usize;
            if hit[x] {
                return false;
            }
            hit[x] = true;
        }
    }
    debug_assert!(hit.iter().all(|&h| h));
    true
}

pub fn is_nonsingular(m: &MultiplierSet, n: u64) -> bool {
    m.elements.iter().all(|&x| gcd(x.unsigned_abs(), n) == 1)
}

/// True iff `{-1, 1}` lies in `M` and `|M|` is odd. Such a set splits no `Z_p`.
pub fn nonexistence_guard(m: &MultiplierSet) -> bool {
    m.contains(-1) && m.contains(1) && m.len() % 2 == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    /// Short-circuit with [`nonexistence_guard`] on prime moduli.
    pub use_guard: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            use_guard: true,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig {
            budget,
            ..Self::default()
        }
    }

    /// Full search with the guard disabled.
    pub fn exhaustive(budget: u64) -> Self {
        SearchConfig {
            budget,
            use_guard: false,
        }
    }
}

/// Searches for a splitter set of `M` in `Z_n`.
///
/// Every splitter set can be scaled by a unit to contain 1 (the element
/// covering 1 is a unit), so the search starts from `S = {1}`. It then
/// repeatedly takes the smallest uncovered residue `g`, branches on
/// `m in M` ascending with `s = g / m` (all solutions of `m * s = g` when `m`
/// is not a unit), and keeps `s` if its block `M * s` is fresh. The first
/// set found this way is the certificate.
///
/// That ordered walk is hopeless at proving that no splitting exists, so
/// existence is first decided by an exact-cover search that always branches
/// on the most constrained residue. Both share the node budget.
pub fn find_splitter(
    m: &MultiplierSet,
    n: u64,
    config: &SearchConfig,
) -> SearchOutcome<SplittingCertificate> {
    let Some(images) = searchable_images(m, n, config) else {
        return SearchOutcome::Exhausted;
    };
    let mut budget = Budget::new(config.budget);
    match splitter_cover(&images, n, Branching::MostConstrained).run(Some(1), &mut budget, &mut |_| false) {
        Walk::Complete => return SearchOutcome::Exhausted,
        Walk::OutOfBudget(nodes) => return SearchOutcome::Inconclusive { nodes },
        Walk::Stopped => {}
    }
    let mut first = None;
    let outcome = splitter_cover(&images, n, Branching::Ordered).run(Some(1), &mut budget, &mut |s| {
        first = Some(s.to_vec());
        false
    });
    match (outcome, first) {
        (Walk::Stopped, Some(s)) => SearchOutcome::Found(
            SplittingCertificate::new(m.clone(), s, n).expect("search yields valid splittings"),
        ),
        (Walk::OutOfBudget(nodes), _) => SearchOutcome::Inconclusive { nodes },
        _ => unreachable!("ordered search missed a splitting the cover search found"),
    }
}

/// [`find_splitter`] at every prime in `[lo, hi]`, ascending. `jobs`
/// changes wall time only.
pub fn search_primes(
    m: &MultiplierSet,
    lo: u64,
    hi: u64,
    config: &SearchConfig,
    jobs: usize,
) -> Vec<(u64, SearchOutcome<SplittingCertificate>)> {
    map_range(lo.max(2), hi, jobs, |a, b| {
        (a..=b)
            .filter(|&p| is_prime(p))
            .map(|p| (p, find_splitter(m, p, config)))
            .collect()
    })
}

/// Every splitter set containing 1, each sorted, in lexicographic order.
///
/// Stops after `limit` sets, which are then the first `limit` found by the
/// cover search. Budget exhaustion is an error since a partial list cannot
/// be told apart from a complete one.
pub fn enumerate_splitters(
    m: &MultiplierSet,
    n: u64,
    budget: u64,
    limit: usize,
) -> Result<Vec<Vec<u64>>> {
    let Some(images) = searchable_images(m, n, &SearchConfig::exhaustive(budget)) else {
        return Ok(Vec::new());
    };
    let mut all = Vec::new();
    let mut budget = Budget::new(budget);
    let outcome = splitter_cover(&images, n, Branching::MostConstrained).run(Some(1), &mut budget, &mut |s| {
        let mut s = s.to_vec();
        s.sort_unstable();
        all.push(s);
        all.len() < limit
    });
    if let Walk::OutOfBudget(nodes) = outcome {
        return Err(Error::Inconclusive { nodes });
    }
    all.sort();
    Ok(all)
}

/// Cells are the residues mod `n` (0 pre-covered), block `s` is `M * s`.
/// Ordered mode tries blocks through `g` by multiplier position, then `s`.
fn splitter_cover(images: &[u64], n: u64, branching: Branching) -> ExactCover {
    let blocks = (1..n).map(|s| {
        let cells = images.iter().map(|&a| mul_mod(a, s, n) as u32).collect();
        (s, cells)
    });
    ExactCover::new(n as usize, &[0], blocks, branching, |_, s, pos| (pos, s))
}

/// Residues of `M` when a search is worth running at all.
fn searchable_images(m: &MultiplierSet, n: u64, config: &SearchConfig) -> Option<Vec<u64>> {
    let images = reduce_multipliers(m, n)?;
    if (n - 1) % images.len() as u64 != 0 {
        return None;
    }
    if config.use_guard && is_prime(n) && nonexistence_guard(m) {
        return None;
    }
    Some(images)
}

/// Hickerson's reduction: `M` splits `Z_n` nonsingularly iff it splits
/// `Z_p` for every prime `p | n`. Returns the per-prime certificates.
pub fn splits_nonsingularly(
    m: &MultiplierSet,
    n: u64,
    config: &SearchConfig,
) -> Result<SearchOutcome<Vec<SplittingCertificate>>> {
    if n < 2 {
        return Err(Error::InvalidModulus {
            modulus: n,
            reason: "modulus must be at least 2".into(),
        });
    }
    if !is_nonsingular(m, n) {
        return Err(Error::domain(format!("{m} is singular modulo {n}")));
    }
    let mut certs = Vec::new();
    let mut inconclusive = None;
    for p in factorize(n).primes() {
        match find_splitter(m, p, config) {
            SearchOutcome::Found(c) => certs.push(c),
            SearchOutcome::Exhausted => return Ok(SearchOutcome::Exhausted),
            SearchOutcome::Inconclusive { nodes } => inconclusive = Some(nodes),
        }
    }
    Ok(match inconclusive {
        Some(nodes) => SearchOutcome::Inconclusive { nodes },
        None => SearchOutcome::Found(certs),
    })
}

/// The splittings promised by `k1 + k2 + 1` prime (`S = {1}`), or for
/// `M = [1, k]` by `2k + 1` prime (witness from the search). Only verified
/// certificates are returned.
pub fn trivial_splitting(m: &MultiplierSet) -> Option<SplittingCertificate> {
    let (k1, k2) = m.interval_form()?;
    let p = k1 + k2 + 1;
    if is_prime(p) {
        if let Ok(cert) = SplittingCertificate::new(m.clone(), vec![1], p) {
            return Some(cert);
        }
    }
    if k1 == 0 && is_prime(2 * k2 + 1) {
        return find_splitter(m, 2 * k2 + 1, &SearchConfig::default()).found();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> MultiplierSet {
        s.parse().unwrap()
    }

    #[test]
    fn multiplier_set_parsing() {
        let m = ms("-1..5");
        assert_eq!(m.elements(), &[-1, 1, 2, 3, 4, 5]);
        assert_eq!(m.interval_form(), Some((1, 5)));
        assert_eq!(ms("1..3").interval_form(), Some((0, 3)));
        assert_eq!(ms("2,1").elements(), &[1, 2]);
        assert_eq!(ms("1,3,27").interval_form(), None);
        assert_eq!(ms("2..5").interval_form(), None);
        assert_eq!(ms("-3..-1").interval_form(), Some((3, 0)));
        assert_eq!(ms("-1,1").interval_form(), Some((1, 1)));
        assert!("1,0".parse::<MultiplierSet>().is_err());
        assert!("1,1".parse::<MultiplierSet>().is_err());
        assert!("5..2".parse::<MultiplierSet>().is_err());
        assert!("x".parse::<MultiplierSet>().is_err());
        assert_eq!(ms("-4..4").to_string(), "[-4,4]*");
        assert_eq!(ms("1..3").to_string(), "[1,3]");
        assert_eq!(ms("1,3,27").to_string(), "{1,3,27}");
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_multipliers(&ms("-1..5"), 7), Some(vec![6, 1, 2, 3, 4, 5]));
        assert_eq!(reduce_multipliers(&ms("1,8"), 7), None);
        assert_eq!(reduce_multipliers(&ms("1,7"), 7), None);
    }

    #[test]
    fn verify_examples() {
        assert!(verify_splitting(&ms("-1..5"), &[1], 7));
        assert!(verify_splitting(&ms("1,2"), &[1, 4], 5));
        assert!(verify_splitting(&ms("-1,1,2"), &[1], 4));
        assert!(!is_nonsingular(&ms("-1,1,2"), 4));
        assert!(!verify_splitting(&ms("1,2"), &[1, 2], 5));
        assert!(!verify_splitting(&ms("1,2"), &[1, 9], 5));
    }

    #[test]
    fn nonsingular_examples() {
        assert!(is_nonsingular(&ms("-1..5"), 7));
        assert!(!is_nonsingular(&ms("-1,1,2"), 4));
        assert!(is_nonsingular(&ms("1,3,27"), 5));
    }

    #[test]
    fn search_examples() {
        let cfg = SearchConfig::default();
        let c = find_splitter(&ms("1..3"), 7, &cfg).found().unwrap();
        assert_eq!(c.splitters(), &[1, 6]);
        assert!(find_splitter(&ms("1..2"), 7, &cfg).is_exhausted());
        assert!(find_splitter(&ms("1..2"), 7, &SearchConfig::exhaustive(1_000))
            .is_exhausted());
        for p in [3, 5, 7, 11, 13, 17, 19, 23] {
            assert!(find_splitter(&ms("-1..2"), p, &SearchConfig::exhaustive(10_000_000))
                .is_exhausted());
        }
        // singular splitting of Z_4
        let c = find_splitter(&ms("-1,1,2"), 4, &cfg).found().unwrap();
        assert_eq!(c.splitters(), &[1]);
        assert!(!c.nonsingular());
    }

    #[test]
    fn search_budget_is_reported() {
        let out = find_splitter(&ms("1..2"), 197, &SearchConfig::exhaustive(3));
        assert!(out.is_inconclusive());
    }

    #[test]
    fn hickerson_examples() {
        let cfg = SearchConfig::default();
        let out = splits_nonsingularly(&ms("1,2"), 15, &cfg).unwrap();
        let certs = out.found().unwrap();
        assert_eq!(certs.iter().map(|c| c.modulus()).collect::<Vec<_>>(), vec![3, 5]);
        assert!(splits_nonsingularly(&ms("1,2"), 35, &cfg).unwrap().is_exhausted());
        assert!(splits_nonsingularly(&ms("1,2"), 4, &cfg).is_err());
        assert_eq!(
            splits_nonsingularly(&ms("1..3"), 7, &cfg).unwrap().is_found(),
            find_splitter(&ms("1..3"), 7, &cfg).is_found()
        );
    }

    #[test]
    fn guard_examples() {
        assert!(nonexistence_guard(&ms("-1..2")));
        assert!(nonexistence_guard(&ms("-2..3")));
        assert!(!nonexistence_guard(&ms("-1..3")));
        assert!(!nonexistence_guard(&ms("1,3,27")));
    }

    #[test]
    fn trivial_examples() {
        let c = trivial_splitting(&ms("-1..5")).unwrap();
        assert_eq!((c.modulus(), c.splitters()), (7, &[1u64][..]));
        let c = trivial_splitting(&ms("1..4")).unwrap();
        assert_eq!((c.modulus(), c.splitters()), (5, &[1u64][..]));
        let c = trivial_splitting(&ms("1..3")).unwrap();
        assert_eq!((c.modulus(), c.splitters()), (7, &[1u64, 6][..]));
        assert!(trivial_splitting(&ms("1,3,27")).is_none());
        // [-1,2]*: 4 is not prime, and it is not of the form [1,k]
        assert!(trivial_splitting(&ms("-1..2")).is_none());
    }

    #[test]
    fn certificate_json_is_exact() {
        let c = SplittingCertificate::new(ms("1..3"), vec![6, 1], 7).unwrap();
        assert_eq!(
            c.to_json(),
            r#"{"modulus":7,"multipliers":[1,2,3],"splitters":[1,6],"nonsingular":true,"verified":true}"#
        );
        assert_eq!(SplittingCertificate::from_json(&c.to_json()).unwrap(), c);
        let forged = r#"{"modulus":7,"multipliers":[1,2,3],"splitters":[1,2],"nonsingular":true,"verified":true}"#;
        assert!(SplittingCertificate::from_json(forged).is_err());
    }
}
