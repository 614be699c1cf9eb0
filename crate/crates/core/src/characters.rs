//! `k`-characters `Z_p* -> Z_k`, scans for primes with prescribed character
//! values, `k`-radius primes, and splitters cut out by power maps.
//!
//! Roots of unity never appear: a target `e^(2 pi i b / k)` is the exponent
//! `b in Z_k`, and a character is stored as the image `x` of a fixed
//! primitive root `g`, so `chi(a) = x * ind_g(a) mod k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{find_complement, GroupContext};
use crate::parallel::map_range;
use crate::search::DEFAULT_BUDGET;
use crate::splitting::{verify_splitting, MultiplierSet, SplittingCertificate};
use crate::zmod::{gcd, is_prime, mul_mod, pow_mod, primes_one_mod, primitive_root, reduce, IndexMod};

/// Prescribed values `chi(bases[i]) = targets[i]` in `Z_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CharacterSpecJson", into = "CharacterSpecJson")]
pub struct CharacterSpec {
    k: u64,
    bases: Vec<i64>,
    targets: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CharacterSpecJson {
    k: u64,
    bases: Vec<i64>,
    targets: Vec<i64>,
}

impl TryFrom<CharacterSpecJson> for CharacterSpec {
    type Error = Error;

    fn try_from(raw: CharacterSpecJson) -> Result<Self> {
        CharacterSpec::new(raw.k, raw.bases, raw.targets)
    }
}

impl From<CharacterSpec> for CharacterSpecJson {
    fn from(s: CharacterSpec) -> Self {
        CharacterSpecJson {
            k: s.k,
            bases: s.bases,
            targets: s.targets.iter().map(|&t| t as i64).collect(),
        }
    }
}

impl CharacterSpec {
    /// Targets are reduced mod `k`.
    pub fn new(k: u64, bases: Vec<i64>, targets: Vec<i64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("k must be positive"));
        }
        if bases.len() != targets.len() {
            return Err(Error::LengthMismatch {
                expected: bases.len(),
                actual: targets.len(),
            });
        }
        let mut sorted = bases.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != bases.len() || bases.contains(&0) {
            return Err(Error::domain("bases must be distinct and nonzero"));
        }
        let targets = targets.into_iter().map(|t| reduce(t, k)).collect();
        Ok(CharacterSpec { k, bases, targets })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn bases(&self) -> &[i64] {
        &self.bases
    }

    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("bad character spec: {e}")))
    }
}

/// The homomorphism `Z_p* -> Z_k` sending the primitive root `g` to `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    pub p: u64,
    pub k: u64,
    pub g: u64,
    pub x: u64,
}

impl Character {
    /// `chi(a)`; `None` if `p | a`.
    pub fn eval(&self, a: i64) -> Option<u64> {
        let d = gcd(self.p - 1, self.k);
        let ind = IndexMod::new(self.p, self.g, d).ok()?.index(a)?;
        // x is a multiple of k/d, so only ind mod d matters
        Some(((self.x as u128 * ind as u128) % self.k as u128) as u64)
    }

    /// Surjective iff `x` generates `Z_k`, which needs `k | p - 1`.
    pub fn is_surjective(&self) -> bool {
        gcd(self.x, self.k) == 1 && (self.p - 1) % self.k == 0
    }
}

/// Every homomorphism `Z_p* -> Z_k`, by ascending `x`.
pub fn homomorphisms(p: u64, k: u64) -> Result<Vec<Character>> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let g = primitive_root(p)?.value();
    let step = k / gcd(k, p - 1);
    Ok((0..k)
        .step_by(step as usize)
        .map(|x| Character { p, k, g, x })
        .collect())
}

/// First homomorphism (ascending `x`) taking every prescribed value.
pub fn character_matches(p: u64, spec: &CharacterSpec) -> Result<Option<Character>> {
    let g = primitive_root(p)?.value();
    let d = gcd(spec.k, p - 1);
    let index = IndexMod::new(p, g, d)?;
    let inds = spec
        .bases
        .iter()
        .map(|&b| {
            index
                .index(b)
                .ok_or_else(|| Error::domain(format!("base {b} vanishes mod {p}")))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(first_match(p, g, spec, &inds))
}

fn first_match(p: u64, g: u64, spec: &CharacterSpec, inds: &[u64]) -> Option<Character> {
    let k = spec.k;
    let step = k / gcd(k, p - 1);
    (0..k).step_by(step as usize).find_map(|x| {
        let hits = inds
            .iter()
            .zip(&spec.targets)
            .all(|(&i, &t)| (x as u128 * i as u128 % k as u128) as u64 == t);
        hits.then_some(Character { p, k, g, x })
    })
}

/// Primes `p = 1 (mod k)` in `[lo, hi]` with a character matching `spec`,
/// ascending. Primes dividing a base are skipped.
pub fn scan_primes_for_spec(spec: &CharacterSpec, lo: u64, hi: u64, jobs: usize) -> Vec<u64> {
    scan_characters(spec, lo, hi, jobs)
        .into_iter()
        .map(|c| c.p)
        .collect()
}

/// Like [`scan_primes_for_spec`], returning the matching characters.
pub fn scan_characters(spec: &CharacterSpec, lo: u64, hi: u64, jobs: usize) -> Vec<Character> {
    let k = spec.k;
    let lo = lo.max(2);
    if hi < lo {
        return Vec::new();
    }
    // p = i*k + 1
    let first = (lo - 1).div_ceil(k).max(1);
    let last = (hi - 1) / k;
    map_range(first, last, jobs, |a, b| {
        (a..=b)
            .map(|i| i * k + 1)
            .filter(|&p| is_prime(p))
            .filter_map(|p| {
                if spec.bases.iter().any(|&b| reduce(b, p) == 0) {
                    return None;
                }
                let g = primitive_root(p).ok()?.value();
                let index = IndexMod::new(p, g, k).ok()?;
                let inds: Vec<u64> = spec.bases.iter().map(|&b| index.index(b)).collect::<Option<_>>()?;
                first_match(p, g, spec, &inds)
            })
            .collect()
    })
}

/// Outcome of the `k`-radius test at `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub p: u64,
    pub k: u64,
    /// `i^((p-1)/k) mod p` for `i = 1..=k`; empty when `k` does not divide `p - 1`.
    pub powers: Vec<u64>,
    pub distinct: bool,
    /// `p = 1 (mod 2k)`.
    pub congruent: bool,
}

impl RadiusReport {
    pub fn is_radius_prime(&self) -> bool {
        self.congruent && self.distinct
    }
}

pub fn is_k_radius_prime(p: u64, k: u64) -> Result<RadiusReport> {
    if !is_prime(p) {
        return Err(Error::not_prime(p));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let congruent = (p - 1) % (2 * k) == 0;
    let powers: Vec<u64> = if (p - 1) % k == 0 {
        (1..=k).map(|i| pow_mod(i % p, (p - 1) / k, p)).collect()
    } else {
        Vec::new()
    };
    let mut sorted = powers.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let distinct = !powers.is_empty() && sorted.len() == powers.len();
    Ok(RadiusReport {
        p,
        k,
        powers,
        distinct,
        congruent,
    })
}

/// The first `count` `k`-radius primes, scanning `p = 1 (mod 2k)` up to `bound`.
pub fn radius_primes(k: u64, count: usize, bound: u64) -> Vec<u64> {
    primes_one_mod(2 * k, 2, bound)
        .into_iter()
        .filter(|&p| is_k_radius_prime(p, k).is_ok_and(|r| r.is_radius_prime()))
        .take(count)
        .collect()
}

/// `{a in Z_p* : a^((p-1)/k) = 1}`, sorted. Needs `k | p - 1`.
pub fn power_kernel(p: u64, k: u64) -> Result<Vec<u64>> {
    if k == 0 || (p - 1) % k != 0 {
        return Err(Error::domain(format!("{k} does not divide {p} - 1")));
    }
    let g = primitive_root(p)?.value();
    let step = pow_mod(g, k, p);
    let mut kernel = Vec::with_capacity(((p - 1) / k) as usize);
    let mut a = 1u64;
    for _ in 0..(p - 1) / k {
        kernel.push(a);
        a = mul_mod(a, step, p);
    }
    kernel.sort_unstable();
    Ok(kernel)
}

/// Certificates for `[1, k]` and `[-k, k]*` at a `k`-radius prime.
///
/// `[1, k]` takes the kernel of `a -> a^((p-1)/k)`; that kernel contains
/// `-1`, and one element from each pair `{b, -b}` of it splits `[-k, k]*`.
pub fn radius_prime_splitting(p: u64, k: u64) -> Result<(SplittingCertificate, SplittingCertificate)> {
    if !is_k_radius_prime(p, k)?.is_radius_prime() {
        return Err(Error::domain(format!("{p} is not a {k}-radius prime")));
    }
    let kernel = power_kernel(p, k)?;
    let halves: Vec<u64> = kernel.iter().copied().filter(|&b| b <= p - b).collect();
    let k = k as i64;
    let positive = SplittingCertificate::new(MultiplierSet::range(1, k)?, kernel, p)?;
    let symmetric = SplittingCertificate::new(MultiplierSet::interval(k as u64, k as u64)?, halves, p)?;
    Ok((positive, symmetric))
}

/// The power kernel as a splitter set of `M`, if it is one.
pub fn kernel_splitter(p: u64, k: u64, m: &MultiplierSet) -> Result<Option<SplittingCertificate>> {
    let kernel = power_kernel(p, k)?;
    if !verify_splitting(m, &kernel, p) {
        return Ok(None);
    }
    SplittingCertificate::new(m.clone(), kernel, p).map(Some)
}

/// Splitter set `chi^-1(C)` where `C` is a complement of `chi(M)` in `Z_k`.
///
/// Works whenever `chi` is surjective and injective on `M` with `chi(M)` a
/// direct factor of `Z_k`. With a bijective `chi(M)` this is the power kernel.
pub fn character_splitter(chi: &Character, m: &MultiplierSet) -> Result<Option<SplittingCertificate>> {
    if !chi.is_surjective() {
        return Err(Error::domain("character_splitter needs a surjective character"));
    }
    let (p, k) = (chi.p, chi.k);
    let index = IndexMod::new(p, chi.g, k)?;
    let mut values = Vec::with_capacity(m.len());
    for &a in m.elements() {
        let ind = index
            .index(a)
            .ok_or_else(|| Error::domain(format!("multiplier {a} vanishes mod {p}")))?;
        values.push(ind * chi.x % k);
    }
    let mut image = values.clone();
    image.sort_unstable();
    image.dedup();
    if image.len() != values.len() {
        return Ok(None);
    }
    let complement = if k == 1 {
        vec![0]
    } else {
        match find_complement(&values, &GroupContext::additive(k)?, DEFAULT_BUDGET)?.decided()? {
            Some(c) => c,
            None => return Ok(None),
        }
    };
    let mut wanted = vec![false; k as usize];
    for c in complement {
        wanted[c as usize] = true;
    }
    let mut splitters = Vec::with_capacity(((p - 1) / k * image.len() as u64) as usize);
    let mut a = 1u64;
    for i in 0..p - 1 {
        if wanted[(i % k * chi.x % k) as usize] {
            splitters.push(a);
        }
        a = mul_mod(a, chi.g, p);
    }
    SplittingCertificate::new(m.clone(), splitters, p).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homomorphism_counts() {
        assert_eq!(homomorphisms(7, 3).unwrap().len(), 3);
        let xs: Vec<u64> = homomorphisms(7, 4).unwrap().iter().map(|c| c.x).collect();
        assert_eq!(xs, vec![0, 2]);
        let zero = homomorphisms(5, 1).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].eval(3), Some(0));
        assert!(homomorphisms(8, 2).is_err());
    }

    #[test]
    fn matching_examples() {
        let spec = CharacterSpec::new(2, vec![-1], vec![1]).unwrap();
        let chi = character_matches(7, &spec).unwrap().unwrap();
        assert_eq!(chi.eval(-1), Some(1));
        assert!(character_matches(13, &spec).unwrap().is_none());
        let zero = CharacterSpec::new(6, vec![2, 3], vec![0, 0]).unwrap();
        assert_eq!(character_matches(13, &zero).unwrap().unwrap().x, 0);
        assert!(character_matches(5, &CharacterSpec::new(2, vec![10], vec![0]).unwrap()).is_err());
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(CharacterSpec::new(6, vec![2, 2], vec![0, 1]).is_err());
        assert!(CharacterSpec::new(6, vec![0], vec![0]).is_err());
        assert!(CharacterSpec::new(6, vec![2], vec![0, 1]).is_err());
        let s = CharacterSpec::new(6, vec![-1, 2, 3, 5], vec![3, 1, 5, 4]).unwrap();
        assert_eq!(s.to_json(), r#"{"k":6,"bases":[-1,2,3,5],"targets":[3,1,5,4]}"#);
        assert_eq!(CharacterSpec::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn impossible_spec_scans_empty() {
        let spec = CharacterSpec::new(2, vec![4], vec![1]).unwrap();
        assert!(scan_primes_for_spec(&spec, 2, 100_000, 1).is_empty());
    }

    #[test]
    fn radius_examples() {
        let r = is_k_radius_prime(5, 2).unwrap();
        assert!(r.is_radius_prime());
        assert_eq!(r.powers, vec![1, 4]);
        let r = is_k_radius_prime(7, 3).unwrap();
        assert!(r.is_radius_prime());
        assert_eq!(r.powers, vec![1, 4, 2]);
        assert!(!is_k_radius_prime(13, 3).unwrap().is_radius_prime());
        assert!(is_k_radius_prime(15, 3).is_err());
    }

    #[test]
    fn radius_splitting_examples() {
        let (a, b) = radius_prime_splitting(5, 2).unwrap();
        assert_eq!(a.splitters(), &[1, 4]);
        assert_eq!(b.splitters(), &[1]);
        let (a, b) = radius_prime_splitting(7, 3).unwrap();
        assert_eq!(a.splitters(), &[1, 6]);
        assert_eq!(b.splitters(), &[1]);
        assert!(radius_prime_splitting(13, 3).is_err());
    }

    #[test]
    fn kernel_examples() {
        let m: MultiplierSet = "-1..5".parse().unwrap();
        let c = kernel_splitter(7, 6, &m).unwrap().unwrap();
        assert_eq!(c.splitters(), &[1]);
        // 2 is a non-square mod 13, so {1, 2} times the squares is everything
        let m12: MultiplierSet = "1..2".parse().unwrap();
        let squares = power_kernel(13, 2).unwrap();
        assert_eq!(squares, vec![1, 3, 4, 9, 10, 12]);
        assert!(verify_splitting(&m12, &squares, 13));
        assert!(kernel_splitter(13, 2, &m12).unwrap().is_some());
        assert!(kernel_splitter(17, 2, &m12).unwrap().is_none());
        assert!(kernel_splitter(13, 5, &m12).is_err());
    }
}
