//! Structure of splitter sets for `M = [-1, 5]*`.
//!
//! Two tools apply to any `M` containing 1: the ratio set
//! `X = M/M \ {1}` (a set `B` containing 1 splits iff `M * B` covers and
//! `B` misses `B * X`), and the subgroup `H = <-1, 2, ..., k2>` (the
//! interval set splits `Z_p` iff it is a direct factor of `H`).
//!
//! For `[-1, 5]*` every `B1 = B ∩ H` of a splitter set with `1 in B` is a
//! union of cosets `e_k 8^k K` with signs `e_k = ±1`, where `K` is generated
//! by either `-2/5, -4/3` (family A) or `-4/5, -2/3` (family B). Since 8 has
//! finite order modulo `K`, only the first `d` cosets are distinct.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{closure, enumerate_complements, find_complement, GroupContext};
use crate::search::SearchOutcome;
use crate::splitting::{find_splitter, reduce_multipliers, MultiplierSet, SearchConfig};
use crate::zmod::{gcd, inv_mod, is_prime, mul_mod, reduce};

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = den.signum();
        Ok(Ratio {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    /// `num / den mod p`; fails when `p | den`.
    pub fn residue(self, p: u64) -> Result<u64> {
        let inv = inv_mod(reduce(self.den, p), p)
            .ok_or_else(|| Error::domain(format!("denominator {} vanishes mod {p}", self.den)))?;
        Ok(mul_mod(reduce(self.num, p), inv, p))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `X = {m1/m2 : m1 != m2 in M} \ {1}`, ordered by value of the fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSet {
    ratios: Vec<Ratio>,
}

impl RatioSet {
    pub fn ratios(&self) -> &[Ratio] {
        &self.ratios
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn contains(&self, r: Ratio) -> bool {
        self.ratios.contains(&r)
    }

    /// The ratios as residues mod `p`, deduplicated and sorted.
    pub fn residues(&self, p: u64) -> Result<Vec<u64>> {
        let mut out = self
            .ratios
            .iter()
            .map(|r| r.residue(p))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

pub fn quotient_set(m: &MultiplierSet) -> Result<RatioSet> {
    if !m.contains(1) {
        return Err(Error::domain("the ratio set needs 1 in M"));
    }
    let mut set = BTreeSet::new();
    for &a in m.elements() {
        for &b in m.elements() {
            if a != b {
                let r = Ratio::new(a, b)?;
                if r != Ratio::new(1, 1)? {
                    set.insert(r);
                }
            }
        }
    }
    let mut ratios: Vec<Ratio> = set.into_iter().collect();
    ratios.sort_by(|x, y| (x.num as i128 * y.den as i128).cmp(&(y.num as i128 * x.den as i128)));
    Ok(RatioSet { ratios })
}

fn residue_set(b: &[u64], p: u64) -> Vec<bool> {
    let mut member = vec![false; p as usize];
    for &x in b {
        member[(x % p) as usize] = true;
    }
    member
}

/// True iff `B ∩ B * X = ∅` with `X` reduced mod `p`.
pub fn check_disjoint_criterion(b: &[u64], m: &MultiplierSet, p: u64) -> Result<bool> {
    let x = quotient_set(m)?.residues(p)?;
    let member = residue_set(b, p);
    Ok(b.iter()
        .all(|&s| x.iter().all(|&r| !member[mul_mod(s, r, p) as usize])))
}

/// The criterion form of a splitting: `1 in B`, `M * B` covers `Z_p \ {0}`,
/// and `B` misses `B * X`. Agrees with direct verification.
pub fn criterion_splitting(b: &[u64], m: &MultiplierSet, p: u64) -> Result<bool> {
    if !b.contains(&1) {
        return Err(Error::domain("criterion_splitting needs 1 in B"));
    }
    let Some(images) = reduce_multipliers(m, p) else {
        return Ok(false);
    };
    let mut hit = vec![false; p as usize];
    for &s in b {
        for &a in &images {
            hit[mul_mod(a, s % p, p) as usize] = true;
        }
    }
    if hit[0] || hit[1..].iter().any(|&h| !h) {
        return Ok(false);
    }
    check_disjoint_criterion(b, m, p)
}

/// `H = <-1, 2, ..., k2>` in `Z_p*`, sorted.
pub fn subgroup_h(p: u64, k2: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::not_prime(p));
    }
    if p <= k2 {
        return Err(Error::domain(format!("need p > k2, got p = {p}, k2 = {k2}")));
    }
    let mut gens = vec![p - 1];
    gens.extend(2..=k2);
    Ok(closure(p, &gens))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `K = <-2/5, -4/3>`.
    A,
    /// `K = <-4/5, -2/3>`.
    B,
}

impl Variant {
    pub fn generators(self) -> [Ratio; 2] {
        let r = |n, d| Ratio::new(n, d).expect("nonzero denominator");
        match self {
            Variant::A => [r(-2, 5), r(-4, 3)],
            Variant::B => [r(-4, 5), r(-2, 3)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct B1Config {
    pub variant: Variant,
    /// `e_k` for `k = 0, 1, ...`; entries past the cycle length are ignored.
    pub signs: Vec<i8>,
}

/// `K` and the cycle length `d`: the least `d >= 1` with `8^d in K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCycle {
    pub kernel: Vec<u64>,
    pub length: usize,
    /// `8^k mod p` for `k < d`.
    pub shifts: Vec<u64>,
}

fn check_prime_one_mod_6(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::not_prime(p));
    }
    if p % 6 != 1 {
        return Err(Error::domain(format!("{p} is not 1 mod 6")));
    }
    Ok(())
}

pub fn coset_cycle(p: u64, variant: Variant) -> Result<CosetCycle> {
    check_prime_one_mod_6(p)?;
    let gens = variant
        .generators()
        .iter()
        .map(|r| r.residue(p))
        .collect::<Result<Vec<_>>>()?;
    let kernel = closure(p, &gens);
    let in_kernel = residue_set(&kernel, p);
    let eight = 8 % p;
    let mut shifts = vec![1u64];
    let mut x = eight;
    while !in_kernel[x as usize] {
        shifts.push(x);
        x = mul_mod(x, eight, p);
    }
    Ok(CosetCycle {
        kernel,
        length: shifts.len(),
        shifts,
    })
}

/// `B1 = ∪_{k<d} e_k 8^k K`, sorted. Cosets that meet under the chosen
/// signs are a [`Error::SignConflict`] naming the first offending index.
pub fn build_b1(p: u64, config: &B1Config) -> Result<Vec<u64>> {
    let cycle = coset_cycle(p, config.variant)?;
    if config.signs.len() < cycle.length {
        return Err(Error::LengthMismatch {
            expected: cycle.length,
            actual: config.signs.len(),
        });
    }
    if let Some(&bad) = config.signs.iter().find(|&&e| e != 1 && e != -1) {
        return Err(Error::domain(format!("sign {bad} is not ±1")));
    }
    let mut member = vec![false; p as usize];
    let mut out = Vec::with_capacity(cycle.length * cycle.kernel.len());
    for (k, &shift) in cycle.shifts.iter().enumerate() {
        let lead = if config.signs[k] == 1 { shift } else { p - shift };
        for &x in &cycle.kernel {
            let y = mul_mod(lead, x, p) as usize;
            if std::mem::replace(&mut member[y], true) {
                return Err(Error::SignConflict(k));
            }
            out.push(y as u64);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `∪_{k<d} e_k 8^k K` as a plain set union, sorted. Unlike [`build_b1`],
/// cosets that coincide under the signs (say `-8K = K`) simply merge.
pub fn b1_union(p: u64, config: &B1Config) -> Result<Vec<u64>> {
    let cycle = coset_cycle(p, config.variant)?;
    if config.signs.len() < cycle.length {
        return Err(Error::LengthMismatch {
            expected: cycle.length,
            actual: config.signs.len(),
        });
    }
    let mut out: Vec<u64> = cycle
        .shifts
        .iter()
        .zip(&config.signs)
        .flat_map(|(&shift, &e)| {
            let lead = if e == 1 { shift } else { p - shift };
            cycle.kernel.iter().map(move |&x| mul_mod(lead, x, p))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The sign vector exhibiting `b1` in the given family, if any. Each coset
/// `8^k K` must lie in `b1` itself or in its negative (`+1` preferred when
/// both do); the union those signs give must then be `b1` exactly.
pub fn classify_b1(b1: &[u64], p: u64, variant: Variant) -> Result<Option<Vec<i8>>> {
    let cycle = coset_cycle(p, variant)?;
    let member = residue_set(b1, p);
    let mut signs = Vec::with_capacity(cycle.length);
    for &shift in &cycle.shifts {
        let inside = |lead: u64| cycle.kernel.iter().all(|&x| member[mul_mod(lead, x, p) as usize]);
        if inside(shift) {
            signs.push(1);
        } else if inside(p - shift) {
            signs.push(-1);
        } else {
            return Ok(None);
        }
    }
    let config = B1Config { variant, signs };
    Ok((b1_union(p, &config)? == b1).then_some(config.signs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A,
    B,
    Both,
    None,
}

/// One distinct way `B ∩ H` looked, with how many enumerated sets shared it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub family: Family,
    pub signs_a: Option<Vec<i8>>,
    pub signs_b: Option<Vec<i8>>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub p: u64,
    /// Number of distinct `B ∩ H` over splitter sets `B` with `1 in B`.
    pub splitters_found: usize,
    /// `none` if some set fits neither family; `both` if both families occur
    /// or every set fits both.
    pub family: Family,
    /// The distinct sign vectors seen, family A's first.
    pub signs: Vec<Vec<i8>>,
    pub forced_memberships: bool,
    pub subgroup_order: usize,
    pub cycle_length_a: usize,
    pub cycle_length_b: usize,
    pub observations: Vec<Observation>,
}

impl StructureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// The memberships any splitter set with `1 in B` must show:
/// `-2/3` or `-2/5`; `-8` or `8`; and `{-2/3, -4/5}` or `{-2/5, -4/3}`.
pub fn forced_memberships_hold(b: &[u64], p: u64) -> Result<bool> {
    let member = residue_set(b, p);
    let has = |n: i64, d: i64| -> Result<bool> { Ok(member[Ratio::new(n, d)?.residue(p)? as usize]) };
    Ok((has(-2, 3)? || has(-2, 5)?)
        && (has(-8, 1)? || has(8, 1)?)
        && ((has(-2, 3)? && has(-4, 5)?) || (has(-2, 5)? && has(-4, 3)?)))
}

/// Enumerates every `B ∩ H` for splitter sets `B` of `[-1, 5]*` in `Z_p`
/// with `1 in B` and checks each against both families and the forced
/// memberships.
///
/// These intersections are exactly the complements of `M` in `H` that
/// contain 1, so the enumeration runs inside `H`.
pub fn verify_structure_theorem(p: u64, budget: u64) -> Result<StructureReport> {
    check_prime_one_mod_6(p)?;
    let m = MultiplierSet::interval(1, 5)?;
    let h = subgroup_h(p, 5)?;
    let ctx = GroupContext::multiplicative(p, h.iter().copied())?;
    let images = reduce_multipliers(&m, p)
        .ok_or_else(|| Error::domain(format!("[-1,5]* collapses mod {p}")))?;
    let b1s = enumerate_complements(&images, &ctx, budget)?;

    let (cycle_a, cycle_b) = (coset_cycle(p, Variant::A)?, coset_cycle(p, Variant::B)?);
    let mut observations: Vec<Observation> = Vec::new();
    let mut forced = true;
    for b1 in &b1s {
        forced &= forced_memberships_hold(b1, p)?;
        let signs_a = classify_b1(b1, p, Variant::A)?;
        let signs_b = classify_b1(b1, p, Variant::B)?;
        let family = match (&signs_a, &signs_b) {
            (Some(_), Some(_)) => Family::Both,
            (Some(_), None) => Family::A,
            (None, Some(_)) => Family::B,
            (None, None) => Family::None,
        };
        match observations
            .iter_mut()
            .find(|o| o.family == family && o.signs_a == signs_a && o.signs_b == signs_b)
        {
            Some(o) => o.count += 1,
            None => observations.push(Observation {
                family,
                signs_a,
                signs_b,
                count: 1,
            }),
        }
    }
    observations.sort_by(|x, y| (&x.signs_a, &x.signs_b).cmp(&(&y.signs_a, &y.signs_b)));

    let any = |f: Family| observations.iter().any(|o| o.family == f);
    let family = if any(Family::None) {
        Family::None
    } else if any(Family::Both) || (any(Family::A) && any(Family::B)) {
        Family::Both
    } else if any(Family::A) {
        Family::A
    } else if any(Family::B) {
        Family::B
    } else {
        Family::None
    };
    let mut signs: Vec<Vec<i8>> = Vec::new();
    for o in &observations {
        for s in o.signs_a.iter().chain(&o.signs_b) {
            if !signs.contains(s) {
                signs.push(s.clone());
            }
        }
    }
    Ok(StructureReport {
        p,
        splitters_found: b1s.len(),
        family,
        signs,
        forced_memberships: forced,
        subgroup_order: h.len(),
        cycle_length_a: cycle_a.length,
        cycle_length_b: cycle_b.length,
        observations,
    })
}

/// Both sides of the subgroup reduction for `[-k1, k2]*` at `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub splits_field: bool,
    pub factor_of_subgroup: bool,
}

impl ReductionCheck {
    pub fn agree(&self) -> bool {
        self.splits_field == self.factor_of_subgroup
    }
}

/// Decides "splits `Z_p`" by the full splitter search (guard off) and
/// "direct factor of `H`" by a complement search inside `H`.
pub fn reduce_to_h_check(p: u64, k1: u64, k2: u64, budget: u64) -> Result<ReductionCheck> {
    if !is_prime(p) {
        return Err(Error::not_prime(p));
    }
    if (p - 1) % (k1 + k2) != 0 {
        return Err(Error::domain(format!("{p} is not 1 mod {}", k1 + k2)));
    }
    let m = MultiplierSet::interval(k1, k2)?;
    let splits_field = find_splitter(&m, p, &SearchConfig::exhaustive(budget))
        .decided()?
        .is_some();
    let h = subgroup_h(p, k2)?;
    let factor_of_subgroup = match reduce_multipliers(&m, p) {
        None => false,
        Some(images) => {
            let ctx = GroupContext::multiplicative(p, h)?;
            match find_complement(&images, &ctx, budget)? {
                SearchOutcome::Found(_) => true,
                SearchOutcome::Exhausted => false,
                SearchOutcome::Inconclusive { nodes } => return Err(Error::Inconclusive { nodes }),
            }
        }
    };
    Ok(ReductionCheck {
        splits_field,
        factor_of_subgroup,
    })
}

/// Smallest prime `p = 1 (mod 6)` in `(after, bound]` where `[-1, 5]*`
/// splits `Z_p`.
pub fn next_split_prime(after: u64, bound: u64, budget: u64) -> Result<Option<u64>> {
    let m = MultiplierSet::interval(1, 5)?;
    let mut p = after + 1;
    while p <= bound {
        if p % 6 == 1 && is_prime(p) && find_splitter(&m, p, &SearchConfig::with_budget(budget)).decided()?.is_some() {
            return Ok(Some(p));
        }
        p += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::verify_splitting;

    fn ms(s: &str) -> MultiplierSet {
        s.parse().unwrap()
    }

    fn shown(set: &RatioSet) -> Vec<String> {
        set.ratios().iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn ratio_sets() {
        assert_eq!(shown(&quotient_set(&ms("1,2")).unwrap()), ["1/2", "2"]);
        assert_eq!(
            shown(&quotient_set(&ms("1..3")).unwrap()),
            ["1/3", "1/2", "2/3", "3/2", "2", "3"]
        );
        let x = quotient_set(&ms("-1..5")).unwrap();
        // the 26 listed ratios plus -1 = (-1)/1
        assert_eq!(x.len(), 27);
        assert!(x.contains(Ratio::new(-1, 1).unwrap()));
        for (n, d) in [(-2, 1), (5, 4), (-1, 5), (3, 5)] {
            assert!(x.contains(Ratio::new(n, d).unwrap()));
        }
        assert!(quotient_set(&ms("2,3")).is_err());
    }

    #[test]
    fn criterion_examples() {
        let m = ms("-1..5");
        assert!(criterion_splitting(&[1], &m, 7).unwrap());
        assert!(!check_disjoint_criterion(&[1, 2], &m, 13).unwrap());
        assert!(criterion_splitting(&[2], &m, 7).is_err());
        assert!(!criterion_splitting(&[1, 2], &m, 13).unwrap());
        // 5 divides a denominator
        assert!(check_disjoint_criterion(&[1], &m, 5).is_err());
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroup_h(7, 5).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(subgroup_h(11, 1).unwrap(), vec![1, 10]);
        assert_eq!(30 % subgroup_h(31, 5).unwrap().len(), 0);
        assert!(subgroup_h(5, 5).is_err());
    }

    #[test]
    fn b1_at_seven() {
        let cycle = coset_cycle(7, Variant::A).unwrap();
        assert_eq!((cycle.kernel.clone(), cycle.length), (vec![1], 1));
        let b = build_b1(7, &B1Config { variant: Variant::A, signs: vec![1] }).unwrap();
        assert_eq!(b, vec![1]);
        // family B does not collapse: -4/5 = 2 and -2/3 = 4 mod 7
        let cycle = coset_cycle(7, Variant::B).unwrap();
        assert_eq!((cycle.kernel.clone(), cycle.length), (vec![1, 2, 4], 1));
        let b = build_b1(7, &B1Config { variant: Variant::B, signs: vec![-1, 1] }).unwrap();
        assert_eq!(b, vec![3, 5, 6]);
        assert!(build_b1(7, &B1Config { variant: Variant::A, signs: vec![] }).is_err());
        assert!(build_b1(11, &B1Config { variant: Variant::A, signs: vec![1] }).is_err());
    }

    #[test]
    fn coinciding_cosets_merge() {
        // mod 571, -8 lies in K_A, so -8 K_A = K_A
        let config = B1Config { variant: Variant::A, signs: vec![1, -1] };
        let cycle = coset_cycle(571, Variant::A).unwrap();
        assert_eq!(cycle.length, 2);
        assert_eq!(build_b1(571, &config), Err(Error::SignConflict(1)));
        assert_eq!(b1_union(571, &config).unwrap(), cycle.kernel);
    }

    #[test]
    fn structure_at_seven() {
        let r = verify_structure_theorem(7, 1_000_000).unwrap();
        assert_eq!(r.splitters_found, 1);
        assert_eq!(r.family, Family::A);
        assert_eq!(r.signs, vec![vec![1]]);
        assert!(r.forced_memberships);
        assert!(verify_structure_theorem(11, 1_000).is_err());
    }

    #[test]
    fn reduction_examples() {
        let c = reduce_to_h_check(7, 1, 5, 1_000_000).unwrap();
        assert!(c.splits_field && c.factor_of_subgroup);
        let c = reduce_to_h_check(13, 1, 5, 1_000_000).unwrap();
        assert!(c.agree());
        let c = reduce_to_h_check(13, 1, 2, 1_000_000).unwrap();
        assert!(!c.splits_field && !c.factor_of_subgroup);
    }

    #[test]
    fn criterion_matches_verifier_on_small_sets() {
        let m = ms("-1..5");
        let p = 13;
        // every 2-subset containing 1
        for x in 2..p {
            let b = [1, x];
            assert_eq!(criterion_splitting(&b, &m, p).unwrap(), verify_splitting(&m, &b, p));
        }
    }
}
