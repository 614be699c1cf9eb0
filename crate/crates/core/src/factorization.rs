//! Factorizations `G = A * B` of finite cyclic groups.
//!
//! Two kinds of carrier are supported: the additive group `Z_n` and a
//! multiplicative subgroup of `Z_n*` given by its elements. Elements are
//! always referred to by their residue value (the "label"), and every
//! ordering is numeric on labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::cover::{Branching, ExactCover, Walk};
use crate::search::{Budget, SearchOutcome};
use crate::zmod::{gcd, inv_mod, mul_mod, pow_mod, reduce};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Additive,
    Multiplicative,
}

/// A finite cyclic group in which factorizations are taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupContext {
    kind: GroupKind,
    modulus: u64,
    /// Sorted element labels.
    carrier: Vec<u64>,
    /// `slot[x]` is the position of label `x` in `carrier`, or `u32::MAX`.
    slot: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl GroupContext {
    /// The additive group `Z_n`.
    pub fn additive(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus {
                modulus: n,
                reason: "additive group needs modulus >= 2".into(),
            });
        }
        Ok(Self::build(GroupKind::Additive, n, (0..n).collect()))
    }

    /// A multiplicative subgroup of `Z_n*`, given by its elements.
    ///
    /// Fails unless the elements are units closed under products and inverses.
    pub fn multiplicative(n: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus {
                modulus: n,
                reason: "multiplicative group needs modulus >= 2".into(),
            });
        }
        let mut carrier: Vec<u64> = elements.into_iter().map(|x| x % n).collect();
        carrier.sort_unstable();
        carrier.dedup();
        if carrier.is_empty() {
            return Err(Error::domain("empty subgroup"));
        }
        if let Some(&x) = carrier.iter().find(|&&x| gcd(x, n) != 1) {
            return Err(Error::domain(format!("{x} is not a unit mod {n}")));
        }
        let ctx = Self::build(GroupKind::Multiplicative, n, carrier);
        for &a in &ctx.carrier {
            let inv = inv_mod(a, n).expect("unit");
            if !ctx.contains(inv) {
                return Err(Error::domain(format!("subgroup lacks the inverse of {a}")));
            }
            for &b in &ctx.carrier {
                if !ctx.contains(mul_mod(a, b, n)) {
                    return Err(Error::domain(format!(
                        "subgroup not closed: {a} * {b} mod {n}"
                    )));
                }
            }
        }
        Ok(ctx)
    }

    /// The subgroup of `Z_n*` generated by `generators` (reduced mod `n`).
    pub fn generated(n: u64, generators: &[i64]) -> Result<Self> {
        let gens: Vec<u64> = generators.iter().map(|&g| reduce(g, n)).collect();
        if let Some(&g) = gens.iter().find(|&&g| gcd(g, n) != 1) {
            return Err(Error::domain(format!("generator {g} is not a unit mod {n}")));
        }
        Self::multiplicative(n, closure(n, &gens))
    }

    fn build(kind: GroupKind, modulus: u64, carrier: Vec<u64>) -> Self {
        let mut slot = vec![ABSENT; modulus as usize];
        for (i, &x) in carrier.iter().enumerate() {
            slot[x as usize] = i as u32;
        }
        GroupContext {
            kind,
            modulus,
            carrier,
            slot,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn carrier(&self) -> &[u64] {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn identity(&self) -> u64 {
        match self.kind {
            GroupKind::Additive => 0,
            GroupKind::Multiplicative => 1,
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.modulus && self.slot[x as usize] != ABSENT
    }

    #[inline]
    pub fn op(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            GroupKind::Additive => (a + b) % self.modulus,
            GroupKind::Multiplicative => mul_mod(a, b, self.modulus),
        }
    }

    pub fn inverse(&self, a: u64) -> u64 {
        match self.kind {
            GroupKind::Additive => (self.modulus - a) % self.modulus,
            GroupKind::Multiplicative => inv_mod(a, self.modulus).expect("carrier holds units"),
        }
    }

    /// `k * a` additively or `a^k` multiplicatively; negative `k` inverts.
    pub fn power(&self, a: u64, k: i64) -> u64 {
        match self.kind {
            GroupKind::Additive => {
                mul_mod(a, reduce(k, self.modulus), self.modulus)
            }
            GroupKind::Multiplicative => {
                let base = if k < 0 { self.inverse(a) } else { a };
                pow_mod(base, k.unsigned_abs(), self.modulus)
            }
        }
    }

    #[inline]
    fn slot_of(&self, x: u64) -> usize {
        self.slot[x as usize] as usize
    }

    fn check_members(&self, set: &[u64]) -> Result<()> {
        match set.iter().find(|&&x| !self.contains(x)) {
            Some(x) => Err(Error::domain(format!("{x} is not in the carrier"))),
            None => Ok(()),
        }
    }
}

/// Closure of `gens` under multiplication mod `n` (always contains 1).
pub(crate) fn closure(n: u64, gens: &[u64]) -> Vec<u64> {
    let mut seen = vec![false; n as usize];
    seen[1 % n as usize] = true;
    let mut stack = vec![1 % n];
    let mut out = vec![1 % n];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = mul_mod(x, g, n);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
                stack.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// A claimed factorization `A * B` of a group.
#[derive(Debug, Clone)]
pub struct FactorPair {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub context: GroupContext,
}

impl FactorPair {
    pub fn verify(&self) -> Result<bool> {
        verify_factorization(&self.a, &self.b, &self.context)
    }
}

/// True iff the `|A| * |B|` products are pairwise distinct and cover the carrier.
pub fn verify_factorization(a: &[u64], b: &[u64], ctx: &GroupContext) -> Result<bool> {
    ctx.check_members(a)?;
    ctx.check_members(b)?;
    if a.len() * b.len() != ctx.order() {
        return Ok(false);
    }
    let mut hit = vec![false; ctx.order()];
    for &x in a {
        for &y in b {
            let i = ctx.slot_of(ctx.op(x, y));
            if hit[i] {
                return Ok(false);
            }
            hit[i] = true;
        }
    }
    Ok(true)
}

/// Searches for `B` with `A * B` a factorization and the identity in `B`.
///
/// The answer is the first `B` found by backtracking that covers the
/// smallest uncovered label first and tries candidate translates in
/// ascending label order. Existence is decided beforehand by a search that
/// branches on the most constrained element; both draw on `budget`.
/// `Exhausted` proves that `A` is not a direct factor.
pub fn find_complement(
    a: &[u64],
    ctx: &GroupContext,
    budget: u64,
) -> Result<SearchOutcome<Vec<u64>>> {
    ctx.check_members(a)?;
    let mut a: Vec<u64> = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || ctx.order() % a.len() != 0 {
        return Ok(SearchOutcome::Exhausted);
    }
    let mut budget = Budget::new(budget);
    let root = Some(ctx.identity());
    match complement_cover(&a, ctx, Branching::MostConstrained).run(root, &mut budget, &mut |_| false) {
        Walk::Complete => return Ok(SearchOutcome::Exhausted),
        Walk::OutOfBudget(nodes) => return Ok(SearchOutcome::Inconclusive { nodes }),
        Walk::Stopped => {}
    }
    let mut first = None;
    let walk = complement_cover(&a, ctx, Branching::Ordered).run(root, &mut budget, &mut |b| {
        first = Some(b.to_vec());
        false
    });
    Ok(match (walk, first) {
        (Walk::Stopped, Some(mut b)) => {
            b.sort_unstable();
            SearchOutcome::Found(b)
        }
        (Walk::OutOfBudget(nodes), _) => SearchOutcome::Inconclusive { nodes },
        _ => unreachable!("ordered search missed a complement the cover search found"),
    })
}

/// Every complement of `A` containing the identity, each sorted, in
/// lexicographic order. Budget exhaustion is an error.
pub fn enumerate_complements(a: &[u64], ctx: &GroupContext, budget: u64) -> Result<Vec<Vec<u64>>> {
    ctx.check_members(a)?;
    let mut a: Vec<u64> = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || ctx.order() % a.len() != 0 {
        return Ok(Vec::new());
    }
    let mut all = Vec::new();
    let mut budget = Budget::new(budget);
    let walk = complement_cover(&a, ctx, Branching::MostConstrained).run(
        Some(ctx.identity()),
        &mut budget,
        &mut |b| {
            let mut b = b.to_vec();
            b.sort_unstable();
            all.push(b);
            true
        },
    );
    if let Walk::OutOfBudget(nodes) = walk {
        return Err(Error::Inconclusive { nodes });
    }
    all.sort();
    Ok(all)
}

/// Cells are carrier slots; block `b` is `A * b`.
fn complement_cover(a: &[u64], ctx: &GroupContext, branching: Branching) -> ExactCover {
    let blocks = ctx.carrier().iter().map(|&b| {
        let cells = a.iter().map(|&x| ctx.slot_of(ctx.op(x, b)) as u32).collect();
        (b, cells)
    });
    ExactCover::new(ctx.order(), &[], blocks, branching, |_, b, _| b)
}

/// Hypotheses of the obstruction theorem in `Z_n`, `n = 2m`: `{0, m}` lies in
/// `N` and `|N|` is odd. When they hold, `N` is not a direct factor.
pub fn is_obstructed(set: &[u64], n: u64) -> Result<bool> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::domain(format!("obstruction needs an even modulus, got {n}")));
    }
    let mut set: Vec<u64> = set.to_vec();
    set.sort_unstable();
    set.dedup();
    Ok(set.contains(&0) && set.contains(&(n / 2)) && set.len() % 2 == 1)
}

/// `{k * a}` or `{a^k}` as a sorted set; collisions merge.
pub fn scale_set(k: i64, set: &[u64], ctx: &GroupContext) -> Vec<u64> {
    let mut out: Vec<u64> = set.iter().map(|&a| ctx.power(a, k)).collect();
    out.sort_unstable();
    out.dedup();
    out
}
