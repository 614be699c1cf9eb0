use std::collections::BTreeSet;

use splitter_core::splitting::{verify_splitting, MultiplierSet};
use splitter_core::structure::{
    b1_union, build_b1, check_disjoint_criterion, classify_b1, coset_cycle, criterion_splitting,
    next_split_prime, quotient_set, reduce_to_h_check, subgroup_h, verify_structure_theorem, B1Config,
    Family, Ratio, Variant,
};
use splitter_core::zmod::is_prime;
use splitter_core::{Error, DEFAULT_BUDGET};

fn ms(s: &str) -> MultiplierSet {
    s.parse().unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

#[test]
fn ratio_set_of_minus_one_to_five() {
    let m = ms("-1..5");
    let mut brute = BTreeSet::new();
    for &a in m.elements() {
        for &b in m.elements() {
            let (mut n, mut d) = (a / gcd(a, b), b / gcd(a, b));
            if d < 0 {
                (n, d) = (-n, -d);
            }
            if (n, d) != (1, 1) {
                brute.insert((n, d));
            }
        }
    }
    let x = quotient_set(&m).unwrap();
    assert_eq!(x.len(), 27);
    let ours: BTreeSet<(i64, i64)> = x.ratios().iter().map(|r| (r.num(), r.den())).collect();
    assert_eq!(ours, brute);
    assert!(x.contains(Ratio::new(-1, 1).unwrap()));
}

/// Over every `B` containing 1, the criterion agrees with direct verification.
#[test]
fn criterion_matches_verification() {
    for (m, p) in [("-1..5", 7u64), ("-1..5", 13), ("1..3", 7), ("1..3", 13), ("-2..2", 13), ("1..2", 11)] {
        let m = ms(m);
        let rest: Vec<u64> = (2..p).collect();
        for mask in 0u32..(1 << rest.len()) {
            let b: Vec<u64> = std::iter::once(1)
                .chain(rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x))
                .collect();
            assert_eq!(criterion_splitting(&b, &m, p).unwrap(), verify_splitting(&m, &b, p), "{m} {b:?} mod {p}");
        }
    }
    assert!(criterion_splitting(&[2, 3], &ms("1..2"), 7).is_err());
}

#[test]
fn disjointness_by_hand_mod_seven() {
    // X for [-1,5]* reduced mod 7, then B ∩ BX computed directly
    let m = ms("-1..5");
    let x: Vec<u64> = quotient_set(&m)
        .unwrap()
        .ratios()
        .iter()
        .map(|r| {
            let d = (1..7).find(|&d| (d * r.den()).rem_euclid(7) == 1).unwrap();
            (r.num() * d).rem_euclid(7) as u64
        })
        .collect();
    for b in [vec![1u64], vec![1, 6], vec![1, 3], vec![1, 2, 4]] {
        let hit = b.iter().any(|&s| x.iter().any(|&r| b.contains(&(s * r % 7))));
        assert_eq!(check_disjoint_criterion(&b, &m, 7).unwrap(), !hit, "{b:?}");
    }
}

// [-2,2]* mod 149 already exhausts the default budget
#[test]
fn subgroup_reduction_agrees() {
    for (k1, k2) in [(1, 2), (1, 3), (2, 2), (0, 3), (1, 5), (2, 4)] {
        for p in (k2 + 2..=140).filter(|&p| is_prime(p) && (p - 1) % (k1 + k2) == 0) {
            let check = reduce_to_h_check(p, k1, k2, DEFAULT_BUDGET).unwrap();
            assert!(check.agree(), "[-{k1},{k2}]* mod {p}: {check:?}");
        }
    }
    assert!(reduce_to_h_check(15, 1, 2, DEFAULT_BUDGET).is_err());
}

#[test]
fn subgroup_is_closed() {
    for p in [7u64, 13, 31, 463] {
        let h = subgroup_h(p, 5).unwrap();
        let set: BTreeSet<u64> = h.iter().copied().collect();
        assert!(h.iter().all(|&a| h.iter().all(|&b| set.contains(&(a * b % p)))));
        assert!(set.contains(&(p - 1)) && (2..=5).all(|g| set.contains(&(g % p))));
        assert_eq!((p - 1) % h.len() as u64, 0);
    }
}

#[test]
fn coset_unions_round_trip() {
    for p in (7..400u64).filter(|&p| is_prime(p) && p % 6 == 1) {
        for variant in [Variant::A, Variant::B] {
            let cycle = coset_cycle(p, variant).unwrap();
            let d = cycle.length;
            assert_eq!(cycle.shifts.len(), d);
            for signs in [vec![1i8; d], (0..d).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()] {
                let config = B1Config { variant, signs: signs.clone() };
                let union = b1_union(p, &config).unwrap();
                match build_b1(p, &config) {
                    Ok(b1) => {
                        assert_eq!(b1, union);
                        assert_eq!(b1.len(), d * cycle.kernel.len());
                    }
                    Err(Error::SignConflict(k)) => assert!(k < d && union.len() < d * cycle.kernel.len()),
                    Err(e) => panic!("{p} {variant:?}: {e}"),
                }
                let found = classify_b1(&union, p, variant).unwrap().expect("a union of cosets classifies");
                assert_eq!(b1_union(p, &B1Config { variant, signs: found }).unwrap(), union);
            }
            let short = B1Config { variant, signs: vec![1; d - 1] };
            assert!(matches!(build_b1(p, &short), Err(Error::LengthMismatch { .. })));
        }
    }
}

#[test]
fn structure_holds_at_small_split_primes() {
    let mut p = 6;
    for _ in 0..3 {
        p = next_split_prime(p, 10_000, DEFAULT_BUDGET).unwrap().unwrap();
        let report = verify_structure_theorem(p, DEFAULT_BUDGET).unwrap();
        assert!(report.splitters_found > 0);
        assert_ne!(report.family, Family::None, "{p}");
        assert!(report.forced_memberships, "{p}");
        assert!(report.observations.iter().all(|o| o.family != Family::None));
    }
}
