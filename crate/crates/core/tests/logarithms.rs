use splitter_core::factorization::{verify_factorization, GroupContext};
use splitter_core::logarithms::{
    bootstrap_from_prime, direct_complement, enumerate_logarithms, find_split_primes, is_logarithm,
    km_check, lift_8k_with_complement, KmMode, LogTable, ScanOptions,
};
use splitter_core::splitting::{verify_splitting, MultiplierSet};
use splitter_core::SearchOutcome;

fn ms(s: &str) -> MultiplierSet {
    s.parse().unwrap()
}

fn example_g() -> LogTable {
    LogTable::from_pairs(
        &[(1, 0), (-1, 8), (2, 2), (4, 4), (-2, 10), (-4, 12), (3, 6), (-3, 14)],
        16,
    )
    .unwrap()
}

/// Bijective logarithms found by trying every permutation of `Z_k`.
fn brute_logarithms(domain: &MultiplierSet, k: u64) -> Vec<Vec<u64>> {
    fn go(domain: &MultiplierSet, k: u64, prefix: &mut Vec<u64>, used: &mut [bool], out: &mut Vec<Vec<u64>>) {
        if prefix.len() == k as usize {
            let t = LogTable::new(domain.clone(), k, prefix.clone()).unwrap();
            if is_logarithm(&t) {
                out.push(prefix.clone());
            }
            return;
        }
        for v in 0..k {
            if !used[v as usize] {
                used[v as usize] = true;
                prefix.push(v);
                go(domain, k, prefix, used, out);
                prefix.pop();
                used[v as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(domain, k, &mut Vec::new(), &mut vec![false; k as usize], &mut out);
    out
}

#[test]
fn enumeration_matches_permutations() {
    for (k1, k2) in [(0, 3), (1, 2), (0, 4), (1, 3), (2, 2), (1, 4), (2, 3), (1, 5), (3, 3), (2, 4), (1, 6)] {
        let k = k1 + k2;
        let domain = MultiplierSet::interval(k1, k2).unwrap();
        let ours: Vec<Vec<u64>> = enumerate_logarithms(k1, k2, k)
            .unwrap()
            .iter()
            .map(|t| t.values().to_vec())
            .collect();
        assert_eq!(ours, brute_logarithms(&domain, k), "[-{k1},{k2}]*");
        assert!(enumerate_logarithms(k1, k2, k + 1).unwrap().is_empty());
    }
}

#[test]
fn enumerated_logarithms_fix_one_and_minus_one() {
    for (k1, k2) in [(1, 3), (1, 5), (2, 4), (3, 3), (1, 7), (2, 6)] {
        let k = k1 + k2;
        for t in enumerate_logarithms(k1, k2, k).unwrap() {
            assert_eq!(t.value(1), Some(0));
            assert_eq!(t.value(-1), Some(k / 2), "{t:?}");
        }
    }
}

#[test]
fn lifts_are_direct_and_even() {
    let tables = [
        example_g(),
        LogTable::from_pairs(&[(-1, 4), (1, 0), (2, 1), (3, 6), (4, 2), (5, 3), (6, 7), (7, 5)], 8).unwrap(),
    ];
    for t in tables.iter().chain(&enumerate_logarithms(1, 5, 6).unwrap()) {
        let SearchOutcome::Found(base) = direct_complement(t, 1_000_000) else {
            continue;
        };
        let (lifted, complement) = lift_8k_with_complement(t).unwrap();
        assert_eq!(lifted.k(), 8 * t.k());
        assert!(lifted.values().iter().all(|v| v % 8 == 0));
        assert_eq!(complement.len(), 8 * base.len());
        let ctx = GroupContext::additive(lifted.k()).unwrap();
        assert!(verify_factorization(lifted.values(), &complement, &ctx).unwrap());
        assert!(km_check(&lifted, KmMode::Strict).unwrap().admissible, "{lifted:?}");
    }
}

#[test]
fn scans_are_deterministic_and_verified() {
    let (lifted, _) = lift_8k_with_complement(&example_g()).unwrap();
    let one = find_split_primes(&lifted, 200_000, &ScanOptions::default()).unwrap();
    let four = find_split_primes(&lifted, 200_000, &ScanOptions { jobs: 4, ..Default::default() }).unwrap();
    assert!(!one.is_empty());
    assert_eq!(one, four);
    assert!(one.windows(2).all(|w| w[0].modulus() < w[1].modulus()));
    for cert in &one {
        assert_eq!(cert.modulus() % 128, 1);
        assert!(verify_splitting(&ms("-4..4"), cert.splitters(), cert.modulus()));
    }
    let capped = ScanOptions { max_results: Some(2), ..Default::default() };
    assert_eq!(find_split_primes(&lifted, 200_000, &capped).unwrap(), one[..2]);
}

#[test]
fn bootstrap_finds_larger_primes() {
    for (m, q, bound) in [("-1..3", 5, 20_000), ("-1..5", 7, 2_000), ("1..8", 17, 22_000)] {
        let m = ms(m);
        let certs = bootstrap_from_prime(&m, q, bound, &ScanOptions::default()).unwrap();
        assert!(!certs.is_empty(), "{m} from {q}");
        for cert in certs {
            assert!(cert.modulus() > q);
            assert_eq!(cert.multipliers(), &m);
            assert!(verify_splitting(&m, cert.splitters(), cert.modulus()));
        }
    }
}
