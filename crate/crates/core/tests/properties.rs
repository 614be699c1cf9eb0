use proptest::prelude::*;

use splitter_core::characters::homomorphisms;
use splitter_core::codec::{decode, encode, CodeSpec, Correction, Word};
use splitter_core::factorization::{find_complement, scale_set, verify_factorization, GroupContext};
use splitter_core::logarithms::LogTable;
use splitter_core::splitting::{
    enumerate_splitters, find_splitter, verify_splitting, MultiplierSet, SearchConfig,
    SplittingCertificate,
};
use splitter_core::zmod::{gcd, inv_mod, is_prime, mul_mod, pow_mod, reduce};
use splitter_core::{SearchOutcome, DEFAULT_BUDGET};

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 53, 61, 73])
}

fn interval() -> impl Strategy<Value = MultiplierSet> {
    (0u64..3, 1u64..5).prop_map(|(k1, k2)| MultiplierSet::interval(k1, k2).unwrap())
}

proptest! {
    #[test]
    fn arithmetic_matches_wide_integers(a in any::<u64>(), b in any::<u64>(), m in 1u64..) {
        prop_assert_eq!(mul_mod(a, b, m) as u128, a as u128 * b as u128 % m as u128);
        let e = b % 64;
        let naive = (0..e).fold(1u128 % m as u128, |acc, _| acc * (a % m) as u128 % m as u128);
        prop_assert_eq!(pow_mod(a, e, m) as u128, naive);
        if let Some(inv) = inv_mod(a, m) {
            prop_assert_eq!(mul_mod(a % m, inv, m), 1 % m);
        } else {
            prop_assert!(gcd(a, m) != 1);
        }
    }

    #[test]
    fn reduce_is_canonical(v in any::<i64>(), m in 1u64..1_000_000) {
        let r = reduce(v, m);
        prop_assert!(r < m);
        prop_assert_eq!(r as i128, (v as i128).rem_euclid(m as i128));
    }

    #[test]
    fn multiplier_syntax_round_trips(xs in prop::collection::btree_set(-20i64..20, 1..8)) {
        let xs: Vec<i64> = xs.into_iter().filter(|&x| x != 0).collect();
        prop_assume!(!xs.is_empty());
        let m = MultiplierSet::new(xs.clone()).unwrap();
        let again: MultiplierSet = m.to_string().parse().unwrap();
        prop_assert_eq!(again.elements(), &xs[..]);
    }

    /// Any found splitting verifies, and scaling it by a unit gives another.
    #[test]
    fn splittings_survive_unit_scaling(m in interval(), p in small_prime(), u in 1u64..1000) {
        let SearchOutcome::Found(cert) = find_splitter(&m, p, &SearchConfig::default()) else {
            return Ok(());
        };
        prop_assert!(verify_splitting(&m, cert.splitters(), p));
        let u = u % (p - 1) + 1;
        let scaled: Vec<u64> = cert.splitters().iter().map(|&s| mul_mod(s, u, p)).collect();
        prop_assert!(verify_splitting(&m, &scaled, p));
    }

    #[test]
    fn certificate_json_round_trips(m in interval(), p in small_prime()) {
        if let SearchOutcome::Found(cert) = find_splitter(&m, p, &SearchConfig::default()) {
            let back = SplittingCertificate::from_json(&cert.to_json()).unwrap();
            prop_assert_eq!(back.to_json(), cert.to_json());
        }
    }

    /// A complement found for random `A` factors `Z_n`, and so does every
    /// multiple of `A` by a unit of `|A|`.
    #[test]
    fn complements_scale(n in 2u64..40, picks in prop::collection::vec(1u64..40, 0..5)) {
        let ctx = GroupContext::additive(n).unwrap();
        let mut a: Vec<u64> = std::iter::once(0).chain(picks.iter().map(|x| x % n)).collect();
        a.sort_unstable();
        a.dedup();
        let Ok(SearchOutcome::Found(b)) = find_complement(&a, &ctx, DEFAULT_BUDGET) else {
            return Ok(());
        };
        prop_assert!(verify_factorization(&a, &b, &ctx).unwrap());
        for k in (1..=n as i64).filter(|&k| gcd(k as u64, a.len() as u64) == 1) {
            prop_assert!(verify_factorization(&scale_set(k, &a, &ctx), &b, &ctx).unwrap());
        }
    }

    #[test]
    fn characters_are_homomorphisms(p in small_prime(), k in 1u64..13, a in 1i64..500, b in 1i64..500) {
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        for chi in homomorphisms(p, k).unwrap() {
            let lhs = chi.eval(a * b).unwrap();
            prop_assert_eq!(lhs, (chi.eval(a).unwrap() + chi.eval(b).unwrap()) % k);
            prop_assert_eq!(chi.eval(1), Some(0));
        }
    }

    #[test]
    fn table_json_round_trips(values in prop::collection::vec(0u64..16, 8)) {
        let domain: MultiplierSet = "-4..4".parse().unwrap();
        let t = LogTable::new(domain, 16, values).unwrap();
        prop_assert_eq!(LogTable::from_json(&t.to_json()).unwrap(), t);
    }

    /// Encoding then corrupting one symbol by a multiplier is undone.
    #[test]
    fn codec_corrects_one_error(
        pick in 0usize..1000,
        message in prop::collection::vec(0u64..100, 0..12),
        position in 0usize..12,
        magnitude in 0usize..8,
    ) {
        let cases = [("1..2", 13u64), ("1..3", 19), ("-1..3", 29), ("-1..5", 7), ("-2..2", 17), ("1..4", 17)];
        let (m, p) = cases[pick % cases.len()];
        let m: MultiplierSet = m.parse().unwrap();
        prop_assume!(is_prime(p));
        let sets = enumerate_splitters(&m, p, DEFAULT_BUDGET, 4).unwrap();
        prop_assume!(!sets.is_empty());
        let spec = CodeSpec::new(p, m.clone(), sets[pick % sets.len()].clone()).unwrap();
        let n = spec.length();
        let msg: Vec<u64> = message.iter().cycle().take(n - 1).map(|x| x % p).collect();
        let msg = if message.is_empty() { vec![0; n - 1] } else { msg };
        let word = encode(&spec, &msg).unwrap();
        prop_assert_eq!(decode(&spec, &word).unwrap().word, word.clone());

        let position = position % n;
        let e = m.elements()[magnitude % m.len()];
        let mut received = word.symbols.clone();
        received[position] = (received[position] + reduce(e, p)) % p;
        let d = decode(&spec, &Word::new(received)).unwrap();
        prop_assert_eq!(d.word, word);
        prop_assert_eq!(d.correction, Some(Correction { position, magnitude: e }));
    }
}
