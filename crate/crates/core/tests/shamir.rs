mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{lagrange_oracle, subsets};
use lbcn_core::math::{Modulus, Rng};
use lbcn_core::shamir::*;
use proptest::prelude::*;

/// Degree-1 codewords at p = 7 on points 1..=4, by direct evaluation.
fn codewords() -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    for a0 in 0..7 {
        for a1 in 0..7 {
            out.insert((1..=4u64).map(|x| (a0 + a1 * x) % 7).collect());
        }
    }
    out
}

#[test]
fn parity_check_exhaustive_at_seven() {
    let p = Modulus::new(7).unwrap();
    let h = parity_matrix(4, 1, p).unwrap();
    let code = codewords();
    assert_eq!(code.len(), 49);
    let mut accepted = 0;
    for idx in 0..7u64.pow(4) {
        let m: Vec<u64> = (0..4).map(|k| idx / 7u64.pow(k) % 7).collect();
        let ok = is_valid_share_vector(&m, &h).unwrap();
        assert_eq!(ok, code.contains(&m), "{m:?}");
        accepted += ok as u32;
    }
    assert_eq!(accepted, 49);
}

#[test]
fn every_qualifying_subset_agrees_at_seven() {
    let p = Modulus::new(7).unwrap();
    for a0 in 0..7 {
        for a1 in 0..7 {
            let sv = sss_share_with_poly(&[a0, a1], 4, p).unwrap();
            let pts: Vec<(u64, u64)> = (1..=4u64).zip(sv.values.iter().copied()).collect();
            for k in 2..=4 {
                for sub in subsets(&pts, k) {
                    assert_eq!(lagrange_oracle(&sub, 7), a0);
                    let map: BTreeMap<u64, u64> = sub.into_iter().collect();
                    assert_eq!(sss_combine(&map, p).unwrap(), a0);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn random_sharings_reconstruct(s in 0u64..257, seed in any::<u64>(), n in 2usize..10, tsel in 0usize..10) {
        let p = Modulus::new(257).unwrap();
        let t = tsel % n;
        let mut rng = Rng::from_u64(seed);
        let (sv, coeffs) = sss_share(s, n, t, p, &mut rng).unwrap();
        prop_assert_eq!(coeffs[0], s);
        let pts: Vec<(u64, u64)> = (1..=n as u64).zip(sv.values.iter().copied()).collect();
        prop_assert_eq!(lagrange_oracle(&pts[n - t - 1..], 257), s);
        if t + 1 < n {
            let h = parity_matrix(n, t, p).unwrap();
            prop_assert!(is_valid_share_vector(&sv.values, &h).unwrap());
        }
    }
}
