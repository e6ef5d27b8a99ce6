use necklace_core::slime::{
    decompose, is_valid, max_adjacent_sum, migrate_backward, migrate_forward, phi, phi_inverse, weight,
};
use necklace_core::{enumerate_codes, Code};
use proptest::prelude::*;

/// Slimes recomputed from the definition: every cyclic interval of size >= 2
/// whose adjacent pairs all sum to m, keeping the inclusion-maximal ones.
fn brute_force_slimes(f: &Code) -> Vec<(usize, usize)> {
    let n = f.n();
    let e = f.entries();
    let m = max_adjacent_sum(f);
    let pair = |j: usize| u64::from(e[j % n]) + u64::from(e[(j + 1) % n]);
    let mut out = Vec::new();
    for start in 0..n {
        for len in 2..=n {
            let weak = (0..len - 1).all(|o| pair(start + o) == m);
            let left_cut = pair(start + n - 1) < m;
            let right_cut = pair(start + len - 1) < m;
            if weak && left_cut && right_cut {
                out.push((start, len));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn decomposition_matches_definition() {
    for n in 1..=7 {
        for k in 0..=7 {
            for f in enumerate_codes(n, k, None, false) {
                let d = decompose(&f);
                if !d.valid {
                    assert!(!is_valid(&f));
                    continue;
                }
                let got: Vec<_> = d.slimes.iter().map(|s| (s.start, s.len)).collect();
                assert_eq!(got, brute_force_slimes(&f), "{f}");
                let w: usize = got.iter().map(|&(_, len)| len / 2).sum();
                assert_eq!(d.weight, Some(w as u32));
            }
        }
    }
}

#[test]
fn migrations_are_mutually_inverse() {
    for n in 1..=7 {
        for k in 0..=7 {
            for f in enumerate_codes(n, k, None, false).filter(is_valid) {
                let fwd = migrate_forward(&f).unwrap();
                assert_eq!(migrate_backward(&fwd).unwrap(), f, "{f}");
                let bwd = migrate_backward(&f).unwrap();
                assert_eq!(migrate_forward(&bwd).unwrap(), f, "{f}");
            }
        }
    }
}

#[test]
fn phi_inverts_for_odd_primes() {
    for n in [3, 5, 7] {
        for k in 0..=7 {
            for f in enumerate_codes(n, k, None, false).filter(is_valid) {
                let g = phi(&f).unwrap();
                assert_eq!(phi_inverse(&g).unwrap(), f);
                assert_eq!(g.weighted_sum(), (f.weighted_sum() + 1) % n);
                assert!(is_valid(&g) && g.is_full_period());
            }
        }
    }
}

#[test]
fn odd_length_invalid_iff_constant() {
    for n in (1..=9).step_by(2) {
        for k in 0..=9 {
            for f in enumerate_codes(n, k, None, false) {
                assert_eq!(is_valid(&f), !f.is_constant(), "{f}");
            }
        }
    }
}

#[test]
fn migration_can_break_period_for_composite_n() {
    // 2,1,0,0,2,1,0,0 has period 4; migration keeps it, but weight 2 is not
    // invertible mod 8, so φ is undefined there
    let f: Code = "2,1,0,0,2,1,0,0".parse().unwrap();
    assert_eq!(f.period(), 4);
    assert!(phi(&f).is_err());
}

fn valid_code() -> impl Strategy<Value = Code> {
    prop::collection::vec(0u32..6, 2..16)
        .prop_map(|e| Code::new(e).unwrap())
        .prop_filter("valid codes only", is_valid)
}

proptest! {
    #[test]
    fn migration_invariants_beyond_the_envelope(f in valid_code(), s in 0i64..16) {
        let n = f.n();
        let d = decompose(&f);
        let w = d.weight.unwrap() as usize;
        let fwd = migrate_forward(&f).unwrap();
        let dg = decompose(&fwd);
        prop_assert_eq!(migrate_backward(&fwd).unwrap(), f.clone());
        prop_assert!(dg.valid);
        prop_assert_eq!(dg.weight, d.weight);
        prop_assert_eq!(dg.m, d.m);
        prop_assert_eq!(dg.slimes.len(), d.slimes.len());
        prop_assert_eq!(fwd.weighted_sum(), (f.weighted_sum() + w) % n);
        prop_assert_eq!(migrate_forward(&f.rotate(s)).unwrap(), fwd.rotate(s));
        prop_assert!(w >= 1 && w <= n / 2);
        prop_assert_eq!(weight(&f).unwrap() as usize, w);
    }

    #[test]
    fn slimes_alternate(f in valid_code()) {
        let d = decompose(&f);
        for s in &d.slimes {
            let (a, b) = (f.at(s.start), f.at(s.start + 1));
            prop_assert_eq!(u64::from(a) + u64::from(b), d.m);
            for o in 0..s.len {
                let expected = if o % 2 == 0 { a } else { b };
                prop_assert_eq!(f.at(s.start + o), expected);
            }
        }
    }
}
