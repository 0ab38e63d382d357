mod common;

use common::*;
use itertools::Itertools;
use lrc_core::bounds::{cor5_bound, eq2_bound, improved_bound, phi};
use lrc_core::locality::{
    condition_c1, condition_c2, condition_c3, extract_ecf, find_overlap_subset, overlap, LrcParams,
    RepairFamily,
};
use lrc_core::DistanceMethod;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = LrcParams> {
    (1usize..8, 2usize..5, 0usize..120, 0usize..120).prop_filter_map(
        "infeasible",
        |(r, d, a, b)| {
            let n = r + d - 1 + a;
            let k = r + 1 + b % n;
            LrcParams::decompose(n, k, r, d)
                .ok()
                .filter(LrcParams::feasible)
        },
    )
}

proptest! {
    #[test]
    fn phi_matches_definition(r in 1usize..8, d in 2usize..6, extra in 0usize..80, b in 0usize..30) {
        let a = r + d - 1 + extra;
        prop_assert_eq!(phi(r, d, a, b).unwrap(), phi_oracle(r, d, a, b));
    }

    #[test]
    fn eq2_and_cor5_match_formulas(p in params()) {
        let (n, k, r, d) = (p.n as i64, p.k as i64, p.r as i64, p.delta as i64);
        prop_assert_eq!(eq2_bound(&p).unwrap(), eq2_oracle(n, k, r, d));
        let ph = phi_oracle(p.r, p.delta, p.n, p.u) as i64;
        prop_assert_eq!(cor5_bound(&p).unwrap(), n - k + 1 - (ceil_div(k + ph, r) - 1) * (d - 1));
    }

    #[test]
    fn improved_bound_matches_formula(p in params(), big_m in 0usize..10) {
        prop_assume!(p.n >= big_m + p.s());
        let (n, k, r, d, u) = (p.n as i64, p.k as i64, p.r as i64, p.delta as i64, p.u as i64);
        let mm = big_m as i64;
        let expected = if u > mm {
            let ph = phi_oracle(p.r, p.delta, p.n - big_m, p.u - big_m) as i64;
            let a = (ceil_div(k + ceil_div(r, 2), r) - 1) * (d - 1);
            let b = mm + (ceil_div(k + ph, r) - 1) * (d - 1);
            n - k + 1 - a.min(b)
        } else {
            n - k + 1 - (u + (ceil_div(k, r) - 1) * (d - 1))
        };
        prop_assert_eq!(improved_bound(&p, big_m).unwrap(), expected);
    }

    #[test]
    fn distance_methods_agree_with_enumeration(seed in any::<u64>(), n in 2usize..9, qi in 0usize..3) {
        let q = [2u64, 3, 5][qi];
        let mut rng = rng(seed);
        let checks = 1 + seed as usize % (n - 1);
        let (code, h) = random_code(&mut rng, n, checks, q);
        prop_assume!(code.k() > 0 && code.k() <= 6);
        let oracle = brute_distance_mod_p(&h, n, q);
        for method in [DistanceMethod::Codewords, DistanceMethod::Columns, DistanceMethod::Lemma1] {
            prop_assert_eq!(code.min_distance(method, None).unwrap().exact(), oracle);
        }
    }

    #[test]
    fn conditions_and_overlap(seed in any::<u64>(), n in 3usize..14, delta in 2usize..4, extra in 0usize..4) {
        let mut rng = rng(seed);
        let blocks = random_cover(&mut rng, n, delta.min(n), (delta + 2).min(n), extra);
        prop_assert!(condition_c2(&blocks, delta) != condition_c3(&blocks, delta));
        if condition_c1(&blocks, delta) {
            prop_assert!(condition_c2(&blocks, delta));
        }
        let total: usize = blocks.iter().map(Vec::len).sum();
        let union = blocks.iter().flatten().unique().count();
        prop_assert_eq!(overlap(&blocks), total - union);
    }

    #[test]
    fn extracted_ecf_is_essential(seed in any::<u64>(), n in 4usize..16, r in 1usize..4, extra in 0usize..5) {
        let delta = 2;
        let s = r + delta - 1;
        let mut rng = rng(seed);
        let blocks = random_cover(&mut rng, n, delta, s, extra);
        let family = RepairFamily::new(n, blocks).unwrap();
        let ecf = extract_ecf(&family, r, delta, None).unwrap();
        prop_assert!(ecf.first_uncovered().is_none());
        prop_assert!(ecf.is_ecf(s));
        prop_assert!(ecf.len() >= n.div_ceil(s));
        for b in ecf.blocks() {
            prop_assert!(family.blocks().contains(b));
        }
        for i in 0..ecf.len() {
            let rest: Vec<usize> = (0..ecf.len()).filter(|&j| j != i).collect();
            let reduced = RepairFamily::new(n, ecf.select(&rest)).unwrap();
            prop_assert!(reduced.first_uncovered().is_some());
        }
    }

    #[test]
    fn overlap_subset_meets_guarantee(seed in any::<u64>(), r in 1usize..4, delta in 2usize..4, extra_n in 0usize..10, extra in 0usize..4) {
        let s = r + delta - 1;
        let n = s + extra_n;
        let mut rng = rng(seed);
        let blocks = random_cover(&mut rng, n, s, s, extra);
        for t in 0..=blocks.len() {
            let found = find_overlap_subset(&blocks, t, r, delta, n).unwrap();
            prop_assert!(found.slack >= phi_oracle(r, delta, n, t) as i64);
            prop_assert_eq!(found.slack, best_slack(&blocks, t, s));
        }
    }
}

#[test]
fn ecf_prefers_dropping_late_blocks() {
    let family = RepairFamily::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    let ecf = extract_ecf(&family, 1, 2, None).unwrap();
    assert_eq!(ecf.blocks(), &[vec![0, 1], vec![1, 2]]);
}

#[test]
fn overlap_subset_spec_instance() {
    let blocks = vec![vec![0, 1, 2], vec![3, 4, 5], vec![5, 6]];
    let found = find_overlap_subset(&blocks, 2, 2, 2, 7).unwrap();
    assert_eq!(found.indices, vec![1, 2]);
    assert_eq!(found.slack, 2);
    assert_eq!(best_slack(&blocks, 2, 3), 2);
    assert_eq!(found.guarantee, phi_oracle(2, 2, 7, 2));
    assert!(blocks
        .iter()
        .combinations(2)
        .all(|c| slack_oracle(&c, 3) <= 2));
}
