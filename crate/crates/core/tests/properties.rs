//! Cross-module invariants on small random inputs.

use gapedit::brute::max_k_alignment_bruteforce;
use gapedit::decompose::decompose;
use gapedit::exact::{edit_distance_exact, optimal_edit_script};
use gapedit::greedy::{certify_small, small_budget, BruteForceAlign};
use gapedit::instance::gen_planted;
use gapedit::no_prep::NoPrepAlign;
use gapedit::one_sided::{OneSidedAlign, OneSidedIndex};
use gapedit::two_sided::{TwoSidedAlign, TwoSidedIndex};
use gapedit::wave::{greedy_wave, round_to_step};
use gapedit::wave_align::{ExactShiftAlign, WaveIndex};
use gapedit::{greedy_match, ByteString, GapVerdict, HashConfig, MaxAlign, SampleSet};
use proptest::prelude::*;

fn string(max: usize, sigma: u8) -> impl Strategy<Value = ByteString> {
    prop::collection::vec(0..sigma, 0..=max).prop_map(ByteString::new)
}

/// Equal-length pair: a uniform string and a planted copy.
fn pair(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (ByteString, ByteString)> {
    (n, 0usize..12, 2usize..5, any::<u64>()).prop_map(|(n, e, sigma, seed)| {
        let inst = gen_planted(n, e.min(n), sigma, seed).unwrap();
        (inst.a, inst.b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edit_distance_is_a_metric(a in string(20, 3), b in string(20, 3), c in string(20, 3)) {
        let ab = edit_distance_exact(&a, &b);
        prop_assert_eq!(ab, edit_distance_exact(&b, &a));
        prop_assert!(ab <= edit_distance_exact(&a, &c) + edit_distance_exact(&c, &b));
        prop_assert!(ab >= a.len().abs_diff(b.len()) && ab <= a.len().max(b.len()));
        prop_assert_eq!(ab == 0, a == b);
    }

    #[test]
    fn optimal_script_replays(a in string(30, 4), b in string(30, 4)) {
        let s = optimal_edit_script(&a, &b);
        prop_assert_eq!(s.len(), edit_distance_exact(&a, &b));
        prop_assert_eq!(s.apply(&a), b);
    }

    #[test]
    fn rounding_lands_on_nearest_multiple(x in -10_000i64..10_000, l in 1i64..50) {
        let r = round_to_step(x, l);
        prop_assert_eq!(r.rem_euclid(l), 0);
        prop_assert!(2 * (x - r).abs() <= l);
        if 2 * (x - r).abs() == l {
            prop_assert!(r < x);
        }
    }

    #[test]
    fn two_sided_oracle_is_exact((a, b) in pair(1..=48), k in 1usize..6, seed in any::<u64>()) {
        let idx = TwoSidedIndex::build(&a, k, &HashConfig::from_seed(seed, a.len())).unwrap();
        let mut o = TwoSidedAlign::new(&idx, &b).unwrap();
        for i_b in 1..=a.len() {
            prop_assert_eq!(o.max_align(i_b), max_k_alignment_bruteforce(&a, &b, i_b as i64, k as i64));
        }
    }

    #[test]
    fn sampled_oracles_respect_their_grades((a, b) in pair(1..=64), k in 1usize..10, seed in any::<u64>()) {
        let mut np = NoPrepAlign::new(&a, &b, k, seed).unwrap();
        let idx = OneSidedIndex::build(&a, k, seed).unwrap();
        let mut os = OneSidedAlign::new(&idx, &b).unwrap();
        for i_b in 1..=a.len() {
            let best = max_k_alignment_bruteforce(&a, &b, i_b as i64, k as i64);
            prop_assert!(np.max_align(i_b) >= best);
            let d = os.max_align(i_b);
            prop_assert!(best == 0 || 2 * d > best, "one-sided {} vs {}", d, best);
        }
    }

    #[test]
    fn greedy_match_separates_the_gap((a, b) in pair(1..=80), k in 1usize..6) {
        let ed = edit_distance_exact(&a, &b);
        let out = greedy_match(&a, &b, k, &mut BruteForceAlign::new(&a, &b, k), true).unwrap();
        if ed <= k {
            prop_assert_eq!(out.verdict, GapVerdict::Small);
        }
        if out.verdict == GapVerdict::Small {
            let cert = certify_small(&a, &b, k, out.trace.as_deref().unwrap()).unwrap();
            prop_assert!(ed <= cert.constructive && cert.constructive <= small_budget(k));
        }
    }

    #[test]
    fn wave_verdicts_are_backed_by_edit_bounds((a, b) in pair(4..=80), k in 1usize..10, l in 1usize..4) {
        let k = k.min(a.len());
        let l = l.min(k);
        let out = greedy_wave(&a, &b, k, l, &mut ExactShiftAlign::new(&a, &b, l)).unwrap();
        prop_assert!(out.table.jump_violations().is_empty());
        let bounds = out.table.replay_bounds(&a, &b).unwrap();
        let ed = edit_distance_exact(&a, &b);
        if ed == 0 {
            prop_assert_eq!(out.verdict, GapVerdict::Small);
        }
        if out.verdict == GapVerdict::Small {
            let at = out.table.bound_at(&bounds, k, 0).unwrap();
            prop_assert!(ed <= at && at <= 10 * k * l);
        }
        prop_assert!(out.oracle_calls <= (k + 1) * (2 * k / l + 1));
    }

    #[test]
    fn decomposition_holds_whenever_distance_fits((a, b) in pair(1..=80), k in 0usize..14) {
        match decompose(&a, &b, k) {
            Ok(d) => prop_assert!(d.check(&a, &b, k).is_ok()),
            Err(_) => prop_assert!(edit_distance_exact(&a, &b) > k),
        }
    }

    #[test]
    fn indices_round_trip((a, _b) in pair(1..=40), k in 1usize..5, seed in any::<u64>()) {
        let two = TwoSidedIndex::build(&a, k, &HashConfig::from_seed(seed, a.len())).unwrap();
        prop_assert_eq!(TwoSidedIndex::from_bytes(&two.to_bytes()).unwrap().to_bytes(), two.to_bytes());
        let one = OneSidedIndex::build(&a, k, seed).unwrap();
        prop_assert_eq!(OneSidedIndex::from_bytes(&one.to_bytes()).unwrap().to_bytes(), one.to_bytes());
        let wave = WaveIndex::build(&a, k.min(a.len()), 1, seed).unwrap();
        prop_assert_eq!(WaveIndex::from_bytes(&wave.to_bytes()).unwrap().to_bytes(), wave.to_bytes());
    }

    #[test]
    fn anchored_samples_replay(n in 1usize..400, g in 1usize..40, seed in any::<u64>()) {
        let cfg = HashConfig::from_seed(seed, n);
        let s = SampleSet::draw(n, g, true, &cfg).unwrap();
        prop_assert_eq!(&s, &SampleSet::draw(n, g, true, &cfg).unwrap());
        let has = |p: u32| s.indices().binary_search(&p).is_ok();
        prop_assert!(n < 2 || has((n - 1) as u32));
        prop_assert!((1..=n / g).all(|m| has((m * g) as u32)));
    }

    #[test]
    fn planted_instances_stay_within_budget(n in 1usize..200, e in 0usize..20, sigma in 2usize..30, seed in any::<u64>()) {
        let inst = gen_planted(n, e.min(n), sigma, seed).unwrap();
        prop_assert_eq!(inst.a.len(), n);
        prop_assert_eq!(inst.b.len(), n);
        prop_assert!(edit_distance_exact(&inst.a, &inst.b) <= inst.planted_edits);
        prop_assert_eq!(inst.exact_ed, Some(edit_distance_exact(&inst.a, &inst.b)));
    }
}
