use peakpack::aeptas::classify;
use peakpack::bounds::lower_bound;
use peakpack::exact::{exact_opt, greedy, Limits};
use peakpack::packing::{steinberg_condition, steinberg_pack, verify_packing, Bin, Rect};
use peakpack::ratio::{self, Q};
use peakpack::repack::{adjust_borders, grid_segments, uncovered};
use peakpack::{mirror, peak, validate, Instance, Job, Plan};
use proptest::prelude::*;

fn instance(max_n: usize, max_d: u64, max_e: u64) -> impl Strategy<Value = Instance> {
    (1..=max_d).prop_flat_map(move |d| {
        prop::collection::vec((1..=d, 1..=max_e), 1..=max_n).prop_map(move |v| {
            let jobs = v
                .into_iter()
                .enumerate()
                .map(|(k, (p, e))| Job::new(format!("j{k}"), p, e))
                .collect();
            Instance::new(d, jobs).unwrap()
        })
    })
}

/// Instance together with a complete plan, start times drawn uniformly.
fn scheduled(max_n: usize, max_d: u64, max_e: u64) -> impl Strategy<Value = (Instance, Plan)> {
    instance(max_n, max_d, max_e).prop_flat_map(|inst| {
        let ranges: Vec<_> = inst.jobs().iter().map(|j| 0..=inst.deadline() - j.p).collect();
        (Just(inst), ranges).prop_map(|(inst, starts)| (inst, Plan::from_starts(starts)))
    })
}

fn brute_force_opt(inst: &Instance) -> u64 {
    fn go(inst: &Instance, k: usize, starts: &mut Vec<u64>, best: &mut u64) {
        if k == inst.len() {
            *best = (*best).min(Plan::from_starts(starts.clone()).peak(inst));
            return;
        }
        for s in 0..=inst.deadline() - inst.job(k).p {
            starts.push(s);
            go(inst, k + 1, starts, best);
            starts.pop();
        }
    }
    let mut best = u64::MAX;
    go(inst, 0, &mut Vec::new(), &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn mirror_keeps_peak_and_is_an_involution((inst, plan) in scheduled(7, 14, 9)) {
        let s = plan.to_schedule(&inst);
        let m = mirror(&inst, &s);
        prop_assert!(validate(&inst, &m).is_empty());
        prop_assert_eq!(peak(&inst, &m).unwrap(), peak(&inst, &s).unwrap());
        prop_assert_eq!(mirror(&inst, &m), s);
    }

    #[test]
    fn profile_area_matches_job_area((inst, plan) in scheduled(7, 14, 9)) {
        let units = plan.profile(&inst).units();
        prop_assert_eq!(units.len() as u64, inst.deadline());
        prop_assert_eq!(units.iter().map(|&u| u as u128).sum::<u128>(), inst.area());
    }

    #[test]
    fn exact_agrees_with_brute_force(inst in instance(4, 6, 6)) {
        let sol = exact_opt(&inst, Limits::unlimited()).unwrap();
        prop_assert_eq!(sol.opt, brute_force_opt(&inst));
        prop_assert_eq!(sol.plan.peak(&inst), sol.opt);
    }

    #[test]
    fn exact_between_bound_and_heuristics(inst in instance(7, 10, 8)) {
        let sol = exact_opt(&inst, Limits::unlimited()).unwrap();
        prop_assert!(ratio::int(sol.opt) >= lower_bound(&inst).t);
        prop_assert!(sol.opt <= greedy(&inst).peak(&inst));
        prop_assert!(sol.opt <= peakpack::aeptas::ffdh_reference(&inst).unwrap().peak(&inst));
    }

    #[test]
    fn classification_is_a_partition(
        inst in instance(12, 40, 30),
        dn in 1u64..40,
        split in 1u64..10,
    ) {
        let t = lower_bound(&inst).t;
        let delta = Q::new(dn.into(), 40.into());
        let mu = &delta * Q::new(1.into(), (split + 1).into());
        let c = classify(&inst, &t, &delta, &mu);
        let mut seen = vec![0; inst.len()];
        for set in [&c.large, &c.horizontal, &c.vertical, &c.small, &c.medium] {
            for &i in set {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
        prop_assert_eq!(c.counts().iter().sum::<usize>(), inst.len());
    }

    #[test]
    fn steinberg_packs_whenever_condition_holds(
        (bw, bh, rects) in (8i64..=24, 8i64..=24).prop_flat_map(|(bw, bh)| {
            (Just(bw), Just(bh), prop::collection::vec((1..=bw, 1..=bh), 1..8))
        }),
    ) {
        let rects: Vec<Rect> = rects
            .into_iter()
            .enumerate()
            .map(|(k, (w, h))| Rect::new(format!("r{k}"), ratio::frac(w, 4), ratio::frac(h, 4)))
            .collect();
        let bin = Bin::new(ratio::frac(bw, 4), ratio::frac(bh, 4));
        prop_assume!(steinberg_condition(&rects, &bin));
        let placements = steinberg_pack(&rects, &bin).unwrap();
        prop_assert!(verify_packing(&placements, &rects, &bin).is_empty());
    }

    #[test]
    fn border_adjustment_never_loses_free_time(
        (inst, plan) in scheduled(8, 64, 12),
        t in 6u64..16,
    ) {
        let gamma = ratio::frac(1, 60);
        for seg in grid_segments(inst.deadline(), &gamma) {
            let adj = adjust_borders(&inst, &plan, &seg, t);
            let (s, e) = (ratio::floor_u64(&seg.start), ratio::floor_u64(&seg.end));
            let (s2, e2) = (ratio::floor_u64(&adj.start), ratio::floor_u64(&adj.end));
            prop_assert!(adj.width() <= seg.width());
            prop_assert!(s2 <= e2 && e2 <= inst.deadline());
            prop_assert!(
                uncovered(&inst, &plan, t, s2, e2) >= uncovered(&inst, &plan, t, s, e),
                "segment {:?} became {:?}", seg, adj
            );
        }
    }
}
