//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.

use std::time::Instant;

use peakpack::aeptas::{
    classify, place_configurations, profile_segments, round_vertical, rounding_class_bound, schedule_lite, select_gap,
    medium_area, vertical_config_lp, Class, LiteConfig, Reference,
};
use peakpack::approx::{solve, Branch, EpsilonParams};
use peakpack::bounds::lower_bound;
use peakpack::exact::{exact_opt, Limits};
use peakpack::lshape::lshape_bound_check;
use peakpack::packing::{ffdh, steinberg_condition, steinberg_pack, verify_packing, Bin, Rect};
use peakpack::ratio::{self, Q};
use peakpack::repack::{repack, shift_right_set, split_segments, taus, Container, RepackPath};
use peakpack::{validate, Error, Instance, Job, Plan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    inst: Instance,
    opt: u64,
}

fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_d: u64, max_e: u64) -> Instance {
    let d = rng.gen_range(2..=max_d);
    let n = rng.gen_range(1..=max_n);
    let jobs = (0..n)
        .map(|k| Job::new(format!("j{k}"), rng.gen_range(1..=d), rng.gen_range(1..=max_e)))
        .collect();
    Instance::new(d, jobs).unwrap()
}

fn corpus() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    (0..520)
        .map(|_| {
            let inst = random_instance(&mut rng, 8, 12, 8);
            let opt = exact_opt(&inst, Limits::unlimited()).unwrap().opt;
            Case { inst, opt }
        })
        .collect()
}

/// Instances biased toward many tall or many wide jobs.
fn biased(rng: &mut ChaCha8Rng, tall: bool) -> Instance {
    let d: u64 = rng.gen_range(4..=24);
    let n = rng.gen_range(2..=10);
    let jobs = (0..n)
        .map(|k| {
            let (p, e) = if tall {
                if rng.gen_bool(0.7) {
                    (rng.gen_range(1..=(d / 3).max(1)), rng.gen_range(12..=16))
                } else {
                    (rng.gen_range(1..=d), rng.gen_range(1..=8))
                }
            } else if rng.gen_bool(0.6) {
                (rng.gen_range((3 * d).div_ceil(4)..=d), rng.gen_range(2..=8))
            } else {
                (rng.gen_range(1..=d), rng.gen_range(1..=8))
            };
            Job::new(format!("j{k}"), p, e)
        })
        .collect();
    Instance::new(d, jobs).unwrap()
}

fn brief(x: &Instance) -> String {
    let jobs: Vec<String> = x.jobs().iter().map(|j| format!("({},{})", j.p, j.e)).collect();
    format!("D={} [{}]", x.deadline(), jobs.join(" "))
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: u32, name: &str, ok: bool, detail: String) {
        println!("criterion {n:>2} {:<4} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

fn c1_bounds(r: &mut Report, cases: &[Case]) {
    let bad = cases
        .iter()
        .filter(|c| lower_bound(&c.inst).t > ratio::int(c.opt))
        .count();
    r.line(1, "lower bounds never exceed OPT", bad == 0, format!("{} instances, {bad} violations", cases.len()));
}

fn inst(d: u64, jobs: &[(u64, u64)]) -> Instance {
    Instance::new(
        d,
        jobs.iter()
            .enumerate()
            .map(|(k, &(p, e))| Job::new(format!("j{}", k + 1), p, e))
            .collect(),
    )
    .unwrap()
}

fn c2_fixtures(r: &mut Report) {
    let opt = |x: &Instance| exact_opt(x, Limits::unlimited()).unwrap().opt;
    let b = inst(10, &[(6, 3), (6, 4)]);
    let c = inst(10, &[(4, 9), (4, 9), (4, 9)]);
    let d = inst(10, &[(2, 10), (10, 4)]);
    let e = inst(10, &[(2, 10), (9, 4), (9, 4)]);
    let checks = [
        ("B t2=6", lower_bound(&b).t2 == ratio::int(6)),
        ("B opt=7", opt(&b) == 7),
        ("C T'=18", lower_bound(&c).t == ratio::int(18)),
        ("C opt=18", opt(&c) == 18),
        ("D t3=14", lower_bound(&d).t3 == ratio::int(14)),
        ("D opt=14", opt(&d) == 14),
        ("E t4=14", lower_bound(&e).t4 == ratio::int(14)),
        ("E opt=18", opt(&e) == 18),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    r.line(2, "bound fixtures", failed.is_empty(), format!("{} checks, failed {failed:?}", checks.len()));
}

struct DispatchStats {
    case1: usize,
    case2: usize,
    general: usize,
    bad: Vec<String>,
}

fn check_dispatch(inst: &Instance, eps: &Q, stats: &mut DispatchStats) -> Option<u64> {
    match solve(inst, eps) {
        Ok(s) => {
            match s.certificate.branch {
                Branch::Case1A | Branch::Case1B => {
                    stats.case1 += 1;
                    let c = s.certificate.case.as_ref().unwrap();
                    let g = (ratio::frac(5, 3) + eps) * &c.t;
                    if !(c.chain_holds && c.condition_holds && ratio::int(s.peak) <= g) {
                        stats.bad.push(format!("case 1 on {}", brief(inst)));
                    }
                }
                Branch::Case2 => {
                    stats.case2 += 1;
                    let c = s.certificate.case.as_ref().unwrap();
                    let g = ratio::frac(5, 3) * &c.t;
                    if !(c.chain_holds && c.condition_holds && ratio::int(s.peak) <= g) {
                        stats.bad.push(format!("case 2 on {}", brief(inst)));
                    }
                }
                Branch::General => stats.general += 1,
            }
            if !validate(inst, &s.schedule).is_empty() {
                stats.bad.push(format!("invalid schedule on {}", brief(inst)));
            }
            Some(s.peak)
        }
        Err(e) => {
            stats.bad.push(format!("{e} on {}", brief(inst)));
            None
        }
    }
}

fn c3_c4_ratio(r: &mut Report, cases: &[Case]) {
    let mut stats = DispatchStats {
        case1: 0,
        case2: 0,
        general: 0,
        bad: vec![],
    };
    let mut worst = vec![];
    let mut all_ok = true;
    for eps in [ratio::frac(1, 3), ratio::frac(1, 10)] {
        let bound = ratio::frac(5, 3) + &eps;
        let mut max_ratio = ratio::zero();
        let mut viol = 0;
        for c in cases {
            match check_dispatch(&c.inst, &eps, &mut stats) {
                Some(peak) => {
                    let q = ratio::int(peak) / ratio::int(c.opt);
                    if q > bound {
                        viol += 1;
                    }
                    max_ratio = ratio::max(&max_ratio, &q);
                }
                None => viol += 1,
            }
        }
        all_ok &= viol == 0;
        worst.push(format!(
            "eps={} max ratio {} ({:.4}), {viol} violations",
            ratio::format(&eps),
            ratio::format(&max_ratio),
            ratio::to_f64(&max_ratio)
        ));
    }
    r.line(3, "solve within 5/3 + eps of OPT", all_ok, worst.join("; "));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..400 {
        let x = biased(&mut rng, k % 2 == 0);
        for eps in [ratio::frac(1, 3), ratio::frac(1, 10)] {
            check_dispatch(&x, &eps, &mut stats);
        }
    }
    let ok = stats.bad.is_empty() && stats.case1 > 0 && stats.case2 > 0;
    r.line(
        4,
        "branch guarantees and inequality chains",
        ok,
        format!(
            "case1 {} case2 {} general {}; {} problems{}",
            stats.case1,
            stats.case2,
            stats.general,
            stats.bad.len(),
            stats.bad.first().map(|s| format!(", first: {s}")).unwrap_or_default()
        ),
    );
}

fn c5_lshape(r: &mut Report, cases: &[Case]) {
    let bad = cases
        .iter()
        .filter(|c| match lshape_bound_check(&c.inst) {
            Ok(chk) => ratio::int(chk.peak) > chk.bound,
            Err(_) => true,
        })
        .count();
    r.line(5, "L-shape peak within T + h(wide)/2", bad == 0, format!("{} instances, {bad} violations", cases.len()));
}

fn c6_steinberg(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut packed = 0;
    let mut failures = 0;
    let mut sets = 0;
    while sets < 1000 {
        let w: u64 = rng.gen_range(4..40);
        let h: u64 = rng.gen_range(4..40);
        let bin = Bin::new(ratio::int(w), ratio::int(h));
        let mut rects = Vec::new();
        for k in 0..rng.gen_range(1..40) {
            let (rw, rh) = match rng.gen_range(0..4) {
                0 => (rng.gen_range(1..=w), rng.gen_range(1..=h)),
                1 => (rng.gen_range(w / 2..=w).max(1), rng.gen_range(1..=h / 3 + 1)),
                2 => (rng.gen_range(1..=w / 3 + 1), rng.gen_range(h / 2..=h).max(1)),
                _ => (rng.gen_range(1..=w / 2 + 1), rng.gen_range(1..=h / 2 + 1)),
            };
            rects.push(Rect::ints(format!("r{k}"), rw.min(w), rh.min(h)));
            if !steinberg_condition(&rects, &bin) {
                rects.pop();
            }
        }
        if rects.is_empty() {
            continue;
        }
        sets += 1;
        match steinberg_pack(&rects, &bin) {
            Ok(pl) if verify_packing(&pl, &rects, &bin).is_empty() => packed += 1,
            _ => failures += 1,
        }
    }
    // oversized rectangles
    let mut rejected = 0;
    let trials = 200;
    for k in 0..trials {
        let w: u64 = rng.gen_range(2..30);
        let h: u64 = rng.gen_range(2..30);
        let bin = Bin::new(ratio::int(w), ratio::int(h));
        let big = if k % 2 == 0 {
            Rect::ints("big", w + rng.gen_range(1..5), 1)
        } else {
            Rect::ints("big", 1, h + rng.gen_range(1..5))
        };
        let rects = vec![Rect::ints("a", 1, 1), big];
        if matches!(steinberg_pack(&rects, &bin), Err(Error::ConditionViolated(_))) {
            rejected += 1;
        }
    }
    r.line(
        6,
        "Steinberg packing",
        failures == 0 && rejected == trials,
        format!("{packed}/{sets} sets packed and verified, {rejected}/{trials} oversized sets rejected"),
    );
}

/// Optimal base for a small instance, scaled in time, plus a random
/// overflow container of width at most `gamma D`.
fn repack_pair(rng: &mut ChaCha8Rng, params: &EpsilonParams) -> (Instance, Plan, u64, Container) {
    let scale = if rng.gen_bool(0.5) { 8 } else { 16 };
    let d0 = 8;
    let n0 = rng.gen_range(2..=7);
    let small: Vec<(u64, u64)> = (0..n0).map(|_| (rng.gen_range(1..=d0), rng.gen_range(1..=8))).collect();
    let si = inst(d0, &small);
    let sol = exact_opt(&si, Limits::unlimited()).unwrap();
    let d = d0 * scale;
    let t = sol.opt;
    let wmax = ratio::floor_u64(&(&params.gamma * ratio::int(d))).max(1);
    let m = rng.gen_range(1..=3);
    let mut jobs: Vec<Job> = small
        .iter()
        .enumerate()
        .map(|(k, &(p, e))| Job::new(format!("b{k}"), p * scale, e))
        .collect();
    let mut loads = vec![0u64; wmax as usize];
    let mut contents = Vec::new();
    for k in 0..m {
        let p = rng.gen_range(1..=wmax);
        let e = rng.gen_range(1..=t);
        let s = rng.gen_range(0..=wmax - p);
        if loads[s as usize..(s + p) as usize].iter().any(|&l| l + e > t) {
            continue;
        }
        for l in &mut loads[s as usize..(s + p) as usize] {
            *l += e;
        }
        contents.push((n0 + contents.len(), s));
        jobs.push(Job::new(format!("c{k}"), p, e));
    }
    let x = Instance::new(d, jobs).unwrap();
    let mut base = Plan::empty(x.len());
    for i in 0..n0 {
        base.set(i, sol.plan.start(i) * scale);
    }
    let c = Container {
        width_budget: &params.gamma * ratio::int(d),
        height_budget: ratio::int(t),
        contents,
    };
    (x, base, t, c)
}

fn c7_repack(r: &mut Report) {
    let params = EpsilonParams::new(ratio::frac(1, 3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let (mut ran, mut bad) = (0, Vec::new());
    let (mut medium, mut segment, mut low) = (0, 0, 0);
    let mut tries = 0;
    while ran < 240 && tries < 20_000 {
        tries += 1;
        let (x, base, t, c) = repack_pair(&mut rng, &params);
        if c.is_empty() {
            continue;
        }
        match repack(&x, &base, t, &c, &params) {
            Err(Error::PreconditionFailed(_)) => continue,
            Err(e) => {
                ran += 1;
                bad.push(format!("{e} on {}", brief(&x)));
            }
            Ok(out) => {
                ran += 1;
                let s = out.plan.to_schedule(&x);
                if !validate(&x, &s).is_empty() || 3 * out.peak > 5 * t {
                    bad.push(format!("peak {} for T {t} on {}", out.peak, brief(&x)));
                }
                match out.path {
                    RepackPath::MediumJob { .. } => medium += 1,
                    RepackPath::Segment { low: l, .. } => {
                        segment += 1;
                        low += l as usize;
                    }
                    RepackPath::Trivial => {}
                }
            }
        }
    }
    let t64 = taus(64, &ratio::zero());
    let t640 = taus(640, &ratio::frac(1, 40));
    let want: Vec<Q> = [0, 8, 15, 18, 24, 32].iter().map(|&v| ratio::int(v)).collect();
    let taus_ok = t64.to_vec() == want
        && t640[2] == ratio::int(144)
        && (1..=4).all(|k| {
            let d = 64 * k;
            let segs = split_segments(d, &ratio::frac(1, 40));
            let tt = taus(d, &ratio::frac(1, 40));
            (0..5).all(|i| segs[i].start == tt[i] && segs[i].end == tt[i + 1])
        });
    r.line(
        7,
        "repack keeps the peak within 5T/3",
        ran >= 200 && bad.is_empty() && taus_ok,
        format!(
            "{ran} pairs (medium-job {medium}, segment {segment} of which {low} already low), {} failures{}; tau fixtures {}",
            bad.len(),
            bad.first().map(|s| format!(", first: {s}")).unwrap_or_default(),
            if taus_ok { "match" } else { "mismatch" }
        ),
    );
}

fn c8_shift(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let (mut runs, mut bad) = (0, 0);
    while runs < 600 {
        let x = random_instance(&mut rng, 8, 16, 8);
        let d = x.deadline();
        let starts: Vec<u64> = x.jobs().iter().map(|j| rng.gen_range(0..=d - j.p)).collect();
        let plan = Plan::from_starts(starts);
        let t = plan.peak(&x);
        let probe = rng.gen_range(0..d);
        let over: Vec<usize> = (0..x.len())
            .filter(|&i| plan.start(i) <= probe && probe < plan.end(&x, i))
            .collect();
        let moves: Vec<usize> = over.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        if moves.is_empty() {
            continue;
        }
        let h: u64 = moves.iter().map(|&i| x.job(i).e).sum();
        if h > t {
            continue;
        }
        runs += 1;
        let tau = moves.iter().map(|&i| plan.start(i)).min().unwrap();
        let after = shift_right_set(&x, &plan, &moves).profile(&x).units();
        for (u, &l) in after.iter().enumerate() {
            let before_mark = 2 * (u as u64 + 1) <= d + tau;
            if (before_mark && l > t) || l > t + h {
                bad += 1;
                break;
            }
        }
    }
    r.line(8, "right shift", bad == 0, format!("{runs} move sets, {bad} violations"));
}

fn c9_aeptas(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut problems = Vec::new();
    let mut k_values = Vec::new();
    let mut lp_checked = 0;
    let (delta, mu) = (ratio::frac(1, 10), ratio::frac(1, 100));
    for run in 0..60 {
        let d = 1000;
        let n = rng.gen_range(5..=30);
        let jobs: Vec<Job> = (0..n)
            .map(|k| {
                let (p, e) = match rng.gen_range(0..5) {
                    0 => (rng.gen_range(101..=600), rng.gen_range(60..=300)),
                    1 => (rng.gen_range(101..=900), rng.gen_range(1..=5)),
                    2 => (rng.gen_range(1..=9), rng.gen_range(60..=300)),
                    3 => (rng.gen_range(1..=9), rng.gen_range(1..=5)),
                    _ => (rng.gen_range(10..=100), rng.gen_range(6..=59)),
                };
                Job::new(format!("j{k}"), p, e)
            })
            .collect();
        let x = Instance::new(d, jobs).unwrap();
        let eps = if run % 2 == 0 { ratio::frac(1, 3) } else { ratio::frac(1, 5) };
        let t = ratio::ceil_u64(&lower_bound(&x).t).max(1);
        let tq = ratio::int(t);
        let cls = classify(&x, &tq, &delta, &mu);
        let mut all: Vec<usize> = [&cls.large, &cls.horizontal, &cls.vertical, &cls.small, &cls.medium]
            .iter()
            .flat_map(|v| v.iter().copied())
            .collect();
        all.sort_unstable();
        if all != (0..x.len()).collect::<Vec<_>>() {
            problems.push(format!("classification not a partition (run {run})"));
        }
        for i in 0..x.len() {
            let j = x.job(i);
            let (p, e) = (ratio::int(j.p), ratio::int(j.e));
            let dq = x.d();
            let expect = if e >= &delta * &tq && p > &delta * &dq {
                Class::Large
            } else if e < &mu * &tq && p > &delta * &dq {
                Class::Horizontal
            } else if e >= &delta * &tq && p < &mu * &dq {
                Class::Vertical
            } else if e < &mu * &tq && p < &mu * &dq {
                Class::Small
            } else {
                Class::Medium
            };
            if cls.class_of(i) != Some(expect) {
                problems.push(format!("job {i} misclassified (run {run})"));
            }
        }
        let rounded = round_vertical(&cls, &x, &eps, &delta, &tq);
        for (&i, v) in &rounded {
            let e = ratio::int(x.job(i).e);
            if *v < e || *v > (ratio::one() + &eps) * &e {
                problems.push(format!("rounding out of range for job {i} (run {run})"));
            }
        }
        let distinct: std::collections::BTreeSet<&Q> = rounded.values().collect();
        if distinct.len() as u64 > rounding_class_bound(&eps, &delta) {
            problems.push(format!("too many rounded heights (run {run})"));
        }
        let gap = select_gap(&x, &eps, &tq).unwrap();
        let bar = &eps * &eps / ratio::int(4) * x.d() * &tq;
        if ratio::int(medium_area(&x, &tq, &gap.delta, &gap.mu)) > bar || gap.mu > eps.pow(5) * &gap.delta {
            problems.push(format!("gap bound violated (run {run})"));
        }
        // configuration LP on the profile of a reference schedule
        let reference = peakpack::aeptas::ffdh_reference(&x).unwrap();
        let tt = ratio::int(reference.peak(&x));
        let members: Vec<usize> = cls.large.iter().chain(&cls.horizontal).copied().collect();
        let segs = profile_segments(&x, &reference, &members, &ratio::frac(1, 10), &eps, &tt, None);
        let rounded_t = round_vertical(&cls, &x, &eps, &delta, &tt);
        match vertical_config_lp(&x, &rounded_t, &cls.vertical, &segs.segments) {
            Ok(sol) => {
                lp_checked += 1;
                if !sol.lp.satisfied_by(&sol.x) {
                    problems.push(format!("config LP solution violates constraints (run {run})"));
                }
                let pc = place_configurations(&x, &sol, &rounded_t, &cls.vertical, &segs.segments);
                if pc.placed.len() + pc.fractional.len() != cls.vertical.len() {
                    problems.push(format!("vertical jobs lost (run {run})"));
                }
            }
            Err(Error::LpInfeasible) => {}
            Err(e) => problems.push(format!("config LP error {e} (run {run})")),
        }
        let mut cfg = LiteConfig::new(eps.clone());
        cfg.reference = Reference::Ffdh;
        cfg.gap = Some((delta.clone(), mu.clone()));
        match schedule_lite(&x, &cfg) {
            Ok(out) => {
                let mut seen = vec![0; x.len()];
                for i in out.base.placed_indices().into_iter().chain(out.overflow.jobs()) {
                    seen[i] += 1;
                }
                if seen.iter().any(|&c| c != 1) || !out.overflow.fits(&x) || !out.base.fits(&x) {
                    problems.push(format!("lite output does not cover jobs exactly once (run {run})"));
                }
                k_values.push(ratio::to_f64(&out.slack_k));
            }
            Err(e) => problems.push(format!("lite failed: {e} (run {run})")),
        }
    }
    let kmax = k_values.iter().cloned().fold(f64::MIN, f64::max);
    let kmean = k_values.iter().sum::<f64>() / k_values.len().max(1) as f64;
    r.line(
        9,
        "AEPTAS components",
        problems.is_empty(),
        format!(
            "60 instances, {lp_checked} config LPs checked, slack K max {kmax:.3} mean {kmean:.3}, {} problems{}",
            problems.len(),
            problems.first().map(|s| format!(", first: {s}")).unwrap_or_default()
        ),
    );
}

fn c10_ffdh(r: &mut Report, cases: &[Case]) {
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for c in cases {
        let rects: Vec<Rect> = c
            .inst
            .jobs()
            .iter()
            .enumerate()
            .map(|(i, j)| Rect::ints(i.to_string(), j.p, j.e))
            .collect();
        let pack = ffdh(&rects, &c.inst.d()).unwrap();
        let mut plan = Plan::empty(c.inst.len());
        for p in &pack.placements {
            plan.set(p.id.parse().unwrap(), ratio::floor_u64(&p.x));
        }
        let peak = plan.peak(&c.inst);
        let emax = c.inst.e_max();
        if peak > 3 * c.opt + emax {
            bad += 1;
        }
        worst = worst.max(peak.saturating_sub(emax) as f64 / c.opt as f64);
    }
    r.line(
        10,
        "FFDH within 3 OPT + e_max",
        bad == 0,
        format!("{} instances, max (peak - e_max)/OPT = {worst:.3} (reference figure 2.7), {bad} violations", cases.len()),
    );
}

fn main() {
    let clock = Instant::now();
    let mut r = Report { failures: 0 };
    let cases = corpus();
    println!("corpus: {} oracle-solved instances in {:.1?}", cases.len(), clock.elapsed());
    c1_bounds(&mut r, &cases);
    c2_fixtures(&mut r);
    c3_c4_ratio(&mut r, &cases);
    c5_lshape(&mut r, &cases);
    c6_steinberg(&mut r);
    c7_repack(&mut r);
    c8_shift(&mut r);
    c9_aeptas(&mut r);
    c10_ffdh(&mut r, &cases);
    println!("acceptance: {} failing criteria, {:.1?}", r.failures, clock.elapsed());
    if r.failures > 0 {
        std::process::exit(1);
    }
}
