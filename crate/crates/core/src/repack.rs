//! Restructure a near-optimal schedule so that an extra container of short
//! jobs fits in, at the price of raising the peak to at most `5/3 T`.
//!
//! The schedule is cut into ten segments (five on each side of `D/2`). One
//! segment with enough time not covered by huge jobs (energy above `2T/3`)
//! is emptied: its contained jobs go into a Steinberg-packed container, its
//! huge jobs together with the extra container form a second container that
//! is put back into the segment, and some of the jobs crossing its borders
//! are delayed to end at `D`.

use serde::Serialize;

use crate::approx::EpsilonParams;
use crate::bounds::{height_wider_than, lower_bound, width_above};
use crate::error::{Error, Result};
use crate::model::{Instance, Plan, Profile};
use crate::packing::{min_width_for, steinberg_pack, Bin, Rect};
use crate::ratio::{self, Q};

/// A bounded sub-schedule. `contents` holds `(job index, start relative to
/// the container)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub width_budget: Q,
    pub height_budget: Q,
    pub contents: Vec<(usize, u64)>,
}

impl Container {
    pub fn empty(width_budget: Q, height_budget: Q) -> Self {
        Container {
            width_budget,
            height_budget,
            contents: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.contents.is_empty()
    }

    pub fn jobs(&self) -> impl Iterator<Item = usize> + '_ {
        self.contents.iter().map(|&(i, _)| i)
    }

    /// Largest relative completion time.
    pub fn width(&self, instance: &Instance) -> u64 {
        self.contents
            .iter()
            .map(|&(i, s)| s + instance.job(i).p)
            .max()
            .unwrap_or(0)
    }

    pub fn height(&self, instance: &Instance) -> u64 {
        let horizon = self.width(instance).max(1);
        Profile::from_intervals(
            horizon,
            self.contents.iter().map(|&(i, s)| {
                let j = instance.job(i);
                (s, j.p, j.e)
            }),
        )
        .max()
    }

    pub fn fits(&self, instance: &Instance) -> bool {
        ratio::int(self.width(instance)) <= self.width_budget
            && ratio::int(self.height(instance)) <= self.height_budget
    }

    /// Put every content job into `plan` with the container starting at `at`.
    pub fn place(&self, plan: &mut Plan, at: u64) {
        for &(i, s) in &self.contents {
            plan.set(i, at + s);
        }
    }

    /// Jobs laid side by side in the given order.
    pub fn side_by_side(instance: &Instance, jobs: &[usize], width_budget: Q, height_budget: Q) -> Self {
        let mut t = 0;
        let mut contents = Vec::with_capacity(jobs.len());
        for &i in jobs {
            contents.push((i, t));
            t += instance.job(i).p;
        }
        Container {
            width_budget,
            height_budget,
            contents,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub index: u8,
    pub start: Q,
    pub end: Q,
    pub side: Side,
}

impl Segment {
    pub fn width(&self) -> Q {
        &self.end - &self.start
    }
}

/// `tau_0..tau_5` for the given deadline and `gamma`.
pub fn taus(d: u64, gamma: &Q) -> [Q; 6] {
    let d = ratio::int(d);
    let g = gamma;
    [
        ratio::zero(),
        &d / ratio::int(8),
        (ratio::int(15) - ratio::int(24) * g) * &d / ratio::int(64),
        (ratio::int(9) + ratio::int(11) * g) * &d / ratio::int(32),
        (ratio::int(3) + ratio::int(2) * g) * &d / ratio::int(8),
        &d / ratio::int(2),
    ]
}

fn segments_from(d: &Q, cuts: &[Q; 6], right_mid: &Q) -> Vec<Segment> {
    let mut out = Vec::with_capacity(10);
    for k in 1..=5 {
        out.push(Segment {
            index: k as u8,
            start: cuts[k - 1].clone(),
            end: cuts[k].clone(),
            side: Side::Left,
        });
    }
    for k in (1..=5).rev() {
        let start = if k == 5 { right_mid.clone() } else { d - &cuts[k] };
        out.push(Segment {
            index: k as u8,
            start,
            end: d - &cuts[k - 1],
            side: Side::Right,
        });
    }
    out
}

/// The ten segments in time order with exact rational endpoints.
pub fn split_segments(d: u64, gamma: &Q) -> Vec<Segment> {
    let t = taus(d, gamma);
    segments_from(&ratio::int(d), &t, &t[5])
}

/// Integer-aligned variant used for the actual restructuring: interior cut
/// points are rounded down on the left half and mirrored on the right half,
/// the middle point goes to `ceil(D/2)`.
pub fn grid_segments(d: u64, gamma: &Q) -> Vec<Segment> {
    let t = taus(d, gamma);
    let mut cuts = t.clone();
    for c in cuts.iter_mut().take(5).skip(1) {
        *c = ratio::int(ratio::floor_u64(c));
    }
    cuts[5] = ratio::int(d.div_ceil(2));
    segments_from(&ratio::int(d), &cuts, &cuts[5])
}

fn is_huge(e: u64, t: u64) -> bool {
    3 * e as u128 > 2 * t as u128
}

/// A job with `p` in `[gamma D, (1 - 2 gamma) D]` and `e` in `[T/3, 2T/3]`,
/// first by id.
pub fn find_medium_job(instance: &Instance, t: u64, gamma: &Q) -> Option<usize> {
    let d = instance.d();
    let lo = gamma * &d;
    let hi = (ratio::one() - ratio::int(2) * gamma) * &d;
    let mut cands: Vec<usize> = instance.select(|j| {
        let p = ratio::int(j.p);
        p >= lo && p <= hi && 3 * j.e as u128 >= t as u128 && 3 * j.e as u128 <= 2 * t as u128
    });
    cands.sort_by(|&a, &b| instance.job(a).id.cmp(&instance.job(b).id));
    cands.first().copied()
}

/// Time of `[a, b)` not covered by any huge job of `plan`.
pub fn uncovered(instance: &Instance, plan: &Plan, t: u64, a: u64, b: u64) -> u64 {
    let mut iv: Vec<(u64, u64)> = plan
        .placed()
        .filter(|&(i, _)| is_huge(instance.job(i).e, t))
        .map(|(i, s)| (s.max(a), (s + instance.job(i).p).min(b)))
        .filter(|&(x, y)| x < y)
        .collect();
    iv.sort_unstable();
    let mut covered = 0;
    let mut reach = a;
    for (x, y) in iv {
        let x = x.max(reach);
        if y > x {
            covered += y - x;
            reach = y;
        }
    }
    (b - a) - covered
}

/// Border adjustment result, in the frame where the segment is left of `D/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjusted {
    pub start: u64,
    pub end: u64,
    /// Huge job that ends exactly at `start`, if any.
    pub anchor: Option<usize>,
}

fn adjust_left(instance: &Instance, plan: &Plan, t: u64, s: u64, e: u64) -> Adjusted {
    let huge: Vec<(usize, u64, u64)> = plan
        .placed()
        .filter(|&(i, _)| is_huge(instance.job(i).e, t))
        .map(|(i, x)| (i, x, x + instance.job(i).p))
        .collect();
    let (mut s2, mut e2) = (s, e);
    if let Some(&(_, _, c)) = huge.iter().find(|&&(_, a, c)| a < s && s < c) {
        s2 = c;
    } else if s > 0 {
        let before = huge.iter().filter(|h| h.2 <= s).max_by_key(|h| (h.2, h.0));
        let target = before.map_or(0, |h| h.2);
        e2 = e - (s - target);
        s2 = target;
    }
    if let Some(&(_, a, _)) = huge.iter().find(|&&(_, a, c)| a < e2 && e2 < c) {
        e2 = a;
    }
    let anchor = huge.iter().find(|h| h.2 == s2 && s2 > 0).map(|h| h.0);
    Adjusted {
        start: s2,
        end: e2.max(s2),
        anchor,
    }
}

/// Shift the borders of an integral segment so that none of them cuts
/// through a huge job. Right-side segments are handled in the mirrored
/// schedule and mapped back.
pub fn adjust_borders(instance: &Instance, plan: &Plan, seg: &Segment, t: u64) -> Segment {
    let d = instance.deadline();
    let (s, e) = (ratio::floor_u64(&seg.start), ratio::floor_u64(&seg.end));
    match seg.side {
        Side::Left => {
            let a = adjust_left(instance, plan, t, s, e);
            Segment {
                index: seg.index,
                start: ratio::int(a.start),
                end: ratio::int(a.end),
                side: Side::Left,
            }
        }
        Side::Right => {
            let m = plan.mirrored(instance);
            let a = adjust_left(instance, &m, t, d - e, d - s);
            Segment {
                index: seg.index,
                start: ratio::int(d - a.end),
                end: ratio::int(d - a.start),
                side: Side::Right,
            }
        }
    }
}

/// Pack jobs contained in a segment into a container of height `2T/3` and
/// width at most `3 * seg_width`, using the narrowest box for which the
/// packing condition holds.
pub fn build_c_cont(instance: &Instance, jobs: &[usize], seg_width: &Q, t: u64) -> Result<Container> {
    let height = ratio::frac(2, 3) * ratio::int(t);
    let budget = ratio::int(3) * seg_width;
    if jobs.is_empty() {
        return Ok(Container::empty(budget, height));
    }
    let rects: Vec<Rect> = jobs
        .iter()
        .map(|&i| {
            let j = instance.job(i);
            Rect::ints(i.to_string(), j.p, j.e)
        })
        .collect();
    let w = min_width_for(&rects, &height).ok_or_else(|| {
        Error::ConditionViolated("contained job taller than 2T/3".into())
    })?;
    if w > budget {
        return Err(Error::ConditionViolated(format!(
            "contained jobs need width {} > 3 w(S) = {}",
            ratio::format(&w),
            ratio::format(&budget)
        )));
    }
    let pl = steinberg_pack(&rects, &Bin::new(w, height.clone()))?;
    let contents = pl
        .iter()
        .map(|p| (p.id.parse::<usize>().expect("index id"), ratio::floor_u64(&p.x)))
        .collect();
    let c = Container {
        width_budget: budget,
        height_budget: height,
        contents,
    };
    if !c.fits(instance) {
        return Err(Error::invariant("packed container exceeds its budgets"));
    }
    Ok(c)
}

/// Delay every job in `moves` so that it ends at `D`.
pub fn shift_right_set(instance: &Instance, plan: &Plan, moves: &[usize]) -> Plan {
    let mut out = plan.clone();
    for &i in moves {
        out.set(i, instance.deadline() - instance.job(i).p);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum RepackPath {
    /// Nothing to insert.
    Trivial,
    MediumJob { job: String, mirrored: bool },
    Segment {
        k: u8,
        side: Side,
        start: u64,
        end: u64,
        mirrored: bool,
        /// The emptied segment was already below `2T/3`.
        low: bool,
        moved: usize,
        extracted: Option<String>,
        /// How many segment candidates were tried before this one worked.
        attempt: usize,
    },
}

#[derive(Debug, Clone)]
pub struct RepackOutcome {
    pub plan: Plan,
    pub peak: u64,
    pub path: RepackPath,
    /// Container-fit inequalities evaluated along the way, `(name, holds)`.
    pub fit_checks: Vec<(String, bool)>,
}

fn within_five_thirds(peak: u64, t: u64) -> bool {
    3 * peak as u128 <= 5 * t as u128
}

fn check_preconditions(instance: &Instance, base: &Plan, t: u64, cg: &Container, params: &EpsilonParams) -> Result<()> {
    let d = instance.d();
    if base.peak(instance) > t {
        return Err(Error::precondition("base peak exceeds T"));
    }
    if !base.fits(instance) {
        return Err(Error::precondition("base schedule misses the deadline"));
    }
    if cg.width_budget > &params.gamma * &d || cg.height_budget > ratio::int(t) {
        return Err(Error::precondition("overflow container exceeds gamma D x T"));
    }
    if !cg.fits(instance) {
        return Err(Error::precondition("overflow contents exceed the container budgets"));
    }
    let mut seen = vec![false; instance.len()];
    for i in base.placed_indices().into_iter().chain(cg.jobs()) {
        if seen[i] {
            return Err(Error::precondition(format!(
                "job `{}` is both in the base and in the container",
                instance.job(i).id
            )));
        }
        seen[i] = true;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::precondition(format!(
            "job `{}` is neither in the base nor in the container",
            instance.job(i).id
        )));
    }
    let tp = lower_bound(instance).t;
    if ratio::int(t) < tp {
        return Err(Error::precondition("T is below the lower bound T'"));
    }
    let two_thirds = ratio::frac(2, 3);
    if ratio::int(height_wider_than(instance, &ratio::frac(3, 4))) > &two_thirds * &tp {
        return Err(Error::precondition("h(p > 3D/4) exceeds 2T'/3"));
    }
    if ratio::int(width_above(instance, &two_thirds, &tp)) > (ratio::one() - &params.w) * &d {
        return Err(Error::precondition("w(e > 2T'/3) exceeds (1 - 3 eps/4) D"));
    }
    Ok(())
}

struct Candidate {
    seg: Segment,
    adj: Adjusted,
    mirrored: bool,
}

/// Restructure `base` (all jobs except the container's) so that `c_gamma`
/// fits in, keeping the peak at most `5/3 T`.
pub fn repack(instance: &Instance, base: &Plan, t: u64, c_gamma: &Container, params: &EpsilonParams) -> Result<RepackOutcome> {
    check_preconditions(instance, base, t, c_gamma, params)?;
    if c_gamma.is_empty() {
        return Ok(RepackOutcome {
            peak: base.peak(instance),
            plan: base.clone(),
            path: RepackPath::Trivial,
            fit_checks: Vec::new(),
        });
    }
    let d = instance.deadline();
    if let Some(j) = find_medium_job(instance, t, &params.gamma) {
        let s = base.start(j);
        let c = s + instance.job(j).p;
        let mirrored = s > d - c;
        let mut p = if mirrored { base.mirrored(instance) } else { base.clone() };
        let old = p.start(j);
        p.set(j, d - instance.job(j).p);
        c_gamma.place(&mut p, old);
        if mirrored {
            p = p.mirrored(instance);
        }
        let peak = p.peak(instance);
        if p.is_complete() && p.fits(instance) && within_five_thirds(peak, t) {
            return Ok(RepackOutcome {
                plan: p,
                peak,
                path: RepackPath::MediumJob {
                    job: instance.job(j).id.clone(),
                    mirrored,
                },
                fit_checks: Vec::new(),
            });
        }
        return Err(Error::invariant(format!(
            "medium-job shortcut produced peak {peak} above 5T/3 for T = {t}"
        )));
    }

    let threshold = &params.gamma * ratio::int(d);
    let segs = grid_segments(d, &params.gamma);
    let qualifying: Vec<&Segment> = segs
        .iter()
        .filter(|s| {
            let (a, b) = (ratio::floor_u64(&s.start), ratio::floor_u64(&s.end));
            a < b && ratio::int(uncovered(instance, base, t, a, b)) >= threshold
        })
        .collect();
    if qualifying.is_empty() {
        return Err(Error::invariant("no segment has gamma D time free of huge jobs"));
    }
    let mirror_plan = base.mirrored(instance);
    let mk = |seg: &Segment| -> Candidate {
        let (a, b) = (ratio::floor_u64(&seg.start), ratio::floor_u64(&seg.end));
        match seg.side {
            Side::Left => Candidate {
                seg: seg.clone(),
                adj: adjust_left(instance, base, t, a, b),
                mirrored: false,
            },
            Side::Right => Candidate {
                seg: seg.clone(),
                adj: adjust_left(instance, &mirror_plan, t, d - b, d - a),
                mirrored: true,
            },
        }
    };
    let first = mk(qualifying[0]);
    let last = mk(qualifying[qualifying.len() - 1]);
    // position of S'_l in the original frame vs. mirrored position of S'_r
    let sl = if first.mirrored { d - first.adj.end } else { first.adj.start };
    let cr_mirrored = if last.mirrored { last.adj.start } else { d - last.adj.end };
    let mut order: Vec<Candidate> = Vec::new();
    if cr_mirrored < sl {
        order.push(last);
        order.push(first);
    } else {
        order.push(first);
        order.push(last);
    }
    for s in qualifying.iter().skip(1).take(qualifying.len().saturating_sub(2)) {
        order.push(mk(s));
    }

    let mut first_err: Option<Error> = None;
    for (attempt, cand) in order.iter().enumerate() {
        let frame = if cand.mirrored { &mirror_plan } else { base };
        match try_segment(instance, frame, t, c_gamma, params, cand) {
            Ok((mut plan, mut path, checks)) => {
                if cand.mirrored {
                    plan = plan.mirrored(instance);
                }
                let peak = plan.peak(instance);
                if plan.is_complete() && plan.fits(instance) && within_five_thirds(peak, t) {
                    if let RepackPath::Segment { attempt: a, .. } = &mut path {
                        *a = attempt;
                    }
                    return Ok(RepackOutcome {
                        plan,
                        peak,
                        path,
                        fit_checks: checks,
                    });
                }
                first_err.get_or_insert_with(|| {
                    Error::invariant(format!(
                        "segment {} ({:?}) gave peak {peak} above 5T/3 for T = {t}",
                        cand.seg.index, cand.seg.side
                    ))
                });
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or_else(|| Error::invariant("no segment candidate")))
}

type Attempt = (Plan, RepackPath, Vec<(String, bool)>);

fn try_segment(
    instance: &Instance,
    frame: &Plan,
    t: u64,
    c_gamma: &Container,
    params: &EpsilonParams,
    cand: &Candidate,
) -> Result<Attempt> {
    let d = instance.deadline();
    let (s, e) = (cand.adj.start, cand.adj.end);
    let k = cand.seg.index;
    if s >= e {
        return Err(Error::invariant(format!("segment {k} collapsed after border shift")));
    }
    let placed: Vec<(usize, u64, u64)> = frame
        .placed()
        .map(|(i, x)| (i, x, x + instance.job(i).p))
        .collect();
    let huge = |i: usize| is_huge(instance.job(i).e, t);
    if placed
        .iter()
        .any(|&(i, a, c)| huge(i) && ((a < s && s < c) || (a < e && e < c)))
    {
        return Err(Error::invariant(format!("segment {k} border cuts a huge job")));
    }
    let inside: Vec<usize> = placed
        .iter()
        .filter(|&&(_, a, c)| s <= a && c <= e)
        .map(|&(i, _, _)| i)
        .collect();
    let mut huge_in: Vec<usize> = inside.iter().copied().filter(|&i| huge(i)).collect();
    huge_in.sort_by(|&a, &b| instance.job(a).id.cmp(&instance.job(b).id));
    let cont: Vec<usize> = inside.iter().copied().filter(|&i| !huge(i)).collect();

    let huge_width = instance.width_of(huge_in.iter().copied());
    let cg_width = c_gamma.width(instance);
    if huge_width + cg_width > e - s {
        return Err(Error::invariant(format!(
            "segment {k}: huge jobs and overflow need {} > {}",
            huge_width + cg_width,
            e - s
        )));
    }
    // C_tall: huge jobs side by side followed by the overflow contents
    let mut c_tall = Container::side_by_side(instance, &huge_in, ratio::int(e - s), ratio::int(t));
    for &(i, r) in &c_gamma.contents {
        c_tall.contents.push((i, huge_width + r));
    }
    let c_cont = build_c_cont(instance, &cont, &ratio::int(e - s), t)?;

    let mut work = frame.clone();
    for &i in &inside {
        work.clear(i);
    }
    let rest = work.profile(instance);
    let level = rest.max_on(&ratio::int(s), &ratio::int(e));
    let mut checks = Vec::new();
    let mut path = RepackPath::Segment {
        k,
        side: cand.seg.side,
        start: s,
        end: e,
        mirrored: cand.mirrored,
        low: false,
        moved: 0,
        extracted: None,
        attempt: 0,
    };

    if 3 * level as u128 <= 2 * t as u128 {
        c_tall.place(&mut work, s);
        let at = d.div_ceil(2);
        let cw = c_cont.width(instance);
        checks.push(("c_cont right of D/2".into(), at + cw <= d));
        if at + cw > d {
            return Err(Error::invariant("C_cont does not fit right of D/2"));
        }
        c_cont.place(&mut work, at);
        if let RepackPath::Segment { low, .. } = &mut path {
            *low = true;
        }
        return Ok((work, path, checks));
    }

    let crossing_right = |i: usize, a: u64, c: u64| a < e && e < c && !huge(i);
    if k == 1 {
        let mut cands: Vec<usize> = placed
            .iter()
            .filter(|&&(i, a, c)| crossing_right(i, a, c) && 4 * instance.job(i).p <= 3 * d)
            .map(|&(i, _, _)| i)
            .collect();
        cands.sort_by(|&a, &b| {
            let (x, y) = (instance.job(a), instance.job(b));
            y.e.cmp(&x.e).then_with(|| x.id.cmp(&y.id))
        });
        let mut moves = Vec::new();
        let mut h = 0u64;
        for i in cands {
            if 3 * h as u128 >= t as u128 {
                break;
            }
            moves.push(i);
            h += instance.job(i).e;
        }
        checks.push(("k=1 mover energy <= 2T/3".into(), 3 * h as u128 <= 2 * t as u128));
        work = shift_right_set(instance, &work, &moves);
        c_tall.place(&mut work, s);
        let cw = c_cont.width(instance);
        let fit = 2 * (e + cw) <= d + s;
        checks.push(("k=1 C_cont ends by D/2".into(), fit));
        c_cont.place(&mut work, e);
        if let RepackPath::Segment { moved, .. } = &mut path {
            *moved = moves.len();
        }
        return Ok((work, path, checks));
    }

    if cand.adj.anchor.is_none() {
        return Err(Error::invariant(format!("segment {k}: no huge job ends at its start")));
    }
    let jr = placed
        .iter()
        .filter(|&&(i, a, _)| huge(i) && a >= e)
        .min_by_key(|&&(i, a, _)| (a, i))
        .copied();
    let Some((_, sr, _)) = jr else {
        return Err(Error::invariant(format!("segment {k}: no huge job right of the segment")));
    };
    if sr > d - s {
        return Err(Error::invariant(format!(
            "segment {k}: nearest huge job on the right starts at {sr} > D - start"
        )));
    }
    let mut im: Vec<(usize, u64)> = placed
        .iter()
        .filter(|&&(i, a, c)| crossing_right(i, a, c) && !(a < s && s < c) && !(a <= sr && sr < c))
        .map(|&(i, a, _)| (i, a))
        .collect();
    im.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| instance.job(x.0).id.cmp(&instance.job(y.0).id)));
    let mut taken = Vec::new();
    let mut h = 0u64;
    for (i, _) in im {
        if 3 * h as u128 >= t as u128 {
            break;
        }
        taken.push(i);
        h += instance.job(i).e;
    }
    let mut jv = None;
    if 3 * h as u128 > 2 * t as u128 {
        jv = taken.pop();
    }
    let gd = &params.gamma * ratio::int(d);
    if let Some(v) = jv {
        checks.push(("p(j_v) <= gamma D".into(), ratio::int(instance.job(v).p) <= gd));
        work.clear(v);
    }
    work = shift_right_set(instance, &work, &taken);
    c_tall.place(&mut work, s);
    let cw = c_cont.width(instance);
    if k <= 3 {
        checks.push((format!("k={k}: c(S) + w(C_cont) <= D/2 + s/2"), 2 * (e + cw) <= d + s));
        c_cont.place(&mut work, e);
        if let Some(v) = jv {
            work.set(v, 0);
        }
    } else {
        checks.push((format!("k={k}: w(C_cont) <= s"), cw <= s));
        c_cont.place(&mut work, 0);
        if let Some(v) = jv {
            work.set(v, e);
        }
    }
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(Error::invariant(format!("container fit violated: {name}")));
    }
    if let RepackPath::Segment { moved, extracted, .. } = &mut path {
        *moved = taken.len();
        *extracted = jv.map(|v| instance.job(v).id.clone());
    }
    Ok((work, path, checks))
}
