//! Building blocks of the asymptotic scheme at desk scale: gap selection,
//! classification, height rounding, profile segments, the configuration LP
//! for vertical jobs, NFDH for small jobs, start-point reduction and the LP
//! for horizontal jobs, and a driver that chains them.
//!
//! The profile of large and horizontal jobs is taken from a reference
//! schedule instead of being guessed, so every bound here is measured.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bounds::lower_bound;
use crate::error::{Error, Result};
use crate::exact::{exact_opt, Limits};
use crate::lp::{self, Cmp, Lp};
use crate::model::{place_min_peak, Instance, Plan, Profile};
use crate::packing::{ffdh, min_width_for, nfdh, steinberg_pack, Bin, Rect};
use crate::ratio::{self, Q};
use crate::repack::Container;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Large,
    Horizontal,
    Vertical,
    Small,
    Medium,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub large: Vec<usize>,
    pub horizontal: Vec<usize>,
    pub vertical: Vec<usize>,
    pub small: Vec<usize>,
    pub medium: Vec<usize>,
    pub delta: Q,
    pub mu: Q,
}

impl Classification {
    pub fn class_of(&self, i: usize) -> Option<Class> {
        [
            (&self.large, Class::Large),
            (&self.horizontal, Class::Horizontal),
            (&self.vertical, Class::Vertical),
            (&self.small, Class::Small),
            (&self.medium, Class::Medium),
        ]
        .into_iter()
        .find(|(set, _)| set.contains(&i))
        .map(|(_, c)| c)
    }

    pub fn counts(&self) -> [usize; 5] {
        [
            self.large.len(),
            self.horizontal.len(),
            self.vertical.len(),
            self.small.len(),
            self.medium.len(),
        ]
    }
}

fn classify_one(p: u64, e: u64, d: &Q, t: &Q, delta: &Q, mu: &Q) -> Class {
    let (p, e) = (ratio::int(p), ratio::int(e));
    let tall = e >= delta * t;
    let low = e < mu * t;
    let wide = p > delta * d;
    let narrow = p < mu * d;
    match (tall, low, wide, narrow) {
        (true, _, true, _) => Class::Large,
        (_, true, true, _) => Class::Horizontal,
        (true, _, _, true) => Class::Vertical,
        (_, true, _, true) => Class::Small,
        _ => Class::Medium,
    }
}

pub fn classify(instance: &Instance, t: &Q, delta: &Q, mu: &Q) -> Classification {
    let d = instance.d();
    let mut c = Classification {
        large: vec![],
        horizontal: vec![],
        vertical: vec![],
        small: vec![],
        medium: vec![],
        delta: delta.clone(),
        mu: mu.clone(),
    };
    for (i, j) in instance.jobs().iter().enumerate() {
        match classify_one(j.p, j.e, &d, t, delta, mu) {
            Class::Large => c.large.push(i),
            Class::Horizontal => c.horizontal.push(i),
            Class::Vertical => c.vertical.push(i),
            Class::Small => c.small.push(i),
            Class::Medium => c.medium.push(i),
        }
    }
    c
}

/// Total area of jobs that would be medium for `(delta, mu)`.
pub fn medium_area(instance: &Instance, t: &Q, delta: &Q, mu: &Q) -> u128 {
    let d = instance.d();
    instance
        .jobs()
        .iter()
        .filter(|j| classify_one(j.p, j.e, &d, t, delta, mu) == Class::Medium)
        .map(|j| j.area())
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub delta: Q,
    pub mu: Q,
    pub index: usize,
}

/// Scan `rho_0 = eps^5/4`, `rho_{i+1} = rho_i eps^5` for the first pair
/// whose medium band has area at most `eps^2/4 D T`. Consecutive bands are
/// disjoint, so one of the first `8/eps^2 + 1` pairs qualifies.
pub fn select_gap(instance: &Instance, eps: &Q, t: &Q) -> Result<Gap> {
    let e2 = eps * eps;
    let e5 = eps.pow(5);
    let limit = ratio::ceil_u64(&(ratio::int(8) / &e2)) as usize;
    let bar = &e2 / ratio::int(4) * instance.d() * t;
    let mut rho = &e5 / ratio::int(4);
    for i in 0..=limit {
        let next = &rho * &e5;
        if ratio::int(medium_area(instance, t, &rho, &next)) <= bar {
            return Ok(Gap {
                delta: rho,
                mu: next,
                index: i,
            });
        }
        rho = next;
    }
    Err(Error::invariant("no gap with a light medium band; T is below a(I)/D"))
}

/// Round every large and vertical height up to the grid
/// `eps delta T max(1, floor(eps 2^l))` of its class `l`.
pub fn round_vertical(classification: &Classification, instance: &Instance, eps: &Q, delta: &Q, t: &Q) -> BTreeMap<usize, Q> {
    let unit = delta * t;
    let base_step = eps * &unit;
    let mut out = BTreeMap::new();
    for &i in classification.large.iter().chain(&classification.vertical) {
        let h = ratio::int(instance.job(i).e);
        let mut l = 0u32;
        while ratio::int(2u64.pow(l + 1)) * &unit <= h {
            l += 1;
        }
        let mult = ratio::floor_u64(&(eps * ratio::int(2u64.pow(l)))).max(1);
        let step = &base_step * ratio::int(mult);
        let k = ratio::ceil_u64(&(&h / &step));
        out.insert(i, step * ratio::int(k));
    }
    out
}

/// Bound on the number of distinct rounded heights.
pub fn rounding_class_bound(eps: &Q, delta: &Q) -> u64 {
    let inv = ratio::ceil_u64(&(ratio::one() / delta));
    let log = 64 - (inv.max(1) - 1).leading_zeros() as u64;
    let per = ratio::ceil_u64(&(ratio::int(2) / (eps * eps))) + 1;
    per * (log + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentDemand {
    pub id: usize,
    pub start: u64,
    pub end: u64,
    #[serde(with = "ratio::serde_q")]
    pub width: Q,
    pub max: u64,
    pub min: u64,
    /// Energy reserved for vertical and small jobs, a multiple of `eps T`.
    #[serde(with = "ratio::serde_q")]
    pub budget: Q,
    /// The extra segment standing for the overflow container.
    pub top: bool,
}

#[derive(Debug, Clone)]
pub struct SegmentProfile {
    pub segments: Vec<SegmentDemand>,
    pub volatile: Vec<usize>,
}

fn round_up_to(x: &Q, unit: &Q) -> Q {
    if !x.is_positive() {
        return ratio::zero();
    }
    unit * ratio::int(ratio::ceil_u64(&(x / unit)))
}

/// Split `[0, D)` into `min(ceil(1/gamma), D)` integer segments and measure
/// the profile of `members` (large and horizontal jobs) on each.
pub fn profile_segments(
    instance: &Instance,
    plan: &Plan,
    members: &[usize],
    gamma: &Q,
    eps: &Q,
    t: &Q,
    container: Option<(&Q, &Q)>,
) -> SegmentProfile {
    let d = instance.deadline();
    let n = ratio::ceil_u64(&(ratio::one() / gamma)).min(d).max(1);
    let prof = plan.profile_of(instance, members);
    let unit = eps * t;
    let mut segments = Vec::new();
    let mut volatile = Vec::new();
    for k in 0..n {
        let (a, b) = (k * d / n, (k + 1) * d / n);
        if a == b {
            continue;
        }
        let (aq, bq) = (ratio::int(a), ratio::int(b));
        let (mx, mn) = (prof.max_on(&aq, &bq), prof.min_on(&aq, &bq));
        if ratio::int(mx - mn) >= unit {
            volatile.push(segments.len());
        }
        segments.push(SegmentDemand {
            id: segments.len(),
            start: a,
            end: b,
            width: ratio::int(b - a),
            max: mx,
            min: mn,
            budget: round_up_to(&(t - ratio::int(mx)), &unit),
            top: false,
        });
    }
    if let Some((w, h)) = container {
        segments.push(SegmentDemand {
            id: segments.len(),
            start: d,
            end: d,
            width: w / ratio::int(4),
            max: 0,
            min: 0,
            budget: round_up_to(h, &unit),
            top: true,
        });
    }
    SegmentProfile { segments, volatile }
}

/// Multiset of rounded heights, as `(height, count)` sorted by height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub items: Vec<(Q, u32)>,
}

impl Configuration {
    pub fn height(&self) -> Q {
        self.items.iter().map(|(h, c)| h * ratio::int(*c)).sum()
    }

    pub fn count(&self, h: &Q) -> u32 {
        self.items.iter().find(|(x, _)| x == h).map_or(0, |(_, c)| *c)
    }
}

#[derive(Debug, Clone)]
pub struct ConfigColumn {
    /// Index into `ConfigSolution::classes`.
    pub class: usize,
    pub config: Configuration,
}

#[derive(Debug, Clone)]
pub struct ConfigSolution {
    pub heights: Vec<Q>,
    /// `(budget, total width)` per budget class.
    pub classes: Vec<(Q, Q)>,
    pub columns: Vec<ConfigColumn>,
    pub x: Vec<Q>,
    pub lp: Lp,
}

impl ConfigSolution {
    pub fn nonzero(&self) -> usize {
        self.x.iter().filter(|v| !v.is_zero()).count()
    }
}

const MAX_CONFIGS: usize = 50_000;

fn configurations(heights: &[Q], budget: &Q, out: &mut Vec<Configuration>) -> Result<()> {
    fn rec(heights: &[Q], k: usize, left: &Q, cur: &mut Vec<(Q, u32)>, out: &mut Vec<Configuration>) -> bool {
        if out.len() > MAX_CONFIGS {
            return false;
        }
        if k == heights.len() {
            out.push(Configuration {
                items: cur.iter().filter(|(_, c)| *c > 0).cloned().collect(),
            });
            return true;
        }
        let h = &heights[k];
        let mut c = 0u32;
        let mut rest = left.clone();
        loop {
            cur.push((h.clone(), c));
            let ok = rec(heights, k + 1, &rest, cur, out);
            cur.pop();
            if !ok {
                return false;
            }
            rest -= h;
            c += 1;
            if rest.is_negative() {
                return true;
            }
        }
    }
    if rec(heights, 0, budget, &mut Vec::new(), out) {
        Ok(())
    } else {
        Err(Error::ResourceExceeded {
            nodes: out.len() as u64,
            best: None,
        })
    }
}

/// Configuration LP: per budget class the configuration widths add up to
/// the class width, and per rounded height the covered width equals the
/// total processing time of the jobs of that height.
pub fn vertical_config_lp(instance: &Instance, rounded: &BTreeMap<usize, Q>, verticals: &[usize], segments: &[SegmentDemand]) -> Result<ConfigSolution> {
    let mut demand: BTreeMap<Q, u64> = BTreeMap::new();
    for &i in verticals {
        *demand.entry(rounded[&i].clone()).or_default() += instance.job(i).p;
    }
    let heights: Vec<Q> = demand.keys().cloned().collect();
    let mut classes: BTreeMap<Q, Q> = BTreeMap::new();
    for s in segments {
        *classes.entry(s.budget.clone()).or_insert_with(ratio::zero) += &s.width;
    }
    let classes: Vec<(Q, Q)> = classes.into_iter().collect();
    let mut columns = Vec::new();
    for (k, (b, _)) in classes.iter().enumerate() {
        let mut cs = Vec::new();
        configurations(&heights, b, &mut cs)?;
        columns.extend(cs.into_iter().map(|config| ConfigColumn { class: k, config }));
        if columns.len() > MAX_CONFIGS {
            return Err(Error::ResourceExceeded {
                nodes: columns.len() as u64,
                best: None,
            });
        }
    }
    let mut lp = Lp::new(columns.len());
    for (k, (_, w)) in classes.iter().enumerate() {
        let row = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.class == k)
            .map(|(j, _)| (j, ratio::one()))
            .collect();
        lp.row(row, Cmp::Eq, w.clone());
    }
    for h in &heights {
        let row = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.config.count(h) > 0)
            .map(|(j, c)| (j, ratio::int(c.config.count(h))))
            .collect();
        lp.row(row, Cmp::Eq, ratio::int(demand[h]));
    }
    let x = lp::solve(&lp)?;
    Ok(ConfigSolution {
        heights,
        classes,
        columns,
        x,
        lp,
    })
}

/// Space left above a configuration, usable for small jobs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeBox {
    pub start: Q,
    pub end: Q,
    pub height: Q,
}

#[derive(Debug, Clone, Default)]
pub struct ConfigPlacement {
    pub placed: Vec<(usize, u64)>,
    /// Jobs that would have been cut by a lane or segment border, or that
    /// landed in the overflow segment. Never split, diverted whole.
    pub fractional: Vec<usize>,
    pub boxes: Vec<FreeBox>,
}

struct Piece {
    vstart: Q,
    vend: Q,
    real: Q,
    top: bool,
}

/// Lay the configurations of each budget class along the concatenation of
/// that class's segments and fill their lanes with jobs of matching
/// rounded height.
pub fn place_configurations(
    instance: &Instance,
    sol: &ConfigSolution,
    rounded: &BTreeMap<usize, Q>,
    verticals: &[usize],
    segments: &[SegmentDemand],
) -> ConfigPlacement {
    let mut out = ConfigPlacement::default();
    // virtual axis per class
    let mut pieces: Vec<Vec<Piece>> = (0..sol.classes.len()).map(|_| Vec::new()).collect();
    for s in segments {
        let k = sol.classes.iter().position(|(b, _)| *b == s.budget).expect("class");
        let v = pieces[k].last().map_or(ratio::zero(), |p| p.vend.clone());
        pieces[k].push(Piece {
            vend: &v + &s.width,
            vstart: v,
            real: ratio::int(s.start),
            top: s.top,
        });
    }
    // configuration intervals per class, in column order
    let mut lanes: BTreeMap<Q, Vec<(usize, Q, Q)>> = BTreeMap::new();
    let mut cursor = vec![ratio::zero(); sol.classes.len()];
    for (j, col) in sol.columns.iter().enumerate() {
        let x = &sol.x[j];
        if x.is_zero() {
            continue;
        }
        let k = col.class;
        let (a, b) = (cursor[k].clone(), &cursor[k] + x);
        for (h, c) in &col.config.items {
            for _ in 0..*c {
                lanes.entry(h.clone()).or_default().push((k, a.clone(), b.clone()));
            }
        }
        let free = &sol.classes[k].0 - col.config.height();
        if free.is_positive() {
            for p in &pieces[k] {
                let lo = ratio::max(&a, &p.vstart);
                let hi = ratio::min(&b, &p.vend);
                if lo < hi && !p.top {
                    out.boxes.push(FreeBox {
                        start: &p.real + (&lo - &p.vstart),
                        end: &p.real + (&hi - &p.vstart),
                        height: free.clone(),
                    });
                }
            }
        }
        cursor[k] = b;
    }
    let mut by_height: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for &i in verticals {
        by_height.entry(rounded[&i].clone()).or_default().push(i);
    }
    for (h, mut jobs) in by_height {
        jobs.sort_by(|&a, &b| {
            let (x, y) = (instance.job(a), instance.job(b));
            y.p.cmp(&x.p).then_with(|| x.id.cmp(&y.id))
        });
        let mut queue = jobs.into_iter();
        let mut pending = queue.next();
        for (k, a, b) in lanes.get(&h).cloned().unwrap_or_default() {
            let mut v = a;
            while let Some(i) = pending {
                if v >= b {
                    break;
                }
                let p = instance.job(i).p;
                let piece = pieces[k].iter().find(|pc| pc.vstart <= v && v < pc.vend).expect("piece");
                let real = &piece.real + (&v - &piece.vstart);
                let start = ratio::ceil_u64(&real);
                let used = ratio::int(start) - &real + ratio::int(p);
                let fits = !piece.top
                    && &v + &used <= b
                    && &v + &used <= piece.vend
                    && start + p <= instance.deadline();
                if fits {
                    out.placed.push((i, start));
                    v += used;
                } else {
                    out.fractional.push(i);
                    v += ratio::int(p);
                }
                pending = queue.next();
            }
        }
        while let Some(i) = pending {
            out.fractional.push(i);
            pending = queue.next();
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct SmallPlacement {
    pub placed: Vec<(usize, u64)>,
    pub leftovers: Vec<usize>,
    /// `sum_b (W_b H_b - w_max H_b - h_max W_b)_+`
    pub guaranteed_area: Q,
}

/// NFDH inside each free box, keeping only the shelves that fit.
pub fn place_small_nfdh(instance: &Instance, small: &[usize], boxes: &[FreeBox]) -> Result<SmallPlacement> {
    let mut rest: Vec<usize> = small.to_vec();
    let mut out = SmallPlacement {
        guaranteed_area: ratio::zero(),
        ..Default::default()
    };
    let wmax = ratio::int(small.iter().map(|&i| instance.job(i).p).max().unwrap_or(0));
    let hmax = ratio::int(small.iter().map(|&i| instance.job(i).e).max().unwrap_or(0));
    for bx in boxes {
        let (a, b) = (ratio::ceil_u64(&bx.start), ratio::floor_u64(&bx.end));
        if a >= b {
            continue;
        }
        let w = ratio::int(b - a);
        out.guaranteed_area += ratio::pos(&w * &bx.height - &wmax * &bx.height - &hmax * &w);
        let candidates: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&i| ratio::int(instance.job(i).p) <= w)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let rects: Vec<Rect> = candidates
            .iter()
            .map(|&i| Rect::ints(i.to_string(), instance.job(i).p, instance.job(i).e))
            .collect();
        let pack = nfdh(&rects, &w)?;
        let mut taken = BTreeSet::new();
        for pl in &pack.placements {
            let i: usize = pl.id.parse().expect("index id");
            if &pl.y + ratio::int(instance.job(i).e) <= bx.height {
                out.placed.push((i, a + ratio::floor_u64(&pl.x)));
                taken.insert(i);
            }
        }
        rest.retain(|i| !taken.contains(i));
    }
    out.leftovers = rest;
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct HorizontalReduction {
    pub starts: BTreeMap<usize, u64>,
    pub removed: Vec<usize>,
    /// `(l, total energy of class l)` with widths in `(D/2^l, D/2^(l-1)]`.
    pub class_heights: Vec<(u32, u64)>,
}

impl HorizontalReduction {
    pub fn distinct_starts(&self) -> usize {
        self.starts.values().collect::<BTreeSet<_>>().len()
    }
}

fn width_class(p: u64, d: u64) -> u32 {
    // smallest l >= 1 with p > D / 2^l
    let mut l = 1;
    while (p as u128) << l <= d as u128 {
        l += 1;
    }
    l
}

/// Per width class and per segment of width `D/2^l`, stack the jobs ending
/// there by start time, drop the bottom `eps` layer and move every other
/// layer to the latest start of the next non-empty layer below.
pub fn reduce_horizontal_starts(instance: &Instance, horizontal: &[usize], base: &Plan, eps: &Q) -> HorizontalReduction {
    let d = instance.deadline();
    let mut out = HorizontalReduction::default();
    let mut groups: BTreeMap<(u32, u64), Vec<usize>> = BTreeMap::new();
    let mut heights: BTreeMap<u32, u64> = BTreeMap::new();
    for &i in horizontal {
        let j = instance.job(i);
        let l = width_class(j.p, d);
        let c = base.start(i) + j.p;
        // segment k holds completions in (k D/2^l, (k+1) D/2^l]
        let k = ((c as u128) << l).div_ceil(d as u128) as u64 - 1;
        groups.entry((l, k)).or_default().push(i);
        *heights.entry(l).or_default() += j.e;
    }
    out.class_heights = heights.into_iter().collect();
    for (_, mut jobs) in groups {
        jobs.sort_by(|&a, &b| base.start(a).cmp(&base.start(b)).then_with(|| instance.job(a).id.cmp(&instance.job(b).id)));
        let total: u64 = jobs.iter().map(|&i| instance.job(i).e).sum();
        let unit = eps * ratio::int(total);
        let mut top = 0u64;
        let mut layers: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for &i in &jobs {
            top += instance.job(i).e;
            let q = ratio::ceil_u64(&(ratio::int(top) / &unit)).saturating_sub(1);
            layers.entry(q).or_default().push(i);
        }
        let latest: BTreeMap<u64, u64> = layers
            .iter()
            .map(|(&q, js)| (q, js.iter().map(|&i| base.start(i)).max().unwrap()))
            .collect();
        for (&q, js) in &layers {
            if q == 0 {
                out.removed.extend(js);
                continue;
            }
            let target = latest.range(..q).next_back().map(|(_, &s)| s);
            for &i in js {
                out.starts.insert(i, target.unwrap_or(base.start(i)));
            }
        }
    }
    out.removed.sort_unstable();
    out
}

/// LP over `x_{i,s}` for the given candidate starts: each job is
/// distributed over its starts and the load at every checkpoint stays
/// within its budget. Jobs are rounded to their heaviest start.
pub fn horizontal_lp(instance: &Instance, jobs: &[usize], starts: &[u64], budgets: &[(u64, Q)]) -> Result<BTreeMap<usize, u64>> {
    let d = instance.deadline();
    let mut vars: Vec<(usize, u64)> = Vec::new();
    for &i in jobs {
        for &s in starts {
            if s + instance.job(i).p <= d {
                vars.push((i, s));
            }
        }
    }
    let mut lp = Lp::new(vars.len());
    for &i in jobs {
        let row: Vec<(usize, Q)> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.0 == i)
            .map(|(k, _)| (k, ratio::one()))
            .collect();
        if row.is_empty() {
            return Err(Error::LpInfeasible);
        }
        lp.row(row, Cmp::Eq, ratio::one());
    }
    for (t, b) in budgets {
        let row: Vec<(usize, Q)> = vars
            .iter()
            .enumerate()
            .filter(|(_, &(i, s))| s <= *t && *t < s + instance.job(i).p)
            .map(|(k, &(i, _))| (k, ratio::int(instance.job(i).e)))
            .collect();
        if !row.is_empty() {
            lp.row(row, Cmp::Le, b.clone());
        }
    }
    let x = lp::solve(&lp)?;
    let mut best: BTreeMap<usize, (Q, u64)> = BTreeMap::new();
    for (k, &(i, s)) in vars.iter().enumerate() {
        let better = match best.get(&i) {
            None => true,
            Some((v, bs)) => x[k] > *v || (x[k] == *v && s < *bs),
        };
        if better {
            best.insert(i, (x[k].clone(), s));
        }
    }
    Ok(best.into_iter().map(|(i, (_, s))| (i, s)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    C1,
    C2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Exact,
    Ffdh,
    Auto,
}

#[derive(Debug, Clone)]
pub struct LiteConfig {
    pub eps: Q,
    pub variant: Variant,
    pub reference: Reference,
    /// Fixed `(delta, mu)` instead of the gap search.
    pub gap: Option<(Q, Q)>,
    /// Defaults to `3 eps / 40`.
    pub gamma: Option<Q>,
    pub exact_limits: Limits,
}

impl LiteConfig {
    pub fn new(eps: Q) -> Self {
        LiteConfig {
            eps,
            variant: Variant::C1,
            reference: Reference::Auto,
            gap: None,
            gamma: None,
            exact_limits: Limits::nodes(2_000_000),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LiteOutcome {
    pub base: Plan,
    pub overflow: Container,
    pub reference: Plan,
    pub reference_kind: String,
    pub reference_peak: u64,
    pub base_peak: u64,
    /// `(base_peak / reference_peak - 1) / eps`
    pub slack_k: Q,
    pub t_used: Q,
    pub rungs: usize,
    pub classification: Classification,
    pub removed: usize,
    pub fractional: usize,
    pub leftovers: usize,
    pub vertical_lp: bool,
}

/// Schedule from FFDH on a strip of width `D`.
pub fn ffdh_reference(instance: &Instance) -> Result<Plan> {
    let rects: Vec<Rect> = instance
        .jobs()
        .iter()
        .enumerate()
        .map(|(i, j)| Rect::ints(i.to_string(), j.p, j.e))
        .collect();
    let pack = ffdh(&rects, &instance.d())?;
    let mut plan = Plan::empty(instance.len());
    for p in pack.placements {
        plan.set(p.id.parse().expect("index id"), ratio::floor_u64(&p.x));
    }
    Ok(plan)
}

fn reference_plan(instance: &Instance, cfg: &LiteConfig) -> Result<(Plan, String)> {
    let exact = match cfg.reference {
        Reference::Exact => true,
        Reference::Ffdh => false,
        Reference::Auto => instance.len() <= 10 && instance.deadline() <= 24,
    };
    if !exact {
        return Ok((ffdh_reference(instance)?, "ffdh".into()));
    }
    match exact_opt(instance, cfg.exact_limits) {
        Ok(sol) => Ok((sol.plan, "exact".into())),
        Err(Error::ResourceExceeded { best: Some(b), .. }) => Ok((Plan::from_schedule(instance, &b.1)?, "exact-incumbent".into())),
        Err(e) => Err(e),
    }
}

struct Rung {
    placed: Plan,
    overflow_candidates: Vec<usize>,
    cls: Classification,
    removed: usize,
    fractional: usize,
    leftovers: usize,
    vertical_lp: bool,
}

fn run_rung(instance: &Instance, cfg: &LiteConfig, reference: &Plan, t: &Q, gamma: &Q, container: (&Q, &Q), force: bool) -> Result<Rung> {
    let (delta, mu) = match &cfg.gap {
        Some((d, m)) => (d.clone(), m.clone()),
        None => {
            let g = select_gap(instance, &cfg.eps, t)?;
            (g.delta, g.mu)
        }
    };
    let cls = classify(instance, t, &delta, &mu);
    let mut plan = Plan::empty(instance.len());
    let mut overflow = Vec::new();
    for &i in &cls.large {
        plan.set(i, reference.start(i));
    }
    // horizontal jobs
    let red = reduce_horizontal_starts(instance, &cls.horizontal, reference, &cfg.eps);
    overflow.extend(&red.removed);
    let kept: Vec<usize> = red.starts.keys().copied().collect();
    if !kept.is_empty() {
        let starts: Vec<u64> = red.starts.values().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut reduced = Plan::empty(instance.len());
        for (&i, &s) in &red.starts {
            reduced.set(i, s);
        }
        let prof = reduced.profile(instance);
        let budgets: Vec<(u64, Q)> = starts.iter().map(|&s| (s, ratio::int(prof.level_at(s)))).collect();
        for (i, s) in horizontal_lp(instance, &kept, &starts, &budgets)? {
            plan.set(i, s);
        }
    }
    // vertical jobs through the configuration LP
    let rounded = round_vertical(&cls, instance, &cfg.eps, &delta, t);
    let members: Vec<usize> = cls.large.iter().chain(&kept).copied().collect();
    let segs = profile_segments(instance, &plan, &members, gamma, &cfg.eps, t, Some(container));
    let mut fractional = 0;
    let mut vertical_lp = true;
    let mut boxes = Vec::new();
    if !cls.vertical.is_empty() {
        match vertical_config_lp(instance, &rounded, &cls.vertical, &segs.segments) {
            Ok(sol) => {
                let pc = place_configurations(instance, &sol, &rounded, &cls.vertical, &segs.segments);
                for (i, s) in pc.placed {
                    plan.set(i, s);
                }
                fractional = pc.fractional.len();
                overflow.extend(pc.fractional);
                boxes = pc.boxes;
            }
            Err(Error::LpInfeasible) if force => {
                vertical_lp = false;
                for &i in &cls.vertical {
                    plan.set(i, reference.start(i));
                }
            }
            Err(e) => return Err(e),
        }
    }
    if boxes.is_empty() {
        // no configuration gaps: the reserved budget of each segment is free
        boxes = segs
            .segments
            .iter()
            .filter(|s| !s.top)
            .map(|s| FreeBox {
                start: ratio::int(s.start),
                end: ratio::int(s.end),
                height: s.budget.clone(),
            })
            .collect();
    }
    let small = place_small_nfdh(instance, &cls.small, &boxes)?;
    for (i, s) in &small.placed {
        plan.set(*i, *s);
    }
    let leftovers = small.leftovers.len();
    // medium jobs: wide ones Steinberg-packed on top, narrow ones to overflow
    let quarter = container.0 / ratio::int(4);
    let (wide_med, narrow_med): (Vec<usize>, Vec<usize>) =
        cls.medium.iter().partition(|&&i| ratio::int(instance.job(i).p) > quarter);
    overflow.extend(narrow_med);
    if !wide_med.is_empty() {
        let rects: Vec<Rect> = wide_med
            .iter()
            .map(|&i| Rect::ints(i.to_string(), instance.job(i).e, instance.job(i).p))
            .collect();
        // transposed: the minimal "width" is the minimal box height
        let h = min_width_for(&rects, &instance.d()).expect("medium jobs fit in D");
        let upright: Vec<Rect> = rects.iter().map(|r| Rect::new(r.id.clone(), r.h.clone(), r.w.clone())).collect();
        for pl in steinberg_pack(&upright, &Bin::new(instance.d(), h))? {
            plan.set(pl.id.parse().expect("index id"), ratio::floor_u64(&pl.x));
        }
    }
    Ok(Rung {
        placed: plan,
        overflow_candidates: overflow,
        cls,
        removed: red.removed.len(),
        fractional,
        leftovers,
        vertical_lp,
    })
}

/// Pack `candidates` greedily into a container of the given budgets; those
/// that do not fit are returned.
fn fill_container(instance: &Instance, candidates: &[usize], width: &Q, height: &Q) -> (Container, Vec<usize>) {
    let mut order = candidates.to_vec();
    order.sort_by(|&a, &b| {
        let (x, y) = (instance.job(a), instance.job(b));
        y.e.cmp(&x.e).then(y.p.cmp(&x.p)).then_with(|| x.id.cmp(&y.id))
    });
    let w = ratio::floor_u64(width);
    let mut c = Container::empty(width.clone(), height.clone());
    let mut rejected = Vec::new();
    let mut loads = vec![0u64; w as usize];
    for i in order {
        let j = instance.job(i);
        if j.p > w || ratio::int(j.e) > *height {
            rejected.push(i);
            continue;
        }
        let mut best: Option<(u64, u64)> = None;
        for s in 0..=(w - j.p) {
            let m = loads[s as usize..(s + j.p) as usize].iter().max().copied().unwrap_or(0);
            if ratio::int(m + j.e) <= *height && best.is_none_or(|(bm, _)| m < bm) {
                best = Some((m, s));
            }
        }
        match best {
            Some((_, s)) => {
                for l in &mut loads[s as usize..(s + j.p) as usize] {
                    *l += j.e;
                }
                c.contents.push((i, s));
            }
            None => rejected.push(i),
        }
    }
    (c, rejected)
}

/// Run the pipeline at `T = T'(1 + k eps)` for increasing `k` until the
/// vertical LP is feasible, then collect cut and removed jobs in the
/// overflow container and put whatever does not fit back into the base.
pub fn schedule_lite(instance: &Instance, cfg: &LiteConfig) -> Result<LiteOutcome> {
    if cfg.eps <= ratio::zero() || cfg.eps > ratio::frac(1, 3) {
        return Err(Error::InvalidInput("epsilon must lie in (0, 1/3]".into()));
    }
    let tp = lower_bound(instance).t;
    let (reference, kind) = reference_plan(instance, cfg)?;
    let ref_peak = reference.peak(instance);
    let gamma = cfg.gamma.clone().unwrap_or_else(|| ratio::frac(3, 40) * &cfg.eps);
    let cap = {
        let a = ratio::int(2) * ratio::int(instance.area()) / instance.d();
        let e = ratio::int(2 * instance.e_max());
        let m = ratio::max(&ratio::max(&a, &e), &ratio::int(ref_peak));
        m + &cfg.eps * &tp
    };
    let mut k = 0u64;
    let (rung, t) = loop {
        let t = &tp * (ratio::one() + &cfg.eps * ratio::int(k));
        let last = &t + &cfg.eps * &tp > cap;
        let (cw, ch) = match cfg.variant {
            Variant::C1 => (&gamma * instance.d(), t.clone()),
            Variant::C2 => (instance.d(), ratio::int(instance.e_max())),
        };
        match run_rung(instance, cfg, &reference, &t, &gamma, (&cw, &ch), last) {
            Ok(r) => break (r, t),
            Err(Error::LpInfeasible) if !last => k += 1,
            Err(e) => return Err(e),
        }
    };
    let (cw, ch) = match cfg.variant {
        Variant::C1 => (&gamma * instance.d(), ratio::int(ratio::floor_u64(&t))),
        Variant::C2 => (instance.d(), ratio::int(instance.e_max())),
    };
    let (overflow, _) = fill_container(instance, &rung.overflow_candidates, &cw, &ch);
    let mut base = rung.placed;
    for &i in &rung.overflow_candidates {
        base.clear(i);
    }
    let in_overflow: BTreeSet<usize> = overflow.jobs().collect();
    let mut rest: Vec<usize> = (0..instance.len())
        .filter(|&i| base.get(i).is_none() && !in_overflow.contains(&i))
        .collect();
    rest.sort_by(|&a, &b| instance.job(b).area().cmp(&instance.job(a).area()).then(a.cmp(&b)));
    for i in rest {
        place_min_peak(instance, &mut base, i);
    }
    if !base.fits(instance) {
        return Err(Error::invariant("pipeline base misses the deadline"));
    }
    let base_peak = base.peak(instance);
    let slack_k = if ref_peak == 0 {
        ratio::zero()
    } else {
        (ratio::int(base_peak) / ratio::int(ref_peak) - ratio::one()) / &cfg.eps
    };
    Ok(LiteOutcome {
        base,
        overflow,
        reference,
        reference_kind: kind,
        reference_peak: ref_peak,
        base_peak,
        slack_k,
        t_used: t,
        rungs: k as usize + 1,
        classification: rung.cls,
        removed: rung.removed,
        fractional: rung.fractional,
        leftovers: rung.leftovers,
        vertical_lp: rung.vertical_lp,
    })
}

/// Load profile of the overflow container on its own.
pub fn container_profile(instance: &Instance, c: &Container) -> Profile {
    Profile::from_intervals(
        c.width(instance).max(1),
        c.contents.iter().map(|&(i, s)| (s, instance.job(i).p, instance.job(i).e)),
    )
}
