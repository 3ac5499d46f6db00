//! Lower bounds on the optimal peak.
//!
//! All set predicates of the form "height above a fraction of T" are strict
//! and go through [`above`], so the convention lives in one place.

use serde::Serialize;

use crate::model::Instance;
use crate::ratio::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBounds {
    #[serde(with = "ratio::serde_q")]
    pub t1: Q,
    #[serde(with = "ratio::serde_q")]
    pub t2: Q,
    #[serde(with = "ratio::serde_q")]
    pub t3: Q,
    #[serde(with = "ratio::serde_q")]
    pub t4: Q,
    #[serde(with = "ratio::serde_q")]
    pub t: Q,
}

/// `value > f * t`, the one threshold predicate used by every bound.
pub fn above(value: u64, f: &Q, t: &Q) -> bool {
    ratio::int(value) > f * t
}

/// Total width of jobs whose energy is strictly above `f * t`.
pub fn width_above(instance: &Instance, f: &Q, t: &Q) -> u64 {
    instance
        .jobs()
        .iter()
        .filter(|j| above(j.e, f, t))
        .map(|j| j.p)
        .sum()
}

/// Total energy of jobs whose processing time is strictly above `f * D`.
pub fn height_wider_than(instance: &Instance, f: &Q) -> u64 {
    let d = instance.d();
    instance
        .jobs()
        .iter()
        .filter(|j| above(j.p, f, &d))
        .map(|j| j.e)
        .sum()
}

pub fn t1(instance: &Instance) -> Q {
    let d = instance.deadline();
    let avg = Q::new(instance.area().into(), d.into());
    let wide: u64 = instance
        .jobs()
        .iter()
        .filter(|j| 2 * j.p > d)
        .map(|j| j.e)
        .sum();
    let mut t = ratio::int(instance.e_max());
    t = ratio::max(&t, &avg);
    ratio::max(&t, &ratio::int(wide))
}

fn t2_holds(instance: &Instance, t: &Q) -> bool {
    let d = instance.deadline();
    let w13 = width_above(instance, &ratio::frac(1, 3), t);
    let w23 = width_above(instance, &ratio::frac(2, 3), t);
    let w12 = width_above(instance, &ratio::frac(1, 2), t);
    w13 + w23 <= 2 * d && w12 <= d
}

/// Smallest `T` for which the two width conditions hold, together with the
/// number of descent steps taken.
///
/// The descent starts from zero rather than from `T1`: the minimum can lie
/// below `T1` and starting above it would overshoot. Every step jumps to the
/// next value at which one of the three threshold sets loses a job, so the
/// loop runs at most `3n` times.
pub fn t2_with_steps(instance: &Instance) -> (Q, usize) {
    let mut t = ratio::zero();
    let mut steps = 0;
    let levels = [
        (ratio::frac(1, 3), ratio::int(3)),
        (ratio::frac(2, 3), ratio::frac(3, 2)),
        (ratio::frac(1, 2), ratio::int(2)),
    ];
    while !t2_holds(instance, &t) {
        let mut next: Option<Q> = None;
        for (f, inv) in &levels {
            let smallest = instance
                .jobs()
                .iter()
                .filter(|j| above(j.e, f, &t))
                .map(|j| j.e)
                .min();
            if let Some(h) = smallest {
                let cand = ratio::int(h) * inv;
                next = Some(match next {
                    Some(n) if n <= cand => n,
                    _ => cand,
                });
            }
        }
        // at least one set is non-empty while a condition fails
        t = next.expect("violated condition implies non-empty set");
        steps += 1;
    }
    (t, steps)
}

pub fn t2(instance: &Instance) -> Q {
    t2_with_steps(instance).0
}

/// Jobs sorted by non-increasing energy, ties by id.
pub fn by_height(instance: &Instance, idx: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = idx.into_iter().collect();
    v.sort_by(|&a, &b| {
        let (ja, jb) = (instance.job(a), instance.job(b));
        jb.e.cmp(&ja.e).then_with(|| ja.id.cmp(&jb.id))
    });
    v
}

/// Prefixes `I_k` of `order` whose total width stays within `D`, as
/// `(k-th job, prefix width, membership mask)`.
fn prefixes(instance: &Instance, order: &[usize]) -> Vec<(usize, u64, Vec<bool>)> {
    let d = instance.deadline();
    let mut out = Vec::new();
    let mut width = 0;
    let mut mask = vec![false; instance.len()];
    for &i in order {
        width += instance.job(i).p;
        if width > d {
            break;
        }
        mask[i] = true;
        out.push((i, width, mask.clone()));
    }
    out
}

pub fn t3a(instance: &Instance) -> Q {
    let d = instance.deadline() as u128;
    let order = by_height(instance, 0..instance.len());
    let mut best = ratio::zero();
    for (ik, wk, mask) in prefixes(instance, &order) {
        let h = instance.job(ik).e;
        // w(i) > D - w(I_k)/2  <=>  2w(i) > 2D - w(I_k)
        let x: u64 = instance
            .jobs()
            .iter()
            .enumerate()
            .filter(|&(i, j)| !mask[i] && 2 * j.p as u128 > 2 * d - wk as u128)
            .map(|(_, j)| j.e)
            .sum();
        let v = ratio::int((h + x).min(2 * h));
        best = ratio::max(&best, &v);
    }
    best
}

/// Same as [`t3a`] but the prefix is drawn from jobs of width at most `D/2`.
/// The wide set is disjoint from such a prefix, so nothing is subtracted.
pub fn t3b(instance: &Instance) -> Q {
    let d = instance.deadline() as u128;
    let narrow = instance.select(|j| 2 * j.p as u128 <= d);
    let order = by_height(instance, narrow);
    let mut best = ratio::zero();
    for (ik, wk, _) in prefixes(instance, &order) {
        let h = instance.job(ik).e;
        let x: u64 = instance
            .jobs()
            .iter()
            .filter(|j| 2 * j.p as u128 > 2 * d - wk as u128)
            .map(|j| j.e)
            .sum();
        let v = ratio::int((h + x).min(2 * h));
        best = ratio::max(&best, &v);
    }
    best
}

pub fn t3(instance: &Instance) -> Q {
    ratio::max(&t3a(instance), &t3b(instance))
}

pub fn t4(instance: &Instance) -> Q {
    let d = instance.deadline();
    let order = by_height(instance, 0..instance.len());
    let mut best = ratio::zero();
    for (ik, wk, mask) in prefixes(instance, &order) {
        let h = instance.job(ik).e;
        // w(i) > max(D - w(I_k), D/2), compared on doubled integers
        let thr2 = (2 * (d - wk)).max(d);
        let x: u64 = instance
            .jobs()
            .iter()
            .enumerate()
            .filter(|&(i, j)| !mask[i] && 2 * j.p > thr2)
            .map(|(_, j)| j.e)
            .sum();
        let v = ratio::min(
            &ratio::int(2 * h),
            &(ratio::int(h) + Q::new(x.into(), 2.into())),
        );
        best = ratio::max(&best, &v);
    }
    best
}

pub fn lower_bound(instance: &Instance) -> LowerBounds {
    let (t1, t2, t3, t4) = (t1(instance), t2(instance), t3(instance), t4(instance));
    let t = [&t2, &t3, &t4]
        .into_iter()
        .fold(t1.clone(), |m, x| ratio::max(&m, x));
    LowerBounds { t1, t2, t3, t4, t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

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

    /// Smallest candidate breakpoint satisfying the conditions, by scan.
    fn t2_scan(instance: &Instance) -> Q {
        let mut cands = vec![ratio::zero()];
        for j in instance.jobs() {
            cands.push(ratio::int(3 * j.e));
            cands.push(ratio::frac(3 * j.e as i64, 2));
            cands.push(ratio::int(2 * j.e));
        }
        cands.sort();
        cands.into_iter().find(|t| t2_holds(instance, t)).unwrap()
    }

    #[test]
    fn fixture_a() {
        let a = inst(10, &[(10, 5)]);
        let lb = lower_bound(&a);
        assert_eq!(lb.t1, ratio::int(5));
        assert_eq!(lb.t2, ratio::int(0));
        assert_eq!(lb.t3, ratio::int(5));
        assert_eq!(lb.t4, ratio::int(5));
        assert_eq!(lb.t, ratio::int(5));
    }

    #[test]
    fn fixture_b() {
        let b = inst(10, &[(6, 3), (6, 4)]);
        assert_eq!(t1(&b), ratio::int(7));
        assert_eq!(t2(&b), ratio::int(6));
        assert_eq!(t2_scan(&b), ratio::int(6));
        assert_eq!(lower_bound(&b).t, ratio::int(7));
    }

    #[test]
    fn fixture_c() {
        let c = inst(10, &[(4, 9), (4, 9), (4, 9)]);
        assert_eq!(t1(&c), ratio::frac(54, 5));
        assert_eq!(t2(&c), ratio::int(18));
        assert_eq!(lower_bound(&c).t, ratio::int(18));
    }

    #[test]
    fn fixture_d() {
        let d = inst(10, &[(2, 10), (10, 4)]);
        assert_eq!(t3(&d), ratio::int(14));
        assert_eq!(lower_bound(&d).t, ratio::int(14));
    }

    #[test]
    fn fixture_e() {
        let e = inst(10, &[(2, 10), (9, 4), (9, 4)]);
        assert_eq!(t4(&e), ratio::int(14));
        assert_eq!(t1(&e), ratio::int(10));
        assert_eq!(t2(&e), ratio::int(12));
        assert_eq!(t3(&e), ratio::int(10));
    }

    #[test]
    fn no_prefix_fits() {
        let x = inst(5, &[(4, 3), (4, 3)]);
        // first prefix fits, so check a case where even the tallest is too wide
        assert!(t4(&x) > ratio::zero());
        let y = inst(3, &[(3, 1)]);
        assert_eq!(t3b(&y), ratio::zero());
    }

    #[test]
    fn descent_matches_scan_on_small_grid() {
        for d in 1..=6u64 {
            for p1 in 1..=d {
                for p2 in 1..=d {
                    for e1 in 1..=4 {
                        for e2 in 1..=4 {
                            let x = inst(d, &[(p1, e1), (p2, e2), (p1.min(p2), e1 + e2)]);
                            let (t, steps) = t2_with_steps(&x);
                            assert_eq!(t, t2_scan(&x));
                            assert!(steps <= 3 * x.len());
                        }
                    }
                }
            }
        }
    }
}
