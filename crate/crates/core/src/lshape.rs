//! L-shaped placement: tall jobs left-aligned in order of decreasing energy,
//! wide jobs right-aligned so that they all end at the deadline.

use crate::bounds::{by_height, lower_bound};
use crate::error::{Error, Result};
use crate::model::{Instance, Plan, Schedule};
use crate::ratio::{self, Q};

/// Place `seq` side by side from time 0 (tallest first) and let every job of
/// `wide` end at `D`. Other jobs stay unplaced.
pub fn lshape_plan(instance: &Instance, seq: &[usize], wide: &[usize]) -> Result<Plan> {
    if let Some(i) = seq.iter().find(|i| wide.contains(i)) {
        return Err(Error::InvalidInput(format!(
            "job `{}` is in both the sequence and the wide set",
            instance.job(*i).id
        )));
    }
    let width = instance.width_of(seq.iter().copied());
    if width > instance.deadline() {
        return Err(Error::precondition(format!(
            "sequence width {width} exceeds the deadline {}",
            instance.deadline()
        )));
    }
    let mut plan = Plan::empty(instance.len());
    let mut t = 0;
    for i in by_height(instance, seq.iter().copied()) {
        plan.set(i, t);
        t += instance.job(i).p;
    }
    for &i in wide {
        plan.set(i, instance.deadline() - instance.job(i).p);
    }
    Ok(plan)
}

pub fn lshape_schedule(instance: &Instance, seq: &[&str], wide: &[&str]) -> Result<Schedule> {
    let seq: Vec<usize> = seq.iter().map(|id| instance.require(id)).collect::<Result<_>>()?;
    let wide: Vec<usize> = wide.iter().map(|id| instance.require(id)).collect::<Result<_>>()?;
    Ok(lshape_plan(instance, &seq, &wide)?.to_schedule(instance))
}

#[derive(Debug, Clone)]
pub struct LshapeCheck {
    pub plan: Plan,
    pub seq: Vec<usize>,
    pub wide: Vec<usize>,
    pub t: Q,
    pub peak: u64,
    /// `T + h(wide)/2`
    pub bound: Q,
}

/// Build the L-shape for `seq = {e > T/2}` and `wide = {p > D/2} \ seq`
/// with `T` the combined lower bound, and check the peak against
/// `T + h(wide)/2`.
pub fn lshape_bound_check(instance: &Instance) -> Result<LshapeCheck> {
    let t = lower_bound(instance).t;
    let half = ratio::frac(1, 2);
    let seq = instance.select(|j| crate::bounds::above(j.e, &half, &t));
    let d = instance.deadline();
    let wide: Vec<usize> = instance
        .select(|j| 2 * j.p > d)
        .into_iter()
        .filter(|i| !seq.contains(i))
        .collect();
    let plan = lshape_plan(instance, &seq, &wide)?;
    let mut members = seq.clone();
    members.extend(&wide);
    let peak = plan.profile_of(instance, &members).max();
    let bound = &t + Q::new(instance.height_of(wide.iter().copied()).into(), 2.into());
    if ratio::int(peak) > bound {
        return Err(Error::invariant(format!(
            "L-shape peak {peak} exceeds T + h(wide)/2 = {}",
            ratio::format(&bound)
        )));
    }
    Ok(LshapeCheck {
        plan,
        seq,
        wide,
        t,
        peak,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{profile, Job};

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

    #[test]
    fn example_shape() {
        let x = inst(10, &[(2, 10), (2, 8), (9, 4)]);
        let s = lshape_schedule(&x, &["j1", "j2"], &["j3"]).unwrap();
        assert_eq!(s.start_of("j1"), Some(0));
        assert_eq!(s.start_of("j2"), Some(2));
        assert_eq!(s.start_of("j3"), Some(1));
        let p = profile(&x, Some(&["j1", "j2", "j3"]), &s).unwrap();
        assert_eq!(p.max(), 14);
        assert_eq!(p.level_at(1), 14);
    }

    #[test]
    fn degenerate_sets() {
        let x = inst(10, &[(2, 10), (2, 8), (9, 4), (8, 3)]);
        let s = lshape_plan(&x, &[0, 1], &[]).unwrap();
        assert_eq!(s.profile_of(&x, &[0, 1]).max(), 10);
        let s = lshape_plan(&x, &[], &[2, 3]).unwrap();
        assert_eq!(s.profile_of(&x, &[2, 3]).max(), 7);
        assert!(lshape_plan(&x, &[2, 3], &[]).is_err());
        assert!(lshape_plan(&x, &[0], &[0]).is_err());
    }

    #[test]
    fn bound_check_fixtures() {
        let e = inst(10, &[(2, 10), (9, 4), (9, 4)]);
        let c = lshape_bound_check(&e).unwrap();
        assert_eq!(c.t, ratio::int(14));
        assert_eq!(c.peak, 18);
        assert_eq!(c.bound, ratio::int(18));
        let a = inst(10, &[(10, 5)]);
        assert_eq!(lshape_bound_check(&a).unwrap().peak, 5);
        let b = inst(10, &[(6, 3), (6, 4)]);
        let c = lshape_bound_check(&b).unwrap();
        assert_eq!(c.seq, vec![1]);
        assert_eq!(c.wide, vec![0]);
        assert!(ratio::int(c.peak) <= ratio::int(7) + ratio::frac(3, 2));
    }
}
