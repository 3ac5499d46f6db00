//! The `(5/3 + eps)` driver: two direct constructions for instances with
//! many tall or many wide jobs, and the pipeline-plus-repacking route for
//! everything else.

use serde::Serialize;

use crate::aeptas::{schedule_lite, LiteConfig, LiteOutcome};
use crate::bounds::{above, by_height, lower_bound, width_above};
use crate::error::{Error, Result};
use crate::model::{Instance, Plan, Schedule};
use crate::packing::{condition_parts, steinberg_condition, steinberg_pack, total_area, Bin, Rect};
use crate::ratio::{self, Q};
use crate::repack::{repack, RepackPath};

/// Accuracy parameters. `eps` is what the caller asked for; the
/// constructions run with `eps_eff = min(eps, 2/9)` so that `w <= 1/6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonParams {
    pub eps: Q,
    pub eps_eff: Q,
    pub eps_prime: Q,
    pub gamma: Q,
    pub w: Q,
}

impl EpsilonParams {
    pub fn new(eps: Q) -> Result<Self> {
        if eps <= ratio::zero() || eps > ratio::frac(1, 3) {
            return Err(Error::InvalidInput(format!(
                "epsilon must lie in (0, 1/3], got {}",
                ratio::format(&eps)
            )));
        }
        let w = ratio::min(&(ratio::frac(3, 4) * &eps), &ratio::frac(1, 6));
        let eps_eff = ratio::frac(4, 3) * &w;
        Ok(EpsilonParams {
            eps_prime: ratio::frac(3, 5) * &eps_eff,
            gamma: ratio::frac(3, 40) * &eps_eff,
            eps,
            eps_eff,
            w,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Case1A,
    Case1B,
    Case2,
    General,
}

/// Numbers behind one direct construction.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub branch: Branch,
    #[serde(with = "ratio::serde_q")]
    pub t: Q,
    #[serde(with = "ratio::serde_q")]
    pub rho: Q,
    #[serde(with = "ratio::serde_q")]
    pub lambda: Q,
    #[serde(with = "ratio::serde_q")]
    pub box_width: Q,
    #[serde(with = "ratio::serde_q")]
    pub box_height: Q,
    /// Left and right side of the area inequality chain.
    #[serde(with = "ratio::serde_q")]
    pub chain_lhs: Q,
    #[serde(with = "ratio::serde_q")]
    pub chain_rhs: Q,
    pub chain_holds: bool,
    /// The packing condition evaluated on the actual residual jobs.
    pub condition_holds: bool,
    pub residual: usize,
    pub peak: u64,
    #[serde(with = "ratio::serde_q")]
    pub guarantee: Q,
}

fn wide_at_least(instance: &Instance, f: &Q) -> u64 {
    let d = instance.d();
    instance
        .jobs()
        .iter()
        .filter(|j| ratio::int(j.p) >= f * &d)
        .map(|j| j.e)
        .sum()
}

pub fn case1_applies(instance: &Instance, t: &Q, params: &EpsilonParams) -> bool {
    ratio::int(width_above(instance, &ratio::frac(2, 3), t)) >= (ratio::one() - &params.w) * instance.d()
}

pub fn case2_applies(instance: &Instance, t: &Q) -> bool {
    ratio::int(wide_at_least(instance, &ratio::frac(3, 4))) > ratio::frac(2, 3) * t
}

fn check_t(instance: &Instance, t: &Q) -> Result<()> {
    let lb = lower_bound(instance).t;
    if *t < lb {
        return Err(Error::precondition(format!(
            "T = {} is below the lower bound {}",
            ratio::format(t),
            ratio::format(&lb)
        )));
    }
    Ok(())
}

fn rects_of(instance: &Instance, idx: &[usize]) -> Vec<Rect> {
    idx.iter()
        .map(|&i| {
            let j = instance.job(i);
            Rect::ints(i.to_string(), j.p, j.e)
        })
        .collect()
}

/// Steinberg-pack `idx` into `bin` and start each job at `offset + floor(x)`.
fn pack_residual(instance: &Instance, plan: &mut Plan, idx: &[usize], bin: &Bin, offset: u64) -> Result<bool> {
    if idx.is_empty() {
        return Ok(true);
    }
    let rects = rects_of(instance, idx);
    let holds = steinberg_condition(&rects, bin);
    if !holds {
        return Ok(false);
    }
    for p in steinberg_pack(&rects, bin)? {
        let i: usize = p.id.parse().expect("index id");
        plan.set(i, offset + ratio::floor_u64(&p.x));
    }
    Ok(true)
}

fn finish(instance: &Instance, plan: &Plan, guarantee: &Q, what: &str) -> Result<u64> {
    if !plan.is_complete() || !plan.fits(instance) {
        return Err(Error::invariant(format!("{what} produced an incomplete or late schedule")));
    }
    let peak = plan.peak(instance);
    if ratio::int(peak) > *guarantee {
        return Err(Error::invariant(format!(
            "{what} peak {peak} exceeds {}",
            ratio::format(guarantee)
        )));
    }
    Ok(peak)
}

/// Many tall jobs: L-shape of tall and wide jobs, a band of medium-height
/// jobs at the right end, and the rest packed into the box left over.
pub fn solve_case1(instance: &Instance, t: &Q, params: &EpsilonParams) -> Result<(Plan, CaseReport)> {
    check_t(instance, t)?;
    if !case1_applies(instance, t, params) {
        return Err(Error::precondition("w(e > 2T/3) < (1 - w) D"));
    }
    let d = instance.deadline();
    let dq = instance.d();
    let eps = &params.eps_eff;
    let w = &params.w;
    let half = ratio::frac(1, 2);
    let tall = instance.select(|j| above(j.e, &half, t));
    let wide_cut = &half + w;
    let wide: Vec<usize> = instance
        .select(|j| above(j.p, &wide_cut, &dq))
        .into_iter()
        .filter(|i| !tall.contains(i))
        .collect();
    let rho = ratio::int(instance.height_of(wide.iter().copied())) / t;
    let case_a = *eps <= &rho / ratio::int(2);
    let two_thirds = ratio::frac(2, 3);
    let box_h = (&two_thirds - &rho / ratio::int(2) + eps) * t;
    let lo = if case_a {
        ratio::frac(1, 3)
    } else {
        (&two_thirds + eps - &rho / ratio::int(2)) / ratio::int(2)
    };
    let mid: Vec<usize> = instance
        .select(|j| above(j.e, &lo, t) && !above(j.e, &half, t))
        .into_iter()
        .filter(|i| !wide.contains(i))
        .collect();
    let w_tall = instance.width_of(tall.iter().copied());
    let w_mid = instance.width_of(mid.iter().copied());
    if w_tall > d || w_mid > d {
        return Err(Error::ConditionViolated("tall or medium band wider than D".into()));
    }
    let mut plan = Plan::empty(instance.len());
    let mut x = 0;
    for i in by_height(instance, tall.iter().copied()) {
        plan.set(i, x);
        x += instance.job(i).p;
    }
    for &i in &wide {
        plan.set(i, d - instance.job(i).p);
    }
    let mut x = d;
    for &i in &mid {
        x -= instance.job(i).p;
        plan.set(i, x);
    }
    let residual: Vec<usize> = (0..instance.len()).filter(|&i| plan.get(i).is_none()).collect();
    let lambda = ratio::int(w_mid) / &dq;
    let box_w = ratio::int(d - w_mid);

    let dt = &dq * t;
    let base = &dt - &two_thirds * t * (ratio::one() - w) * &dq - &rho * t * &wide_cut * &dq;
    let (lhs, rhs) = if case_a {
        let lhs = ratio::int(2) * (base - ratio::frac(1, 3) * t * &lambda * &dq);
        let sub = ratio::pos((&rho / ratio::int(2) - eps) * t) * ratio::pos((ratio::int(2) * w + &lambda) * &dq);
        (lhs, &box_w * &box_h - sub)
    } else {
        let lhs = ratio::int(2) * (base - &box_h / ratio::int(2) * &lambda * &dq);
        (lhs, &box_w * &box_h)
    };
    let chain_holds = lhs <= rhs;
    let bin = Bin::new(box_w.clone(), box_h.clone());
    let condition_holds = pack_residual(instance, &mut plan, &residual, &bin, 0)?;
    if !condition_holds {
        return Err(Error::ConditionViolated(format!(
            "residual jobs do not satisfy the packing condition in {} x {}",
            ratio::format(&box_w),
            ratio::format(&box_h)
        )));
    }
    let guarantee = (ratio::frac(5, 3) + eps) * t;
    let peak = finish(instance, &plan, &guarantee, "case 1")?;
    Ok((
        plan,
        CaseReport {
            branch: if case_a { Branch::Case1A } else { Branch::Case1B },
            t: t.clone(),
            rho,
            lambda,
            box_width: box_w,
            box_height: box_h,
            chain_lhs: lhs,
            chain_rhs: rhs,
            chain_holds,
            condition_holds,
            residual: residual.len(),
            peak,
            guarantee,
        },
    ))
}

/// Many wide jobs: wide jobs end at `D`, tall jobs start at 0, and the rest
/// is packed above the wide jobs right of the tall ones.
pub fn solve_case2(instance: &Instance, t: &Q, _params: &EpsilonParams) -> Result<(Plan, CaseReport)> {
    check_t(instance, t)?;
    if !case2_applies(instance, t) {
        return Err(Error::precondition("h(p >= 3D/4) <= 2T/3"));
    }
    let d = instance.deadline();
    let dq = instance.d();
    let half = ratio::frac(1, 2);
    let wide = instance.select(|j| 2 * j.p > d);
    let seq: Vec<usize> = instance
        .select(|j| above(j.e, &half, t))
        .into_iter()
        .filter(|i| !wide.contains(i))
        .collect();
    let w_seq = instance.width_of(seq.iter().copied());
    if w_seq > d {
        return Err(Error::ConditionViolated("tall jobs wider than D".into()));
    }
    let mut plan = Plan::empty(instance.len());
    let mut x = 0;
    for i in by_height(instance, seq.iter().copied()) {
        plan.set(i, x);
        x += instance.job(i).p;
    }
    for &i in &wide {
        plan.set(i, d - instance.job(i).p);
    }
    let residual: Vec<usize> = (0..instance.len()).filter(|&i| plan.get(i).is_none()).collect();
    let rho = ratio::int(instance.height_of(wide.iter().copied())) / t - ratio::frac(2, 3);
    let lambda = ratio::int(w_seq) / &dq;
    let box_w = ratio::int(d - w_seq);
    let box_h = (ratio::one() - &rho) * t;
    let dt = &dq * t;
    let lhs = ratio::int(2) * (&dt - (&half + &rho / ratio::int(2)) * &dt - t / ratio::int(2) * &lambda * &dq);
    let rhs = (ratio::one() - &lambda) * (ratio::one() - &rho) * &dt - &rho * t * &lambda * &dq;
    let chain_holds = lhs <= rhs;
    let bin = Bin::new(box_w.clone(), box_h.clone());
    let condition_holds = pack_residual(instance, &mut plan, &residual, &bin, w_seq)?;
    if !condition_holds {
        return Err(Error::ConditionViolated(format!(
            "residual jobs do not satisfy the packing condition in {} x {}",
            ratio::format(&box_w),
            ratio::format(&box_h)
        )));
    }
    let guarantee = ratio::frac(5, 3) * t;
    let peak = finish(instance, &plan, &guarantee, "case 2")?;
    Ok((
        plan,
        CaseReport {
            branch: Branch::Case2,
            t: t.clone(),
            rho,
            lambda,
            box_width: box_w,
            box_height: box_h,
            chain_lhs: lhs,
            chain_rhs: rhs,
            chain_holds,
            condition_holds,
            residual: residual.len(),
            peak,
            guarantee,
        },
    ))
}

/// What the general route did.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralReport {
    pub reference: String,
    pub reference_peak: u64,
    pub lite_base_peak: u64,
    /// `lite` when the pipeline base was used, `reference` when it was too
    /// far above the reference peak.
    pub base_source: String,
    pub overflow_jobs: usize,
    pub repack_t: u64,
    pub repack: RepackPath,
    #[serde(with = "ratio::serde_q")]
    pub slack_k: Q,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub branch: Branch,
    #[serde(with = "ratio::serde_q")]
    pub t_prime: Q,
    #[serde(with = "ratio::serde_q")]
    pub eps: Q,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub general: Option<GeneralReport>,
    pub peak: u64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub plan: Plan,
    pub schedule: Schedule,
    pub peak: u64,
    pub certificate: Certificate,
}

fn general(instance: &Instance, params: &EpsilonParams) -> Result<(Plan, GeneralReport)> {
    let cfg = LiteConfig::new(params.eps_eff.clone());
    let lite: LiteOutcome = schedule_lite(instance, &cfg)?;
    let bar = (ratio::one() + &params.eps_prime) * ratio::int(lite.reference_peak);
    let from_lite = ratio::int(lite.base_peak) <= bar;
    let (base, overflow) = if from_lite {
        (lite.base.clone(), lite.overflow.clone())
    } else {
        (
            lite.reference.clone(),
            crate::repack::Container::empty(lite.overflow.width_budget.clone(), lite.overflow.height_budget.clone()),
        )
    };
    let t = base
        .peak(instance)
        .max(overflow.height(instance))
        .max(ratio::ceil_u64(&lower_bound(instance).t));
    let mut overflow = overflow;
    // the container height budget may not exceed the T handed to repack
    if overflow.height_budget > ratio::int(t) {
        overflow.height_budget = ratio::int(t);
    }
    let out = repack(instance, &base, t, &overflow, params)?;
    Ok((
        out.plan,
        GeneralReport {
            reference: lite.reference_kind.clone(),
            reference_peak: lite.reference_peak,
            lite_base_peak: lite.base_peak,
            base_source: if from_lite { "lite" } else { "reference" }.into(),
            overflow_jobs: overflow.contents.len(),
            repack_t: t,
            repack: out.path,
            slack_k: lite.slack_k,
        },
    ))
}

/// Dispatch on the lower bound `T'` and return a schedule together with a
/// certificate of which construction produced it.
pub fn solve(instance: &Instance, eps: &Q) -> Result<Solution> {
    let params = EpsilonParams::new(eps.clone())?;
    let tp = lower_bound(instance).t;
    let (plan, case, general_report, branch) = if case1_applies(instance, &tp, &params) {
        let (p, r) = solve_case1(instance, &tp, &params)?;
        let b = r.branch;
        (p, Some(r), None, b)
    } else if case2_applies(instance, &tp) {
        let (p, r) = solve_case2(instance, &tp, &params)?;
        (p, Some(r), None, Branch::Case2)
    } else {
        let (p, g) = general(instance, &params)?;
        (p, None, Some(g), Branch::General)
    };
    let schedule = plan.to_schedule(instance);
    let violations = crate::model::validate(instance, &schedule);
    if !violations.is_empty() {
        return Err(Error::invariant(format!("solver emitted an invalid schedule: {violations:?}")));
    }
    let peak = plan.peak(instance);
    Ok(Solution {
        plan,
        schedule,
        peak,
        certificate: Certificate {
            branch,
            t_prime: tp,
            eps: eps.clone(),
            case,
            general: general_report,
            peak,
        },
    })
}

/// The packing condition for a box, exposed for the chain checks in tests.
pub fn residual_condition(instance: &Instance, idx: &[usize], bin: &Bin) -> bool {
    let rects = rects_of(instance, idx);
    if rects.is_empty() {
        return true;
    }
    let wmax = rects.iter().map(|r| r.w.clone()).max().unwrap();
    let hmax = rects.iter().map(|r| r.h.clone()).max().unwrap();
    condition_parts(&total_area(&rects), &wmax, &hmax, &bin.w, &bin.h)
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

    #[test]
    fn params() {
        let p = EpsilonParams::new(ratio::frac(1, 10)).unwrap();
        assert_eq!(p.w, ratio::frac(3, 40));
        assert_eq!(p.gamma, ratio::frac(3, 400));
        assert_eq!(p.eps_prime, ratio::frac(3, 50));
        let p = EpsilonParams::new(ratio::frac(1, 3)).unwrap();
        assert_eq!(p.w, ratio::frac(1, 6));
        assert_eq!(p.eps_eff, ratio::frac(2, 9));
        assert!(EpsilonParams::new(ratio::zero()).is_err());
        assert!(EpsilonParams::new(ratio::frac(1, 2)).is_err());
    }

    #[test]
    fn case1_example() {
        let x = inst(12, &[(3, 9), (3, 9), (3, 9), (3, 9)]);
        let params = EpsilonParams::new(ratio::frac(1, 3)).unwrap();
        let t = ratio::int(13);
        assert!(case1_applies(&x, &t, &params));
        let (plan, r) = solve_case1(&x, &t, &params).unwrap();
        assert!(r.chain_holds && r.condition_holds);
        assert_eq!(r.residual, 0);
        assert!(ratio::int(plan.peak(&x)) <= ratio::int(2) * &t);
        // with T = 27/2 no job is above 2T/3
        assert!(!case1_applies(&x, &ratio::frac(27, 2), &params));
        assert!(matches!(
            solve_case1(&x, &ratio::frac(27, 2), &params),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn case2_example() {
        let x = inst(8, &[(6, 3), (7, 3)]);
        let params = EpsilonParams::new(ratio::frac(1, 3)).unwrap();
        let t = ratio::int(8);
        assert!(case2_applies(&x, &t));
        let (plan, r) = solve_case2(&x, &t, &params).unwrap();
        assert_eq!(r.residual, 0);
        assert_eq!(plan.peak(&x), 6);
        assert!(r.chain_holds);
        let y = inst(8, &[(2, 3)]);
        assert!(matches!(solve_case2(&y, &ratio::int(3), &params), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn solve_fixtures() {
        let eps = ratio::frac(1, 3);
        let b = inst(10, &[(6, 3), (6, 4)]);
        let s = solve(&b, &eps).unwrap();
        assert_eq!(s.peak, 7);
        let c = inst(10, &[(4, 9), (4, 9), (4, 9)]);
        let s = solve(&c, &eps).unwrap();
        assert!(s.peak == 18 || s.peak == 27);
    }
}
