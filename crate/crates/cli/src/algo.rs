use std::fmt;

use peakpack::approx::{self, EpsilonParams};
use peakpack::exact::{self, Limits};
use peakpack::packing::{self, Rect};
use peakpack::{bounds, lshape, ratio, Error, Instance, Plan, Q, Result};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Auto,
    Case1,
    Case2,
    Lshape,
    Ffdh,
    Nfdh,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Case1 => "case1",
            Algorithm::Case2 => "case2",
            Algorithm::Lshape => "lshape",
            Algorithm::Ffdh => "ffdh",
            Algorithm::Nfdh => "nfdh",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A complete plan plus a JSON description of how it was obtained.
pub struct Run {
    pub plan: Plan,
    pub peak: u64,
    pub certificate: Value,
}

fn shelf_plan(instance: &Instance, next_fit: bool) -> Result<Plan> {
    if !next_fit {
        return peakpack::aeptas::ffdh_reference(instance);
    }
    let rects: Vec<Rect> = instance
        .jobs()
        .iter()
        .enumerate()
        .map(|(i, j)| Rect::ints(i.to_string(), j.p, j.e))
        .collect();
    let pack = packing::nfdh(&rects, &instance.d())?;
    let mut plan = Plan::empty(instance.len());
    for p in pack.placements {
        plan.set(p.id.parse().expect("index id"), ratio::floor_u64(&p.x));
    }
    Ok(plan)
}

fn lshape_full(instance: &Instance) -> Result<(Plan, Value)> {
    let check = lshape::lshape_bound_check(instance)?;
    let mut plan = check.plan.clone();
    for i in 0..instance.len() {
        if plan.get(i).is_none() {
            peakpack::model::place_min_peak(instance, &mut plan, i);
        }
    }
    let cert = json!({
        "t": ratio::format(&check.t),
        "members_peak": check.peak,
        "bound": ratio::format(&check.bound),
        "seq": check.seq.iter().map(|&i| &instance.job(i).id).collect::<Vec<_>>(),
        "wide": check.wide.iter().map(|&i| &instance.job(i).id).collect::<Vec<_>>(),
    });
    Ok((plan, cert))
}

/// Run one algorithm and check its output before handing it back.
pub fn run(instance: &Instance, algorithm: Algorithm, eps: &Q, limits: Limits) -> Result<Run> {
    let tp = bounds::lower_bound(instance).t;
    let (plan, detail) = match algorithm {
        Algorithm::Auto => {
            let sol = approx::solve(instance, eps)?;
            let cert = serde_json::to_value(&sol.certificate).expect("certificate serialises");
            (sol.plan, cert)
        }
        Algorithm::Case1 => {
            let params = EpsilonParams::new(eps.clone())?;
            let (plan, report) = approx::solve_case1(instance, &tp, &params)?;
            (plan, serde_json::to_value(&report).expect("report serialises"))
        }
        Algorithm::Case2 => {
            let params = EpsilonParams::new(eps.clone())?;
            let (plan, report) = approx::solve_case2(instance, &tp, &params)?;
            (plan, serde_json::to_value(&report).expect("report serialises"))
        }
        Algorithm::Lshape => lshape_full(instance)?,
        Algorithm::Ffdh => (shelf_plan(instance, false)?, Value::Null),
        Algorithm::Nfdh => (shelf_plan(instance, true)?, Value::Null),
        Algorithm::Exact => {
            let sol = exact::exact_opt(instance, limits)?;
            (sol.plan, json!({ "opt": sol.opt, "nodes": sol.nodes }))
        }
    };
    ensure_valid(instance, &plan)?;
    let peak = plan.peak(instance);
    let certificate = json!({
        "algorithm": algorithm.name(),
        "t_prime": ratio::format(&tp),
        "peak": peak,
        "detail": detail,
    });
    Ok(Run {
        plan,
        peak,
        certificate,
    })
}

pub fn ensure_valid(instance: &Instance, plan: &Plan) -> Result<()> {
    let violations = peakpack::validate(instance, &plan.to_schedule(instance));
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InternalInvariant(format!(
            "refusing to emit an invalid schedule: {}",
            violations[0]
        )))
    }
}
