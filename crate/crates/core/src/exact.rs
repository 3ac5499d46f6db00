//! Branch and bound over integer start times. Meant as ground truth for
//! small instances, not as a production solver.

use std::time::{Duration, Instant};

use crate::bounds::lower_bound;
use crate::error::{Error, Result};
use crate::model::{place_min_peak, Instance, Plan, Schedule};
use crate::ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: Some(20_000_000),
            time_budget: None,
        }
    }
}

impl Limits {
    pub fn nodes(n: u64) -> Self {
        Limits {
            max_nodes: Some(n),
            time_budget: None,
        }
    }

    pub fn unlimited() -> Self {
        Limits {
            max_nodes: None,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub opt: u64,
    pub plan: Plan,
    pub schedule: Schedule,
    pub nodes: u64,
}

struct Abort;

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    // position in `order` of the previous identical job, if any
    twin: Vec<Option<usize>>,
    suffix_area: Vec<u128>,
    loads: Vec<u64>,
    starts: Vec<u64>,
    cap: u64,
    used: u128,
    nodes: u64,
    limits: Limits,
    clock: Instant,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) -> std::result::Result<bool, Abort> {
        if depth == self.order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.limits.max_nodes.is_some_and(|m| self.nodes > m) {
            return Err(Abort);
        }
        if self.nodes.is_multiple_of(4096)
            && self
                .limits
                .time_budget
                .is_some_and(|b| self.clock.elapsed() > b)
        {
            return Err(Abort);
        }
        let d = self.inst.deadline();
        if self.suffix_area[depth] > self.cap as u128 * d as u128 - self.used {
            return Ok(false);
        }
        let j = self.order[depth];
        let (p, e) = (self.inst.job(j).p, self.inst.job(j).e);
        let lo = self.twin[depth].map_or(0, |q| self.starts[q]);
        let mut hi = d - p;
        if depth == 0 {
            hi /= 2;
        }
        for s in lo..=hi {
            let window = &self.loads[s as usize..(s + p) as usize];
            if window.iter().any(|&l| l + e > self.cap) {
                continue;
            }
            for l in &mut self.loads[s as usize..(s + p) as usize] {
                *l += e;
            }
            self.used += p as u128 * e as u128;
            self.starts[depth] = s;
            let ok = self.dfs(depth + 1);
            for l in &mut self.loads[s as usize..(s + p) as usize] {
                *l -= e;
            }
            self.used -= p as u128 * e as u128;
            if ok? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn search_order(instance: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (instance.job(a), instance.job(b));
        y.area()
            .cmp(&x.area())
            .then(y.e.cmp(&x.e))
            .then(y.p.cmp(&x.p))
            .then_with(|| x.id.cmp(&y.id))
    });
    order
}

fn run(instance: &Instance, cap: u64, limits: Limits, nodes: &mut u64) -> std::result::Result<Option<Plan>, Abort> {
    if instance.e_max() > cap {
        return Ok(None);
    }
    let order = search_order(instance);
    let mut twin = vec![None; order.len()];
    for k in 1..order.len() {
        let (a, b) = (instance.job(order[k - 1]), instance.job(order[k]));
        if a.p == b.p && a.e == b.e {
            twin[k] = Some(k - 1);
        }
    }
    let mut suffix_area = vec![0u128; order.len() + 1];
    for k in (0..order.len()).rev() {
        suffix_area[k] = suffix_area[k + 1] + instance.job(order[k]).area();
    }
    let mut s = Search {
        inst: instance,
        twin,
        suffix_area,
        loads: vec![0; instance.deadline() as usize],
        starts: vec![0; order.len()],
        order,
        cap,
        used: 0,
        nodes: *nodes,
        limits,
        clock: Instant::now(),
    };
    let found = s.dfs(0);
    *nodes = s.nodes;
    if found? {
        let mut plan = Plan::empty(instance.len());
        for (k, &j) in s.order.iter().enumerate() {
            plan.set(j, s.starts[k]);
        }
        Ok(Some(plan))
    } else {
        Ok(None)
    }
}

/// Is there a schedule with peak at most `cap`?
pub fn exact_decision(instance: &Instance, cap: u64, limits: Limits) -> Result<Option<Plan>> {
    let mut nodes = 0;
    run(instance, cap, limits, &mut nodes).map_err(|_| Error::ResourceExceeded { nodes, best: None })
}

/// Greedy incumbent: largest area first, each at its lowest window.
pub fn greedy(instance: &Instance) -> Plan {
    let mut plan = Plan::empty(instance.len());
    for j in search_order(instance) {
        place_min_peak(instance, &mut plan, j);
    }
    plan
}

pub fn exact_opt(instance: &Instance, limits: Limits) -> Result<ExactSolution> {
    let floor_bound = ratio::ceil_u64(&lower_bound(instance).t);
    let mut best = greedy(instance);
    let mut best_peak = best.peak(instance);
    let mut nodes = 0;
    let clock = Instant::now();
    while best_peak > floor_bound {
        let mut lim = limits;
        if let Some(b) = limits.time_budget {
            lim.time_budget = Some(b.saturating_sub(clock.elapsed()));
        }
        match run(instance, best_peak - 1, lim, &mut nodes) {
            Ok(Some(plan)) => {
                best_peak = plan.peak(instance);
                best = plan;
            }
            Ok(None) => break,
            Err(Abort) => {
                return Err(Error::ResourceExceeded {
                    nodes,
                    best: Some(Box::new((best_peak, best.to_schedule(instance)))),
                })
            }
        }
    }
    Ok(ExactSolution {
        opt: best_peak,
        schedule: best.to_schedule(instance),
        plan: best,
        nodes,
    })
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

    /// Plain enumeration of every start vector.
    fn brute(instance: &Instance) -> u64 {
        let n = instance.len();
        let d = instance.deadline();
        let mut starts = vec![0u64; n];
        let mut best = u64::MAX;
        loop {
            let mut loads = vec![0u64; d as usize];
            for (i, &s) in starts.iter().enumerate() {
                let j = instance.job(i);
                for t in s..s + j.p {
                    loads[t as usize] += j.e;
                }
            }
            best = best.min(*loads.iter().max().unwrap());
            let mut k = 0;
            loop {
                if k == n {
                    return best;
                }
                starts[k] += 1;
                if starts[k] + instance.job(k).p <= d {
                    break;
                }
                starts[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn fixtures() {
        let b = inst(10, &[(6, 3), (6, 4)]);
        let c = inst(10, &[(4, 9), (4, 9), (4, 9)]);
        let d = inst(10, &[(2, 10), (10, 4)]);
        let e = inst(10, &[(2, 10), (9, 4), (9, 4)]);
        assert_eq!(exact_opt(&b, Limits::default()).unwrap().opt, 7);
        assert_eq!(exact_opt(&c, Limits::default()).unwrap().opt, 18);
        assert_eq!(exact_opt(&d, Limits::default()).unwrap().opt, 14);
        assert_eq!(exact_opt(&e, Limits::default()).unwrap().opt, 18);
        assert!(exact_decision(&c, 17, Limits::default()).unwrap().is_none());
        assert!(exact_decision(&c, 18, Limits::default()).unwrap().is_some());
        assert!(exact_decision(&c, 27, Limits::default()).unwrap().is_some());
    }

    #[test]
    fn agrees_with_enumeration() {
        let cases: &[(u64, &[(u64, u64)])] = &[
            (5, &[(2, 3), (3, 2), (2, 2), (1, 5)]),
            (6, &[(3, 1), (3, 1), (4, 2), (2, 2)]),
            (7, &[(5, 3), (2, 4), (2, 4), (3, 1), (1, 1)]),
            (4, &[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1)]),
        ];
        for &(d, jobs) in cases {
            let x = inst(d, jobs);
            let sol = exact_opt(&x, Limits::default()).unwrap();
            assert_eq!(sol.opt, brute(&x));
            assert_eq!(sol.plan.peak(&x), sol.opt);
        }
    }

    #[test]
    fn node_limit_reports_incumbent() {
        let x = inst(12, &[(5, 3), (4, 4), (7, 2), (3, 5), (6, 1), (2, 6), (5, 5), (3, 3)]);
        match exact_opt(&x, Limits::nodes(1)) {
            Err(Error::ResourceExceeded { best: Some(b), .. }) => assert!(b.0 >= 1),
            Ok(sol) => assert!(sol.nodes <= 1),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
