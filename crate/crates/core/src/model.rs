//! Jobs, instances, schedules and energy profiles.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    pub p: u64,
    pub e: u64,
}

impl Job {
    pub fn new(id: impl Into<String>, p: u64, e: u64) -> Self {
        Job { id: id.into(), p, e }
    }

    pub fn area(&self) -> u128 {
        self.p as u128 * self.e as u128
    }
}

#[derive(Deserialize)]
struct RawInstance {
    deadline: u64,
    jobs: Vec<Job>,
}

/// A validated problem instance. Construction rejects empty job lists,
/// zero sizes, duplicate ids and jobs longer than the deadline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    deadline: u64,
    jobs: Vec<Job>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.deadline, raw.jobs)
    }
}

impl Instance {
    pub fn new(deadline: u64, jobs: Vec<Job>) -> Result<Self> {
        if deadline == 0 {
            return Err(Error::InvalidInstance("deadline must be positive".into()));
        }
        if jobs.is_empty() {
            return Err(Error::InvalidInstance("instance has no jobs".into()));
        }
        let mut index = HashMap::with_capacity(jobs.len());
        for (i, j) in jobs.iter().enumerate() {
            if j.p == 0 || j.e == 0 {
                return Err(Error::InvalidInstance(format!(
                    "job `{}` must have p >= 1 and e >= 1",
                    j.id
                )));
            }
            if j.p > deadline {
                return Err(Error::InvalidInstance(format!(
                    "job `{}` has p = {} > deadline {}",
                    j.id, j.p, deadline
                )));
            }
            if index.insert(j.id.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate job id `{}`", j.id)));
            }
        }
        Ok(Instance {
            deadline,
            jobs,
            index,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialises")
    }

    pub fn deadline(&self) -> u64 {
        self.deadline
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, i: usize) -> &Job {
        &self.jobs[i]
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownJob(id.to_string()))
    }

    pub fn e_max(&self) -> u64 {
        self.jobs.iter().map(|j| j.e).max().unwrap_or(0)
    }

    pub fn p_max(&self) -> u64 {
        self.jobs.iter().map(|j| j.p).max().unwrap_or(0)
    }

    /// Total area `sum p*e`.
    pub fn area(&self) -> u128 {
        self.jobs.iter().map(Job::area).sum()
    }

    pub fn total_width(&self) -> u64 {
        self.jobs.iter().map(|j| j.p).sum()
    }

    pub fn total_height(&self) -> u64 {
        self.jobs.iter().map(|j| j.e).sum()
    }

    pub fn d(&self) -> Q {
        ratio::int(self.deadline)
    }

    /// Sum of `p` over the given job indices.
    pub fn width_of(&self, idx: impl IntoIterator<Item = usize>) -> u64 {
        idx.into_iter().map(|i| self.jobs[i].p).sum()
    }

    /// Sum of `e` over the given job indices.
    pub fn height_of(&self, idx: impl IntoIterator<Item = usize>) -> u64 {
        idx.into_iter().map(|i| self.jobs[i].e).sum()
    }

    /// Indices of jobs satisfying `pred`, in instance order.
    pub fn select(&self, pred: impl Fn(&Job) -> bool) -> Vec<usize> {
        (0..self.jobs.len()).filter(|&i| pred(&self.jobs[i])).collect()
    }

    /// Sub-instance made of the listed jobs (same deadline).
    pub fn restrict(&self, idx: &[usize]) -> Result<Instance> {
        Instance::new(
            self.deadline,
            idx.iter().map(|&i| self.jobs[i].clone()).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub id: String,
    pub start: i64,
}

/// Job-id to start-time assignments as they come from the outside world.
/// Kept as a list so that duplicates and negative starts can be reported by
/// [`validate`] instead of being lost during parsing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub assignments: Vec<Assignment>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        Schedule {
            assignments: pairs
                .into_iter()
                .map(|(id, start)| Assignment {
                    id: id.to_string(),
                    start,
                })
                .collect(),
        }
    }

    pub fn push(&mut self, id: impl Into<String>, start: i64) {
        self.assignments.push(Assignment {
            id: id.into(),
            start,
        });
    }

    pub fn start_of(&self, id: &str) -> Option<i64> {
        self.assignments
            .iter()
            .find(|a| a.id == id)
            .map(|a| a.start)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.assignments.iter().map(|a| a.id.as_str())
    }
}

/// On-disk schedule document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub algorithm: String,
    pub peak: u64,
    pub assignments: Vec<Assignment>,
}

impl ScheduleDoc {
    pub fn new(algorithm: impl Into<String>, peak: u64, schedule: &Schedule) -> Self {
        ScheduleDoc {
            algorithm: algorithm.into(),
            peak,
            assignments: schedule.assignments.clone(),
        }
    }

    pub fn schedule(&self) -> Schedule {
        Schedule {
            assignments: self.assignments.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serialises")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Missing { id: String },
    Duplicate { id: String },
    UnknownJob { id: String },
    NegativeStart { id: String, start: i64 },
    DeadlineOverrun { id: String, completion: i64, deadline: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Missing { id } => write!(f, "job `{id}` has no start time"),
            Violation::Duplicate { id } => write!(f, "job `{id}` is assigned more than once"),
            Violation::UnknownJob { id } => write!(f, "job `{id}` is not part of the instance"),
            Violation::NegativeStart { id, start } => {
                write!(f, "job `{id}` starts at negative time {start}")
            }
            Violation::DeadlineOverrun {
                id,
                completion,
                deadline,
            } => write!(f, "job `{id}` completes at {completion} after deadline {deadline}"),
        }
    }
}

/// Check a schedule against an instance. An empty result means feasible.
pub fn validate(instance: &Instance, schedule: &Schedule) -> Vec<Violation> {
    check(instance, schedule, None)
}

fn check(instance: &Instance, schedule: &Schedule, subset: Option<&HashSet<usize>>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = vec![false; instance.len()];
    for a in &schedule.assignments {
        let Some(i) = instance.index_of(&a.id) else {
            out.push(Violation::UnknownJob { id: a.id.clone() });
            continue;
        };
        if subset.is_some_and(|s| !s.contains(&i)) {
            continue;
        }
        if seen[i] {
            out.push(Violation::Duplicate { id: a.id.clone() });
            continue;
        }
        seen[i] = true;
        if a.start < 0 {
            out.push(Violation::NegativeStart {
                id: a.id.clone(),
                start: a.start,
            });
            continue;
        }
        let c = a.start.saturating_add(instance.job(i).p as i64);
        if c > instance.deadline() as i64 {
            out.push(Violation::DeadlineOverrun {
                id: a.id.clone(),
                completion: c,
                deadline: instance.deadline(),
            });
        }
    }
    for (i, j) in instance.jobs().iter().enumerate() {
        if !seen[i] && subset.is_none_or(|s| s.contains(&i)) {
            out.push(Violation::Missing { id: j.id.clone() });
        }
    }
    out
}

/// Piecewise-constant energy profile over `[0, D)`, stored at breakpoints.
/// Adjacent pieces always carry different levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    deadline: u64,
    points: Vec<(u64, u64)>,
}

impl Profile {
    /// Sweep over `(start, p, e)` triples.
    pub fn from_intervals(deadline: u64, items: impl IntoIterator<Item = (u64, u64, u64)>) -> Self {
        let mut events: BTreeMap<u64, i128> = BTreeMap::new();
        for (s, p, e) in items {
            *events.entry(s).or_default() += e as i128;
            *events.entry(s + p).or_default() -= e as i128;
        }
        events.entry(0).or_default();
        let mut points: Vec<(u64, u64)> = Vec::with_capacity(events.len());
        let mut level: i128 = 0;
        for (t, delta) in events {
            level += delta;
            if t >= deadline {
                break;
            }
            debug_assert!(level >= 0);
            let lv = level as u64;
            match points.last() {
                Some(&(_, prev)) if prev == lv => {}
                _ => points.push((t, lv)),
            }
        }
        Profile { deadline, points }
    }

    pub fn deadline(&self) -> u64 {
        self.deadline
    }

    pub fn breakpoints(&self) -> &[(u64, u64)] {
        &self.points
    }

    /// Level on the unit `[t, t+1)`.
    pub fn level_at(&self, t: u64) -> u64 {
        match self.points.binary_search_by(|&(x, _)| x.cmp(&t)) {
            Ok(k) => self.points[k].1,
            Err(0) => 0,
            Err(k) => self.points[k - 1].1,
        }
    }

    pub fn max(&self) -> u64 {
        self.points.iter().map(|&(_, l)| l).max().unwrap_or(0)
    }

    /// `(start, end, level)` pieces covering `[0, D)`.
    pub fn pieces(&self) -> Vec<(u64, u64, u64)> {
        let mut out = Vec::with_capacity(self.points.len());
        for (k, &(t, l)) in self.points.iter().enumerate() {
            let end = self.points.get(k + 1).map_or(self.deadline, |p| p.0);
            out.push((t, end, l));
        }
        out
    }

    /// Maximum level over units that intersect the half-open real interval
    /// `[a, b)`.
    pub fn max_on(&self, a: &Q, b: &Q) -> u64 {
        if a >= b {
            return 0;
        }
        self.pieces()
            .into_iter()
            .filter(|&(s, e, _)| ratio::int(s) < *b && ratio::int(e) > *a)
            .map(|(_, _, l)| l)
            .max()
            .unwrap_or(0)
    }

    pub fn min_on(&self, a: &Q, b: &Q) -> u64 {
        if a >= b {
            return 0;
        }
        self.pieces()
            .into_iter()
            .filter(|&(s, e, _)| ratio::int(s) < *b && ratio::int(e) > *a)
            .map(|(_, _, l)| l)
            .min()
            .unwrap_or(0)
    }

    /// Per-unit levels; only sensible for small deadlines.
    pub fn units(&self) -> Vec<u64> {
        (0..self.deadline).map(|t| self.level_at(t)).collect()
    }
}

/// Profile of the jobs in `subset` (all jobs when `None`).
pub fn profile(instance: &Instance, subset: Option<&[&str]>, schedule: &Schedule) -> Result<Profile> {
    let set: Option<HashSet<usize>> = match subset {
        Some(ids) => Some(
            ids.iter()
                .map(|id| instance.require(id))
                .collect::<Result<_>>()?,
        ),
        None => None,
    };
    let v = check(instance, schedule, set.as_ref());
    if !v.is_empty() {
        return Err(Error::Infeasible(v));
    }
    let items = schedule.assignments.iter().filter_map(|a| {
        let i = instance.index_of(&a.id)?;
        if set.as_ref().is_some_and(|s| !s.contains(&i)) {
            return None;
        }
        let j = instance.job(i);
        Some((a.start as u64, j.p, j.e))
    });
    Ok(Profile::from_intervals(instance.deadline(), items))
}

pub fn peak(instance: &Instance, schedule: &Schedule) -> Result<u64> {
    Ok(profile(instance, None, schedule)?.max())
}

/// Reflect every start around `D/2`: `s' = D - p - s`.
pub fn mirror(instance: &Instance, schedule: &Schedule) -> Schedule {
    Schedule {
        assignments: schedule
            .assignments
            .iter()
            .map(|a| {
                let p = instance
                    .index_of(&a.id)
                    .map_or(0, |i| instance.job(i).p as i64);
                Assignment {
                    id: a.id.clone(),
                    start: instance.deadline() as i64 - p - a.start,
                }
            })
            .collect(),
    }
}

/// Index-based partial assignment used inside the algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    starts: Vec<Option<u64>>,
}

impl Plan {
    pub fn empty(n: usize) -> Self {
        Plan {
            starts: vec![None; n],
        }
    }

    pub fn from_starts(starts: Vec<u64>) -> Self {
        Plan {
            starts: starts.into_iter().map(Some).collect(),
        }
    }

    /// Convert an external schedule; every listed job must be known and
    /// placed inside `[0, D]`. Jobs absent from `schedule` stay unplaced.
    pub fn from_schedule(instance: &Instance, schedule: &Schedule) -> Result<Self> {
        let mut plan = Plan::empty(instance.len());
        let mut bad = Vec::new();
        for a in &schedule.assignments {
            let i = instance.require(&a.id)?;
            if plan.starts[i].is_some() {
                bad.push(Violation::Duplicate { id: a.id.clone() });
            } else if a.start < 0 {
                bad.push(Violation::NegativeStart {
                    id: a.id.clone(),
                    start: a.start,
                });
            } else if a.start as u64 + instance.job(i).p > instance.deadline() {
                bad.push(Violation::DeadlineOverrun {
                    id: a.id.clone(),
                    completion: a.start + instance.job(i).p as i64,
                    deadline: instance.deadline(),
                });
            } else {
                plan.starts[i] = Some(a.start as u64);
            }
        }
        if bad.is_empty() {
            Ok(plan)
        } else {
            Err(Error::Infeasible(bad))
        }
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.starts[i]
    }

    pub fn start(&self, i: usize) -> u64 {
        self.starts[i].expect("job is placed")
    }

    pub fn set(&mut self, i: usize, s: u64) {
        self.starts[i] = Some(s);
    }

    pub fn clear(&mut self, i: usize) {
        self.starts[i] = None;
    }

    pub fn placed(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.starts
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|s| (i, s)))
    }

    pub fn placed_indices(&self) -> Vec<usize> {
        self.placed().map(|(i, _)| i).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.starts.iter().all(Option::is_some)
    }

    pub fn profile(&self, instance: &Instance) -> Profile {
        Profile::from_intervals(
            instance.deadline(),
            self.placed().map(|(i, s)| {
                let j = instance.job(i);
                (s, j.p, j.e)
            }),
        )
    }

    /// Profile restricted to a set of jobs.
    pub fn profile_of(&self, instance: &Instance, idx: &[usize]) -> Profile {
        Profile::from_intervals(
            instance.deadline(),
            idx.iter().filter_map(|&i| {
                let j = instance.job(i);
                self.starts[i].map(|s| (s, j.p, j.e))
            }),
        )
    }

    pub fn peak(&self, instance: &Instance) -> u64 {
        self.profile(instance).max()
    }

    /// Completion time of a placed job.
    pub fn end(&self, instance: &Instance, i: usize) -> u64 {
        self.start(i) + instance.job(i).p
    }

    pub fn fits(&self, instance: &Instance) -> bool {
        self.placed()
            .all(|(i, s)| s + instance.job(i).p <= instance.deadline())
    }

    pub fn mirrored(&self, instance: &Instance) -> Plan {
        let d = instance.deadline();
        Plan {
            starts: self
                .starts
                .iter()
                .enumerate()
                .map(|(i, s)| s.map(|s| d - instance.job(i).p - s))
                .collect(),
        }
    }

    pub fn to_schedule(&self, instance: &Instance) -> Schedule {
        Schedule {
            assignments: self
                .placed()
                .map(|(i, s)| Assignment {
                    id: instance.job(i).id.clone(),
                    start: s as i64,
                })
                .collect(),
        }
    }
}

/// Greedy helper: place job `i` at the start in `[0, D-p]` that minimises
/// the resulting maximum over its window. Ties go to the earliest start.
pub fn place_min_peak(instance: &Instance, plan: &mut Plan, i: usize) -> u64 {
    let prof = plan.profile(instance);
    let p = instance.job(i).p;
    let d = instance.deadline();
    let pieces = prof.pieces();
    let mut candidates: Vec<u64> = Vec::new();
    candidates.push(0);
    candidates.push(d - p);
    for &(s, e, _) in &pieces {
        if s + p <= d {
            candidates.push(s);
        }
        if e >= p {
            candidates.push(e - p);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut best = (u64::MAX, 0);
    for s in candidates {
        let m = pieces
            .iter()
            .filter(|&&(a, b, _)| a < s + p && b > s)
            .map(|&(_, _, l)| l)
            .max()
            .unwrap_or(0);
        if m < best.0 {
            best = (m, s);
        }
    }
    plan.set(i, best.1);
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fix_b() -> Instance {
        Instance::new(10, vec![Job::new("j1", 6, 3), Job::new("j2", 6, 4)]).unwrap()
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Instance::new(10, vec![]).is_err());
        assert!(Instance::new(10, vec![Job::new("a", 11, 1)]).is_err());
        assert!(Instance::new(10, vec![Job::new("a", 0, 1)]).is_err());
        assert!(Instance::new(10, vec![Job::new("a", 1, 1), Job::new("a", 2, 2)]).is_err());
    }

    #[test]
    fn validate_reports_each_problem() {
        let fa = Instance::new(10, vec![Job::new("j1", 10, 5)]).unwrap();
        assert!(validate(&fa, &Schedule::from_pairs([("j1", 0)])).is_empty());
        assert_eq!(
            validate(&fa, &Schedule::from_pairs([("j1", 1)])),
            vec![Violation::DeadlineOverrun {
                id: "j1".into(),
                completion: 11,
                deadline: 10
            }]
        );
        let fb = fix_b();
        assert_eq!(
            validate(&fb, &Schedule::from_pairs([("j1", 0)])),
            vec![Violation::Missing { id: "j2".into() }]
        );
        let v = validate(&fb, &Schedule::from_pairs([("j1", 0), ("j1", 1), ("j2", -1), ("x", 0)]));
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn profile_levels() {
        let fb = fix_b();
        let s = Schedule::from_pairs([("j1", 0), ("j2", 4)]);
        let p = profile(&fb, None, &s).unwrap();
        assert_eq!(p.breakpoints(), &[(0, 3), (4, 7), (6, 4)]);
        assert_eq!(peak(&fb, &s).unwrap(), 7);
        let p = profile(&fb, Some(&[]), &s).unwrap();
        assert_eq!(p.breakpoints(), &[(0, 0)]);
        assert!(profile(&fb, Some(&["zz"]), &s).is_err());
    }

    #[test]
    fn json_round_trip() {
        let fb = fix_b();
        let back = Instance::from_json(&fb.to_json()).unwrap();
        assert_eq!(back, fb);
        assert!(Instance::from_json(r#"{"deadline":3,"jobs":[{"id":"a","p":4,"e":1}]}"#).is_err());
    }

    #[test]
    fn mirror_keeps_peak() {
        let fb = fix_b();
        let s = Schedule::from_pairs([("j1", 1), ("j2", 4)]);
        let m = mirror(&fb, &s);
        assert_eq!(m.start_of("j1"), Some(3));
        assert_eq!(peak(&fb, &m).unwrap(), peak(&fb, &s).unwrap());
    }
}
