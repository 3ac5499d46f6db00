//! Peak energy demand minimisation for non-preemptive jobs that share a
//! common deadline.
//!
//! A job occupies `p` consecutive time units and draws `e` units of energy
//! while it runs. The goal is to choose integer start times so that every job
//! finishes by the deadline and the highest point of the summed energy
//! profile is as low as possible. Viewed geometrically this is a strip
//! packing problem with sliceable items, which is where most of the tools in
//! this crate come from.

pub mod aeptas;
pub mod approx;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod lp;
pub mod lshape;
pub mod model;
pub mod packing;
pub mod ratio;
pub mod repack;

pub use error::{Error, Result};
pub use model::{
    mirror, peak, profile, validate, Assignment, Instance, Job, Plan, Profile, Schedule,
    ScheduleDoc, Violation,
};
pub use ratio::Q;
