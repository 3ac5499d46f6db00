//! Seeded random instances.

use peakpack::{Error, Instance, Job, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WidthDist {
    Uniform,
    /// `p > D/2`
    Wide,
    /// `p <= D/4`
    Narrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EnergyDist {
    Uniform,
    /// upper half of `[1, max]`
    Tall,
    /// lowest quarter of `[1, max]`
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Balanced,
    /// Half of the jobs are tall and narrow, which pushes instances towards
    /// the tall-job branch of the dispatcher.
    ManyTall,
    /// Half of the jobs have `p >= 3D/4`.
    ManyWide,
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub n: usize,
    pub deadline: u64,
    pub max_energy: u64,
    pub width: WidthDist,
    pub energy: EnergyDist,
    pub preset: Option<Preset>,
    pub seed: u64,
}

fn width(rng: &mut ChaCha8Rng, d: u64, dist: WidthDist) -> u64 {
    match dist {
        WidthDist::Uniform => rng.gen_range(1..=d),
        WidthDist::Wide => rng.gen_range(d / 2 + 1..=d),
        WidthDist::Narrow => rng.gen_range(1..=(d / 4).max(1)),
    }
}

fn energy(rng: &mut ChaCha8Rng, max: u64, dist: EnergyDist) -> u64 {
    match dist {
        EnergyDist::Uniform => rng.gen_range(1..=max),
        EnergyDist::Tall => rng.gen_range(max / 2 + 1..=max),
        EnergyDist::Low => rng.gen_range(1..=(max / 4).max(1)),
    }
}

pub fn generate(params: &GenParams) -> Result<Instance> {
    if params.n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if params.deadline == 0 || params.max_energy == 0 {
        return Err(Error::InvalidInput("deadline and max energy must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let d = params.deadline;
    let special = params.n.div_ceil(2);
    let mut jobs = Vec::with_capacity(params.n);
    for k in 0..params.n {
        let (p, e) = match params.preset {
            Some(Preset::ManyWide) if k < special => (
                rng.gen_range((3 * d).div_ceil(4)..=d),
                energy(&mut rng, params.max_energy, params.energy),
            ),
            Some(Preset::ManyTall) if k < special => (
                width(&mut rng, d, WidthDist::Narrow),
                energy(&mut rng, params.max_energy, EnergyDist::Tall),
            ),
            _ => (
                width(&mut rng, d, params.width),
                energy(&mut rng, params.max_energy, params.energy),
            ),
        };
        jobs.push(Job::new(format!("j{}", k + 1), p, e));
    }
    Instance::new(d, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(preset: Option<Preset>, seed: u64) -> GenParams {
        GenParams {
            n: 9,
            deadline: 12,
            max_energy: 8,
            width: WidthDist::Uniform,
            energy: EnergyDist::Uniform,
            preset,
            seed,
        }
    }

    #[test]
    fn deterministic() {
        let a = generate(&params(None, 7)).unwrap();
        let b = generate(&params(None, 7)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), generate(&params(None, 8)).unwrap().to_json());
    }

    #[test]
    fn many_wide_half_at_three_quarters() {
        for seed in 0..50 {
            let inst = generate(&params(Some(Preset::ManyWide), seed)).unwrap();
            let wide = inst.jobs().iter().filter(|j| 4 * j.p >= 3 * inst.deadline()).count();
            assert!(2 * wide >= inst.len());
        }
    }

    #[test]
    fn zero_jobs_rejected() {
        let mut s = params(None, 1);
        s.n = 0;
        assert!(matches!(generate(&s), Err(Error::InvalidInput(_))));
    }
}
