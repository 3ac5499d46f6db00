//! Command line front end for `peakpack`.

pub mod algo;
pub mod bench;
pub mod gen;
pub mod render;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use peakpack::aeptas::{self, LiteConfig, Reference, Variant};
use peakpack::approx::EpsilonParams;
use peakpack::exact::{self, Limits};
use peakpack::repack::{self, Container};
use peakpack::{bounds, ratio, Assignment, Error, Instance, Plan, Q, Schedule, ScheduleDoc};
use serde::Deserialize;
use serde_json::json;

use crate::algo::Algorithm;
use crate::gen::{EnergyDist, GenParams, Preset, WidthDist};

#[derive(Debug, Parser)]
#[command(name = "peakpack", version, about = "Peak energy demand scheduling with a common deadline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    C1,
    C2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReferenceArg {
    Exact,
    Ffdh,
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the four lower bounds and their maximum.
    Bounds {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Compute a schedule.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
        algorithm: Algorithm,
        #[arg(long, default_value = "1/3", value_parser = parse_q)]
        epsilon: Q,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the certificate JSON.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Optimal schedule by branch and bound.
    Exact {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Insert an overflow container into a base schedule.
    Repack {
        #[arg(long)]
        instance: PathBuf,
        /// Schedule of every job not in the overflow.
        #[arg(long)]
        base: PathBuf,
        /// JSON with either `jobs` (laid side by side) or `assignments`
        /// relative to the container start, plus optional budgets.
        #[arg(long)]
        overflow: PathBuf,
        #[arg(long, default_value = "1/3", value_parser = parse_q)]
        epsilon: Q,
        /// Peak target; defaults to the largest of the base peak, the
        /// container height and the rounded-up lower bound.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the structured base-schedule pipeline and report on it.
    Aeptas {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "1/3", value_parser = parse_q)]
        epsilon: Q,
        #[arg(long, value_enum, default_value_t = VariantArg::C1)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = ReferenceArg::Auto)]
        reference: ReferenceArg,
        /// Where to write the combined schedule (base plus container).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule and print its peak.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Draw a schedule as SVG.
    Render {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        deadline: u64,
        #[arg(long, default_value_t = 8)]
        max_energy: u64,
        #[arg(long, value_enum, default_value_t = WidthDist::Uniform)]
        width_dist: WidthDist,
        #[arg(long, value_enum, default_value_t = EnergyDist::Uniform)]
        energy_dist: EnergyDist,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Overridden by PEAKPACK_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run algorithms over every `*.json` instance in a directory.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "auto,ffdh")]
        algorithms: Vec<Algorithm>,
        #[arg(long, default_value = "1/3", value_parser = parse_q)]
        epsilon: Q,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn parse_q(s: &str) -> std::result::Result<Q, String> {
    ratio::parse(s).map_err(|e| e.to_string())
}

/// Exit status for a failed run.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    err.chain()
        .find_map(|e| e.downcast_ref::<Error>())
        .map_or(2, Error::exit_code)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())).into())
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    Instance::from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

#[derive(Deserialize)]
struct ScheduleFile {
    assignments: Vec<Assignment>,
}

pub fn load_schedule(path: &Path) -> Result<Schedule> {
    let f: ScheduleFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    Ok(Schedule {
        assignments: f.assignments,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn emit_plan(instance: &Instance, plan: &Plan, name: &str, out: Option<&Path>) -> Result<()> {
    algo::ensure_valid(instance, plan)?;
    let doc = ScheduleDoc::new(name, plan.peak(instance), &plan.to_schedule(instance));
    emit(out, &doc.to_json())
}

#[derive(Deserialize)]
struct OverflowFile {
    #[serde(default)]
    jobs: Vec<String>,
    #[serde(default)]
    assignments: Vec<Assignment>,
    width_budget: Option<String>,
    height_budget: Option<String>,
}

fn load_overflow(instance: &Instance, path: &Path, d_gamma: Q, t: u64) -> Result<Container> {
    let f: OverflowFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let budget = |s: &Option<String>, default: Q| -> Result<Q> {
        match s {
            Some(s) => Ok(ratio::parse(s).map_err(|e| Error::InvalidInput(e.to_string()))?),
            None => Ok(default),
        }
    };
    let wb = budget(&f.width_budget, d_gamma)?;
    let hb = budget(&f.height_budget, ratio::int(t))?;
    if !f.jobs.is_empty() && !f.assignments.is_empty() {
        return Err(Error::InvalidInput("overflow file lists both `jobs` and `assignments`".into()).into());
    }
    if f.assignments.is_empty() {
        let idx = f.jobs.iter().map(|id| instance.require(id)).collect::<peakpack::Result<Vec<_>>>()?;
        return Ok(Container::side_by_side(instance, &idx, wb, hb));
    }
    let mut c = Container::empty(wb, hb);
    for a in &f.assignments {
        if a.start < 0 {
            return Err(Error::InvalidInput(format!("job `{}` has a negative container offset", a.id)).into());
        }
        c.contents.push((instance.require(&a.id)?, a.start as u64));
    }
    Ok(c)
}

/// Start for the container that keeps the combined peak lowest.
fn best_offset(instance: &Instance, base: &Plan, c: &Container) -> Plan {
    let span = c.width(instance);
    let mut best: Option<(u64, Plan)> = None;
    for at in 0..=instance.deadline().saturating_sub(span) {
        let mut p = base.clone();
        c.place(&mut p, at);
        let peak = p.peak(instance);
        if best.as_ref().is_none_or(|b| peak < b.0) {
            best = Some((peak, p));
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| base.clone())
}

fn env_seed(default: u64) -> Result<u64> {
    match std::env::var("PEAKPACK_SEED") {
        Ok(s) => Ok(s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("PEAKPACK_SEED `{s}` is not an integer")))?),
        Err(_) => Ok(default),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bounds { instance } => {
            let inst = load_instance(&instance)?;
            let lb = bounds::lower_bound(&inst);
            emit(None, &serde_json::to_string_pretty(&lb)?)
        }
        Command::Solve {
            instance,
            algorithm,
            epsilon,
            out,
            certificate,
        } => {
            let inst = load_instance(&instance)?;
            let r = algo::run(&inst, algorithm, &epsilon, Limits::default())?;
            if let Some(c) = certificate {
                emit(Some(&c), &serde_json::to_string_pretty(&r.certificate)?)?;
            }
            emit_plan(&inst, &r.plan, algorithm.name(), out.as_deref())
        }
        Command::Exact {
            instance,
            max_nodes,
            timeout,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let limits = Limits {
                max_nodes: max_nodes.or(Limits::default().max_nodes),
                time_budget: timeout.map(Duration::from_secs_f64),
            };
            match exact::exact_opt(&inst, limits) {
                Ok(sol) => {
                    eprintln!("opt {} after {} nodes", sol.opt, sol.nodes);
                    emit_plan(&inst, &sol.plan, "exact", out.as_deref())
                }
                Err(Error::ResourceExceeded { nodes, best }) => {
                    if let Some(b) = &best {
                        eprintln!("gave up after {nodes} nodes; best peak found {}", b.0);
                    }
                    Err(Error::ResourceExceeded { nodes, best }.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Repack {
            instance,
            base,
            overflow,
            epsilon,
            t,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let params = EpsilonParams::new(epsilon)?;
            let base_plan = Plan::from_schedule(&inst, &load_schedule(&base)?)?;
            let d_gamma = &params.gamma * inst.d();
            let provisional = load_overflow(&inst, &overflow, d_gamma.clone(), 0)?;
            let t = t.unwrap_or_else(|| {
                base_plan
                    .peak(&inst)
                    .max(provisional.height(&inst))
                    .max(ratio::ceil_u64(&bounds::lower_bound(&inst).t))
            });
            let container = load_overflow(&inst, &overflow, d_gamma, t)?;
            let outcome = repack::repack(&inst, &base_plan, t, &container, &params)?;
            eprintln!("{}", serde_json::to_string(&json!({ "t": t, "peak": outcome.peak, "path": outcome.path }))?);
            emit_plan(&inst, &outcome.plan, "repack", out.as_deref())
        }
        Command::Aeptas {
            instance,
            epsilon,
            variant,
            reference,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let mut cfg = LiteConfig::new(epsilon.clone());
            cfg.variant = match variant {
                VariantArg::C1 => Variant::C1,
                VariantArg::C2 => Variant::C2,
            };
            cfg.reference = match reference {
                ReferenceArg::Exact => Reference::Exact,
                ReferenceArg::Ffdh => Reference::Ffdh,
                ReferenceArg::Auto => Reference::Auto,
            };
            let lite = aeptas::schedule_lite(&inst, &cfg)?;
            let combined = best_offset(&inst, &lite.base, &lite.overflow);
            let counts = lite.classification.counts();
            let ids = |v: &[usize]| v.iter().map(|&i| inst.job(i).id.clone()).collect::<Vec<_>>();
            let overflow_ids: Vec<usize> = lite.overflow.jobs().collect();
            let report = json!({
                "eps": ratio::format(&epsilon),
                "reference": lite.reference_kind,
                "reference_peak": lite.reference_peak,
                "base_peak": lite.base_peak,
                "slack_k": ratio::format(&lite.slack_k),
                "t_used": ratio::format(&lite.t_used),
                "rungs": lite.rungs,
                "delta": ratio::format(&lite.classification.delta),
                "mu": ratio::format(&lite.classification.mu),
                "classes": {
                    "large": counts[0], "horizontal": counts[1], "vertical": counts[2],
                    "small": counts[3], "medium": counts[4],
                },
                "overflow": {
                    "jobs": ids(&overflow_ids),
                    "width": lite.overflow.width(&inst),
                    "height": lite.overflow.height(&inst),
                    "width_budget": ratio::format(&lite.overflow.width_budget),
                    "height_budget": ratio::format(&lite.overflow.height_budget),
                },
                "removed_horizontal": lite.removed,
                "fractional": lite.fractional,
                "leftovers": lite.leftovers,
                "vertical_lp": lite.vertical_lp,
                "combined_peak": combined.peak(&inst),
            });
            emit(None, &serde_json::to_string_pretty(&report)?)?;
            match out {
                Some(p) => emit_plan(&inst, &combined, "aeptas", Some(&p)),
                None => algo::ensure_valid(&inst, &combined).map_err(Into::into),
            }
        }
        Command::Verify { instance, schedule } => {
            let inst = load_instance(&instance)?;
            let s = load_schedule(&schedule)?;
            let violations = peakpack::validate(&inst, &s);
            if !violations.is_empty() {
                for v in &violations {
                    println!("violation: {v}");
                }
                return Err(Error::Infeasible(violations).into());
            }
            let peak = peakpack::peak(&inst, &s)?;
            let lb = bounds::lower_bound(&inst).t;
            println!("ok: peak {peak}, lower bound {}", ratio::format(&lb));
            Ok(())
        }
        Command::Render {
            instance,
            schedule,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let s = load_schedule(&schedule)?;
            // partial schedules are drawn as they are; anything else must be sound
            let bad: Vec<_> = peakpack::validate(&inst, &s)
                .into_iter()
                .filter(|v| !matches!(v, peakpack::Violation::Missing { .. }))
                .collect();
            if !bad.is_empty() {
                return Err(Error::Infeasible(bad).into());
            }
            let plan = Plan::from_schedule(&inst, &s)?;
            emit(Some(&out), &render::render_svg(&inst, &plan))
        }
        Command::Gen {
            n,
            deadline,
            max_energy,
            width_dist,
            energy_dist,
            preset,
            seed,
            out,
        } => {
            let params = GenParams {
                n,
                deadline,
                max_energy,
                width: width_dist,
                energy: energy_dist,
                preset,
                seed: env_seed(seed)?,
            };
            let inst = gen::generate(&params)?;
            emit(out.as_deref(), &inst.to_json())
        }
        Command::Bench {
            dir,
            algorithms,
            epsilon,
            out,
            workers,
        } => {
            EpsilonParams::new(epsilon.clone())?;
            let mut instances = Vec::new();
            for f in bench::instance_files(&dir)? {
                let name = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                instances.push((name, load_instance(&f)?));
            }
            let opts = bench::BenchOptions {
                algorithms,
                eps: epsilon,
                workers,
                oracle_limits: Limits::nodes(2_000_000),
            };
            let report = bench::bench(&instances, &opts);
            let csv = bench::to_csv(&report);
            match &out {
                Some(p) => emit(Some(p), &csv)?,
                None => print!("{csv}"),
            }
            eprint!("{}", bench::summary_text(&report));
            Ok(())
        }
    }
}
