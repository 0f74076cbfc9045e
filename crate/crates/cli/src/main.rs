use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use confined_ks_cli::{execute, load_reference, parse_run_spec, regress, write_outputs, CliResult, RunOptions};

/// Entropy scans of confined He-like ions.
#[derive(Debug, Parser)]
#[command(name = "confined-ks", version)]
struct Args {
    /// Run specification (TOML).
    #[arg(long)]
    spec: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Exit nonzero on any failed point, bound violation or regression miss.
    #[arg(long)]
    strict: bool,

    /// Re-solve inside each crossing bracket instead of interpolating only.
    #[arg(long)]
    refine_crossings: bool,

    /// Collocation order for every point, overriding the spec.
    #[arg(long = "grid-N", value_name = "N")]
    grid_n: Option<usize>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn run(args: &Args) -> CliResult<bool> {
    let spec = parse_run_spec(&args.spec)?;
    log::info!("{} curves, {} points", spec.units.len(), spec.point_count());
    let options = RunOptions { threads: args.threads, refine_crossings: args.refine_crossings, strict: args.strict, grid_order: args.grid_n };
    let start = Instant::now();
    let outcome = execute(&spec, &options)?;
    log::info!("solved in {:.1} s", start.elapsed().as_secs_f64());

    let report = match &spec.regression {
        Some(r) => Some(regress(&load_reference(r)?, &r.sources, &outcome.points)),
        None => None,
    };
    write_outputs(&args.out, &outcome, spec.plots, report.as_ref())?;

    println!("points: {} solved, {} failed", outcome.points.len(), outcome.failures.len());
    for f in &outcome.failures {
        println!("  failed {} {} {} r_c = {}: {}", f.species, f.state, f.variant, f.r_c, f.message);
    }
    let violations: Vec<_> = outcome.bbm_violations().collect();
    match outcome.min_bbm_margin() {
        Some(m) => println!("entropic bound: {} violations, minimum margin {m:.6}", violations.len()),
        None => println!("entropic bound: nothing computed"),
    }
    for c in &outcome.crossings {
        let refined = c.refined.map_or(String::new(), |r| format!(", refined {r:.4}"));
        println!(
            "crossing {} {} {} / {} ({}): r_c = {:.4} in [{}, {}]{refined}",
            c.spec.quantity.label(),
            c.spec.species,
            c.spec.states[0],
            c.spec.states[1],
            c.spec.variant,
            c.r_c,
            c.lower,
            c.upper
        );
    }
    for e in &outcome.crossing_errors {
        println!("crossing: {e}");
    }
    let mut clean = outcome.failures.is_empty() && violations.is_empty();
    if let Some(report) = &report {
        let s = &report.summary;
        println!(
            "regression vs {}: {} rows, {} pass, {} fail, {} not run (max |dS_r| {:.4}, max |dS_p| {:.4})",
            report.reference, s.total, s.passed, s.failed, s.not_run, s.max_abs_delta_s_r, s.max_abs_delta_s_p
        );
        clean &= report.all_passed();
    }
    Ok(clean)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(clean) if clean || !args.strict => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
