//! `fuzzyseg` command-line tool.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on runtime failures
//! (unreadable input, degenerate clustering, I/O).

mod args;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use fuzzyseg_core::io::{read_pgm, write_csv, write_label_map, write_pgm};
use fuzzyseg_core::{
    add_gaussian_noise, make_phantom, run_sweep, segment, FcmConfig, NeighborhoodSpec,
    NoiseSpec, RunConfig, SweepConfig,
};

use crate::args::{Cli, Command, EngineArgs, NoiseArgs, PhantomArgs, SegmentArgs, SweepArgs};

const USAGE_ERROR: u8 = 1;
const RUNTIME_ERROR: u8 = 2;

enum Failure {
    Usage(String),
    Runtime(fuzzyseg_core::Error),
}

impl From<fuzzyseg_core::Error> for Failure {
    fn from(e: fuzzyseg_core::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let outcome = match cli.command {
        Command::Segment(a) => cmd_segment(a),
        Command::Phantom(a) => cmd_phantom(a),
        Command::Noise(a) => cmd_noise(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(RUNTIME_ERROR)
        }
    }
}

fn engine_config(clusters: usize, engine: &EngineArgs) -> Result<(FcmConfig, NeighborhoodSpec), Failure> {
    let fcm = FcmConfig {
        clusters,
        fuzzifier: engine.fuzzifier,
        epsilon: engine.epsilon,
        max_iter: engine.max_iter,
        seed: 0,
    };
    let neighborhood = NeighborhoodSpec {
        window: engine.window,
        include_center: false,
    };
    fcm.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    neighborhood
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((fcm, neighborhood))
}

fn cmd_segment(a: SegmentArgs) -> Result<(), Failure> {
    let (fcm, neighborhood) = engine_config(a.clusters, &a.engine)?;
    let img = read_pgm(&a.input)?;
    let cfg = RunConfig {
        method: a.method,
        fcm,
        neighborhood,
    };
    let seg = segment(&img, &cfg)?;
    write_label_map(&seg.labels, a.clusters, &a.output)?;
    let centers: Vec<String> = seg.centers.as_slice().iter().map(|c| format!("{c:.3}")).collect();
    println!(
        "{}: {} iterations, centers [{}] -> {}",
        a.method,
        seg.iterations,
        centers.join(", "),
        a.output.display()
    );
    Ok(())
}

fn cmd_phantom(a: PhantomArgs) -> Result<(), Failure> {
    let (w, h) = a.size;
    let phantom = make_phantom(w, h, a.layout, &a.intensities)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    write_pgm(&phantom.image, &a.output)?;
    if let Some(truth) = &a.truth {
        write_label_map(&phantom.truth, phantom.clusters(), truth)?;
    }
    Ok(())
}

fn cmd_noise(a: NoiseArgs) -> Result<(), Failure> {
    let spec = NoiseSpec::new(a.percent, a.seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let img = read_pgm(&a.input)?;
    write_pgm(&add_gaussian_noise(&img, &spec)?, &a.output)?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let (w, h) = a.size;
    let phantom = make_phantom(w, h, a.layout, &a.intensities)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let clusters = a.clusters.unwrap_or(phantom.clusters());
    let (fcm, neighborhood) = engine_config(clusters, &a.engine)?;
    let cfg = SweepConfig {
        fcm,
        neighborhood,
        timing: a.timing,
    };
    let report = run_sweep(&phantom, &a.methods, &a.levels, &a.seeds, &cfg)?;
    write_csv(&report, &a.report)?;

    println!("{:<8}{:>10}{:>12}{:>8}", "method", "noise %", "mean A_s", "failed");
    for &method in &a.methods {
        for &level in &a.levels {
            let failed = report
                .rows
                .iter()
                .filter(|r| r.method == method && r.noise_percent == level && r.outcome.is_err())
                .count();
            let mean = report
                .mean_accuracy(method, level)
                .map_or_else(|| "-".to_string(), |m| format!("{m:.4}"));
            println!("{:<8}{:>10}{:>12}{:>8}", method, level, mean, failed);
        }
    }
    if let Some(first) = report.rows.iter().find_map(|r| r.outcome.as_ref().err()) {
        eprintln!("warning: some rows failed, first error: {first}");
    }
    Ok(())
}
