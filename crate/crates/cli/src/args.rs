use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fuzzyseg_core::{Layout, Method};

#[derive(Debug, Parser)]
#[command(name = "fuzzyseg", version, about = "Fuzzy c-means and spatial ISFCM segmentation of grayscale images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a PGM image and write the label map as a PGM.
    Segment(SegmentArgs),
    /// Generate a synthetic phantom with known ground truth.
    Phantom(PhantomArgs),
    /// Add seeded Gaussian noise to a PGM image.
    Noise(NoiseArgs),
    /// Accuracy-vs-noise comparison of the engines on a phantom.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Fuzzifier m (> 1).
    #[arg(long = "m", default_value_t = 2.0)]
    pub fuzzifier: f64,
    /// Stop when no center moves by more than this (intensity units).
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Neighborhood window side (odd, >= 3); ISFCM only.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long)]
    pub clusters: usize,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub output: PathBuf,
}

// List-valued flags take one comma-separated value; the `::std::vec::Vec`
// spelling stops clap from treating them as repeatable.
#[derive(Debug, Args)]
pub struct PhantomArgs {
    #[arg(long, value_parser = parse_layout)]
    pub layout: Layout,
    /// WIDTHxHEIGHT, e.g. 64x64.
    #[arg(long, value_parser = parse_size)]
    pub size: (usize, usize),
    /// Comma-separated region intensities, e.g. 80,170.
    #[arg(long, value_parser = parse_u8_list)]
    pub intensities: ::std::vec::Vec<u8>,
    #[arg(long)]
    pub output: PathBuf,
    /// Also write the ground-truth label map here.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Noise standard deviation as a percentage of 255.
    #[arg(long)]
    pub percent: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_layout, default_value = "halves")]
    pub layout: Layout,
    #[arg(long, value_parser = parse_size, default_value = "64x64")]
    pub size: (usize, usize),
    #[arg(long, value_parser = parse_u8_list, default_value = "80,170")]
    pub intensities: ::std::vec::Vec<u8>,
    /// Comma-separated noise percentages.
    #[arg(long, value_parser = parse_f64_list, default_value = "0,5,10,15")]
    pub levels: ::std::vec::Vec<f64>,
    /// Seeds as an inclusive range `a..b` or a comma-separated list.
    #[arg(long, value_parser = parse_seeds, default_value = "1..10")]
    pub seeds: ::std::vec::Vec<u64>,
    #[arg(long, value_parser = parse_method_list, default_value = "fcm,isfcm")]
    pub methods: ::std::vec::Vec<Method>,
    /// Cluster count; defaults to the number of phantom regions.
    #[arg(long)]
    pub clusters: Option<usize>,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Record wall time per row (makes the report non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub report: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: fuzzyseg_core::Error| e.to_string())
}

fn parse_layout(s: &str) -> Result<Layout, String> {
    s.parse().map_err(|e: fuzzyseg_core::Error| e.to_string())
}

pub fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    let dim = |t: &str| match t.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("invalid dimension `{t}` in `{s}`")),
        Ok(n) => Ok(n),
    };
    Ok((dim(w)?, dim(h)?))
}

fn split_list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(item)
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err("list must not be empty".into());
    }
    Ok(items)
}

pub fn parse_u8_list(s: &str) -> Result<Vec<u8>, String> {
    split_list(s, |t| t.parse().map_err(|_| format!("`{t}` is not an intensity in 0..=255")))
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    split_list(s, |t| match t.parse::<f64>() {
        Ok(p) if p >= 0.0 && p.is_finite() => Ok(p),
        _ => Err(format!("`{t}` is not a non-negative number")),
    })
}

pub fn parse_method_list(s: &str) -> Result<Vec<Method>, String> {
    split_list(s, parse_method)
}

pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let bound = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("invalid seed bound `{t}`"))
        };
        let (lo, hi) = (bound(a)?, bound(b)?);
        if lo > hi {
            return Err(format!("empty seed range `{s}`"));
        }
        return Ok((lo..=hi).collect());
    }
    split_list(s, |t| t.parse().map_err(|_| format!("invalid seed `{t}`")))
}
