use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::metrics::{align_labels, segmentation_accuracy};
use crate::eval::noise::{add_gaussian_noise, NoiseSpec};
use crate::eval::phantom::Phantom;
use crate::fcm::{run_fcm, FcmConfig, Init};
use crate::image::{GrayImage, LabelMap};
use crate::isfcm::{run_isfcm, IsfcmConfig};
use crate::membership::{defuzzify, Centers};
use crate::neighborhood::NeighborhoodSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Fcm,
    Isfcm,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fcm" => Ok(Method::Fcm),
            "isfcm" => Ok(Method::Isfcm),
            other => Err(Error::InvalidMethod(other.to_string())),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fcm => "fcm",
            Method::Isfcm => "isfcm",
        })
    }
}

/// Everything needed to segment one image with either engine.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub fcm: FcmConfig,
    pub neighborhood: NeighborhoodSpec,
}

impl RunConfig {
    pub fn new(method: Method, clusters: usize) -> Self {
        Self {
            method,
            fcm: FcmConfig::with_clusters(clusters),
            neighborhood: NeighborhoodSpec::default(),
        }
    }

    pub fn isfcm_config(&self) -> IsfcmConfig {
        IsfcmConfig {
            base: self.fcm.clone(),
            neighborhood: self.neighborhood,
            renormalize: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Segmentation {
    pub labels: LabelMap,
    pub centers: Centers,
    pub iterations: usize,
}

/// Runs the configured engine and defuzzifies its memberships.
pub fn segment(img: &GrayImage, cfg: &RunConfig) -> Result<Segmentation> {
    match cfg.method {
        Method::Fcm => {
            let res = run_fcm(img, &cfg.fcm, &Init::Auto)?;
            Ok(Segmentation {
                labels: defuzzify(&res.memberships, img.dims())?,
                centers: res.centers,
                iterations: res.iterations,
            })
        }
        Method::Isfcm => {
            let res = run_isfcm(img, &cfg.isfcm_config())?;
            Ok(Segmentation {
                labels: res.labels,
                centers: res.centers,
                iterations: res.iterations,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub fcm: FcmConfig,
    pub neighborhood: NeighborhoodSpec,
    /// Record per-row wall time. Off by default so that reports are
    /// reproducible byte for byte.
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(clusters: usize) -> Self {
        Self {
            fcm: FcmConfig::with_clusters(clusters),
            neighborhood: NeighborhoodSpec::default(),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub method: Method,
    pub noise_percent: f64,
    pub seed: u64,
    /// `Ok((accuracy, iterations))`, or the engine error message.
    pub outcome: std::result::Result<(f64, usize), String>,
    /// Wall time in milliseconds; 0 unless timing was requested.
    pub wall_ms: u128,
}

impl SweepRow {
    pub fn accuracy(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|&(a, _)| a)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Mean accuracy of the successful rows matching `method` and `percent`.
    pub fn mean_accuracy(&self, method: Method, percent: f64) -> Option<f64> {
        let hits: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.method == method && r.noise_percent == percent)
            .filter_map(SweepRow::accuracy)
            .collect();
        (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64)
    }

    pub fn row(&self, method: Method, percent: f64, seed: u64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.noise_percent == percent && r.seed == seed)
    }
}

/// Noise, segment, align and score every `(method, level, seed)`.
///
/// Rows are computed in parallel but reported in input order, methods
/// outermost and seeds innermost. Engine failures become failed rows.
pub fn run_sweep(
    phantom: &Phantom,
    methods: &[Method],
    noise_levels: &[f64],
    seeds: &[u64],
    cfg: &SweepConfig,
) -> Result<SweepReport> {
    if methods.is_empty() || noise_levels.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs at least one method, noise level and seed".into(),
        ));
    }
    for &percent in noise_levels {
        NoiseSpec::new(percent, 0)?;
    }
    cfg.fcm.validate()?;
    cfg.neighborhood.validate()?;

    let jobs: Vec<(Method, f64, u64)> = methods
        .iter()
        .flat_map(|&m| {
            noise_levels
                .iter()
                .flat_map(move |&p| seeds.iter().map(move |&s| (m, p, s)))
        })
        .collect();
    let clusters = cfg.fcm.clusters.max(phantom.clusters());
    let rows = jobs
        .into_par_iter()
        .map(|(method, noise_percent, seed)| {
            let start = Instant::now();
            let outcome = run_row(phantom, method, noise_percent, seed, cfg, clusters);
            let wall_ms = if cfg.timing {
                start.elapsed().as_millis()
            } else {
                0
            };
            SweepRow {
                method,
                noise_percent,
                seed,
                outcome: outcome.map_err(|e| e.to_string()),
                wall_ms,
            }
        })
        .collect();
    Ok(SweepReport { rows })
}

fn run_row(
    phantom: &Phantom,
    method: Method,
    percent: f64,
    seed: u64,
    cfg: &SweepConfig,
    align_clusters: usize,
) -> Result<(f64, usize)> {
    let noisy = add_gaussian_noise(&phantom.image, &NoiseSpec::new(percent, seed)?)?;
    let run = RunConfig {
        method,
        fcm: cfg.fcm.clone(),
        neighborhood: cfg.neighborhood,
    };
    let seg = segment(&noisy, &run)?;
    let aligned = align_labels(&seg.labels, &phantom.truth, align_clusters)?;
    Ok((segmentation_accuracy(&aligned, &phantom.truth)?, seg.iterations))
}
