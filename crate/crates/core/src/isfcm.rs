//! Spatial fuzzy c-means with a neighborhood label prior.
//!
//! Each pixel's membership in cluster `i` is the product of three pieces of
//! evidence, renormalized over clusters:
//!
//! * `P_ik`, the fraction of its neighbors hard-labeled `i` last iteration;
//! * `f_ik`, its own FCM membership from intensity alone;
//! * `g_ik`, the mean FCM membership of its neighbors in cluster `i`.
//!
//! A pixel whose neighbors unanimously carry another label gets `P_ik = 0`
//! and cannot stay in cluster `i`, whatever its intensity. The run starts
//! from histogram FCM, so only a few spatial iterations are needed.
//!
//! All pixels in one iteration read the same snapshot of labels and
//! centers (Jacobi-style), so the update parallelizes without changing the
//! result.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fcm::{fcm_objective, update_centers, update_memberships, FcmConfig, Init, Iteration};
use crate::hist_fcm::{expand_to_pixels, run_hist_fcm, HistFcmResult};
use crate::image::{compute_histogram, GrayImage, LabelMap};
use crate::membership::{defuzzify, Centers, MembershipMatrix};
use crate::neighborhood::{for_each_neighbor, NeighborhoodSpec};
use crate::numeric::CHUNK;

#[derive(Debug, Clone, PartialEq)]
pub struct IsfcmConfig {
    pub base: FcmConfig,
    pub neighborhood: NeighborhoodSpec,
    /// Rescale each pixel's memberships to sum to one.
    pub renormalize: bool,
}

impl Default for IsfcmConfig {
    fn default() -> Self {
        Self {
            base: FcmConfig::default(),
            neighborhood: NeighborhoodSpec::default(),
            renormalize: true,
        }
    }
}

impl IsfcmConfig {
    pub fn with_clusters(clusters: usize) -> Self {
        Self {
            base: FcmConfig::with_clusters(clusters),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.neighborhood.validate()
    }
}

#[derive(Debug, Clone)]
pub struct IsfcmResult {
    pub centers: Centers,
    pub memberships: MembershipMatrix,
    pub labels: LabelMap,
    /// Spatial iterations, not counting the histogram initialization.
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    /// True when centers settled or labels stopped changing before `max_iter`.
    pub converged: bool,
    pub initialization: HistFcmResult,
}

/// Fraction of the neighbors of pixel `k` labeled `cluster`.
///
/// Returns 0 for a pixel with no neighbors (a 1x1 image).
pub fn prior_probability(
    labels: &LabelMap,
    k: usize,
    cluster: usize,
    spec: &NeighborhoodSpec,
) -> f64 {
    let (mut hits, mut total) = (0usize, 0usize);
    for_each_neighbor(labels.dims(), k, spec, |z| {
        total += 1;
        hits += usize::from(labels.labels()[z] == cluster);
    });
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

/// One spatial membership update for every pixel.
///
/// `labels` are the previous iteration's hard labels. If every product
/// `P f g` of a pixel vanishes (its intensity sits exactly on a center that
/// none of its neighbors are labeled with), the pixel falls back to `P g`
/// and then to `P`, so a unanimous neighborhood still wins.
pub fn spatial_membership(
    img: &GrayImage,
    centers: &Centers,
    labels: &LabelMap,
    cfg: &IsfcmConfig,
) -> Result<MembershipMatrix> {
    let v = centers.len();
    if labels.dims() != img.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} labels for a {}x{} image",
            labels.width(),
            labels.height(),
            img.width(),
            img.height()
        )));
    }
    labels.check_range(v)?;

    let f = update_memberships(img, centers, cfg.base.fuzzifier);
    let dims = img.dims();
    let spec = cfg.neighborhood;
    let renormalize = cfg.renormalize;
    let mut out = MembershipMatrix::zeros(v, img.len());
    out.values_mut()
        .par_chunks_mut(v * CHUNK)
        .enumerate()
        .for_each(|(chunk, cols)| {
            let mut votes = vec![0usize; v];
            let mut avg = vec![0.0f64; v];
            for (offset, col) in cols.chunks_exact_mut(v).enumerate() {
                let k = chunk * CHUNK + offset;
                votes.fill(0);
                avg.fill(0.0);
                let mut count = 0usize;
                for_each_neighbor(dims, k, &spec, |z| {
                    count += 1;
                    votes[labels.labels()[z]] += 1;
                    for (a, u) in avg.iter_mut().zip(f.column(z)) {
                        *a += u;
                    }
                });
                let own = f.column(k);
                if count == 0 {
                    col.copy_from_slice(own);
                    continue;
                }
                let n_k = count as f64;
                for i in 0..v {
                    let prior = votes[i] as f64 / n_k;
                    avg[i] /= n_k;
                    col[i] = prior * own[i] * avg[i];
                }
                if !renormalize || normalize(col) {
                    continue;
                }
                for i in 0..v {
                    col[i] = votes[i] as f64 * avg[i];
                }
                if normalize(col) {
                    continue;
                }
                for i in 0..v {
                    col[i] = votes[i] as f64 / n_k;
                }
            }
        });
    Ok(out)
}

/// Scales `col` to sum to one; false (and untouched) if the sum is zero.
fn normalize(col: &mut [f64]) -> bool {
    let total: f64 = col.iter().sum();
    if total > 0.0 {
        col.iter_mut().for_each(|u| *u /= total);
        true
    } else {
        false
    }
}

/// Same weighted mean as [`update_centers`], applied to spatial memberships.
pub fn spatial_centers(img: &GrayImage, u: &MembershipMatrix, m: f64) -> Result<Centers> {
    update_centers(img, u, m)
}

pub fn run_isfcm(img: &GrayImage, cfg: &IsfcmConfig) -> Result<IsfcmResult> {
    run_isfcm_observed(img, cfg, |_| {})
}

/// [`run_isfcm`], calling `observer` after every spatial iteration.
pub fn run_isfcm_observed(
    img: &GrayImage,
    cfg: &IsfcmConfig,
    mut observer: impl FnMut(&Iteration<'_>),
) -> Result<IsfcmResult> {
    cfg.validate()?;
    let m = cfg.base.fuzzifier;
    let initialization = run_hist_fcm(&compute_histogram(img), &cfg.base, &Init::Auto)?;
    let mut memberships = expand_to_pixels(img, &initialization);
    let mut labels = defuzzify(&memberships, img.dims())?;
    let mut centers = initialization.centers.clone();

    let mut trace = Vec::new();
    let mut converged = false;
    for iteration in 1..=cfg.base.max_iter {
        let u = spatial_membership(img, &centers, &labels, cfg)?;
        let next_labels = defuzzify(&u, img.dims())?;
        let next = spatial_centers(img, &u, m)?;
        let objective = fcm_objective(img, &u, &next, m);
        trace.push(objective);
        observer(&Iteration {
            iteration,
            memberships: &u,
            centers: &next,
            objective,
        });
        let shift = next.max_shift(&centers);
        let stable = next_labels == labels;
        centers = next;
        labels = next_labels;
        memberships = u;
        if shift < cfg.base.epsilon || stable {
            converged = true;
            break;
        }
    }
    Ok(IsfcmResult {
        centers,
        memberships,
        labels,
        iterations: trace.len(),
        objective_trace: trace,
        converged,
        initialization,
    })
}
