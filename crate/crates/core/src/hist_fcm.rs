//! Fuzzy c-means over the gray-level histogram.
//!
//! Every pixel with gray level `l` has the same distance to each center, so
//! clustering the 256 levels weighted by their counts gives exactly the
//! pixel-domain result at `O(v * 256)` cost per iteration.

use rayon::prelude::*;

use crate::error::Result;
use crate::fcm::{check_levels, FcmConfig, Init, Iteration};
use crate::image::{GrayImage, Histogram, LEVELS};
use crate::membership::{Centers, MembershipMatrix};
use crate::numeric::{membership_column, weighted_centers, weighted_objective, CHUNK};

#[derive(Debug, Clone)]
pub struct HistFcmResult {
    pub centers: Centers,
    /// `v x 256` memberships, one column per gray level.
    pub level_memberships: MembershipMatrix,
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    /// Center after each iteration, in order.
    pub center_trace: Vec<Centers>,
    pub converged: bool,
}

/// Memberships of all 256 gray levels, whether or not they occur.
pub fn level_memberships(centers: &Centers, m: f64) -> MembershipMatrix {
    let v = centers.len();
    let mut u = MembershipMatrix::zeros(v, LEVELS);
    for (l, col) in u.values_mut().chunks_exact_mut(v).enumerate() {
        membership_column(l as f64, centers.as_slice(), m, col);
    }
    u
}

fn level_point(hist: &Histogram) -> impl Fn(usize) -> (f64, f64) + Sync + '_ {
    move |l| (l as f64, hist.counts()[l] as f64)
}

/// Centers weighted by level counts: `sum_l u^m H(l) l / sum_l u^m H(l)`.
pub fn level_centers(hist: &Histogram, u: &MembershipMatrix, m: f64) -> Result<Centers> {
    weighted_centers(u, m, level_point(hist))
}

/// `sum_l sum_i u_il^m H(l) (l - c_i)^2`.
pub fn hist_objective(hist: &Histogram, u: &MembershipMatrix, centers: &Centers, m: f64) -> f64 {
    weighted_objective(u, centers, m, level_point(hist))
}

pub fn run_hist_fcm(hist: &Histogram, cfg: &FcmConfig, init: &Init) -> Result<HistFcmResult> {
    run_hist_fcm_observed(hist, cfg, init, |_| {})
}

/// [`run_hist_fcm`], calling `observer` after every iteration with the
/// level-domain memberships.
pub fn run_hist_fcm_observed(
    hist: &Histogram,
    cfg: &FcmConfig,
    init: &Init,
    mut observer: impl FnMut(&Iteration<'_>),
) -> Result<HistFcmResult> {
    cfg.validate()?;
    check_levels(hist.nonzero_levels(), cfg.clusters)?;
    let present: Vec<u8> = (0..=255u8).filter(|&l| hist.count(l) > 0).collect();
    let mut centers = init.resolve(cfg, &present)?;

    let m = cfg.fuzzifier;
    let mut objective_trace = Vec::new();
    let mut center_trace = Vec::new();
    let mut last = None;
    let mut converged = false;
    for iteration in 1..=cfg.max_iter {
        let u = level_memberships(&centers, m);
        let next = level_centers(hist, &u, m)?;
        let objective = hist_objective(hist, &u, &next, m);
        objective_trace.push(objective);
        center_trace.push(next.clone());
        observer(&Iteration {
            iteration,
            memberships: &u,
            centers: &next,
            objective,
        });
        let shift = next.max_shift(&centers);
        centers = next;
        last = Some(u);
        if shift < cfg.epsilon {
            converged = true;
            break;
        }
    }
    Ok(HistFcmResult {
        centers,
        level_memberships: last.expect("max_iter >= 1"),
        iterations: objective_trace.len(),
        objective_trace,
        center_trace,
        converged,
    })
}

/// Pixel memberships looked up from the level memberships of each
/// pixel's intensity.
pub fn expand_to_pixels(img: &GrayImage, res: &HistFcmResult) -> MembershipMatrix {
    let levels = &res.level_memberships;
    let v = levels.clusters();
    let mut u = MembershipMatrix::zeros(v, img.len());
    u.values_mut()
        .par_chunks_mut(v * CHUNK)
        .zip(img.pixels().par_chunks(CHUNK))
        .for_each(|(cols, px)| {
            for (col, &x) in cols.chunks_exact_mut(v).zip(px) {
                col.copy_from_slice(levels.column(usize::from(x)));
            }
        });
    u
}
