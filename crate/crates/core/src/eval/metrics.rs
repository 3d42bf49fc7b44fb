use itertools::Itertools;

use crate::error::{Error, Result};
use crate::image::LabelMap;

/// Largest cluster count [`align_labels`] will enumerate permutations for.
pub const MAX_ALIGN_CLUSTERS: usize = 8;

fn check_dims(pred: &LabelMap, truth: &LabelMap) -> Result<()> {
    if pred.dims() != truth.dims() {
        return Err(Error::DimensionMismatch(format!(
            "prediction is {}x{}, truth is {}x{}",
            pred.width(),
            pred.height(),
            truth.width(),
            truth.height()
        )));
    }
    Ok(())
}

/// Relabels `pred` by the permutation of `0..v` that agrees with `truth`
/// on the most pixels. Ties go to the lexicographically smallest
/// permutation, so an already-aligned prediction keeps the identity.
pub fn align_labels(pred: &LabelMap, truth: &LabelMap, clusters: usize) -> Result<LabelMap> {
    Ok(best_permutation(pred, truth, clusters)?.1)
}

/// The winning permutation (`perm[pred_label] = truth_label`) and the
/// relabeled map.
pub fn best_permutation(
    pred: &LabelMap,
    truth: &LabelMap,
    clusters: usize,
) -> Result<(Vec<usize>, LabelMap)> {
    if clusters > MAX_ALIGN_CLUSTERS {
        return Err(Error::TooManyClusters(clusters));
    }
    check_dims(pred, truth)?;
    pred.check_range(clusters)?;
    truth.check_range(clusters)?;

    // confusion[p][t]: pixels predicted p whose truth is t
    let mut confusion = vec![vec![0usize; clusters]; clusters];
    for (&p, &t) in pred.labels().iter().zip(truth.labels()) {
        confusion[p][t] += 1;
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for perm in (0..clusters).permutations(clusters) {
        let agree: usize = perm.iter().enumerate().map(|(p, &t)| confusion[p][t]).sum();
        if best.as_ref().is_none_or(|(score, _)| agree > *score) {
            best = Some((agree, perm));
        }
    }
    let perm = best.map(|(_, p)| p).unwrap_or_default();
    let labels = pred.labels().iter().map(|&p| perm[p]).collect();
    let aligned = LabelMap::new(pred.width(), pred.height(), labels)?;
    Ok((perm, aligned))
}

/// Percentage of pixels whose label matches the truth.
pub fn segmentation_accuracy(pred: &LabelMap, truth: &LabelMap) -> Result<f64> {
    check_dims(pred, truth)?;
    let correct = pred
        .labels()
        .iter()
        .zip(truth.labels())
        .filter(|(p, t)| p == t)
        .count();
    Ok(100.0 * correct as f64 / pred.len() as f64)
}
