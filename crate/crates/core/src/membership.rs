//! Fuzzy partitions, cluster centers and defuzzification.

use crate::error::{Error, Result};
use crate::image::{Dims, LabelMap};

/// A `v x n` fuzzy partition.
///
/// Stored point-major: the `v` memberships of point `k` are contiguous, so
/// [`MembershipMatrix::column`] is a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    clusters: usize,
    points: usize,
    values: Vec<f64>,
}

impl MembershipMatrix {
    pub fn zeros(clusters: usize, points: usize) -> Self {
        Self {
            clusters,
            points,
            values: vec![0.0; clusters * points],
        }
    }

    /// Builds a matrix from point-major values (`values[k * v + i]`).
    pub fn from_columns(clusters: usize, points: usize, values: Vec<f64>) -> Result<Self> {
        if clusters == 0 || values.len() != clusters * points {
            return Err(Error::DimensionMismatch(format!(
                "{clusters}x{points} membership matrix cannot hold {} values",
                values.len()
            )));
        }
        Ok(Self {
            clusters,
            points,
            values,
        })
    }

    /// Number of clusters, `v`.
    pub fn clusters(&self) -> usize {
        self.clusters
    }

    /// Number of points, `n`.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Membership of point `k` in cluster `i`.
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[k * self.clusters + i]
    }

    pub fn set(&mut self, i: usize, k: usize, value: f64) {
        self.values[k * self.clusters + i] = value;
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.values[k * self.clusters..(k + 1) * self.clusters]
    }

    pub fn column_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.values[k * self.clusters..(k + 1) * self.clusters]
    }

    pub fn columns(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.clusters)
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.columns().map(|c| c[i]).sum()
    }

    /// Largest deviation of any column sum from 1.
    pub fn max_column_error(&self) -> f64 {
        self.columns()
            .map(|c| (c.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Checks the per-point partition constraints: every value in `[0, 1]`
    /// and every column summing to one within `tol`.
    pub fn check_partition(&self, tol: f64) -> Result<()> {
        for (k, col) in self.columns().enumerate() {
            if let Some(u) = col.iter().find(|u| !(0.0..=1.0).contains(*u)) {
                return Err(Error::InvalidConfig(format!(
                    "membership {u} of point {k} outside [0, 1]"
                )));
            }
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidConfig(format!(
                    "memberships of point {k} sum to {sum}"
                )));
            }
        }
        Ok(())
    }

    /// Checks `0 < sum_k u_ik < n` for every cluster: none empty, none
    /// absorbing every point.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let n = self.points as f64;
        for i in 0..self.clusters {
            let s = self.row_sum(i);
            if !(s > 0.0 && (self.clusters == 1 || s < n)) {
                return Err(Error::DegenerateCluster { cluster: i });
            }
        }
        Ok(())
    }
}

/// Cluster prototypes in intensity space.
#[derive(Debug, Clone, PartialEq)]
pub struct Centers(Vec<f64>);

impl Centers {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfig("at least one center is required".into()));
        }
        if let Some(c) = values.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig(format!("center {c} is not finite")));
        }
        Ok(Self(values))
    }

    /// `v` centers evenly spaced over the intensity range, `(i + 0.5) * 255 / v`.
    pub fn evenly_spaced(clusters: usize) -> Self {
        let v = clusters as f64;
        Self((0..clusters).map(|i| (i as f64 + 0.5) * 255.0 / v).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Largest absolute per-cluster displacement between two center sets.
    pub fn max_shift(&self, other: &Centers) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for Centers {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(col: &[f64]) -> usize {
    let mut best = 0;
    for (i, &u) in col.iter().enumerate().skip(1) {
        if u > col[best] {
            best = i;
        }
    }
    best
}

/// Hard labels by per-pixel argmax of the memberships.
pub fn defuzzify(u: &MembershipMatrix, dims: Dims) -> Result<LabelMap> {
    if u.points() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} membership columns for a {}x{} image",
            u.points(),
            dims.width,
            dims.height
        )));
    }
    let labels = u.columns().map(argmax).collect();
    LabelMap::new(dims.width, dims.height, labels)
}
