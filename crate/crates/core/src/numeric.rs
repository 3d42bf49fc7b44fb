//! Small numeric kernels shared by the clustering engines.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::membership::{Centers, MembershipMatrix};

/// Points per partial sum in chunked reductions. Fixed, so the summation
/// tree (and therefore every bit of the result) does not depend on the
/// number of worker threads.
pub(crate) const CHUNK: usize = 4096;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `u^m`, with the common `m = 2` case kept exact.
#[inline]
pub(crate) fn pow_m(u: f64, m: f64) -> f64 {
    if m == 2.0 {
        u * u
    } else {
        u.powf(m)
    }
}

/// Fills `out` with the FCM memberships of a scalar `x` given `centers`.
///
/// Equivalent to `u_i = 1 / sum_j (d2_i / d2_j)^(1/(m-1))` with squared
/// distances, evaluated relative to the nearest center so nothing
/// overflows. When `x` sits exactly on `t` centers, each of them gets
/// `1/t` and every other cluster gets 0.
#[inline]
pub(crate) fn membership_column(x: f64, centers: &[f64], m: f64, out: &mut [f64]) {
    debug_assert_eq!(centers.len(), out.len());
    let mut zeros = 0usize;
    let mut dmin = f64::INFINITY;
    for (o, &c) in out.iter_mut().zip(centers) {
        let d = x - c;
        *o = d * d;
        if *o == 0.0 {
            zeros += 1;
        }
        dmin = dmin.min(*o);
    }
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        for o in out.iter_mut() {
            *o = if *o == 0.0 { share } else { 0.0 };
        }
        return;
    }
    let exponent = 1.0 / (m - 1.0);
    let mut total = 0.0;
    for o in out.iter_mut() {
        let ratio = dmin / *o;
        *o = if exponent == 1.0 {
            ratio
        } else {
            ratio.powf(exponent)
        };
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

/// Per-cluster weighted means `sum_k u_ik^m w_k x_k / sum_k u_ik^m w_k`.
///
/// `point(k)` yields `(x_k, w_k)`. Points with zero weight contribute
/// nothing. Fails with [`Error::DegenerateCluster`] when a cluster's
/// denominator is zero.
pub(crate) fn weighted_centers<F>(u: &MembershipMatrix, m: f64, point: F) -> Result<Centers>
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    let v = u.clusters();
    let n = u.points();
    let partials: Vec<Vec<(CompensatedSum, CompensatedSum)>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut acc = vec![(CompensatedSum::default(), CompensatedSum::default()); v];
            for k in chunk * CHUNK..((chunk + 1) * CHUNK).min(n) {
                let (x, w) = point(k);
                if w == 0.0 {
                    continue;
                }
                for (i, &uik) in u.column(k).iter().enumerate() {
                    let weight = pow_m(uik, m) * w;
                    acc[i].0.add(weight * x);
                    acc[i].1.add(weight);
                }
            }
            acc
        })
        .collect();

    let mut centers = Vec::with_capacity(v);
    for i in 0..v {
        let (mut num, mut den) = (CompensatedSum::default(), CompensatedSum::default());
        for part in &partials {
            num.add(part[i].0.value());
            den.add(part[i].1.value());
        }
        let den = den.value();
        if den <= 0.0 || !den.is_finite() {
            return Err(Error::DegenerateCluster { cluster: i });
        }
        centers.push(num.value() / den);
    }
    Centers::new(centers)
}

/// `sum_k sum_i u_ik^m w_k (x_k - c_i)^2`, chunked like [`weighted_centers`].
pub(crate) fn weighted_objective<F>(u: &MembershipMatrix, centers: &Centers, m: f64, point: F) -> f64
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    let n = u.points();
    let c = centers.as_slice();
    let partials: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut acc = CompensatedSum::default();
            for k in chunk * CHUNK..((chunk + 1) * CHUNK).min(n) {
                let (x, w) = point(k);
                if w == 0.0 {
                    continue;
                }
                for (uik, ci) in u.column(k).iter().zip(c) {
                    let d = x - ci;
                    acc.add(pow_m(*uik, m) * w * d * d);
                }
            }
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    for p in partials {
        total.add(p);
    }
    total.value()
}
