//! Conventional fuzzy c-means over pixel intensities.
//!
//! Alternates the closed-form membership update (exact minimizer of the
//! objective for fixed centers) with the weighted-mean center update
//! (exact minimizer for fixed memberships). Distances are Euclidean in
//! intensity space; the membership update uses their squares.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{compute_histogram, GrayImage};
use crate::membership::{Centers, MembershipMatrix};
use crate::numeric::{membership_column, weighted_centers, weighted_objective, CHUNK};

#[derive(Debug, Clone, PartialEq)]
pub struct FcmConfig {
    /// Number of clusters, `v`.
    pub clusters: usize,
    /// Fuzzifier `m > 1`.
    pub fuzzifier: f64,
    /// Stop once no center moves by this much (intensity units).
    pub epsilon: f64,
    pub max_iter: usize,
    /// Seed for [`Init::Random`].
    pub seed: u64,
}

impl Default for FcmConfig {
    fn default() -> Self {
        Self {
            clusters: 2,
            fuzzifier: 2.0,
            epsilon: 1e-3,
            max_iter: 100,
            seed: 0,
        }
    }
}

impl FcmConfig {
    pub fn with_clusters(clusters: usize) -> Self {
        Self {
            clusters,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::InvalidConfig("cluster count must be >= 1".into()));
        }
        if !(self.fuzzifier > 1.0 && self.fuzzifier.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "fuzzifier must be finite and > 1, got {}",
                self.fuzzifier
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

/// How to choose the starting centers.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    /// Evenly spaced over the intensity range: `(i + 0.5) * 255 / v`.
    #[default]
    Auto,
    Given(Centers),
    /// `v` distinct gray levels drawn from the image with the config seed.
    Random,
}

impl Init {
    pub(crate) fn resolve(&self, cfg: &FcmConfig, present: &[u8]) -> Result<Centers> {
        let centers = match self {
            Init::Auto => Centers::evenly_spaced(cfg.clusters),
            Init::Given(c) => c.clone(),
            Init::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let mut picked: Vec<f64> = present
                    .choose_multiple(&mut rng, cfg.clusters)
                    .map(|&l| f64::from(l))
                    .collect();
                picked.sort_by(f64::total_cmp);
                Centers::new(picked)?
            }
        };
        if centers.len() != cfg.clusters {
            return Err(Error::InvalidConfig(format!(
                "{} initial centers for {} clusters",
                centers.len(),
                cfg.clusters
            )));
        }
        Ok(centers)
    }
}

#[derive(Debug, Clone)]
pub struct FcmResult {
    pub centers: Centers,
    pub memberships: MembershipMatrix,
    pub iterations: usize,
    /// Objective after each iteration's center update.
    pub objective_trace: Vec<f64>,
    /// Whether the center-movement criterion fired before `max_iter`.
    pub converged: bool,
}

/// Snapshot handed to run observers after every iteration.
#[derive(Debug, Clone, Copy)]
pub struct Iteration<'a> {
    /// 1-based iteration number.
    pub iteration: usize,
    pub memberships: &'a MembershipMatrix,
    pub centers: &'a Centers,
    pub objective: f64,
}

/// `sum_k sum_i u_ik^m (x_k - c_i)^2`.
///
/// # Panics
///
/// If `u` is not `centers.len() x img.len()`.
pub fn fcm_objective(img: &GrayImage, u: &MembershipMatrix, centers: &Centers, m: f64) -> f64 {
    assert_eq!(u.points(), img.len(), "membership columns vs pixels");
    assert_eq!(u.clusters(), centers.len(), "membership rows vs centers");
    let px = img.pixels();
    weighted_objective(u, centers, m, |k| (f64::from(px[k]), 1.0))
}

/// Membership of every pixel for fixed centers.
pub fn update_memberships(img: &GrayImage, centers: &Centers, m: f64) -> MembershipMatrix {
    let v = centers.len();
    let c = centers.as_slice();
    let mut u = MembershipMatrix::zeros(v, img.len());
    u.values_mut()
        .par_chunks_mut(v * CHUNK)
        .zip(img.pixels().par_chunks(CHUNK))
        .for_each(|(cols, px)| {
            for (col, &x) in cols.chunks_exact_mut(v).zip(px) {
                membership_column(f64::from(x), c, m, col);
            }
        });
    u
}

/// Weighted-mean centers for fixed memberships.
pub fn update_centers(img: &GrayImage, u: &MembershipMatrix, m: f64) -> Result<Centers> {
    if u.points() != img.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} membership columns for {} pixels",
            u.points(),
            img.len()
        )));
    }
    let px = img.pixels();
    weighted_centers(u, m, |k| (f64::from(px[k]), 1.0))
}

pub(crate) fn check_levels(distinct: usize, clusters: usize) -> Result<()> {
    if clusters > distinct {
        return Err(Error::TooFewLevels { clusters, distinct });
    }
    Ok(())
}

pub fn run_fcm(img: &GrayImage, cfg: &FcmConfig, init: &Init) -> Result<FcmResult> {
    run_fcm_observed(img, cfg, init, |_| {})
}

/// [`run_fcm`], calling `observer` after every iteration.
pub fn run_fcm_observed(
    img: &GrayImage,
    cfg: &FcmConfig,
    init: &Init,
    mut observer: impl FnMut(&Iteration<'_>),
) -> Result<FcmResult> {
    cfg.validate()?;
    let hist = compute_histogram(img);
    check_levels(hist.nonzero_levels(), cfg.clusters)?;
    let present: Vec<u8> = (0..=255u8).filter(|&l| hist.count(l) > 0).collect();
    let mut centers = init.resolve(cfg, &present)?;

    let m = cfg.fuzzifier;
    let mut trace = Vec::new();
    let mut memberships = None;
    let mut converged = false;
    for iteration in 1..=cfg.max_iter {
        let u = update_memberships(img, &centers, m);
        let next = update_centers(img, &u, m)?;
        let objective = fcm_objective(img, &u, &next, m);
        trace.push(objective);
        observer(&Iteration {
            iteration,
            memberships: &u,
            centers: &next,
            objective,
        });
        let shift = next.max_shift(&centers);
        centers = next;
        memberships = Some(u);
        if shift < cfg.epsilon {
            converged = true;
            break;
        }
    }
    let memberships = memberships.expect("max_iter >= 1");
    memberships.check_nondegenerate()?;
    Ok(FcmResult {
        centers,
        memberships,
        iterations: trace.len(),
        objective_trace: trace,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn img(px: &[u8]) -> GrayImage {
        GrayImage::new(px.len(), 1, px.to_vec()).unwrap()
    }

    fn centers(c: &[f64]) -> Centers {
        Centers::new(c.to_vec()).unwrap()
    }

    /// Straight transcription of the membership formula, no shared code.
    fn oracle_membership(x: f64, c: &[f64], m: f64) -> Vec<f64> {
        let d2: Vec<f64> = c.iter().map(|ci| (x - ci).powi(2)).collect();
        if d2.contains(&0.0) {
            let t = d2.iter().filter(|&&d| d == 0.0).count() as f64;
            return d2.iter().map(|&d| if d == 0.0 { 1.0 / t } else { 0.0 }).collect();
        }
        d2.iter()
            .map(|di| 1.0 / d2.iter().map(|dj| (di / dj).powf(1.0 / (m - 1.0))).sum::<f64>())
            .collect()
    }

    fn scalar_objective(px: &[f64], u: &[Vec<f64>], c: &[f64], m: f64) -> f64 {
        let mut total = 0.0;
        for (k, x) in px.iter().enumerate() {
            for (i, ci) in c.iter().enumerate() {
                total += u[k][i].powf(m) * (x - ci).powi(2);
            }
        }
        total
    }

    fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-10 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        (a + b) / 2.0
    }

    #[test]
    fn objective_examples() {
        let one = img(&[5]);
        let u = MembershipMatrix::from_columns(2, 1, vec![0.5, 0.5]).unwrap();
        let got = fcm_objective(&one, &u, &centers(&[0.0, 10.0]), 2.0);
        let oracle = scalar_objective(&[5.0], &[vec![0.5, 0.5]], &[0.0, 10.0], 2.0);
        assert_eq!(got, 12.5);
        assert_eq!(got, oracle);

        let two = img(&[3, 9]);
        let crisp = MembershipMatrix::from_columns(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(fcm_objective(&two, &crisp, &centers(&[3.0, 9.0]), 2.0), 0.0);

        // doubling every distance quadruples the objective
        let near = fcm_objective(&img(&[10]), &u, &centers(&[8.0, 13.0]), 2.0);
        let far = fcm_objective(&img(&[10]), &u, &centers(&[6.0, 16.0]), 2.0);
        assert!((far - 4.0 * near).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let u = update_memberships(&img(&[5]), &centers(&[0.0, 10.0]), 2.0);
        assert_eq!(u.column(0), &[0.5, 0.5]);

        let u = update_memberships(&img(&[2]), &centers(&[0.0, 10.0]), 2.0);
        assert!((u.get(0, 0) - 16.0 / 17.0).abs() < 1e-15);

        let u = update_memberships(&img(&[0]), &centers(&[0.0, 10.0]), 2.0);
        assert_eq!(u.column(0), &[1.0, 0.0]);
    }

    #[test]
    fn membership_16_over_17_is_the_grid_minimum() {
        let c = [0.0, 10.0];
        let f = |u1: f64| u1.powi(2) * 4.0 + (1.0 - u1).powi(2) * 64.0;
        let best = (0..=1000)
            .map(|s| s as f64 * 1e-3)
            .min_by(|a, b| f(*a).total_cmp(&f(*b)))
            .unwrap();
        let u = update_memberships(&img(&[2]), &centers(&c), 2.0);
        assert!((best - u.get(0, 0)).abs() <= 1e-3);
        assert!(f(u.get(0, 0)) <= f(best) + 1e-12);
    }

    #[test]
    fn membership_matches_oracle_for_other_fuzzifiers() {
        for &m in &[1.3, 2.0, 2.7, 4.0] {
            let c = [12.0, 90.5, 201.0];
            let u = update_memberships(&img(&[0, 50, 100, 150, 255]), &centers(&c), m);
            for (k, x) in [0.0, 50.0, 100.0, 150.0, 255.0].into_iter().enumerate() {
                for (a, b) in u.column(k).iter().zip(oracle_membership(x, &c, m)) {
                    assert!((a - b).abs() < 1e-12, "m={m} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn center_examples() {
        let crisp = MembershipMatrix::from_columns(1, 2, vec![1.0, 1.0]).unwrap();
        assert_eq!(update_centers(&img(&[2, 4]), &crisp, 2.0).unwrap()[0], 3.0);

        let u = MembershipMatrix::from_columns(1, 2, vec![0.8, 0.2]).unwrap();
        let c = update_centers(&img(&[0, 10]), &u, 2.0).unwrap()[0];
        assert!((c - 0.4 / 0.68).abs() < 1e-15);
        let f = |c: f64| 0.64 * c * c + 0.04 * (10.0 - c).powi(2);
        assert!((golden_section(f, 0.0, 10.0) - c).abs() < 1e-6);

        let pixels = img(&[3, 17, 40, 41, 200]);
        let flat = MembershipMatrix::from_columns(1, 5, vec![0.3; 5]).unwrap();
        let c = update_centers(&pixels, &flat, 2.0).unwrap()[0];
        assert!((c - pixels.mean()).abs() < 1e-12);
    }

    #[test]
    fn center_update_flags_empty_cluster() {
        let u = MembershipMatrix::from_columns(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            update_centers(&img(&[1, 2]), &u, 2.0),
            Err(Error::DegenerateCluster { cluster: 1 })
        ));
    }

    fn halves() -> GrayImage {
        GrayImage::from_fn(16, 8, |x, _| if x < 8 { 80 } else { 170 }).unwrap()
    }

    #[test]
    fn separable_image_converges_to_the_two_levels() {
        let image = halves();
        let res = run_fcm(&image, &FcmConfig::default(), &Init::Auto).unwrap();
        assert!((res.centers[0] - 80.0).abs() < 1e-6);
        assert!((res.centers[1] - 170.0).abs() < 1e-6);
        // fixed-point equations hold at the result
        let u = update_memberships(&image, &res.centers, 2.0);
        let c = update_centers(&image, &u, 2.0).unwrap();
        assert!(c.max_shift(&res.centers) < 1e-9);
        for (k, &x) in image.pixels().iter().enumerate() {
            let want = usize::from(x == 170);
            assert!(res.memberships.get(want, k) > 0.99);
        }
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let image = img(&[10, 20, 60]);
        let res = run_fcm(&image, &FcmConfig::with_clusters(1), &Init::Auto).unwrap();
        assert!((res.centers[0] - 30.0).abs() < 1e-12);
        assert!(res.iterations <= 2);
    }

    #[test]
    fn constant_image_cannot_hold_two_clusters() {
        let image = GrayImage::filled(4, 4, 100).unwrap();
        assert!(matches!(
            run_fcm(&image, &FcmConfig::default(), &Init::Auto),
            Err(Error::TooFewLevels { clusters: 2, distinct: 1 })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = [
            FcmConfig { fuzzifier: 1.0, ..FcmConfig::default() },
            FcmConfig { epsilon: 0.0, ..FcmConfig::default() },
            FcmConfig { max_iter: 0, ..FcmConfig::default() },
            FcmConfig { clusters: 0, ..FcmConfig::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        let wrong_len = Init::Given(centers(&[1.0, 2.0, 3.0]));
        assert!(run_fcm(&halves(), &FcmConfig::default(), &wrong_len).is_err());
    }

    #[test]
    fn random_init_is_seeded() {
        let image = GrayImage::from_fn(8, 8, |x, y| (x * 30 + y) as u8).unwrap();
        let cfg = FcmConfig { clusters: 3, seed: 9, ..FcmConfig::default() };
        let present: Vec<u8> = image.pixels().to_vec();
        let a = Init::Random.resolve(&cfg, &present).unwrap();
        let b = Init::Random.resolve(&cfg, &present).unwrap();
        assert_eq!(a, b);
        assert!(run_fcm(&image, &cfg, &Init::Random).is_ok());
    }

    fn small_instance() -> impl Strategy<Value = (Vec<u8>, f64, f64)> {
        (
            proptest::collection::vec(any::<u8>(), 2..=10),
            0.0f64..255.0,
            0.0f64..255.0,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn membership_update_beats_grid_search((px, c0, c1) in small_instance()) {
            prop_assume!((c0 - c1).abs() > 1e-3);
            let image = img(&px);
            let c = centers(&[c0, c1]);
            let u = update_memberships(&image, &c, 2.0);
            let closed = fcm_objective(&image, &u, &c, 2.0);
            let k = 0;
            let x = f64::from(px[k]);
            let rest = closed
                - (0..2).map(|i| u.get(i, k).powi(2) * (x - c[i]).powi(2)).sum::<f64>();
            for s in 0..=1000 {
                let u0 = s as f64 * 1e-3;
                let trial = rest + u0.powi(2) * (x - c0).powi(2) + (1.0 - u0).powi(2) * (x - c1).powi(2);
                prop_assert!(trial >= closed - 1e-6);
            }
        }

        #[test]
        fn center_update_beats_golden_section(
            px in proptest::collection::vec(any::<u8>(), 2..=10),
            raw in proptest::collection::vec(0.01f64..1.0, 10),
        ) {
            let image = img(&px);
            let n = px.len();
            let mut vals = Vec::with_capacity(2 * n);
            for &r in raw.iter().take(n) {
                vals.extend([r, 1.0 - r]);
            }
            let u = MembershipMatrix::from_columns(2, n, vals).unwrap();
            let c = update_centers(&image, &u, 2.0).unwrap();
            let closed = fcm_objective(&image, &u, &c, 2.0);
            for i in 0..2 {
                let f = |ci: f64| {
                    let mut trial = c.as_slice().to_vec();
                    trial[i] = ci;
                    fcm_objective(&image, &u, &centers(&trial), 2.0)
                };
                let best = golden_section(f, 0.0, 255.0);
                prop_assert!(f(best) >= closed - 1e-6);
            }
        }

        #[test]
        fn objective_trace_never_increases(
            px in proptest::collection::vec(any::<u8>(), 64),
            v in 2usize..5,
        ) {
            let image = GrayImage::new(8, 8, px).unwrap();
            prop_assume!(image.distinct_levels() >= v);
            let res = run_fcm(&image, &FcmConfig::with_clusters(v), &Init::Auto).unwrap();
            for w in res.objective_trace.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-9, "{} -> {}", w[0], w[1]);
            }
        }

        #[test]
        fn permuting_initial_centers_permutes_the_output(
            px in proptest::collection::vec(any::<u8>(), 36),
        ) {
            let image = GrayImage::new(6, 6, px).unwrap();
            prop_assume!(image.distinct_levels() >= 3);
            let cfg = FcmConfig::with_clusters(3);
            let base = [40.0, 120.0, 220.0];
            let perm = [2usize, 0, 1];
            let a = run_fcm(&image, &cfg, &Init::Given(centers(&base))).unwrap();
            let permuted: Vec<f64> = perm.iter().map(|&p| base[p]).collect();
            let b = run_fcm(&image, &cfg, &Init::Given(centers(&permuted))).unwrap();
            prop_assert_eq!(a.iterations, b.iterations);
            for (j, &p) in perm.iter().enumerate() {
                prop_assert!((b.centers[j] - a.centers[p]).abs() < 1e-9);
                for k in 0..image.len() {
                    prop_assert!((b.memberships.get(j, k) - a.memberships.get(p, k)).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn converged_result_is_a_fixed_point(
            px in proptest::collection::vec(any::<u8>(), 64),
        ) {
            let image = GrayImage::new(8, 8, px).unwrap();
            prop_assume!(image.distinct_levels() >= 2);
            let cfg = FcmConfig { max_iter: 1000, ..FcmConfig::default() };
            let res = run_fcm(&image, &cfg, &Init::Auto).unwrap();
            prop_assume!(res.converged);
            let u = update_memberships(&image, &res.centers, 2.0);
            let c = update_centers(&image, &u, 2.0).unwrap();
            prop_assert!(c.max_shift(&res.centers) < cfg.epsilon);
        }
    }
}
