use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Additive Gaussian noise whose standard deviation is `percent`% of the
/// full intensity range (255).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub percent: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(percent: f64, seed: u64) -> Result<Self> {
        let spec = Self { percent, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.percent >= 0.0 && self.percent.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise percent must be finite and >= 0, got {}",
                self.percent
            )));
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        self.percent / 100.0 * 255.0
    }
}

/// `clamp(round(x + e), 0, 255)` per pixel, `e ~ N(0, sigma^2)` drawn in
/// pixel order from a ChaCha8 stream seeded with `spec.seed`.
pub fn add_gaussian_noise(img: &GrayImage, spec: &NoiseSpec) -> Result<GrayImage> {
    spec.validate()?;
    if spec.percent == 0.0 {
        return Ok(img.clone());
    }
    let normal = Normal::new(0.0, spec.sigma())
        .map_err(|e| Error::InvalidConfig(format!("noise distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| (f64::from(p) + normal.sample(&mut rng)).round().clamp(0.0, 255.0) as u8)
        .collect();
    GrayImage::new(img.width(), img.height(), pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_percent_is_identity() {
        let img = GrayImage::from_fn(9, 7, |x, y| (x * 20 + y) as u8).unwrap();
        assert_eq!(add_gaussian_noise(&img, &NoiseSpec::new(0.0, 3).unwrap()).unwrap(), img);
    }

    #[test]
    fn sigma_definition() {
        assert!((NoiseSpec::new(15.0, 0).unwrap().sigma() - 38.25).abs() < 1e-12);
        assert!(NoiseSpec::new(-1.0, 0).is_err());
    }

    #[test]
    fn noise_field_statistics() {
        let img = GrayImage::filled(256, 256, 128).unwrap();
        let noisy = add_gaussian_noise(&img, &NoiseSpec::new(10.0, 42).unwrap()).unwrap();
        let diffs: Vec<f64> = noisy.pixels().iter().map(|&p| f64::from(p) - 128.0).collect();
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(mean.abs() <= 1.0, "mean {mean}");
        assert!((sd - 25.5).abs() <= 2.55, "sd {sd}");
    }

    #[test]
    fn same_seed_same_output() {
        let img = GrayImage::filled(32, 32, 90).unwrap();
        let spec = NoiseSpec::new(15.0, 7).unwrap();
        let a = add_gaussian_noise(&img, &spec).unwrap();
        assert_eq!(a, add_gaussian_noise(&img, &spec).unwrap());
        let other = add_gaussian_noise(&img, &NoiseSpec::new(15.0, 8).unwrap()).unwrap();
        assert_ne!(a, other);
    }
}
