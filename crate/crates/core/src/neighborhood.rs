//! Square pixel neighborhoods, clipped at the image border.

use crate::error::{Error, Result};
use crate::image::Dims;

/// Shape of the window around each pixel.
///
/// The window is `window x window`, centered on the pixel. Pixels outside
/// the image are dropped rather than padded, so border pixels have fewer
/// neighbors (3 at a corner, 5 on an edge, 8 inside for the default).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodSpec {
    pub window: usize,
    pub include_center: bool,
}

impl Default for NeighborhoodSpec {
    fn default() -> Self {
        Self {
            window: 3,
            include_center: false,
        }
    }
}

impl NeighborhoodSpec {
    pub fn new(window: usize, include_center: bool) -> Result<Self> {
        let spec = Self {
            window,
            include_center,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "neighborhood window must be odd and >= 3, got {}",
                self.window
            )));
        }
        Ok(())
    }

    pub fn radius(&self) -> usize {
        self.window / 2
    }
}

/// Indices of the pixels in the window around pixel `k`.
///
/// Indices come out in row-major order. `k` must be inside `dims`.
pub fn neighbors(dims: Dims, k: usize, spec: &NeighborhoodSpec) -> Vec<usize> {
    let mut out = Vec::with_capacity(spec.window * spec.window);
    for_each_neighbor(dims, k, spec, |z| out.push(z));
    out
}

/// Allocation-free form of [`neighbors`].
pub fn for_each_neighbor(
    dims: Dims,
    k: usize,
    spec: &NeighborhoodSpec,
    mut f: impl FnMut(usize),
) {
    debug_assert!(k < dims.len());
    let r = spec.radius();
    let (x, y) = (k % dims.width, k / dims.width);
    let (x0, x1) = (x.saturating_sub(r), (x + r).min(dims.width - 1));
    let (y0, y1) = (y.saturating_sub(r), (y + r).min(dims.height - 1));
    for ny in y0..=y1 {
        let row = ny * dims.width;
        for nx in x0..=x1 {
            let z = row + nx;
            if z != k || spec.include_center {
                f(z);
            }
        }
    }
}
