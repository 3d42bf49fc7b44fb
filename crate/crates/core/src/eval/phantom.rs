use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{GrayImage, LabelMap};

/// Region arrangement of a synthetic phantom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Equal-width vertical bands, left to right (two halves for `v = 2`).
    Halves,
    /// Horizontal stripes cycling through the labels, each label twice.
    Stripes,
    /// Concentric disks on a label-0 background, label `v - 1` innermost.
    Disks,
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "halves" => Ok(Layout::Halves),
            "stripes" => Ok(Layout::Stripes),
            "disks" => Ok(Layout::Disks),
            other => Err(Error::InvalidLayout(other.to_string())),
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Halves => "halves",
            Layout::Stripes => "stripes",
            Layout::Disks => "disks",
        })
    }
}

/// A piecewise-constant test image with its exact ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Phantom {
    pub image: GrayImage,
    pub truth: LabelMap,
    pub region_intensities: Vec<u8>,
}

impl Phantom {
    pub fn clusters(&self) -> usize {
        self.region_intensities.len()
    }
}

pub fn make_phantom(width: usize, height: usize, layout: Layout, intensities: &[u8]) -> Result<Phantom> {
    let v = intensities.len();
    if v < 2 {
        return Err(Error::InvalidConfig(format!(
            "a phantom needs at least two regions, got {v}"
        )));
    }
    let mut sorted = intensities.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidConfig(
            "phantom region intensities must be distinct".into(),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }

    let label_at: Box<dyn Fn(usize, usize) -> usize> = match layout {
        Layout::Halves => Box::new(move |x, _| x * v / width),
        Layout::Stripes => {
            let stripe = (height / (2 * v)).max(1);
            Box::new(move |_, y| (y / stripe) % v)
        }
        Layout::Disks => {
            let (cx, cy) = ((width as f64 - 1.0) / 2.0, (height as f64 - 1.0) / 2.0);
            let outer = 0.45 * width.min(height) as f64;
            Box::new(move |x, y| {
                let r = (x as f64 - cx).hypot(y as f64 - cy);
                // disk j (1-based) has radius outer * (v - j) / (v - 1)
                (1..v)
                    .rev()
                    .find(|&j| r <= outer * (v - j) as f64 / (v - 1) as f64)
                    .unwrap_or(0)
            })
        }
    };

    let mut labels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            labels.push(label_at(x, y));
        }
    }
    let pixels = labels.iter().map(|&l| intensities[l]).collect();
    Ok(Phantom {
        image: GrayImage::new(width, height, pixels)?,
        truth: LabelMap::new(width, height, labels)?,
        region_intensities: intensities.to_vec(),
    })
}
