//! Fuzzy clustering for grayscale image segmentation.
//!
//! Three engines share one set of domain types:
//!
//! * [`fcm`]: conventional fuzzy c-means over pixel intensities.
//! * [`hist_fcm`]: the same optimization over the 256-bin histogram, used
//!   as a fast initializer.
//! * [`isfcm`]: spatial fuzzy c-means, where each pixel's membership is
//!   reweighted by its neighbors' hard labels and fuzzy memberships.
//!
//! [`eval`] holds the noise-robustness protocol (phantoms, Gaussian noise,
//! label alignment, accuracy sweeps) and [`io`] the PGM and CSV formats.
//!
//! ```
//! use fuzzyseg_core::{make_phantom, run_isfcm, IsfcmConfig, Layout};
//!
//! let phantom = make_phantom(32, 32, Layout::Halves, &[80, 170]).unwrap();
//! let res = run_isfcm(&phantom.image, &IsfcmConfig::with_clusters(2)).unwrap();
//! assert_eq!(res.labels, phantom.truth);
//! ```

pub mod error;
pub mod eval;
pub mod fcm;
pub mod hist_fcm;
pub mod image;
pub mod io;
pub mod isfcm;
pub mod membership;
pub mod neighborhood;
mod numeric;

pub use error::{Error, Result};
pub use eval::{
    add_gaussian_noise, align_labels, make_phantom, run_sweep, segment, segmentation_accuracy,
    Layout, Method, NoiseSpec, Phantom, RunConfig, Segmentation, SweepConfig, SweepReport,
    SweepRow,
};
pub use fcm::{
    fcm_objective, run_fcm, run_fcm_observed, update_centers, update_memberships, FcmConfig,
    FcmResult, Init, Iteration,
};
pub use hist_fcm::{expand_to_pixels, run_hist_fcm, run_hist_fcm_observed, HistFcmResult};
pub use image::{compute_histogram, Dims, GrayImage, Histogram, LabelMap, LEVELS};
pub use isfcm::{
    prior_probability, run_isfcm, run_isfcm_observed, spatial_centers, spatial_membership,
    IsfcmConfig, IsfcmResult,
};
pub use membership::{defuzzify, Centers, MembershipMatrix};
pub use neighborhood::{neighbors, NeighborhoodSpec};
