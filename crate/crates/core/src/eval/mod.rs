//! Experimental protocol: synthetic phantoms, Gaussian noise, label
//! alignment, segmentation accuracy and method-comparison sweeps.

pub mod metrics;
pub mod noise;
pub mod phantom;
pub mod sweep;

pub use metrics::{align_labels, best_permutation, segmentation_accuracy, MAX_ALIGN_CLUSTERS};
pub use noise::{add_gaussian_noise, NoiseSpec};
pub use phantom::{make_phantom, Layout, Phantom};
pub use sweep::{run_sweep, segment, Method, RunConfig, Segmentation, SweepConfig, SweepReport, SweepRow};
