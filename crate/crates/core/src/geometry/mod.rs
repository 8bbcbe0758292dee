//! Grids, domain masks, set distances, morphology, cone certificates,
//! ball covers and cut-off partitions of unity.

mod cone;
mod cover;
mod cutoff;
mod distance;
mod domain;
mod grid;
mod mask;
mod morphology;

pub use cone::{certify_cone, default_probes, direction_passes, in_cone, ConeSpec, DEFAULT_PROBES};
pub use cover::{boundary_tube, cover_boundary, cover_nodes, BallCover};
pub use cutoff::{build_cutoffs, CutoffFamily};
pub use distance::{
    complementary_excess, complementary_hausdorff, dfront, excess, excess_of_sets, hausdorff,
    squared_distance_transform,
};
pub use domain::{DomainSpec, DEFAULT_PADDING};
pub use grid::{Grid, GridHeader};
pub use mask::{DomainMask, MaskRle};
pub use morphology::{dilate, erode};
