//! Elliptic curves with good reduction over local fields: reduction type,
//! rational p-power torsion, the formal group and its torsion, CM kernels
//! and Velu quotients at level p.

pub mod curve;
pub mod divpoly;
pub mod formal;
pub mod isogeny;
pub mod reduction;
pub mod series;
pub mod torsion;

pub use curve::{sqrt, CmData, CurveDescriptor, Point, WeierstrassCurve};
pub use formal::{
    cm_kernel_check, default_degree_cap, formal_group, formal_kernel, kernel_slopes, nhat, t0,
    FormalGroupData, NhatReport, T0Report,
};
pub use isogeny::{isogeny_kernel_data, IsogenyKernelData};
pub use reduction::{count_points, reduction_type, reduction_type_bounded, ReductionData, ReductionKind};
pub use torsion::{connected_etale_counts, torsion_level_n, torsion_points, ConnectedEtaleCounts};
