//! Block renormalization of a Harris construction.
//!
//! Space-time is tiled into slabs of height K*N and overlapping intervals
//! of width N on the even lattice {(m, n): m + n even, n >= 0}. Each cell
//! earns a three-state value: 1 when its slab keeps the all-ones process
//! dense in the cell's flank, descending from the cell's own interval, and
//! free of outside intrusion into a thin central box; 0 when supported by
//! an open parent but failing those conditions; 2 when no parent supports
//! it. The 0/1 projection feeds oriented percolation, whose two-sided
//! escape event anchors the expanding-origin test, the descent barrier,
//! and the good-point detector.
//!
//! Submodules: [`geometry`] (cell layout, cones, crossing times),
//! [`field`] (the recursive field computation), [`verify`] (independent
//! per-cell recomputation), [`expand`] (expanding-origin event),
//! [`barrier`] (wall assembly, slope calibration, descent property
//! checks), [`good`] (slow + expanding conjunction).

pub mod barrier;
pub mod expand;
pub mod field;
pub mod geometry;
pub mod good;
pub mod verify;

pub use barrier::{
    barrier_region, check_barrier_properties, check_point_queries, BarrierElement, BarrierSet,
    BarrierSide, PointQueryCounts, PropertyReport,
};
pub use expand::{expand_local_conditions, is_beta_expanding, ExpandReport};
pub use field::{block_field, BlockField};
pub use geometry::{cone_contains, cone_section, zeta_star, BlockParams, LambdaWindow};
pub use good::is_good_point;
pub use verify::{verify_block_cell, ConditionReport, VERIFY_ORACLE_CAP};
