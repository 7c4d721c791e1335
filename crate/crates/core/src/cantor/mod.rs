//! The two-sided Cantor construction: schedules, the disk tree, planar
//! packings and discrete realizations of the area-splitting measures.

mod packing;
mod realize;
mod schedule;
mod tree;

pub use packing::{is_valid_packing, pack_disks};
pub use realize::realize_measure;
pub use schedule::{
    example2_multiplier, example3_log_bound, log_source_radii, schedule_example2,
    schedule_example3, schedule_sharpness, sharpness_exponent, shrink_source_radii, LevelSchedule,
    Smallness, STRICT_SMALLNESS,
};
pub use tree::{
    build_tree, CantorTree, ExportedNode, Generation, Side, TreeExport, TreeNode,
    MAX_ENUMERATED_NODES,
};
