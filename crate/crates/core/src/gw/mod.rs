//! Galton-Watson trees: offspring laws, lazy sampling, stretch labels and
//! bush erasure.

mod distribution;
mod io;
mod labels;
mod tree;

pub use distribution::OffspringDistribution;
pub use io::write_edge_list;
pub use labels::{
    classify_types, erase_bushes, label_stretches, truncate_stretches, Bushless, Label, Labeling,
    Stretch, StretchMap, DEFAULT_BUSH_CAP,
};
pub use tree::{RootedTree, SphericalProfile, VertexId, ROOT};
