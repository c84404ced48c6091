//! Finite groups, their subgroup lattices, finite G-sets, transfer systems
//! and compatible pairs, together with the Burnside Tambara functor they index.

pub mod bitset;
pub mod burnside;
pub mod dot;
pub mod error;
pub mod expr;
pub mod group;
pub mod gset;
pub mod lattice;
pub mod laws;
pub mod limits;
pub mod oracle;
pub mod transfer;

pub use bitset::BitSet;
pub use burnside::{BurnsideElement, TambaraContext};
pub use error::{Error, Result};
pub use group::Group;
pub use gset::{GMap, GSet, OrbitProfile, SlicedGSet};
pub use lattice::SubgroupLattice;
pub use limits::Limits;
pub use transfer::{compatible, Compatibility, TransferSystem, Witness};
