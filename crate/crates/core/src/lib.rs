//! Orders, longest orbits and orbit counts of automorphisms of
//! vertex-transitive graphs: graph families, automorphism groups, orbit
//! statistics and a harness that checks bounds on them across corpora.

pub mod constructions;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod group;
pub mod perm;
pub mod search;
pub mod verify;
pub(crate) mod serde_big;

pub use error::{Error, Result};
pub use graph::{Digraph, EdgeSet, Graph};
pub use group::{Estimate, OrbitPartition, PermGroup, DEFAULT_CAP};
pub use perm::{cyclic_data, min_gcd_identity_check, CyclicOrbitData, Perm};
pub use search::{automorphism_group, brute_force_automorphisms, find_isomorphism};
