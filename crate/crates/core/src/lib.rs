//! Groups of automorphisms of edge-colored regular trees with prescribed
//! local actions, their quotients, ping-pong dynamics, and uniformly
//! recurrent subgroups of finite groups.

pub mod autom;
pub mod dynamics;
pub mod perm;
pub mod quotient;
pub mod tree;
pub mod ursfin;

pub use autom::{AutError, IsometryClass, TreeAut, TreeGroup};
pub use perm::{LocalActionPair, Perm, PermError, PermGroup};
pub use tree::{Color, HalfTree, RationalEnd, TreeError, Vertex};
