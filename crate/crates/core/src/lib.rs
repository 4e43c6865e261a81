//! Mirror objects of finite inverse semigroups.
//!
//! Builds the universal groupoid of germs on the character space, germ
//! groupoids of concrete representations, induced circle-valued cocycles and
//! their twisted convolution algebras, and decides by exhaustive search
//! whether each structure is isomorphic to its mirror.

pub mod algebra;
pub mod characters;
pub mod chirality;
pub mod circle;
pub mod corpus;
pub mod error;
pub mod germ;
pub mod groupoid;
pub mod groupoid_iso;
pub mod io;
pub mod isotopy;
pub mod partial;
pub mod pipeline;
pub mod search;
pub mod semigroup;
pub mod twist;

pub use error::{Error, Result};
