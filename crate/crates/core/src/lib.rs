//! Simplicial line arrangements over finite fields.

pub mod arrangement;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod gf;
pub mod group;
pub mod io;
pub mod projplane;
pub mod reflection;
pub mod search;

pub use arrangement::{Arrangement, CharPoly3, Profile, TVector};
pub use error::{Error, Result};
pub use gf::{Elem, FieldElement, FiniteField};
pub use projplane::{Plane, ProjLine, ProjPoint};
