//! Exact q-tridendriform bialgebras on four combinatorial families:
//! surjections, parking functions, planar rooted trees and big
//! multipermutations, together with the brace / GV_q layer, the primitive
//! projector and a verification harness.

pub mod algebra;
pub mod brace_gv;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod linear;
pub mod mperm_algebra;
pub mod pqsym_algebra;
pub mod qpoly;
pub mod st_algebra;
pub mod tree_algebra;
pub mod words;

pub use algebra::TriAlgebra;
pub use error::{Error, Result};
pub use linear::{Element, ProductKind, Slot, Tensor2, Tensor3};
pub use mperm_algebra::{MPermutation, MpermAlgebra};
pub use pqsym_algebra::PqsymAlgebra;
pub use qpoly::QPoly;
pub use st_algebra::StAlgebra;
pub use tree_algebra::{PlanarTree, TreeAlgebra};
pub use words::{ParkingFunction, Surjection, Word};
