//! Finite decorated simplicial sets and a certifier for anodyne extensions between them.
//!
//! Every simplicial set here is a subcomplex of the nerve of a finite poset, so simplices
//! are chains and degeneracies stay implicit. On top of that sit the subset calculus for
//! subcomplexes of a simplex, certificates built from horn-filling steps, the cube-filling
//! filtration, and the twisted-arrow constructions.

pub mod certify;
pub mod complex;
pub mod cube;
pub mod decorated;
pub mod error;
pub mod poset;
pub mod subset;
pub mod text;
pub mod twisted;

pub use certify::{Certificate, FillStep, Report, RuleId, Trust};
pub use complex::{Chain, Complex};
pub use decorated::{DecoratedComplex, Regime};
pub use error::{Error, Result};
pub use poset::Poset;
pub use subset::SubsetFamily;
