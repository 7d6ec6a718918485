//! Exact cohomology of finite and Čech groupoids with their double complex of
//! discrete forms, plus bundles, gerbes and Morita invariance on top of it.

pub mod arith;
pub mod bundles;
pub mod cech;
pub mod cohomology;
pub mod complex;
pub mod cycles;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod gerbes;
pub mod groupoid;
pub mod homalg;
pub mod morita;
pub mod nerve;
pub mod simplicial;

pub use arith::{Coeff, Rational};
pub use complex::{Cochain, FormComplex, SimplicialModel, TotalCochain, DEFAULT_CELL_CAP};
pub use error::{Error, Result};
pub use groupoid::FiniteGroupoid;
