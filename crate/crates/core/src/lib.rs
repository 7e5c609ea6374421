//! Littlewood polynomials and their zero sets.
//!
//! * [`group`]: sign-mask encoding, Hadamard product, generators,
//!   factoring and class enumeration.
//! * [`eval`]: Horner, generator-based and bulk evaluation.
//! * [`ifs`]: affine iterated function systems and dragon sets.
//! * [`solver`] and [`zeros`]: root finding, zero-set sweeps and
//!   epsilon-ball membership.
//! * [`raster`]: density grids and PGM output.
//! * [`dump`], [`parallel`], [`pointset`], [`cli`]: plumbing.

pub mod cli;
pub mod dump;
pub mod error;
pub mod eval;
pub mod group;
pub mod ifs;
pub mod parallel;
pub mod point;
pub mod pointset;
pub mod raster;
pub mod solver;
pub mod zeros;

pub use error::{Error, Result};
pub use eval::{EvalSet, Subset};
pub use group::{GeneratorIndex, NuClassDescriptor, SignVector};
pub use num_complex::Complex64;
pub use point::ComplexPoint;
