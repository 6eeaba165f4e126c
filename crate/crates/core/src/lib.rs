//! Exact computations with rational maps between projective spaces:
//! Gröbner bases, syzygies, saturations, Hilbert series, local cohomology
//! of graded modules and the one-dimensional fibers of a map.

pub mod approx;
pub mod cohomology;
pub mod error;
pub mod fibers;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod map;
pub mod mapfile;
pub mod monomial;
pub mod parse;
pub mod points;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod univariate;

pub use error::{Error, Result};
pub use monomial::{Monomial, TermOrder};
pub use poly::Polynomial;
pub use ring::{Ring, RingRef};
pub use scalar::{Field, Scalar};
