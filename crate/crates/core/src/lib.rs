//! Exact deformation theory of rational homotopy types.
//!
//! The engine works over ℚ throughout.  It builds the Quillen model of a
//! finite simply connected cohomology algebra (a free graded Lie algebra on
//! the suspended dual, with quadratic differential), assembles the bigraded
//! complex of negative-weight derivations that controls deformations of the
//! formal homotopy type, and extracts from it the Maurer-Cartan ideal, its
//! fan and Segre decompositions, obstruction classes, gauge flows and the
//! miniversal scheme in tangent coordinates.
//!
//! All arithmetic is exact ([`Scalar`] is an arbitrary-precision rational in
//! lowest terms); every enumeration order is deterministic.

pub mod error;
pub mod gens;
pub mod lie;
pub mod linalg;
pub mod scalar;
pub mod word;

pub mod derivation;
pub mod quillen;

pub mod complex;

pub mod gauge;
pub mod mcideal;
pub mod miniversal;
pub mod poly;
pub mod specfile;

pub use error::Error;
pub use gens::{Generator, GeneratorTable};
pub use lie::LieElement;
pub use scalar::Scalar;
pub use word::BasisWord;
