//! Embedded contact homology computations for the Seifert-fibred contact
//! form whose binding is the `T(p,q)` torus knot.

pub mod complex;
pub mod current;
pub mod error;
pub mod index;
pub mod lattice;
pub mod numeric;
pub mod spectral;
pub mod toric;

pub use complex::{ChainComplex, ComplexSpec, Generator};
pub use current::{DeltaMode, KnotParams, Orbit, ReebCurrent};
pub use error::{Error, Result};
pub use index::{InvariantLedger, Trivialization};
pub use lattice::{NSeq, Partition, PathSide};
pub use numeric::{InfRat, Rat};
pub use toric::{LatticePath, SegmentLabel};
