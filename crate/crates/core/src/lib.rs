//! Block-occurrence point processes for symbolic sequences.
//!
//! The crate is `no_std` (with `alloc`) and holds the numerical and
//! combinatorial machinery: invariant measures on sequence space with exact
//! cylinder probabilities, finite-word combinatorics, the rescaled occurrence
//! counts `M_k(x, w)(S)`, Poisson targets and distances, exact small-scale
//! oracles, and the mixing/concentration bounds. IO, configuration and the
//! experiment drivers live in the `poissonlab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod experiments;
pub mod hiprec;
pub mod linalg;
pub mod measures;
pub mod mixing;
pub mod oracles;
pub mod point_process;
pub mod poisson_stats;
pub mod rational;
pub mod rng;
pub mod words;

pub use error::{Error, Result};
pub use measures::{CylinderMass, MeasureModel, MixingProfile, SequenceGenerator, Symbol};
pub use point_process::{CountSample, IndexSet, Interval, IntervalUnion};
pub use rng::CounterRng;
pub use words::Word;
pub use num_rational::BigRational;
