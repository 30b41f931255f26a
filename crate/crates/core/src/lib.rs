//! Lookup-oracle synthesis for 2D ray-casting scenes.
//!
//! A scene of axis-aligned rectangles is turned into one Boolean function per
//! output bit of each rectangle parameter. Each function is minimized exactly
//! (Quine-McCluskey prime implicants, Petrick's method for cover selection)
//! and realized as multi-controlled X gates writing the parameters of the
//! primitive whose index sits in the index register.
//!
//! Modules:
//! - [`boolean`]: implicants, sums of products, truth tables
//! - [`minimizer`]: exact two-level minimization and a brute-force reference
//! - [`circuit`]: gate IR, depth/gate/qubit metrics, lowering, OpenQASM 2.0
//! - [`oracle`]: scenes, bit functions, naive and optimized synthesis, checks
//! - [`sim`]: statevector simulation, seeded sampling, histograms
//! - [`cli`]: the `rayoracle` command line

pub mod boolean;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod minimizer;
pub mod oracle;
pub mod sim;

pub use error::{Error, Result};
