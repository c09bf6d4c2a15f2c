//! Symbolic representation of satellite image time series.
//!
//! Every pixel of an NDVI raster stack is a time series. This crate turns
//! each one into a short SAX word: the series is z-normalized, reduced to `w`
//! segment means by Piecewise Aggregate Approximation, and each mean is
//! mapped to one of `a` letters through equiprobable standard-normal
//! breakpoints. Words of equal `(n, w, a)` can be compared with MINDIST,
//! which never exceeds the Euclidean distance between the underlying
//! z-normalized series, so range queries over a symbolized cube have no false
//! dismissals.
//!
//! ```
//! use sits_sax::{sax, series::TimeSeries};
//!
//! let ndvi = TimeSeries::from_values(vec![0.12, 0.15, 0.31, 0.58, 0.61, 0.40, 0.22, 0.14]).unwrap();
//! let word = sax(&ndvi, 4, 3, 1e-8).unwrap();
//! assert_eq!(word.to_string(), "acca");
//! ```

pub mod cli;
pub mod error;
mod io;
pub mod paa;
pub mod sax;
pub mod series;
pub mod sits;

pub use error::{Error, Result};
pub use paa::{paa, paa_reconstruct, reconstruction_error, PaaVector};
pub use sax::{breakpoints, discretize, mindist, sax, symbol_distance, BreakpointTable, SaxEncoder, SaxWord};
pub use series::{make_episodes, znormalize, Alphabet, Episode, TimeSeries, DEFAULT_EPSILON_STD};
pub use sits::{symbolize_cube, RasterCube, SymbolicRaster};
