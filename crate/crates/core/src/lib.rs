//! Zeta functions of torus hypersurfaces and arithmetic schemes over finite
//! fields, via a p-adic trace formula and three engines for the matrices it
//! needs.

pub mod deform;
pub mod error;
pub mod forest;
pub mod interval;
pub mod matrix;
pub mod ms;
pub mod oracle;
mod pack;
pub mod poly;
pub mod parallel;
pub mod primes;
pub mod ring;
pub mod scheme;
pub mod trace;
pub mod upoly;
pub mod zeta;

pub use error::{Error, Result};
pub use forest::{SeriesMatrix, SeriesRing};
pub use matrix::Matrix;
pub use ms::{Engine, MsMatrix};
pub use poly::{HomogPoly, SparsePoly};
pub use ring::{IntegerRing, Ring, RingCtx, RingElem};
pub use scheme::SignedHypersurface;
pub use zeta::{ZetaOptions, ZetaRational};
