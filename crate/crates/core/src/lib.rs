//! Exact algebra for codes over the residue ring `Z_{p^r}`.
//!
//! The crate implements the machinery needed to analyse block and
//! convolutional codes whose alphabet is a prime-power residue ring:
//! p-adic digit arithmetic, polynomial vectors and matrices, p-bases of
//! `Z_{p^r}[D]`-modules, canonical generator forms, exhaustively certified
//! column distances, the associated Singleton-type bounds, and a lifting
//! construction that produces Maximum Distance Profile convolutional codes
//! over `Z_{p^r}` from field codes over `Z_p`.
//!
//! All arithmetic is exact; every distance reported as exact was certified
//! by a finite search whose size is part of the result.

pub mod block;
pub mod conv;
pub(crate) mod fieldpoly;
pub mod lift;
pub mod pbasis;
pub mod poly;
pub mod ring;

pub use ring::{DigitVector, Residue, RingParams};
