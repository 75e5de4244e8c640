//! Computational toolkit for extremal problems on families of finite sets.
//!
//! Families are stored as sorted vectors of bit masks over a ground set of
//! at most 30 elements. All measure and weight arithmetic is exact.

pub mod error;
pub mod family;
pub mod nip;
pub mod params;
pub mod predicates;
pub mod search;
pub mod separated;
pub mod shifting;

pub use error::{Error, Result};
pub use family::{parse_family, Family, GroundSize, Restriction, SetMask};
pub use params::ExactRational;
