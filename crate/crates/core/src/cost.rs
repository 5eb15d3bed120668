use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{FromPrimitive, NumCast, PrimInt, Signed, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Signed integer type used for flows, distances, costs and deltas.
///
/// Only exact integer types qualify: the dense and sparse engines must agree
/// bit for bit, which rules out floating-point accumulation.
pub trait Cost:
    PrimInt
    + Signed
    + FromPrimitive
    + ToPrimitive
    + NumCast
    + Default
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// `2·x`, the factor every symmetric swap delta carries.
    #[inline]
    fn twice(self) -> Self {
        self + self
    }
}

impl<T> Cost for T where
    T: PrimInt
        + Signed
        + FromPrimitive
        + ToPrimitive
        + NumCast
        + Default
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + Serialize
        + DeserializeOwned
        + 'static
{
}
