//! Facility → location assignment with its inverse.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("cannot swap facility {0} with itself")]
    SameFacility(usize),
    #[error("facility index {index} out of range for size {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("not a permutation of 0..{0}")]
    NotBijective(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    to_location: Vec<usize>,
    to_facility: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { to_location: (0..n).collect(), to_facility: (0..n).collect() }
    }

    /// Fisher–Yates shuffle of the identity, high index to low.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut to_location: Vec<usize> = (0..n).collect();
        to_location.shuffle(rng);
        Self::from_locations(to_location).expect("shuffle of identity is a permutation")
    }

    pub fn from_locations(to_location: Vec<usize>) -> Result<Self, PermutationError> {
        let n = to_location.len();
        let mut to_facility = vec![usize::MAX; n];
        for (f, &loc) in to_location.iter().enumerate() {
            if loc >= n || to_facility[loc] != usize::MAX {
                return Err(PermutationError::NotBijective(n));
            }
            to_facility[loc] = f;
        }
        Ok(Self { to_location, to_facility })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.to_location.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.to_location.is_empty()
    }

    /// Location of facility `f`.
    #[inline]
    pub fn location(&self, f: usize) -> usize {
        self.to_location[f]
    }

    /// Facility placed at location `loc`.
    #[inline]
    pub fn facility(&self, loc: usize) -> usize {
        self.to_facility[loc]
    }

    pub fn locations(&self) -> &[usize] {
        &self.to_location
    }

    pub fn facilities(&self) -> &[usize] {
        &self.to_facility
    }

    /// Exchanges the locations of facilities `r` and `s`.
    pub fn apply_swap(&mut self, r: usize, s: usize) -> Result<(), PermutationError> {
        let n = self.len();
        for index in [r, s] {
            if index >= n {
                return Err(PermutationError::OutOfRange { index, n });
            }
        }
        if r == s {
            return Err(PermutationError::SameFacility(r));
        }
        self.to_location.swap(r, s);
        self.to_facility[self.to_location[r]] = r;
        self.to_facility[self.to_location[s]] = s;
        Ok(())
    }
}
