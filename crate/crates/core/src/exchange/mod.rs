//! Exchange matrices, their quivers, and the classical Dynkin types.

mod cartan;
mod matrix;
mod quiver;
mod root;

pub use cartan::{classify_cartan_type, positive_roots, CartanFamily, CartanType, Classification};
pub use matrix::{
    mutate_matrix, pos_part, principal_extension, signum, skew_symmetrizer, ExchangeMatrix,
    ExtendedExchangeMatrix, IntMatrix, SkewSymmetrizer,
};
pub use quiver::{is_acyclic, quiver_of, Arrow, Quiver};
pub use root::RootVector;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A path in the exchange tree, as 0-based directions. Serialized 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationSequence(Vec<usize>);

impl MutationSequence {
    pub fn new(directions: Vec<usize>, rank: usize) -> Result<Self> {
        if let Some(&k) = directions.iter().find(|&&k| k >= rank) {
            return Err(Error::IndexOutOfRange { index: k, rank });
        }
        Ok(MutationSequence(directions))
    }

    pub fn empty() -> Self {
        MutationSequence(Vec::new())
    }

    pub fn directions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(&self, k: usize) -> MutationSequence {
        let mut v = self.0.clone();
        v.push(k);
        MutationSequence(v)
    }
}

impl Serialize for MutationSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|k| k + 1).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MutationSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.contains(&0) {
            return Err(serde::de::Error::custom("mutation directions are 1-based"));
        }
        Ok(MutationSequence(v.into_iter().map(|k| k - 1).collect()))
    }
}
