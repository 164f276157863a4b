use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An integer vector in `Z^n`: denominator vectors, exponent vectors and
/// g-vectors all use this type. Ordering is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(Vec<i32>);

impl RootVector {
    pub fn new(coords: Vec<i32>) -> Self {
        RootVector(coords)
    }

    pub fn zero(n: usize) -> Self {
        RootVector(vec![0; n])
    }

    /// The unit vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        RootVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i32> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &i32> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise partial order: `self >= other` iff `self - other` is
    /// nonnegative.
    pub fn dominates(&self, other: &RootVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scale(&self, k: i32) -> RootVector {
        RootVector(self.0.iter().map(|c| c * k).collect())
    }

    /// `sum_i a_i b_i c_i`.
    pub fn triple_dot(a: &[i32], b: &[i32], c: &[i32]) -> i64 {
        a.iter()
            .zip(b)
            .zip(c)
            .map(|((&x, &y), &z)| x as i64 * y as i64 * z as i64)
            .sum()
    }

    /// Parses a comma-separated coordinate list such as `0,1,1,0`.
    pub fn parse_list(s: &str) -> Option<RootVector> {
        s.split(',')
            .map(|t| t.trim().parse::<i32>().ok())
            .collect::<Option<Vec<_>>>()
            .map(RootVector)
    }
}

impl From<Vec<i32>> for RootVector {
    fn from(v: Vec<i32>) -> Self {
        RootVector(v)
    }
}

impl Index<usize> for RootVector {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        assert_eq!(self.dim(), rhs.dim());
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        assert_eq!(self.dim(), rhs.dim());
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
