//! Classical Dynkin types in a fixed vertex numbering.
//!
//! Types A, B and C live on the path `1 - 2 - ... - n`. In type B the last
//! edge has `|b_{n-1,n}| = 1, |b_{n,n-1}| = 2`; in type C the two values are
//! swapped. Type D is the path `1 - ... - (n-1)` plus the edge `(n-2, n)`, so
//! the fork sits at `n-2` with leaves `n-1` and `n`. Indices in code are
//! 0-based; the prose above is 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{ExchangeMatrix, IntMatrix};
use super::quiver::quiver_of;
use super::root::RootVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanFamily {
    A,
    B,
    C,
    D,
}

impl CartanFamily {
    pub const ALL: [CartanFamily; 4] = [CartanFamily::A, CartanFamily::B, CartanFamily::C, CartanFamily::D];

    pub fn letter(self) -> char {
        match self {
            CartanFamily::A => 'A',
            CartanFamily::B => 'B',
            CartanFamily::C => 'C',
            CartanFamily::D => 'D',
        }
    }

    pub fn from_letter(c: &str) -> Option<Self> {
        match c.trim() {
            "A" | "a" => Some(CartanFamily::A),
            "B" | "b" => Some(CartanFamily::B),
            "C" | "c" => Some(CartanFamily::C),
            "D" | "d" => Some(CartanFamily::D),
            _ => None,
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            CartanFamily::A => 1,
            CartanFamily::B | CartanFamily::C => 2,
            CartanFamily::D => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: CartanFamily,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: CartanFamily, rank: usize) -> Result<Self> {
        if rank < family.min_rank() {
            return Err(Error::InvalidCartanType {
                family: family.letter(),
                rank,
            });
        }
        Ok(CartanType { family, rank })
    }

    /// Edges `(i, j)` with `i < j` of the canonical diagram, together with
    /// `(|b_ij|, |b_ji|)`.
    pub fn edges(&self) -> Vec<(usize, usize, i32, i32)> {
        let n = self.rank;
        let mut edges: Vec<(usize, usize, i32, i32)> = match self.family {
            CartanFamily::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1, 1, 1)).collect();
                e.push((n - 3, n - 1, 1, 1));
                e
            }
            _ => (0..n.saturating_sub(1)).map(|i| (i, i + 1, 1, 1)).collect(),
        };
        match self.family {
            CartanFamily::B => {
                let last = edges.last_mut().unwrap();
                last.3 = 2;
            }
            CartanFamily::C => {
                let last = edges.last_mut().unwrap();
                last.2 = 2;
            }
            _ => {}
        }
        edges
    }

    /// `|b_ij|` pattern of the canonical Cartan matrix (zero diagonal).
    pub fn abs_pattern(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank, self.rank);
        for (i, j, wij, wji) in self.edges() {
            m.set(i, j, wij);
            m.set(j, i, wji);
        }
        m
    }

    pub fn matches(&self, b: &IntMatrix) -> bool {
        if b.rows() != self.rank || b.cols() != self.rank {
            return false;
        }
        let p = self.abs_pattern();
        (0..self.rank).all(|i| (0..self.rank).all(|j| b.get(i, j).abs() == p.get(i, j)))
    }

    /// The exchange matrix obtained by orienting edge `e` as `i -> j` when bit
    /// `e` of `mask` is set (`j -> i` otherwise).
    pub fn oriented_matrix(&self, mask: u64) -> ExchangeMatrix {
        let mut m = IntMatrix::zeros(self.rank, self.rank);
        for (e, (i, j, wij, wji)) in self.edges().into_iter().enumerate() {
            if mask >> e & 1 == 1 {
                // i -> j means b_ji > 0
                m.set(j, i, wji);
                m.set(i, j, -wij);
            } else {
                m.set(i, j, wij);
                m.set(j, i, -wji);
            }
        }
        ExchangeMatrix::new(m).expect("Cartan orientations are skew-symmetrizable")
    }

    /// All `2^{#edges}` orientations of the canonical diagram.
    pub fn all_orientations(&self) -> Vec<ExchangeMatrix> {
        let e = self.edges().len();
        (0..1u64 << e).map(|mask| self.oriented_matrix(mask)).collect()
    }

    /// The per-type vector `delta`: all ones for A and D, `(1,...,1,2)` for C,
    /// `(2,...,2,1)` for B.
    pub fn type_vector(&self) -> Vec<i64> {
        let n = self.rank;
        match self.family {
            CartanFamily::A | CartanFamily::D => vec![1; n],
            CartanFamily::C => {
                let mut v = vec![1; n];
                v[n - 1] = 2;
                v
            }
            CartanFamily::B => {
                let mut v = vec![2; n];
                v[n - 1] = 1;
                v
            }
        }
    }

    /// Number of positive roots.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            CartanFamily::A => n * (n + 1) / 2,
            CartanFamily::B | CartanFamily::C => n * n,
            CartanFamily::D => n * (n - 1),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Result of recognizing a matrix as a classical type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub cartan: CartanType,
    /// `relabel[p]` is the original index of canonical vertex `p`.
    pub relabel: Vec<usize>,
    /// The input matrix expressed in canonical labels.
    pub canonical: ExchangeMatrix,
}

impl Classification {
    pub fn is_identity(&self) -> bool {
        self.relabel.iter().enumerate().all(|(p, &o)| p == o)
    }

    /// Converts a vector in canonical coordinates to original coordinates.
    pub fn to_original(&self, v: &RootVector) -> RootVector {
        let mut out = vec![0; v.dim()];
        for (p, &o) in self.relabel.iter().enumerate() {
            out[o] = v[p];
        }
        RootVector::new(out)
    }

    pub fn to_canonical(&self, v: &RootVector) -> RootVector {
        RootVector::new(self.relabel.iter().map(|&o| v[o]).collect())
    }
}

fn families_for(n: usize) -> impl Iterator<Item = CartanType> {
    CartanFamily::ALL
        .into_iter()
        .filter_map(move |f| CartanType::new(f, n).ok())
}

fn try_relabel(b: &ExchangeMatrix, perm: &[usize]) -> Option<Classification> {
    let m = b.matrix().permuted(perm);
    families_for(b.rank()).find(|t| t.matches(&m)).map(|cartan| Classification {
        cartan,
        relabel: perm.to_vec(),
        canonical: ExchangeMatrix::new(m).expect("permutation preserves symmetrizability"),
    })
}

/// Recognizes `b` as an acyclic matrix of type A, B, C or D, returning the
/// canonical relabeling. The identity labeling is preferred when it already
/// fits some type (so a rank-2 matrix with `|b_12| = 2` reads as C2, not B2).
pub fn classify_cartan_type(b: &ExchangeMatrix) -> Result<Classification> {
    let n = b.rank();
    let q = quiver_of(b.matrix());
    if !q.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let identity: Vec<usize> = (0..n).collect();
    if let Some(c) = try_relabel(b, &identity) {
        return Ok(c);
    }

    let mut degree = vec![0usize; n];
    let mut edge_count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if b.get(i, j) != 0 {
                degree[i] += 1;
                degree[j] += 1;
                edge_count += 1;
            }
        }
    }
    if edge_count + 1 != n {
        return Err(Error::NotClassicalType(format!(
            "underlying graph has {edge_count} edges on {n} vertices, not a tree"
        )));
    }
    let walk = |start: usize| -> Vec<usize> {
        let mut path = vec![start];
        while let Some(j) = (0..n).find(|&j| b.get(*path.last().unwrap(), j) != 0 && !path.contains(&j)) {
            path.push(j);
        }
        path
    };

    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    let candidates: Vec<Vec<usize>> = match branch.as_slice() {
        [] => {
            let ends: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
            ends.iter().map(|&s| walk(s)).collect()
        }
        [c] if degree[*c] == 3 => {
            let c = *c;
            // arms as paths starting next to the branch vertex
            let mut arms: Vec<Vec<usize>> = (0..n)
                .filter(|&j| b.get(c, j) != 0)
                .map(|j| {
                    let mut arm = vec![j];
                    let mut prev = c;
                    let mut cur = j;
                    while let Some(nx) = (0..n).find(|&k| k != prev && k != cur && b.get(cur, k) != 0) {
                        arm.push(nx);
                        prev = cur;
                        cur = nx;
                    }
                    arm
                })
                .collect();
            arms.sort_by_key(|a| (std::cmp::Reverse(a.len()), a[0]));
            let mut out = Vec::new();
            for long in 0..3 {
                let short: Vec<&Vec<usize>> = (0..3).filter(|&a| a != long).map(|a| &arms[a]).collect();
                if short.iter().any(|a| a.len() != 1) {
                    continue;
                }
                let mut perm: Vec<usize> = arms[long].iter().rev().copied().collect();
                perm.push(c);
                perm.push(short[0][0]);
                perm.push(short[1][0]);
                out.push(perm);
            }
            out
        }
        _ => Vec::new(),
    };
    candidates
        .iter()
        .filter(|p| p.len() == n)
        .find_map(|p| try_relabel(b, p))
        .ok_or_else(|| Error::NotClassicalType("entries do not match any A/B/C/D Cartan matrix".into()))
}

fn interval(n: usize, i: usize, j: usize) -> Vec<i32> {
    // 1-based inclusive range e_i + ... + e_j
    let mut v = vec![0; n];
    for k in i..=j {
        v[k - 1] += 1;
    }
    v
}

/// Positive roots in the canonical labeling, sorted lexicographically.
///
/// Type D omits `e_{n-1} + e_n`: the two fork leaves are not adjacent, so
/// that vector is not a root and would break the count `n(n-1)`.
pub fn positive_roots(t: CartanType) -> Vec<RootVector> {
    let n = t.rank;
    let mut roots: Vec<Vec<i32>> = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            if t.family == CartanFamily::D && i == n - 1 && j == n {
                continue;
            }
            roots.push(interval(n, i, j));
        }
    }
    match t.family {
        CartanFamily::A => {}
        CartanFamily::B => {
            for i in 1..=n {
                for j in i + 1..=n {
                    let mut v = interval(n, i, n);
                    for k in j..=n {
                        v[k - 1] += 1;
                    }
                    roots.push(v);
                }
            }
        }
        CartanFamily::C => {
            for i in 1..=n {
                for j in i + 1..n {
                    let mut v = interval(n, i, n);
                    for k in j..n {
                        v[k - 1] += 1;
                    }
                    roots.push(v);
                }
            }
            for i in 1..n {
                let mut v = interval(n, i, n);
                for k in i..n {
                    v[k - 1] += 1;
                }
                roots.push(v);
            }
        }
        CartanFamily::D => {
            for i in 1..=n - 2 {
                let mut v = interval(n, i, n - 2);
                v[n - 1] += 1;
                roots.push(v);
            }
            for i in 1..=n - 2 {
                for j in i + 1..=n - 2 {
                    let mut v = interval(n, i, n);
                    for k in j..=n - 2 {
                        v[k - 1] += 1;
                    }
                    roots.push(v);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots.into_iter().map(RootVector::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b4() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, -1, 0, -1],
            vec![0, 0, 2, 0],
        ])
        .unwrap()
    }

    fn t(f: CartanFamily, n: usize) -> CartanType {
        CartanType::new(f, n).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify_cartan_type(&b4()).unwrap();
        assert_eq!(c.cartan, t(CartanFamily::B, 4));
        assert!(c.is_identity());

        let a2 = ExchangeMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(classify_cartan_type(&a2).unwrap().cartan, t(CartanFamily::A, 2));

        let bad = ExchangeMatrix::from_rows(&[vec![0, 2], vec![-2, 0]]).unwrap();
        assert!(matches!(classify_cartan_type(&bad), Err(Error::NotClassicalType(_))));
    }

    #[test]
    fn classify_rejects_cycles() {
        let tri = ExchangeMatrix::from_rows(&[vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]).unwrap();
        assert_eq!(classify_cartan_type(&tri), Err(Error::NotAcyclic));
    }

    #[test]
    fn classify_relabels_reversed_b3() {
        // B3 with the double edge at the start: vertex 1 plays the role of 3.
        let m = ExchangeMatrix::from_rows(&[vec![0, 2, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        let c = classify_cartan_type(&m).unwrap();
        assert_eq!(c.cartan, t(CartanFamily::B, 3));
        assert_eq!(c.relabel, vec![2, 1, 0]);
        assert!(c.cartan.matches(c.canonical.matrix()));
    }

    #[test]
    fn classify_relabels_shuffled_d5() {
        let d5 = t(CartanFamily::D, 5).oriented_matrix(0b1010);
        let perm = [3, 0, 4, 1, 2];
        let shuffled = ExchangeMatrix::new(d5.matrix().permuted(&perm)).unwrap();
        let c = classify_cartan_type(&shuffled).unwrap();
        assert_eq!(c.cartan, t(CartanFamily::D, 5));
    }

    #[test]
    fn classify_recovers_every_orientation() {
        for f in CartanFamily::ALL {
            for n in f.min_rank()..=6 {
                let ty = t(f, n);
                for m in ty.all_orientations() {
                    assert_eq!(classify_cartan_type(&m).unwrap().cartan, ty);
                }
            }
        }
    }

    #[test]
    fn root_lists() {
        let a2: Vec<_> = positive_roots(t(CartanFamily::A, 2)).into_iter().map(|r| r.into_coords()).collect();
        assert_eq!(a2, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let b2: Vec<_> = positive_roots(t(CartanFamily::B, 2)).into_iter().map(|r| r.into_coords()).collect();
        assert_eq!(b2, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(positive_roots(t(CartanFamily::B, 4)).len(), 16);
        assert!(positive_roots(t(CartanFamily::B, 4)).contains(&RootVector::new(vec![1, 2, 2, 2])));
        let c3 = positive_roots(t(CartanFamily::C, 3));
        assert!(c3.contains(&RootVector::new(vec![2, 2, 1])));
        assert!(c3.contains(&RootVector::new(vec![1, 2, 1])));
        let d4 = positive_roots(t(CartanFamily::D, 4));
        assert!(!d4.contains(&RootVector::new(vec![0, 0, 1, 1])));
        assert!(d4.contains(&RootVector::new(vec![1, 2, 1, 1])));
    }

    #[test]
    fn root_counts() {
        for f in CartanFamily::ALL {
            for n in f.min_rank()..=8 {
                let ty = t(f, n);
                assert_eq!(positive_roots(ty).len(), ty.root_count(), "{ty}");
            }
        }
    }

    #[test]
    fn type_vector_symmetrizes() {
        for f in CartanFamily::ALL {
            let ty = t(f, 5);
            let m = ty.oriented_matrix(0b0110);
            assert_eq!(m.symmetrizer().entries(), ty.type_vector().as_slice());
        }
    }

    #[test]
    fn invalid_ranks() {
        assert!(CartanType::new(CartanFamily::D, 3).is_err());
        assert!(CartanType::new(CartanFamily::B, 1).is_err());
        assert!(CartanType::new(CartanFamily::A, 1).is_ok());
    }
}
