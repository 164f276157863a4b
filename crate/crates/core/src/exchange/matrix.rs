use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `[x]_+ = max(x, 0)`.
pub fn pos_part(x: i32) -> i32 {
    x.max(0)
}

pub fn signum(x: i32) -> i32 {
    x.signum()
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i32>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Ragged {
                    row: i,
                    found: row.len(),
                    expected: cols,
                });
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Top `cols x cols` block.
    pub fn top_square(&self) -> IntMatrix {
        let n = self.cols.min(self.rows);
        IntMatrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// `P^T B P` for the permutation with `perm[new] = old`, applied to rows
    /// and columns of a square matrix.
    pub fn permuted(&self, perm: &[usize]) -> IntMatrix {
        let n = perm.len();
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(perm[i], perm[j]));
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i32>>::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Matrix mutation in direction `k` (0-based) of an `m x n` matrix, `m >= n`.
pub fn mutate_matrix(b: &IntMatrix, k: usize) -> Result<IntMatrix> {
    if k >= b.cols() {
        return Err(Error::IndexOutOfRange {
            index: k,
            rank: b.cols(),
        });
    }
    if b.rows() < b.cols() {
        return Err(Error::TooFewRows {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let mut out = b.clone();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let v = if i == k || j == k {
                -b.get(i, j)
            } else {
                let bik = b.get(i, k);
                b.get(i, j) + signum(bik) * pos_part(bik * b.get(k, j))
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Positive diagonal `D` with `DB` skew-symmetric, normalized so each
/// connected component has gcd 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkewSymmetrizer(Vec<i64>);

impl SkewSymmetrizer {
    pub fn new(delta_hat: Vec<i64>) -> Self {
        SkewSymmetrizer(delta_hat)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, d_scale: i64) -> SkewSymmetrizer {
        SkewSymmetrizer(self.0.iter().map(|x| x * d_scale).collect())
    }

    pub fn certifies(&self, b: &IntMatrix) -> bool {
        let n = self.0.len();
        if b.rows() < n || b.cols() != n {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| self.0[i] * b.get(i, j) as i64 == -self.0[j] * b.get(j, i) as i64)
        })
    }
}

/// Finds the normalized skew-symmetrizer of a square matrix by propagating
/// ratios `d_j / d_i = -b_ij / b_ji` along the underlying graph.
pub fn skew_symmetrizer(b: &IntMatrix) -> Result<SkewSymmetrizer> {
    if b.rows() != b.cols() {
        return Err(Error::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let n = b.rows();
    for i in 0..n {
        if b.get(i, i) != 0 {
            return Err(Error::NotSkewSymmetrizable(format!("nonzero diagonal entry at {}", i + 1)));
        }
        for j in 0..n {
            let (x, y) = (b.get(i, j), b.get(j, i));
            if (x == 0) != (y == 0) || (x != 0 && x.signum() == y.signum()) {
                return Err(Error::NotSkewSymmetrizable(format!(
                    "entries ({},{}) and ({},{}) are not sign-skew",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }

    // (numerator, denominator) per vertex.
    let mut ratio: Vec<Option<(i64, i64)>> = vec![None; n];
    let mut delta = vec![0i64; n];
    for start in 0..n {
        if ratio[start].is_some() {
            continue;
        }
        ratio[start] = Some((1, 1));
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (p, q) = ratio[i].unwrap();
            for j in 0..n {
                let bij = b.get(i, j) as i64;
                if bij == 0 {
                    continue;
                }
                let bji = b.get(j, i) as i64;
                // d_j = d_i * |b_ij| / |b_ji|
                let (np, nq) = (p * bij.abs(), q * bji.abs());
                let g = np.gcd(&nq);
                let r = (np / g, nq / g);
                match ratio[j] {
                    None => {
                        ratio[j] = Some(r);
                        component.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != r => {
                        return Err(Error::NotSkewSymmetrizable(format!(
                            "inconsistent ratio constraints around vertex {}",
                            j + 1
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let lcm = component
            .iter()
            .fold(1i64, |acc, &v| acc.lcm(&ratio[v].unwrap().1));
        for &v in &component {
            let (p, q) = ratio[v].unwrap();
            delta[v] = p * (lcm / q);
        }
        let g = component.iter().fold(0i64, |acc, &v| acc.gcd(&delta[v]));
        for &v in &component {
            delta[v] /= g;
        }
    }
    let s = SkewSymmetrizer(delta);
    debug_assert!(s.certifies(b));
    Ok(s)
}

/// A skew-symmetrizable square exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    matrix: IntMatrix,
    symmetrizer: SkewSymmetrizer,
}

impl ExchangeMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let symmetrizer = skew_symmetrizer(&matrix)?;
        Ok(ExchangeMatrix {
            matrix,
            symmetrizer,
        })
    }

    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn rank(&self) -> usize {
        self.matrix.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn symmetrizer(&self) -> &SkewSymmetrizer {
        &self.symmetrizer
    }

    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix> {
        Ok(ExchangeMatrix {
            matrix: mutate_matrix(&self.matrix, k)?,
            symmetrizer: self.symmetrizer.clone(),
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<i32>> {
        self.matrix.to_rows()
    }
}

/// An `m x n` matrix whose top `n x n` block is an exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedExchangeMatrix {
    matrix: IntMatrix,
}

impl ExtendedExchangeMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() < matrix.cols() {
            return Err(Error::TooFewRows {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        skew_symmetrizer(&matrix.top_square())?;
        Ok(ExtendedExchangeMatrix { matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn row_count(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn principal_part(&self) -> ExchangeMatrix {
        ExchangeMatrix::new(self.matrix.top_square()).expect("validated at construction")
    }

    /// Mutation preserves skew-symmetrizability, so no revalidation.
    pub fn mutate(&self, k: usize) -> Result<ExtendedExchangeMatrix> {
        Ok(ExtendedExchangeMatrix {
            matrix: mutate_matrix(&self.matrix, k)?,
        })
    }
}

/// `[B; I_n]`.
pub fn principal_extension(b: &ExchangeMatrix) -> ExtendedExchangeMatrix {
    let n = b.rank();
    let matrix = b
        .matrix()
        .stack(&IntMatrix::identity(n))
        .expect("same column count");
    ExtendedExchangeMatrix { matrix }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b4() -> IntMatrix {
        IntMatrix::from_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, -1, 0, -1],
            vec![0, 0, 2, 0],
        ])
        .unwrap()
    }

    #[test]
    fn pos_part_and_signum() {
        assert_eq!(pos_part(3), 3);
        assert_eq!(pos_part(-2), 0);
        assert_eq!(pos_part(0), 0);
        assert_eq!(signum(5), 1);
        assert_eq!(signum(-5), -1);
        assert_eq!(signum(0), 0);
    }

    #[test]
    fn mutate_a2() {
        let a2 = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let m = mutate_matrix(&a2, 0).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0, 1], vec![-1, 0]]);
    }

    #[test]
    fn mutate_b4_direction_two() {
        let m = mutate_matrix(&b4(), 1).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![
                vec![0, 1, 0, 0],
                vec![-1, 0, -1, 0],
                vec![0, 1, 0, -1],
                vec![0, 0, 2, 0]
            ]
        );
    }

    #[test]
    fn mutate_rejects_bad_direction() {
        assert_eq!(
            mutate_matrix(&b4(), 4),
            Err(Error::IndexOutOfRange { index: 4, rank: 4 })
        );
    }

    #[test]
    fn mutation_is_involutive_on_extended() {
        let ext = principal_extension(&ExchangeMatrix::new(b4()).unwrap());
        for k in 0..4 {
            let back = ext.mutate(k).unwrap().mutate(k).unwrap();
            assert_eq!(back, ext);
        }
    }

    #[test]
    fn symmetrizer_examples() {
        assert_eq!(skew_symmetrizer(&b4()).unwrap().entries(), &[2, 2, 2, 1]);
        let a2 = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(skew_symmetrizer(&a2).unwrap().entries(), &[1, 1]);
        let bad = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(skew_symmetrizer(&bad), Err(Error::NotSkewSymmetrizable(_))));
    }

    #[test]
    fn symmetrizer_detects_cycle_inconsistency() {
        // ratios around the triangle multiply to 2, not 1
        let m = IntMatrix::from_rows(&[vec![0, 1, -1], vec![-1, 0, 2], vec![1, -1, 0]]).unwrap();
        assert!(matches!(skew_symmetrizer(&m), Err(Error::NotSkewSymmetrizable(_))));
    }

    #[test]
    fn symmetrizer_of_disconnected_matrix() {
        let m = IntMatrix::from_rows(&[
            vec![0, -2, 0],
            vec![1, 0, 0],
            vec![0, 0, 0],
        ])
        .unwrap();
        assert_eq!(skew_symmetrizer(&m).unwrap().entries(), &[1, 2, 1]);
    }

    #[test]
    fn principal_extension_shape() {
        let one = ExchangeMatrix::from_rows(&[vec![0]]).unwrap();
        assert_eq!(principal_extension(&one).matrix().to_rows(), vec![vec![0], vec![1]]);
        let a2 = ExchangeMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let ext = principal_extension(&a2);
        assert_eq!(
            ext.matrix().to_rows(),
            vec![vec![0, -1], vec![1, 0], vec![1, 0], vec![0, 1]]
        );
        assert_eq!(ext.principal_part(), a2);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            IntMatrix::from_rows(&[vec![0, 1], vec![1]]),
            Err(Error::Ragged { .. })
        ));
    }
}
