//! Centrally symmetric diagonals of the `(2n+2)`-gon as a model for the
//! clusters of types B and C.
//!
//! Vertices are `0..2n+2` counterclockwise and `θ(v) = v + n + 1`. The first
//! snake diagonal is pinned to `[0 2]`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exchange::{
    classify_cartan_type, positive_roots, quiver_of, CartanFamily, CartanType, ExchangeMatrix,
    IntMatrix, RootVector,
};

/// `[a b]` with `a < b`, never a polygon side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Diagonal(usize, usize);

impl Diagonal {
    /// `n` is the rank, so the polygon has `2n + 2` vertices.
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        let m = 2 * n + 2;
        let (a, b) = (a.min(b), a.max(b));
        if b >= m || a == b || b - a == 1 || (a == 0 && b == m - 1) {
            return Err(Error::InvalidDiagonal(a, b));
        }
        Ok(Diagonal(a, b))
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn has_endpoint(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn theta(&self, n: usize) -> Diagonal {
        let m = 2 * n + 2;
        let (a, b) = ((self.0 + n + 1) % m, (self.1 + n + 1) % m);
        Diagonal(a.min(b), a.max(b))
    }

    pub fn is_diameter(&self, n: usize) -> bool {
        self.1 - self.0 == n + 1
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.0, self.1)
    }
}

/// Endpoints strictly interleave around the polygon.
pub fn crosses(x: &Diagonal, y: &Diagonal) -> bool {
    let (a, b) = x.endpoints();
    let (c, d) = y.endpoints();
    if a == c || a == d || b == c || b == d {
        return false;
    }
    (a < c && c < b) != (a < d && d < b)
}

/// `{β, θ(β)}`, a single diagonal for diameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalOrbit(Vec<Diagonal>);

impl DiagonalOrbit {
    pub fn of(beta: Diagonal, n: usize) -> Self {
        let t = beta.theta(n);
        if t == beta {
            DiagonalOrbit(vec![beta])
        } else {
            DiagonalOrbit(vec![beta.min(t), beta.max(t)])
        }
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.0
    }

    pub fn representative(&self) -> Diagonal {
        self.0[0]
    }

    pub fn is_diameter(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, d: &Diagonal) -> bool {
        self.0.contains(d)
    }
}

/// A labeled maximal diagonal set: `orbits[k]` is the orbit at cluster
/// position `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSet {
    n: usize,
    family: CartanFamily,
    orbits: Vec<DiagonalOrbit>,
}

impl DiagonalSet {
    pub fn new(n: usize, family: CartanFamily, orbits: Vec<DiagonalOrbit>) -> Result<Self> {
        if !matches!(family, CartanFamily::B | CartanFamily::C) {
            return Err(Error::WrongType(format!("polygon model covers B and C, got {}", family.letter())));
        }
        if orbits.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: orbits.len(),
            });
        }
        Ok(DiagonalSet { n, family, orbits })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> CartanFamily {
        self.family
    }

    pub fn orbits(&self) -> &[DiagonalOrbit] {
        &self.orbits
    }

    pub fn orbit(&self, k: usize) -> &DiagonalOrbit {
        &self.orbits[k]
    }

    fn polygon_size(&self) -> usize {
        2 * self.n + 2
    }

    /// `1` for type B, `2` for type C.
    pub fn r(&self) -> i32 {
        if self.family == CartanFamily::B {
            1
        } else {
            2
        }
    }

    pub fn diagonals(&self) -> BTreeSet<Diagonal> {
        self.orbits.iter().flat_map(|o| o.diagonals().iter().copied()).collect()
    }

    fn is_edge(&self, set: &BTreeSet<Diagonal>, x: usize, y: usize) -> bool {
        let m = self.polygon_size();
        if (x + 1) % m == y || (y + 1) % m == x {
            return true;
        }
        set.contains(&Diagonal(x.min(y), x.max(y)))
    }

    /// Non-crossing, θ-closed, and every other diagonal crosses a member.
    pub fn is_maximal(&self) -> bool {
        let set = self.diagonals();
        let n = self.n;
        if set.iter().any(|d| !set.contains(&d.theta(n))) {
            return false;
        }
        if set.iter().any(|x| set.iter().any(|y| crosses(x, y))) {
            return false;
        }
        all_diagonals(n)
            .iter()
            .filter(|d| !set.contains(d))
            .all(|d| set.iter().any(|x| crosses(d, x)))
    }

    /// The quadrilateral `(a, b, c, f)` around the representative `[a c]` of
    /// orbit `k`, counterclockwise.
    pub fn quadrilateral(&self, k: usize) -> Result<[usize; 4]> {
        let set = self.diagonals();
        let Diagonal(a, c) = self.orbits[k].representative();
        let m = self.polygon_size();
        let apex = |from: usize, to: usize| -> Option<usize> {
            let mut v = (from + 1) % m;
            while v != to {
                if self.is_edge(&set, from, v) && self.is_edge(&set, v, to) {
                    return Some(v);
                }
                v = (v + 1) % m;
            }
            None
        };
        match (apex(a, c), apex(c, a)) {
            (Some(b), Some(f)) => Ok([a, b, c, f]),
            _ => Err(Error::QuadrilateralNotFound(a, c)),
        }
    }

    /// Replaces orbit `k` by the θ-orbit of the other diagonal of its
    /// quadrilateral.
    pub fn flip(&self, k: usize) -> Result<DiagonalSet> {
        let [_, b, _, f] = self.quadrilateral(k)?;
        let nd = Diagonal::new(b, f, self.n)?;
        let mut out = self.clone();
        out.orbits[k] = DiagonalOrbit::of(nd, self.n);
        Ok(out)
    }

    /// Column `k` of the exchange matrix.
    pub fn exchange_entries(&self, k: usize) -> Result<Vec<i32>> {
        let [a, b, c, f] = self.quadrilateral(k)?;
        let plus = [(a, b), (c, f)];
        let minus = [(b, c), (a, f)];
        let r = self.r();
        let touches = |o: &DiagonalOrbit, sides: &[(usize, usize)]| {
            sides
                .iter()
                .any(|&(x, y)| o.contains(&Diagonal(x.min(y), x.max(y))))
        };
        let k_diam = self.orbits[k].is_diameter();
        Ok(self
            .orbits
            .iter()
            .enumerate()
            .map(|(i, o)| {
                if i == k {
                    return 0;
                }
                let sign = i32::from(touches(o, &plus)) - i32::from(touches(o, &minus));
                let value = if o.is_diameter() {
                    2 / r
                } else if k_diam {
                    r
                } else {
                    1
                };
                sign * value
            })
            .collect())
    }

    pub fn exchange_matrix(&self) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(self.n, self.n);
        for k in 0..self.n {
            for (i, v) in self.exchange_entries(k)?.into_iter().enumerate() {
                m.set(i, k, v);
            }
        }
        Ok(m)
    }
}

#[derive(Serialize)]
struct DiagonalSetJson {
    n: usize,
    #[serde(rename = "type")]
    family: String,
    diagonals: Vec<[usize; 2]>,
}

impl Serialize for DiagonalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagonalSetJson {
            n: self.n,
            family: self.family.letter().to_string(),
            diagonals: self.diagonals().iter().map(|d| [d.0, d.1]).collect(),
        }
        .serialize(s)
    }
}

pub fn all_diagonals(n: usize) -> Vec<Diagonal> {
    let m = 2 * n + 2;
    (0..m)
        .flat_map(|a| (a + 2..m).map(move |b| (a, b)))
        .filter_map(|(a, b)| Diagonal::new(a, b, n).ok())
        .collect()
}

/// The snake for a canonically labeled acyclic matrix of type B or C.
pub fn initial_snake(b: &ExchangeMatrix) -> Result<DiagonalSet> {
    let c = classify_cartan_type(b)?;
    if !c.is_identity() || !matches!(c.cartan.family, CartanFamily::B | CartanFamily::C) {
        return Err(Error::WrongType(format!(
            "the polygon model needs a canonically labeled B or C matrix, got {}",
            c.cartan
        )));
    }
    let n = b.rank();
    let m = 2 * n + 2;
    let q = quiver_of(b.matrix());
    let mut alpha = vec![Diagonal(0, 2)];
    let (mut p, mut t) = (0usize, 2usize);
    for i in 0..n - 1 {
        if q.has_arrow(i, i + 1) {
            // clockwise about t
            p = (p + m - 1) % m;
        } else {
            // counterclockwise about p
            t = (t + 1) % m;
        }
        alpha.push(Diagonal::new(p, t, n)?);
    }
    debug_assert!(alpha[n - 1].is_diameter(n));
    let orbits = alpha.into_iter().map(|d| DiagonalOrbit::of(d, n)).collect();
    DiagonalSet::new(n, c.cartan.family, orbits)
}

fn crossing_points(x: &Diagonal, orbit: &[Diagonal]) -> i32 {
    orbit.iter().filter(|y| crosses(x, y)).count() as i32
}

/// Crossing numbers against the snake: type B counts `α_i` against
/// `{β, θβ}`, type C counts `β` against `{α_i, θα_i}`.
pub fn denominator_of_orbit(o: &DiagonalOrbit, snake: &DiagonalSet) -> Result<RootVector> {
    let beta = o.representative();
    if snake.orbits().iter().any(|s| s == o) {
        return Err(Error::InitialOrbit);
    }
    let d: Vec<i32> = snake
        .orbits()
        .iter()
        .map(|s| {
            let alpha = s.representative();
            match snake.family() {
                CartanFamily::B => crossing_points(&alpha, o.diagonals()),
                _ => crossing_points(&beta, s.diagonals()),
            }
        })
        .collect();
    let v = RootVector::new(d);
    let t = CartanType::new(snake.family(), snake.rank())?;
    if positive_roots(t).binary_search(&v).is_err() {
        return Err(Error::NotARoot(v));
    }
    Ok(v)
}
