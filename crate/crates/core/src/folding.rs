//! Folding by an involution: quotient matrices, orbit mutation, projections,
//! and the unfoldings `C_n <- A_{2n-1}` and `B_n <- D_{n+1}`.
//!
//! Orbits are always ordered by their smallest element. For both unfoldings
//! below this makes orbit `i` correspond to vertex `i` of the folded matrix.
//!
//! Unfolding sign table (0-based, `m = n - 2`, `s = b̄_{m,n-1}`):
//!
//! | type | unfolded entries at the special edge |
//! |------|---------------------------------------|
//! | C_n  | `b_{m,n-1} = b_{σm,n-1} = s/2`, `b_{n-1,m} = b_{n-1,σm} = b̄_{n-1,m}` |
//! | B_n  | `b_{m,n-1} = b_{m,n} = s`, `b_{n-1,m} = b_{n,m} = -s` |

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exchange::{
    classify_cartan_type, principal_extension, quiver_of, signum, CartanFamily, ExchangeMatrix,
    ExtendedExchangeMatrix, IntMatrix, RootVector, SkewSymmetrizer,
};
use crate::oracle::{mutate_seed, ClusterTable, Seed};
use crate::poly::LaurentPoly;

/// The group generated by an involution `σ` of `0..N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingGroup {
    sigma: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl FoldingGroup {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        for (i, &s) in sigma.iter().enumerate() {
            if s >= n {
                return Err(Error::IndexOutOfRange { index: s, rank: n });
            }
            if sigma[s] != i {
                return Err(Error::Input(format!("sigma is not an involution at {}", i + 1)));
            }
        }
        let mut orbits = Vec::new();
        let mut orbit_of = vec![usize::MAX; n];
        for i in 0..n {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let o = if sigma[i] == i { vec![i] } else { vec![i, sigma[i]] };
            for &v in &o {
                orbit_of[v] = orbits.len();
            }
            orbits.push(o);
        }
        Ok(FoldingGroup {
            sigma,
            orbits,
            orbit_of,
        })
    }

    pub fn trivial(n: usize) -> Self {
        Self::new((0..n).collect()).expect("identity is an involution")
    }

    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        if self.sigma.iter().enumerate().all(|(i, &s)| i == s) {
            1
        } else {
            2
        }
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    /// `σ̃` on `0..2N`: `σ` on both halves.
    pub fn extended(&self, i: usize) -> usize {
        let n = self.degree();
        if i < n {
            self.sigma[i]
        } else {
            self.sigma[i - n] + n
        }
    }

    pub fn stabilizer_size(&self, i: usize) -> usize {
        if self.sigma[i] == i {
            self.order()
        } else {
            1
        }
    }

    /// `σB̃ = B̃`, with rows acted on by `σ̃`.
    pub fn is_automorphism(&self, b: &IntMatrix) -> bool {
        let n = self.degree();
        if b.cols() != n || (b.rows() != n && b.rows() != 2 * n) {
            return false;
        }
        (0..b.rows()).all(|i| (0..n).all(|j| b.get(self.extended(i), self.sigma[j]) == b.get(i, j)))
    }

    /// Diagonal `|stab_G(i)|` over orbit representatives.
    pub fn quotient_symmetrizer(&self) -> SkewSymmetrizer {
        SkewSymmetrizer::new(self.orbits.iter().map(|o| self.stabilizer_size(o[0]) as i64).collect())
    }
}

/// `b̄_{ī,j̄} = Σ_{ℓ∈ī} b_{ℓ,j}`. Works for square and `2N x N` matrices.
pub fn quotient_matrix(b: &IntMatrix, g: &FoldingGroup) -> Result<IntMatrix> {
    let n = g.degree();
    if b.cols() != n || (b.rows() != n && b.rows() != 2 * n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.cols(),
        });
    }
    if !g.is_automorphism(b) {
        return Err(Error::NotInvariant);
    }
    let r = g.orbit_count();
    let blocks = b.rows() / n;
    let mut out = IntMatrix::zeros(blocks * r, r);
    for block in 0..blocks {
        for (oi, orbit_i) in g.orbits().iter().enumerate() {
            for (oj, orbit_j) in g.orbits().iter().enumerate() {
                let sums: Vec<i32> = orbit_j
                    .iter()
                    .map(|&j| orbit_i.iter().map(|&l| b.get(block * n + l, j)).sum())
                    .collect();
                if sums.iter().any(|&s| s != sums[0]) {
                    return Err(Error::NotInvariant);
                }
                out.set(block * r + oi, oj, sums[0]);
            }
        }
    }
    Ok(out)
}

/// The skew-symmetric, `G`-invariant acyclic matrix folding onto `b̄`,
/// together with its group. `b̄` must be canonically labeled of type B or C.
pub fn unfold(bbar: &ExchangeMatrix) -> Result<(ExchangeMatrix, FoldingGroup)> {
    let c = classify_cartan_type(bbar)?;
    if !c.is_identity() || !matches!(c.cartan.family, CartanFamily::B | CartanFamily::C) {
        return Err(Error::WrongType(format!(
            "unfolding needs a canonically labeled B or C matrix, got {}",
            c.cartan
        )));
    }
    let n = bbar.rank();
    let (m, last) = (n - 2, n - 1);
    let s = bbar.get(m, last);
    let (sigma, big) = match c.cartan.family {
        CartanFamily::C => {
            let big = 2 * n - 1;
            ((0..big).map(|i| big - 1 - i).collect::<Vec<_>>(), big)
        }
        _ => {
            let mut sigma: Vec<usize> = (0..=n).collect();
            sigma.swap(last, n);
            (sigma, n + 1)
        }
    };
    let group = FoldingGroup::new(sigma)?;
    let mut b = IntMatrix::zeros(big, big);
    let mut put = |i: usize, j: usize, v: i32| {
        b.set(i, j, v);
        b.set(group.sigma[i], group.sigma[j], v);
    };
    for i in 0..n {
        for j in 0..n {
            if (i, j) != (m, last) && (i, j) != (last, m) && bbar.get(i, j) != 0 {
                put(i, j, bbar.get(i, j));
            }
        }
    }
    match c.cartan.family {
        CartanFamily::C => {
            put(m, last, signum(s));
            put(last, m, bbar.get(last, m));
        }
        _ => {
            put(m, last, s);
            put(last, m, -s);
        }
    }
    let unfolded = ExchangeMatrix::new(b)?;
    debug_assert_eq!(&quotient_matrix(unfolded.matrix(), &group)?, bbar.matrix());
    Ok((unfolded, group))
}

/// No arrows inside an orbit.
pub fn is_admissible(b: &IntMatrix, g: &FoldingGroup) -> bool {
    g.orbits()
        .iter()
        .all(|o| o.iter().all(|&i| o.iter().all(|&j| b.get(i, j) == 0)))
}

fn weakly_same_sign(a: i32, b: i32) -> bool {
    (a >= 0 && b >= 0) || (a <= 0 && b <= 0)
}

pub fn is_strongly_admissible(b: &IntMatrix, g: &FoldingGroup) -> bool {
    let n = g.degree();
    if !is_admissible(b, g) {
        return false;
    }
    let rows_ok = (0..b.rows()).all(|i| {
        let j = g.extended(i);
        (0..n).all(|l| weakly_same_sign(b.get(i, l), b.get(j, l)))
    });
    let cols_ok = (0..n).all(|i| {
        let j = g.sigma[i];
        (0..b.rows()).all(|l| weakly_same_sign(b.get(l, i), b.get(l, j)))
    });
    rows_ok && cols_ok
}

fn orbit_checked<'a>(b: &IntMatrix, g: &'a FoldingGroup, orbit: usize) -> Result<&'a [usize]> {
    if orbit >= g.orbit_count() {
        return Err(Error::IndexOutOfRange {
            index: orbit,
            rank: g.orbit_count(),
        });
    }
    if !is_admissible(b, g) {
        return Err(Error::NotAdmissible);
    }
    Ok(&g.orbits()[orbit])
}

/// `μ_Ω` on an extended matrix; ascending and descending compositions must
/// agree.
pub fn orbit_mutation(b: &ExtendedExchangeMatrix, g: &FoldingGroup, orbit: usize) -> Result<ExtendedExchangeMatrix> {
    let members = orbit_checked(b.matrix(), g, orbit)?;
    let up = members.iter().try_fold(b.clone(), |m, &k| m.mutate(k))?;
    let down = members.iter().rev().try_fold(b.clone(), |m, &k| m.mutate(k))?;
    if up != down {
        return Err(Error::NotAdmissible);
    }
    Ok(up)
}

pub fn orbit_mutation_seed(s: &Seed, g: &FoldingGroup, orbit: usize) -> Result<Seed> {
    let members = orbit_checked(s.matrix.matrix(), g, orbit)?;
    let up = members.iter().try_fold(s.clone(), |x, &k| mutate_seed(&x, k))?;
    let down = members.iter().rev().try_fold(s.clone(), |x, &k| mutate_seed(&x, k))?;
    if up != down {
        return Err(Error::NotAdmissible);
    }
    Ok(up)
}

/// `u_i -> u_ī`.
pub fn project_polynomial(f: &LaurentPoly, g: &FoldingGroup) -> LaurentPoly {
    let r = g.orbit_count();
    f.map_exponents(r, |e| {
        let mut out = vec![0; r];
        for (i, &k) in e.iter().enumerate() {
            out[g.orbit_of(i)] += k;
        }
        out
    })
}

/// `x_i -> x_ī`, `y_i -> y_ī` on the `2N` seed variables.
pub fn project_seed_variable(x: &LaurentPoly, g: &FoldingGroup) -> LaurentPoly {
    let (n, r) = (g.degree(), g.orbit_count());
    x.map_exponents(2 * r, |e| {
        let mut out = vec![0; 2 * r];
        for (i, &k) in e.iter().enumerate() {
            let (block, v) = (i / n, i % n);
            out[block * r + g.orbit_of(v)] += k;
        }
        out
    })
}

/// `ḡ_ī = Σ_{ℓ∈ī} g_ℓ`.
pub fn quotient_vector(v: &RootVector, g: &FoldingGroup) -> RootVector {
    RootVector::new(
        g.orbits()
            .iter()
            .map(|o| o.iter().map(|&l| v[l]).sum())
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldingMatch {
    pub dbar: RootVector,
    pub dprime: RootVector,
    pub f_match: bool,
    pub g_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FoldingReport {
    pub matches: Vec<FoldingMatch>,
}

impl FoldingReport {
    pub fn all_match(&self) -> bool {
        self.matches.iter().all(|m| m.f_match && m.g_match)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &FoldingMatch> {
        self.matches.iter().filter(|m| !(m.f_match && m.g_match))
    }
}

/// Compares every `d̄` with every unfolded root `d'` whose quotient is `d̄`.
pub fn verify_folding(folded: &ClusterTable, unfolded: &ClusterTable, g: &FoldingGroup) -> Result<FoldingReport> {
    let mut by_quotient: BTreeMap<RootVector, Vec<&RootVector>> = BTreeMap::new();
    for d in unfolded.entries.keys() {
        by_quotient.entry(quotient_vector(d, g)).or_default().push(d);
    }
    let mut matches = Vec::new();
    for (dbar, rec) in &folded.entries {
        let pre = by_quotient
            .get(dbar)
            .ok_or_else(|| Error::NoUnfoldedRoot(dbar.clone()))?;
        for &dprime in pre {
            let u = &unfolded.entries[dprime];
            matches.push(FoldingMatch {
                dbar: dbar.clone(),
                dprime: dprime.clone(),
                f_match: project_polynomial(&u.f, g) == rec.f,
                g_match: quotient_vector(&u.g, g) == rec.g,
            });
        }
    }
    Ok(FoldingReport { matches })
}

/// Explores every extended matrix reachable from `[B; I]` by orbit
/// mutations at orbits whose vertices are sinks or sources, returning the
/// number of states and whether all were strongly admissible.
pub fn sink_source_admissibility(b: &ExchangeMatrix, g: &FoldingGroup, cap: usize) -> Result<(usize, bool)> {
    let start = principal_extension(b);
    let mut seen: HashSet<ExtendedExchangeMatrix> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut ok = true;
    while let Some(m) = queue.pop_front() {
        ok &= is_strongly_admissible(m.matrix(), g);
        let q = quiver_of(&m.matrix().top_square());
        for (oi, orbit) in g.orbits().iter().enumerate() {
            let k = orbit[0];
            if !(q.is_sink(k) || q.is_source(k)) {
                continue;
            }
            let next = orbit_mutation(&m, g, oi)?;
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
                queue.push_back(next);
            }
        }
    }
    Ok((seen.len(), ok))
}
