//! Ground truth by direct seed mutation with principal coefficients.
//!
//! Cluster variables are Laurent polynomials in `2n` variables ordered
//! `x_1..x_n, y_1..y_n`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exchange::{
    classify_cartan_type, positive_roots, principal_extension, Classification, ExchangeMatrix,
    ExtendedExchangeMatrix, MutationSequence, RootVector,
};
use crate::poly::LaurentPoly;

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub cluster: Vec<LaurentPoly>,
    pub matrix: ExtendedExchangeMatrix,
}

impl Seed {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn mutate(&self, k: usize) -> Result<Seed> {
        mutate_seed(self, k)
    }

    /// Applies the directions in order.
    pub fn mutate_along(&self, path: &MutationSequence) -> Result<Seed> {
        path.directions().iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }

    fn canonical_key(&self) -> Vec<LaurentPoly> {
        let mut key = self.cluster.clone();
        key.sort();
        key
    }
}

pub fn initial_seed(b: &ExchangeMatrix) -> Seed {
    let n = b.rank();
    Seed {
        cluster: (0..n).map(|i| LaurentPoly::var(2 * n, i)).collect(),
        matrix: principal_extension(b),
    }
}

pub fn mutate_seed(s: &Seed, k: usize) -> Result<Seed> {
    let n = s.rank();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, rank: n });
    }
    let m = s.matrix.row_count();
    let vars = 2 * n;
    let mut pos = LaurentPoly::one(vars);
    let mut neg = LaurentPoly::one(vars);
    for i in 0..m {
        let b = s.matrix.get(i, k);
        if b == 0 {
            continue;
        }
        let factor = if i < n {
            s.cluster[i].pow(b.unsigned_abs())
        } else {
            let mut e = vec![0; vars];
            e[i] = b.abs();
            LaurentPoly::monomial(e, 1)
        };
        if b > 0 {
            pos = &pos * &factor;
        } else {
            neg = &neg * &factor;
        }
    }
    let new_var = (&pos + &neg)
        .div_exact(&s.cluster[k])
        .map_err(|_| Error::LaurentPhenomenonViolation(k))?;
    let mut cluster = s.cluster.clone();
    cluster[k] = new_var;
    Ok(Seed {
        cluster,
        matrix: s.matrix.mutate(k)?,
    })
}

fn half(x: &LaurentPoly) -> usize {
    x.vars() / 2
}

/// `x_i = 1`, `y_j -> u_j`.
pub fn extract_f_polynomial(x: &LaurentPoly) -> Result<LaurentPoly> {
    let n = half(x);
    let f = x.map_exponents(n, |e| e[n..].to_vec());
    if !f.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let c = f.constant_term();
    if c != 1 {
        return Err(Error::NoConstantTerm(c));
    }
    Ok(f)
}

/// x-exponent of the unique y-free term.
pub fn extract_g_vector(x: &LaurentPoly) -> Result<RootVector> {
    let n = half(x);
    let free: Vec<&Vec<i32>> = x
        .terms()
        .map(|(e, _)| e)
        .filter(|e| e[n..].iter().all(|&k| k == 0))
        .collect();
    match free.as_slice() {
        [e] => Ok(RootVector::new(e[..n].to_vec())),
        other => Err(Error::AmbiguousGVector(other.len())),
    }
}

pub fn extract_denominator(x: &LaurentPoly) -> RootVector {
    let n = half(x);
    RootVector::new(x.min_exponents()[..n].iter().map(|&k| -k).collect())
}

/// `ŷ_j = y_j ∏_i x_i^{b_ij}` in the `2n` seed variables.
pub fn yhat(b: &ExchangeMatrix) -> Vec<LaurentPoly> {
    let n = b.rank();
    (0..n)
        .map(|j| {
            let mut e = vec![0; 2 * n];
            for (i, slot) in e.iter_mut().enumerate().take(n) {
                *slot = b.get(i, j);
            }
            e[n + j] = 1;
            LaurentPoly::monomial(e, 1)
        })
        .collect()
}

/// `F(ŷ) x^g`.
pub fn reconstruct_variable(f: &LaurentPoly, g: &RootVector, b: &ExchangeMatrix) -> Result<LaurentPoly> {
    let n = b.rank();
    let mut e = g.coords().to_vec();
    e.resize(2 * n, 0);
    Ok(f.substitute(&yhat(b))?.mul_monomial(&e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterRecord {
    pub d: RootVector,
    pub g: RootVector,
    pub f: LaurentPoly,
    pub variable: LaurentPoly,
    /// First path on which the variable appeared.
    pub path: MutationSequence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTable {
    pub classification: Classification,
    pub entries: BTreeMap<RootVector, ClusterRecord>,
    pub seeds_visited: usize,
    pub all_coefficients_positive: bool,
}

impl ClusterTable {
    pub fn get(&self, d: &RootVector) -> Option<&ClusterRecord> {
        self.entries.get(d)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &ClusterRecord> {
        self.entries.values()
    }
}

impl Serialize for ClusterTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            d: &'a RootVector,
            g: &'a RootVector,
            #[serde(rename = "F")]
            f: &'a LaurentPoly,
            path: &'a MutationSequence,
        }
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for r in self.entries.values() {
            seq.serialize_element(&Row {
                d: &r.d,
                g: &r.g,
                f: &r.f,
                path: &r.path,
            })?;
        }
        seq.end()
    }
}

fn is_initial(x: &LaurentPoly) -> bool {
    match x.as_monomial() {
        Some((e, 1)) => e.iter().filter(|&&k| k != 0).count() == 1 && e.iter().all(|&k| k == 0 || k == 1),
        _ => false,
    }
}

/// Breadth-first search of the exchange graph, seeds identified up to
/// permutation of cluster positions.
pub fn enumerate_finite_type(b: &ExchangeMatrix, cap: usize) -> Result<ClusterTable> {
    let classification = classify_cartan_type(b)?;
    let n = b.rank();
    let start = initial_seed(b);
    let mut visited: HashSet<Vec<LaurentPoly>> = HashSet::from([start.canonical_key()]);
    let mut queue = VecDeque::from([(start, MutationSequence::empty())]);
    let mut entries: BTreeMap<RootVector, ClusterRecord> = BTreeMap::new();
    let mut positive = true;

    while let Some((seed, path)) = queue.pop_front() {
        for k in 0..n {
            if path.directions().last() == Some(&k) {
                continue;
            }
            let next = mutate_seed(&seed, k)?;
            let x = &next.cluster[k];
            let next_path = path.then(k);
            if !is_initial(x) {
                positive &= x.all_coefficients_positive();
                let d = extract_denominator(x);
                match entries.get(&d) {
                    Some(r) if &r.variable != x => return Err(Error::ExtraRoot(d)),
                    Some(_) => {}
                    None => {
                        let f = extract_f_polynomial(x)?;
                        positive &= f.all_coefficients_positive();
                        let record = ClusterRecord {
                            d: d.clone(),
                            g: extract_g_vector(x)?,
                            f,
                            variable: x.clone(),
                            path: next_path.clone(),
                        };
                        entries.insert(d, record);
                    }
                }
            }
            if visited.insert(next.canonical_key()) {
                if visited.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
                queue.push_back((next, next_path));
            }
        }
    }

    let expected: BTreeMap<RootVector, ()> = positive_roots(classification.cartan)
        .iter()
        .map(|r| (classification.to_original(r), ()))
        .collect();
    if let Some(d) = expected.keys().find(|d| !entries.contains_key(d)) {
        return Err(Error::MissingRoot(d.clone()));
    }
    if let Some(d) = entries.keys().find(|d| !expected.contains_key(d)) {
        return Err(Error::ExtraRoot(d.clone()));
    }
    Ok(ClusterTable {
        classification,
        entries,
        seeds_visited: visited.len(),
        all_coefficients_positive: positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn rv(v: &[i32]) -> RootVector {
        RootVector::new(v.to_vec())
    }

    #[test]
    fn initial_seeds() {
        let s = initial_seed(&ExchangeMatrix::from_rows(&[vec![0]]).unwrap());
        assert_eq!(s.cluster, vec![LaurentPoly::var(2, 0)]);
        assert_eq!(s.matrix.matrix().to_rows(), vec![vec![0], vec![1]]);
        let s = initial_seed(&a2());
        assert_eq!(
            s.matrix.matrix().to_rows(),
            vec![vec![0, -1], vec![1, 0], vec![1, 0], vec![0, 1]]
        );
    }

    #[test]
    fn rank_one_mutation() {
        let s = initial_seed(&ExchangeMatrix::from_rows(&[vec![0]]).unwrap());
        let x = &mutate_seed(&s, 0).unwrap().cluster[0];
        // (y1 + 1) / x1
        assert_eq!(x.coeff(&[-1, 1]), 1);
        assert_eq!(x.coeff(&[-1, 0]), 1);
        assert_eq!(x.len(), 2);
        assert_eq!(extract_f_polynomial(x).unwrap().to_text("u"), "u1 + 1");
        assert_eq!(extract_g_vector(x).unwrap(), rv(&[-1]));
    }

    #[test]
    fn a2_first_mutation() {
        let s = mutate_seed(&initial_seed(&a2()), 0).unwrap();
        let x = &s.cluster[0];
        assert_eq!(x.coeff(&[-1, 1, 1, 0]), 1);
        assert_eq!(x.coeff(&[-1, 0, 0, 0]), 1);
        assert_eq!(x.len(), 2);
        assert_eq!(extract_f_polynomial(x).unwrap().to_text("u"), "u1 + 1");
        assert_eq!(extract_g_vector(x).unwrap(), rv(&[-1, 0]));
        assert_eq!(extract_denominator(x), rv(&[1, 0]));
        assert_eq!(mutate_seed(&s, 0).unwrap(), initial_seed(&a2()));
    }

    #[test]
    fn initial_variable_extractions() {
        let x = LaurentPoly::var(4, 1);
        assert_eq!(extract_f_polynomial(&x).unwrap(), LaurentPoly::one(2));
        assert_eq!(extract_g_vector(&x).unwrap(), rv(&[0, 1]));
        assert_eq!(extract_denominator(&x), rv(&[0, -1]));
    }

    #[test]
    fn extraction_errors() {
        let x = &LaurentPoly::monomial(vec![0, -1], 1) + &LaurentPoly::one(2);
        assert_eq!(extract_f_polynomial(&x), Err(Error::NotPolynomial));
        let two = LaurentPoly::constant(2, 2);
        assert_eq!(extract_f_polynomial(&two), Err(Error::NoConstantTerm(2)));
        let amb = &LaurentPoly::var(2, 0) + &LaurentPoly::one(2);
        assert_eq!(extract_g_vector(&amb), Err(Error::AmbiguousGVector(2)));
    }

    #[test]
    fn a2_enumeration() {
        let t = enumerate_finite_type(&a2(), DEFAULT_CAP).unwrap();
        let keys: Vec<_> = t.entries.keys().cloned().collect();
        assert_eq!(keys, vec![rv(&[0, 1]), rv(&[1, 0]), rv(&[1, 1])]);
        assert_eq!(t.seeds_visited, 5);
        assert!(t.all_coefficients_positive);
        for r in t.records() {
            assert_eq!(reconstruct_variable(&r.f, &r.g, &a2()).unwrap(), r.variable);
        }
    }

    #[test]
    fn rank_one_enumeration() {
        let b = ExchangeMatrix::from_rows(&[vec![0]]).unwrap();
        let t = enumerate_finite_type(&b, DEFAULT_CAP).unwrap();
        assert_eq!(t.len(), 1);
        let r = t.get(&rv(&[1])).unwrap();
        assert_eq!(r.f.to_text("u"), "u1 + 1");
        assert_eq!(r.g, rv(&[-1]));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_finite_type(&a2(), 2), Err(Error::CapExceeded(2)));
    }

    #[test]
    fn table_json() {
        let b = ExchangeMatrix::from_rows(&[vec![0]]).unwrap();
        let t = enumerate_finite_type(&b, DEFAULT_CAP).unwrap();
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"[{"d":[1],"g":[-1],"F":{"vars":1,"terms":[{"e":[0],"coeff":1},{"e":[1],"coeff":1}]},"path":[1]}]"#
        );
    }
}
