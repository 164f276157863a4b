use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::laurent::{cadd, cmul, LaurentPoly};
use crate::error::{Error, Result};
use crate::exchange::{ExchangeMatrix, IntMatrix, RootVector, SkewSymmetrizer};

/// Integer Laurent polynomial in `v = q^{1/2}`, keyed by v-exponent.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QCoefficient(BTreeMap<i32, i64>);

impl QCoefficient {
    pub fn zero() -> Self {
        QCoefficient(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::v_power(0)
    }

    pub fn v_power(k: i32) -> Self {
        Self::from_terms([(k, 1)])
    }

    pub fn constant(c: i64) -> Self {
        Self::from_terms([(0, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut out = QCoefficient::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: i32, c: i64) {
        if c == 0 {
            return;
        }
        let s = cadd(self.0.get(&k).copied().unwrap_or(0), c);
        if s == 0 {
            self.0.remove(&k);
        } else {
            self.0.insert(k, s);
        }
    }

    /// `(v^k + v^{-k})`.
    pub fn bar_pair(k: i32) -> Self {
        Self::from_terms([(k, 1), (-k, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, k: i32) -> i64 {
        self.0.get(&k).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &QCoefficient) -> QCoefficient {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn mul(&self, other: &QCoefficient) -> QCoefficient {
        let mut out = QCoefficient::zero();
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                out.add_term(ka + kb, cmul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> QCoefficient {
        (0..k).fold(QCoefficient::one(), |acc, _| acc.mul(self))
    }

    pub fn neg(&self) -> QCoefficient {
        QCoefficient(self.0.iter().map(|(&k, &c)| (k, -c)).collect())
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> QCoefficient {
        QCoefficient(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    /// `v -> v^{-1}`.
    pub fn bar(&self) -> QCoefficient {
        QCoefficient(self.0.iter().map(|(&k, &c)| (-k, c)).collect())
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> i64 {
        self.0.values().fold(0, |a, &c| cadd(a, c))
    }

    pub fn to_text(&self) -> String {
        self.render(q_text)
    }

    pub fn to_latex(&self) -> String {
        self.render(q_latex)
    }

    fn render(&self, power: fn(i32) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (k, c)) in self.terms().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if idx == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            let p = power(k);
            match (p.is_empty(), mag) {
                (true, m) => s.push_str(&m.to_string()),
                (false, 1) => s.push_str(&p),
                (false, m) => s.push_str(&format!("{m}{p}")),
            }
        }
        s
    }

    pub(crate) fn is_single_term(&self) -> bool {
        self.0.len() == 1
    }
}

fn q_text(k: i32) -> String {
    match (k, k % 2 == 0) {
        (0, _) => String::new(),
        (2, _) => "q".into(),
        (k, true) => format!("q^{}", k / 2),
        (k, false) => format!("q^({k}/2)"),
    }
}

fn q_latex(k: i32) -> String {
    match (k, k % 2 == 0) {
        (0, _) => String::new(),
        (2, _) => "q".into(),
        (k, true) => format!("q^{{{}}}", k / 2),
        (k, false) => format!("q^{{{k}/2}}"),
    }
}

impl fmt::Debug for QCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for QCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Serialize for QCoefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct V {
            v: Vec<(i32, i64)>,
        }
        V {
            v: self.terms().collect(),
        }
        .serialize(s)
    }
}

pub fn qc_bar(c: &QCoefficient) -> QCoefficient {
    c.bar()
}

/// `Λ_ij = δ̂_i b_ij`; skew-symmetric whenever `δ̂` symmetrizes `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewPairing {
    n: usize,
    lambda: Vec<i64>,
}

impl SkewPairing {
    pub fn new(b: &IntMatrix, delta_hat: &SkewSymmetrizer) -> Result<Self> {
        let n = b.cols();
        if b.rows() != n {
            return Err(Error::NotSquare {
                rows: b.rows(),
                cols: n,
            });
        }
        if delta_hat.entries().len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: delta_hat.entries().len(),
            });
        }
        if !delta_hat.certifies(b) {
            return Err(Error::NotSkewSymmetrizable(format!(
                "{:?} does not symmetrize the matrix",
                delta_hat.entries()
            )));
        }
        let d = delta_hat.entries();
        let mut lambda = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                lambda[i * n + j] = d[i] * b.get(i, j) as i64;
            }
        }
        Ok(SkewPairing { n, lambda })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.lambda[i * self.n + j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.entry(i, j) == -self.entry(j, i)))
    }

    /// `aᵀΛb`, which is `2θ(a,b)`, the v-exponent picked up by `Z^a Z^b`.
    pub fn form(&self, a: &[i32], b: &[i32]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                s += a[i] as i64 * self.entry(i, j) * b[j] as i64;
            }
        }
        s
    }
}

/// `Z^a Z^b = v^{aᵀΛb} Z^{a+b}`.
pub fn qt_monomial_mul(a: &RootVector, b: &RootVector, pairing: &SkewPairing) -> (i64, RootVector) {
    (pairing.form(a.coords(), b.coords()), a + b)
}

/// The algebra shared by a family of quantum torus elements: `B^0` and `δ̂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantumTorus {
    b0: IntMatrix,
    delta_hat: SkewSymmetrizer,
    pairing: SkewPairing,
}

impl QuantumTorus {
    pub fn new(b0: &ExchangeMatrix, delta_hat: SkewSymmetrizer) -> Result<Arc<Self>> {
        let pairing = SkewPairing::new(b0.matrix(), &delta_hat)?;
        Ok(Arc::new(QuantumTorus {
            b0: b0.matrix().clone(),
            delta_hat,
            pairing,
        }))
    }

    pub fn rank(&self) -> usize {
        self.pairing.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b0
    }

    pub fn delta_hat(&self) -> &SkewSymmetrizer {
        &self.delta_hat
    }

    pub fn pairing(&self) -> &SkewPairing {
        &self.pairing
    }
}

/// `Σ P_a(v) Z^a` in the normalized monomial basis.
#[derive(Clone)]
pub struct QuantumTorusElement {
    torus: Arc<QuantumTorus>,
    terms: BTreeMap<Vec<i32>, QCoefficient>,
}

impl PartialEq for QuantumTorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl Eq for QuantumTorusElement {}

impl QuantumTorusElement {
    pub fn zero(torus: &Arc<QuantumTorus>) -> Self {
        QuantumTorusElement {
            torus: Arc::clone(torus),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(torus: &Arc<QuantumTorus>) -> Self {
        Self::monomial(torus, RootVector::zero(torus.rank()), QCoefficient::one())
    }

    /// The generator `Z_i` (0-based).
    pub fn generator(torus: &Arc<QuantumTorus>, i: usize) -> Self {
        Self::monomial(torus, RootVector::unit(torus.rank(), i), QCoefficient::one())
    }

    pub fn monomial(torus: &Arc<QuantumTorus>, a: RootVector, coeff: QCoefficient) -> Self {
        let mut x = Self::zero(torus);
        x.add_term(a, coeff);
        x
    }

    pub fn add_term(&mut self, a: RootVector, coeff: QCoefficient) {
        assert_eq!(a.dim(), self.torus.rank(), "exponent length");
        if coeff.is_zero() {
            return;
        }
        let key = a.into_coords();
        let sum = match self.terms.get(&key) {
            Some(c) => c.add(&coeff),
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn torus(&self) -> &Arc<QuantumTorus> {
        &self.torus
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.torus, &other.torus) || self.torus == other.torus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i32>, &QCoefficient)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &[i32]) -> QCoefficient {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(RootVector::new(a.clone()), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let pairing = self.torus.pairing();
        let mut out = Self::zero(&self.torus);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let k = pairing.form(a, b);
                let e: Vec<i32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(RootVector::new(e), ca.mul(cb).shift(to_v(k)));
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by the central scalar `c`.
    pub fn scale(&self, c: &QCoefficient) -> Self {
        let mut out = Self::zero(&self.torus);
        for (a, p) in &self.terms {
            out.add_term(RootVector::new(a.clone()), p.mul(c));
        }
        out
    }

    /// `q = 1`, `Z^a -> u^a`.
    pub fn specialize_classical(&self) -> LaurentPoly {
        let n = self.torus.rank();
        let mut out = LaurentPoly::zero(n);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c.at_one());
        }
        out
    }

    /// Text such as `q*Z^(0,1,1,1) + q^3*Z^(0,1,0,1) + q^2*Z2 + 1`, highest
    /// exponent first.
    pub fn to_text(&self) -> String {
        self.render(|c| c.to_text(), monomial_z_text, "*")
    }

    pub fn to_latex(&self) -> String {
        self.render(|c| c.to_latex(), monomial_z_latex, "")
    }

    fn render(&self, coeff: impl Fn(&QCoefficient) -> String, mono: fn(&[i32]) -> String, sep: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let m = mono(a);
                let ct = coeff(c);
                match (m.is_empty(), ct.as_str()) {
                    (true, _) if c.is_single_term() => ct,
                    (true, _) => format!("({ct})"),
                    (false, "1") => m,
                    (false, _) if c.is_single_term() => format!("{ct}{sep}{m}"),
                    (false, _) => format!("({ct}){sep}{m}"),
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn monomial_z_text(a: &[i32]) -> String {
    let nz: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0).collect();
    match nz.as_slice() {
        [] => String::new(),
        [i] if a[*i] == 1 => format!("Z{}", i + 1),
        _ => format!(
            "Z^({})",
            a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
    }
}

fn monomial_z_latex(a: &[i32]) -> String {
    let nz: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0).collect();
    match nz.as_slice() {
        [] => String::new(),
        [i] if a[*i] == 1 => format!("Z_{{{}}}", i + 1),
        _ => {
            let parts: Vec<String> = nz
                .iter()
                .map(|&i| match a[i] {
                    1 => format!("e_{{{}}}", i + 1),
                    -1 => format!("-e_{{{}}}", i + 1),
                    k => format!("{k}e_{{{}}}", i + 1),
                })
                .collect();
            format!("Z^{{{}}}", parts.join("+").replace("+-", "-"))
        }
    }
}

fn to_v(k: i64) -> i32 {
    i32::try_from(k).expect("v-exponent out of range")
}

impl fmt::Debug for QuantumTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for QuantumTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Serialize for QuantumTorusElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            e: &'a [i32],
            coeff: &'a QCoefficient,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            vars: usize,
            terms: Vec<Term<'a>>,
        }
        Doc {
            vars: self.torus.rank(),
            terms: self
                .terms
                .iter()
                .map(|(e, coeff)| Term { e, coeff })
                .collect(),
        }
        .serialize(s)
    }
}

pub fn qt_mul(x: &QuantumTorusElement, y: &QuantumTorusElement) -> Result<QuantumTorusElement> {
    x.try_mul(y)
}

/// `L[a](Z^b) = q^{-Σ a_i b_i δ̂_i} Z^b`.
pub fn l_apply(a: &RootVector, x: &QuantumTorusElement, delta_hat: &SkewSymmetrizer) -> Result<QuantumTorusElement> {
    let n = x.torus.rank();
    if a.dim() != n || delta_hat.entries().len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: a.dim(),
        });
    }
    let d: Vec<i32> = delta_hat.entries().iter().map(|&v| to_v(v)).collect();
    let mut out = QuantumTorusElement::zero(&x.torus);
    for (b, c) in &x.terms {
        let k = RootVector::triple_dot(a.coords(), b, &d);
        out.add_term(RootVector::new(b.clone()), c.shift(to_v(-2 * k)));
    }
    Ok(out)
}

pub fn qt_specialize_classical(x: &QuantumTorusElement) -> LaurentPoly {
    x.specialize_classical()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<QuantumTorus> {
        let b = ExchangeMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        QuantumTorus::new(&b, SkewSymmetrizer::new(vec![1, 1])).unwrap()
    }

    fn b4(d_scale: i64) -> Arc<QuantumTorus> {
        let b = ExchangeMatrix::from_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, -1, 0, -1],
            vec![0, 0, 2, 0],
        ])
        .unwrap();
        QuantumTorus::new(&b, SkewSymmetrizer::new(vec![2, 2, 2, 1]).scaled(d_scale)).unwrap()
    }

    fn rv(v: &[i32]) -> RootVector {
        RootVector::new(v.to_vec())
    }

    #[test]
    fn qcoefficient_basics() {
        let c = QCoefficient::from_terms([(6, 1), (10, 1), (14, 1), (18, 1)]);
        assert_eq!(c.to_text(), "q^3 + q^5 + q^7 + q^9");
        assert_eq!(c.bar().to_text(), "q^-9 + q^-7 + q^-5 + q^-3");
        assert_eq!(c.bar().bar(), c);
        assert_eq!(QCoefficient::one().bar(), QCoefficient::one());
        assert_eq!(c.at_one(), 4);
        assert_eq!(serde_json::to_string(&QCoefficient::from_terms([(6, 1), (10, 1)])).unwrap(), r#"{"v":[[6,1],[10,1]]}"#);
        assert_eq!(QCoefficient::v_power(1).to_text(), "q^(1/2)");
        let p = QCoefficient::bar_pair(1).mul(&QCoefficient::bar_pair(1));
        assert_eq!(p, QCoefficient::from_terms([(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn a2_monomial_product() {
        let t = a2();
        let (k, e) = qt_monomial_mul(&rv(&[1, 0]), &rv(&[0, 1]), t.pairing());
        assert_eq!((k, e), (-1, rv(&[1, 1])));
        let (k0, e0) = qt_monomial_mul(&rv(&[2, -1]), &rv(&[0, 0]), t.pairing());
        assert_eq!((k0, e0), (0, rv(&[2, -1])));
    }

    #[test]
    fn a2_binomial_product() {
        let t = a2();
        let one = QuantumTorusElement::one(&t);
        let z1 = QuantumTorusElement::generator(&t, 0).try_add(&one).unwrap();
        let z2 = QuantumTorusElement::generator(&t, 1).try_add(&one).unwrap();
        let p = qt_mul(&z1, &z2).unwrap();
        assert_eq!(p.coeff(&[1, 1]), QCoefficient::v_power(-1));
        assert_eq!(p.coeff(&[1, 0]), QCoefficient::one());
        assert_eq!(p.coeff(&[0, 1]), QCoefficient::one());
        assert_eq!(p.coeff(&[0, 0]), QCoefficient::one());
        assert_eq!(p.len(), 4);
        assert_eq!(qt_mul(&z1, &one).unwrap(), z1);
    }

    #[test]
    fn pairing_is_antisymmetric_and_checked() {
        let t = b4(2);
        assert!(t.pairing().is_antisymmetric());
        let b = ExchangeMatrix::from_rows(&[vec![0, -1], vec![2, 0]]).unwrap();
        assert!(QuantumTorus::new(&b, SkewSymmetrizer::new(vec![1, 1])).is_err());
    }

    #[test]
    fn l_operator() {
        let t = b4(2);
        let x = QuantumTorusElement::monomial(&t, rv(&[0, 1, 0, 1]), QCoefficient::one());
        let y = l_apply(&rv(&[0, 1, 0, 0]), &x, t.delta_hat()).unwrap();
        assert_eq!(y.coeff(&[0, 1, 0, 1]), QCoefficient::v_power(-8));
        assert_eq!(l_apply(&RootVector::zero(4), &x, t.delta_hat()).unwrap(), x);
    }

    #[test]
    fn specialization() {
        let t = b4(2);
        let mut f = QuantumTorusElement::one(&t);
        f.add_term(rv(&[0, 1, 0, 0]), QCoefficient::v_power(4));
        assert_eq!(f.specialize_classical().to_text("u"), "u2 + 1");
        let g = QuantumTorusElement::monomial(
            &t,
            rv(&[0, 1, 0, 1]),
            QCoefficient::from_terms([(6, 1), (10, 1), (14, 1), (18, 1)]),
        );
        assert_eq!(g.specialize_classical().to_text("u"), "4*u2*u4");
        assert_eq!(f.to_text(), "q^2*Z2 + 1");
        assert_eq!(g.to_text(), "(q^3 + q^5 + q^7 + q^9)*Z^(0,1,0,1)");
        assert_eq!(g.to_latex(), "(q^{3} + q^{5} + q^{7} + q^{9})Z^{e_{2}+e_{4}}");
    }

    #[test]
    fn algebra_mismatch() {
        let x = QuantumTorusElement::one(&a2());
        let y = QuantumTorusElement::one(&b4(1));
        assert_eq!(x.try_mul(&y), Err(Error::AlgebraMismatch));
    }
}
