use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub(crate) fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in polynomial coefficient")
}

#[inline]
pub(crate) fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in polynomial coefficient")
}

fn add_into(terms: &mut BTreeMap<Vec<i32>, i64>, e: Vec<i32>, c: i64) {
    if c == 0 {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = cadd(*o.get(), c);
            if s == 0 {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Sparse Laurent polynomial with integer coefficients. Terms are kept in
/// lexicographic order of exponent vectors; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Vec<i32>, i64>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: i64) -> Self {
        Self::monomial(vec![0; vars], c)
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, 1)
    }

    /// The variable with 0-based index `i`.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exponent: Vec<i32>, coeff: i64) -> Self {
        let vars = exponent.len();
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exponent, coeff);
        }
        LaurentPoly { vars, terms }
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<i32>, i64)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::DimensionMismatch {
                    left: vars,
                    right: e.len(),
                });
            }
            add_into(&mut p.terms, e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.vars
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

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i32>, &i64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> i64 {
        self.coeff(&vec![0; self.vars])
    }

    /// Leading term under lex order.
    pub fn leading(&self) -> Option<(&Vec<i32>, &i64)> {
        self.terms.last_key_value()
    }

    pub fn as_monomial(&self) -> Option<(&Vec<i32>, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, &c)| (e, c))
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Componentwise minimum exponent over all terms (zeros for the zero
    /// polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut it = self.terms.keys();
        match it.next() {
            None => vec![0; self.vars],
            Some(first) => {
                let mut m = first.clone();
                for e in it {
                    for (a, &b) in m.iter_mut().zip(e) {
                        *a = (*a).min(b);
                    }
                }
                m
            }
        }
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: i64) {
        assert_eq!(e.len(), self.vars, "exponent length");
        add_into(&mut self.terms, e, c);
    }

    pub fn scale(&self, c: i64) -> LaurentPoly {
        if c == 0 {
            return Self::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), cmul(x, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, shift: &[i32]) -> LaurentPoly {
        assert_eq!(shift.len(), self.vars);
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c))
                .collect(),
        }
    }

    fn check_dims(&self, other: &LaurentPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            add_into(&mut out.terms, e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_dims(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars));
        }
        let mut acc: HashMap<Vec<i32>, i64> = HashMap::with_capacity(self.len() * other.len());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = cadd(*slot, cmul(ca, cb));
            }
        }
        Ok(LaurentPoly {
            vars: self.vars,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        })
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = Self::one(self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Exact quotient `self / divisor`. The Laurent monomial content of both
    /// operands is factored out, then the remaining polynomials are divided
    /// by leading terms in lex order; any nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_dims(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.vars));
        }
        let mr = divisor.min_exponents();
        let mp = self.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let r0 = divisor.mul_monomial(&neg(&mr));
        let mut rem = self.mul_monomial(&neg(&mp)).terms;
        let (lead_e, &lead_c) = r0.leading().expect("nonzero");
        let lead_e = lead_e.clone();

        let mut quotient = BTreeMap::new();
        while let Some((e, &c)) = rem.last_key_value() {
            let shift: Vec<i32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            if shift.iter().any(|&x| x < 0) || c % lead_c != 0 {
                return Err(Error::NotDivisible);
            }
            let qc = c / lead_c;
            for (re, &rc) in &r0.terms {
                let te: Vec<i32> = re.iter().zip(&shift).map(|(a, b)| a + b).collect();
                add_into(&mut rem, te, -cmul(qc, rc));
            }
            quotient.insert(shift, qc);
        }
        let content: Vec<i32> = mp.iter().zip(&mr).map(|(a, b)| a - b).collect();
        Ok(LaurentPoly {
            vars: self.vars,
            terms: quotient,
        }
        .mul_monomial(&content))
    }

    /// Composite `self(images[0], ..., images[n-1])`. Negative exponents
    /// require the corresponding image to be a monomial with coefficient +-1.
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly> {
        if images.len() != self.vars {
            return Err(Error::DimensionMismatch {
                left: self.vars,
                right: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.vars,
            None => {
                // constants only
                return Ok(LaurentPoly::constant(0, self.constant_term()));
            }
        };
        if let Some(p) = images.iter().find(|p| p.vars != target) {
            return Err(Error::DimensionMismatch {
                left: target,
                right: p.vars,
            });
        }
        let mut powers: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(target);
        for (e, &c) in &self.terms {
            let mut term = LaurentPoly::constant(target, c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !powers.contains_key(&(i, k)) {
                    let p = if k > 0 {
                        images[i].pow(k as u32)
                    } else {
                        let inv = images[i].monomial_inverse().ok_or(Error::NegativeExponentOnNonMonomial(i))?;
                        inv.pow((-k) as u32)
                    };
                    powers.insert((i, k), p);
                }
                term = &term * &powers[&(i, k)];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    fn monomial_inverse(&self) -> Option<LaurentPoly> {
        let (e, c) = self.as_monomial()?;
        if c != 1 && c != -1 {
            return None;
        }
        Some(LaurentPoly::monomial(e.iter().map(|x| -x).collect(), c))
    }

    /// Rewrites every exponent through `f` into a polynomial in `vars`
    /// variables, combining terms that collide.
    pub fn map_exponents(&self, vars: usize, f: impl Fn(&[i32]) -> Vec<i32>) -> LaurentPoly {
        let mut out = LaurentPoly::zero(vars);
        for (e, &c) in &self.terms {
            let ne = f(e);
            debug_assert_eq!(ne.len(), vars);
            add_into(&mut out.terms, ne, c);
        }
        out
    }

    /// Renders with variable names `prefix1, prefix2, ...`, highest term
    /// first, e.g. `u2*u3 + u2 + 1`.
    pub fn to_text(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, &c)) in self.terms.iter().rev().enumerate() {
            let mono = monomial_text(e, prefix, "*");
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if idx == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            match (mono.is_empty(), mag) {
                (true, m) => s.push_str(&m.to_string()),
                (false, 1) => s.push_str(&mono),
                (false, m) => s.push_str(&format!("{m}*{mono}")),
            }
        }
        s
    }
    /// LaTeX such as `u_{2}u_{3}^{2} + 2u_{2} + 1`.
    pub fn to_latex(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, &c)) in self.terms.iter().rev().enumerate() {
            let mono: String = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| match k {
                    1 => format!("{prefix}_{{{}}}", i + 1),
                    _ => format!("{prefix}_{{{}}}^{{{k}}}", i + 1),
                })
                .collect();
            let mag = c.abs();
            if c < 0 {
                s.push_str(if idx == 0 { "-" } else { " - " });
            } else if idx > 0 {
                s.push_str(" + ");
            }
            match (mono.is_empty(), mag) {
                (true, m) => s.push_str(&m.to_string()),
                (false, 1) => s.push_str(&mono),
                (false, m) => s.push_str(&format!("{m}{mono}")),
            }
        }
        s
    }
}

/// `u2*u3^2` style monomial text; empty for the unit monomial.
pub(crate) fn monomial_text(e: &[i32], prefix: &str, sep: &str) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("{prefix}{}", i + 1)
            } else {
                format!("{prefix}{}^{k}", i + 1)
            }
        })
        .collect();
    parts.join(sep)
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("u"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(&-rhs).expect("variable count mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

pub fn lp_add(p: &LaurentPoly, r: &LaurentPoly) -> Result<LaurentPoly> {
    p.try_add(r)
}

pub fn lp_mul(p: &LaurentPoly, r: &LaurentPoly) -> Result<LaurentPoly> {
    p.try_mul(r)
}

pub fn lp_div_exact(p: &LaurentPoly, r: &LaurentPoly) -> Result<LaurentPoly> {
    p.div_exact(r)
}

pub fn lp_substitute(p: &LaurentPoly, images: &[LaurentPoly]) -> Result<LaurentPoly> {
    p.substitute(images)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: Vec<i32>,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, &coeff)| TermJson { e: e.clone(), coeff })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        LaurentPoly::from_terms(j.vars, j.terms.into_iter().map(|t| (t.e, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(n, i)
    }

    fn one(n: usize) -> LaurentPoly {
        LaurentPoly::one(n)
    }

    #[test]
    fn difference_of_squares() {
        let u1 = x(1, 0);
        let p = &(&u1 + &one(1)) * &(&u1 - &one(1));
        assert_eq!(p, &u1.pow(2) - &one(1));
        assert_eq!(p.to_text("u"), "u1^2 - 1");
    }

    #[test]
    fn add_zero_and_dimension_mismatch() {
        let p = &x(2, 0) + &one(2);
        assert_eq!(&p + &LaurentPoly::zero(2), p);
        assert_eq!(
            lp_add(&p, &one(3)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
        assert!(lp_mul(&p, &one(1)).is_err());
    }

    #[test]
    fn product_of_positive_polys_is_positive() {
        let n = 3;
        let (u2, u3) = (x(n, 1), x(n, 2));
        let a = &u2 + &one(n);
        let b = &(&(&u2 * &u3) + &u2) + &one(n);
        assert!((&a * &b).all_coefficients_positive());
    }

    #[test]
    fn exact_division_examples() {
        let n = 2;
        let (x1, x2) = (x(n, 0), x(n, 1));
        let p = &(&x1 * &x2) + &x1;
        assert_eq!(p.div_exact(&(&x2 + &one(n))).unwrap(), x1);

        // (x2*y1 + 1) / x1 in variables x1, x2, y1
        let m = 3;
        let num = &(&x(m, 1) * &x(m, 2)) + &one(m);
        let q = num.div_exact(&x(m, 0)).unwrap();
        assert_eq!(q.coeff(&[-1, 1, 1]), 1);
        assert_eq!(q.coeff(&[-1, 0, 0]), 1);
        assert_eq!(q.len(), 2);

        let bad = (&x(1, 0) + &one(1)).div_exact(&(&x(1, 0) + &LaurentPoly::constant(1, 2)));
        assert_eq!(bad, Err(Error::NotDivisible));
        assert_eq!(one(1).div_exact(&LaurentPoly::zero(1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn division_by_laurent_divisor() {
        let n = 2;
        let d = &(&x(n, 0) + &x(n, 1)).mul_monomial(&[-1, -2]) + &LaurentPoly::monomial(vec![-3, 0], 2);
        let q = &(&x(n, 0).pow(3) + &one(n)).mul_monomial(&[0, -1]) + &x(n, 1);
        let p = &d * &q;
        assert_eq!(p.div_exact(&d).unwrap(), q);
    }

    #[test]
    fn substitute_examples() {
        // F = u1 + 1 with u1 -> y1*x2 over (x1, x2, y1, y2)
        let f = &x(1, 0) + &one(1);
        let yhat = LaurentPoly::monomial(vec![0, 1, 1, 0], 1);
        let r = f.substitute(&[yhat]).unwrap();
        assert_eq!(r.coeff(&[0, 1, 1, 0]), 1);
        assert_eq!(r.constant_term(), 1);
        assert_eq!(r.len(), 2);

        let p = &(&x(2, 0) * &x(2, 1)) + &LaurentPoly::monomial(vec![-1, 2], 3);
        assert_eq!(p.substitute(&[x(2, 0), x(2, 1)]).unwrap(), p);
        assert_eq!(one(2).substitute(&[&x(2, 0) + &one(2), x(2, 1)]).unwrap(), one(2));
    }

    #[test]
    fn substitute_rejects_non_monomial_inverse() {
        let p = LaurentPoly::monomial(vec![-1], 1);
        assert_eq!(
            p.substitute(&[&x(1, 0) + &one(1)]),
            Err(Error::NegativeExponentOnNonMonomial(0))
        );
    }

    #[test]
    fn json_is_sorted() {
        let p = &(&x(2, 1) + &one(2)) + &x(2, 0);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"vars":2,"terms":[{"e":[0,0],"coeff":1},{"e":[0,1],"coeff":1},{"e":[1,0],"coeff":1}]}"#
        );
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn latex_rendering() {
        let p = LaurentPoly::from_terms(3, [(vec![0, 1, 2], 1), (vec![0, 1, 0], 2), (vec![0, 0, 0], -1)]).unwrap();
        assert_eq!(p.to_latex("u"), "u_{2}u_{3}^{2} + 2u_{2} - 1");
        assert_eq!(LaurentPoly::zero(2).to_latex("u"), "0");
    }

    #[test]
    fn text_rendering() {
        let n = 4;
        let f = &(&(&x(n, 1) * &x(n, 2)) + &x(n, 1)) + &one(n);
        assert_eq!(f.to_text("u"), "u2*u3 + u2 + 1");
        let g = &LaurentPoly::monomial(vec![0, 2, 0, 0], -3) + &one(n);
        assert_eq!(g.to_text("u"), "-3*u2^2 + 1");
    }
}
