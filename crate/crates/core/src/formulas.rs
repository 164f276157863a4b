//! Closed combinatorial formulas for F-polynomials, g-vectors and quantum
//! F-polynomials of acyclic classical exchange matrices.
//!
//! Everything here assumes the canonical vertex numbering described in
//! [`crate::exchange`]; use [`ClassicalMatrix::new`] to validate it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exchange::{
    classify_cartan_type, pos_part, positive_roots, quiver_of, Arrow, CartanFamily, CartanType,
    ExchangeMatrix, Quiver, RootVector, SkewSymmetrizer,
};
use crate::poly::{LaurentPoly, QCoefficient, QuantumTorus, QuantumTorusElement};

/// An acyclic exchange matrix in canonical labels together with its type.
#[derive(Clone, Debug)]
pub struct ClassicalMatrix {
    b: ExchangeMatrix,
    cartan: CartanType,
    quiver: Quiver,
    roots: Vec<RootVector>,
}

impl ClassicalMatrix {
    pub fn new(b: ExchangeMatrix, cartan: CartanType) -> Result<Self> {
        if !cartan.matches(b.matrix()) {
            return Err(Error::NotCanonical(cartan.to_string()));
        }
        let quiver = quiver_of(b.matrix());
        Ok(ClassicalMatrix {
            b,
            cartan,
            quiver,
            roots: positive_roots(cartan),
        })
    }

    /// Classifies `b` and insists that no relabeling is needed.
    pub fn from_canonical(b: ExchangeMatrix) -> Result<Self> {
        let c = classify_cartan_type(&b)?;
        if !c.is_identity() {
            return Err(Error::NotCanonical(c.cartan.to_string()));
        }
        Self::new(b, c.cartan)
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.roots
    }

    /// Accepts `d ∈ Φ+` and the zero vector.
    pub fn check_root(&self, d: &RootVector) -> Result<()> {
        if d.dim() == self.rank() && (d.is_zero() || self.roots.binary_search(d).is_ok()) {
            Ok(())
        } else {
            Err(Error::RootNotInType {
                root: d.clone(),
                cartan: self.cartan.to_string(),
            })
        }
    }

    /// `δ`: the per-type vector with `δ̂ = d_scale · δ`.
    pub fn type_vector(&self) -> Vec<i64> {
        self.cartan.type_vector()
    }

    pub fn torus(&self, d_scale: i64) -> Result<Arc<QuantumTorus>> {
        check_scale(d_scale)?;
        QuantumTorus::new(&self.b, SkewSymmetrizer::new(self.type_vector()).scaled(d_scale))
    }
}

fn check_scale(d_scale: i64) -> Result<()> {
    if d_scale < 1 {
        return Err(Error::Input(format!("d_scale must be a positive integer, got {d_scale}")));
    }
    Ok(())
}

pub fn is_acceptable(d: &RootVector, e: &RootVector, arrow: &Arrow) -> bool {
    let (i, j) = (arrow.from, arrow.to);
    e[i] - e[j] <= pos_part(d[i] - d[j])
}

pub fn is_critical(d: &RootVector, e: &RootVector, arrow: &Arrow) -> bool {
    let (i, j) = (arrow.from, arrow.to);
    let pi = (d[i], e[i]);
    let pj = (d[j], e[j]);
    (pi == (2, 1) && pj == (1, 0)) || (pj == (2, 1) && pi == (1, 1))
}

/// The subgraph `S` on `{i : (d_i, e_i) = (2,1)}`, its components and `ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalStructure {
    pub s: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// `nu[c]` counts critical arrows with an endpoint in `components[c]`.
    pub nu: Vec<usize>,
    pub critical_arrows: Vec<Arrow>,
}

impl CriticalStructure {
    /// Number of components with `ν = 0`.
    pub fn free_components(&self) -> usize {
        self.nu.iter().filter(|&&v| v == 0).count()
    }
}

pub fn critical_structure(q: &Quiver, d: &RootVector, e: &RootVector) -> CriticalStructure {
    let s: Vec<usize> = (0..q.vertex_count())
        .filter(|&i| (d[i], e[i]) == (2, 1))
        .collect();
    let components = q.induced_components(&s);
    let critical_arrows: Vec<Arrow> = q
        .arrows()
        .iter()
        .filter(|a| is_critical(d, e, a))
        .copied()
        .collect();
    let nu = components
        .iter()
        .map(|c| {
            critical_arrows
                .iter()
                .filter(|a| c.contains(&a.from) || c.contains(&a.to))
                .count()
        })
        .collect();
    CriticalStructure {
        s,
        components,
        nu,
        critical_arrows,
    }
}

/// `Some(c)` when the coefficient of `u^e` in `F_d` is `2^c`, `None` when it
/// vanishes. `d` is assumed to be a positive root.
pub fn coefficient_exponent(cm: &ClassicalMatrix, d: &RootVector, e: &RootVector) -> Option<u32> {
    let n = cm.rank();
    if (0..n).any(|i| e[i] < 0 || e[i] > d[i]) {
        return None;
    }
    let q = cm.quiver();
    if !q.arrows().iter().all(|a| is_acceptable(d, e, a)) {
        return None;
    }
    let cs = critical_structure(q, d, e);
    if cs.nu.iter().any(|&v| v > 1) {
        return None;
    }
    if n >= 2 {
        let (last, prev) = (n - 1, n - 2);
        match cm.cartan().family {
            CartanFamily::C => {
                if e[last] == 1 && d[prev] == 2 && q.has_arrow(last, prev) && e[prev] != 2 {
                    return None;
                }
                if e[prev] >= 1 && d[last] == 1 && q.has_arrow(prev, last) && e[last] != 1 {
                    return None;
                }
            }
            CartanFamily::B => {
                // the component through n may not touch a critical arrow
                if let Some(c) = cs.components.iter().position(|c| c.contains(&last)) {
                    if cs.nu[c] >= 1 {
                        return None;
                    }
                }
            }
            _ => {}
        }
    }
    Some(cs.free_components() as u32)
}

pub fn classical_coefficient(cm: &ClassicalMatrix, d: &RootVector, e: &RootVector) -> Result<u64> {
    cm.check_root(d)?;
    if e.dim() != cm.rank() {
        return Err(Error::DimensionMismatch {
            left: cm.rank(),
            right: e.dim(),
        });
    }
    if d.is_zero() {
        return Ok(u64::from(e.is_zero()));
    }
    Ok(coefficient_exponent(cm, d, e).map_or(0, |c| 1u64 << c))
}

/// All `e` with `0 ≤ e ≤ d`, in lexicographic order.
pub fn support_box(d: &RootVector) -> Vec<RootVector> {
    let mut out = vec![Vec::new()];
    for &di in d.iter() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i32>| {
                (0..=di.max(0)).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(RootVector::new).collect()
}

pub fn f_polynomial_closed(cm: &ClassicalMatrix, d: &RootVector) -> Result<LaurentPoly> {
    cm.check_root(d)?;
    let n = cm.rank();
    let mut f = LaurentPoly::zero(n);
    if d.is_zero() {
        return Ok(LaurentPoly::one(n));
    }
    for e in support_box(d) {
        if let Some(c) = coefficient_exponent(cm, d, &e) {
            f.add_term(e.into_coords(), 1i64 << c);
        }
    }
    Ok(f)
}

/// `g_j = -d_j + Σ_i d_i [-b_ji]_+`.
pub fn g_vector_closed(cm: &ClassicalMatrix, d: &RootVector) -> Result<RootVector> {
    cm.check_root(d)?;
    let n = cm.rank();
    let b = cm.matrix();
    Ok(RootVector::new(
        (0..n)
            .map(|j| -d[j] + (0..n).map(|i| d[i] * pos_part(-b.get(j, i))).sum::<i32>())
            .collect(),
    ))
}

/// The ingredients of one quantum coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumCoefficientDatum {
    pub phi: u32,
    pub rho: u32,
    pub g: RootVector,
    pub delta: Vec<i64>,
    pub d_scale: i64,
}

impl QuantumCoefficientDatum {
    /// v-exponent of the leading power `q^{-(d_scale/2) δ·g·a}`.
    pub fn base_exponent(&self, a: &RootVector) -> i32 {
        let delta: Vec<i32> = self.delta.iter().map(|&x| x as i32).collect();
        let dot = RootVector::triple_dot(&delta, self.g.coords(), a.coords());
        i32::try_from(-self.d_scale * dot).expect("v-exponent out of range")
    }

    pub fn coefficient(&self, a: &RootVector, family: CartanFamily) -> QCoefficient {
        let k = self.d_scale as i32;
        let base = QCoefficient::v_power(self.base_exponent(a));
        match family {
            CartanFamily::B => base
                .mul(&QCoefficient::bar_pair(k).pow(self.rho))
                .mul(&QCoefficient::bar_pair(2 * k).pow(self.phi - self.rho)),
            _ => base.mul(&QCoefficient::bar_pair(k).pow(self.phi)),
        }
    }
}

fn quantum_datum(cm: &ClassicalMatrix, d_scale: i64, g: &RootVector, a: &RootVector, phi: u32) -> QuantumCoefficientDatum {
    let n = cm.rank();
    let rho = u32::from(cm.cartan().family == CartanFamily::B && a[n - 1] == 1 && phi >= 1);
    QuantumCoefficientDatum {
        phi,
        rho,
        g: g.clone(),
        delta: cm.type_vector(),
        d_scale,
    }
}

pub fn quantum_coefficient(
    cm: &ClassicalMatrix,
    d_scale: i64,
    d: &RootVector,
    a: &RootVector,
) -> Result<QCoefficient> {
    check_scale(d_scale)?;
    if classical_coefficient(cm, d, a)? == 0 {
        return Ok(QCoefficient::zero());
    }
    if d.is_zero() {
        return Ok(QCoefficient::one());
    }
    let g = g_vector_closed(cm, d)?;
    let phi = coefficient_exponent(cm, d, a).expect("nonzero coefficient");
    Ok(quantum_datum(cm, d_scale, &g, a, phi).coefficient(a, cm.cartan().family))
}

pub fn quantum_f_polynomial_closed(cm: &ClassicalMatrix, d_scale: i64, d: &RootVector) -> Result<QuantumTorusElement> {
    let torus = cm.torus(d_scale)?;
    cm.check_root(d)?;
    if d.is_zero() {
        return Ok(QuantumTorusElement::one(&torus));
    }
    let g = g_vector_closed(cm, d)?;
    let mut out = QuantumTorusElement::zero(&torus);
    for a in support_box(d) {
        if let Some(phi) = coefficient_exponent(cm, d, &a) {
            let c = quantum_datum(cm, d_scale, &g, &a, phi).coefficient(&a, cm.cartan().family);
            out.add_term(a, c);
        }
    }
    Ok(out)
}

/// `P_a(v) = v^{-2 g·a·δ̂} P_a(v^{-1})` for every coefficient.
pub fn check_bar_symmetry(f: &QuantumTorusElement, g: &RootVector, delta_hat: &SkewSymmetrizer) -> bool {
    let dh: Vec<i32> = delta_hat.entries().iter().map(|&x| x as i32).collect();
    f.terms().all(|(a, p)| {
        let k = RootVector::triple_dot(g.coords(), a, &dh);
        *p == p.bar().shift(-2 * k as i32)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b4() -> ClassicalMatrix {
        let b = ExchangeMatrix::from_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, -1, 0, -1],
            vec![0, 0, 2, 0],
        ])
        .unwrap();
        ClassicalMatrix::from_canonical(b).unwrap()
    }

    fn rv(v: &[i32]) -> RootVector {
        RootVector::new(v.to_vec())
    }

    fn arrow(from: usize, to: usize) -> Arrow {
        Arrow { from, to, weight: 1 }
    }

    #[test]
    fn acceptable_examples() {
        let d = rv(&[1, 2, 2, 2]);
        let a12 = arrow(0, 1);
        assert!(is_acceptable(&d, &rv(&[0, 0, 0, 0]), &a12));
        assert!(is_acceptable(&d, &rv(&[1, 1, 0, 0]), &a12));
        assert!(!is_acceptable(&d, &rv(&[1, 0, 0, 0]), &a12));
        let (d2, e2) = (rv(&[2, 1]), rv(&[2, 0]));
        assert!(!is_acceptable(&d2, &e2, &arrow(0, 1)));
        assert!(is_acceptable(&d2, &rv(&[0, 1]), &arrow(0, 1)));
    }

    #[test]
    fn critical_examples() {
        let a = arrow(0, 1);
        assert!(is_critical(&rv(&[2, 1]), &rv(&[1, 0]), &a));
        assert!(is_critical(&rv(&[1, 2]), &rv(&[1, 1]), &a));
        assert!(!is_critical(&rv(&[2, 2]), &rv(&[1, 1]), &a));
    }

    #[test]
    fn critical_structure_examples() {
        let cm = b4();
        let cs = critical_structure(cm.quiver(), &rv(&[1, 2, 2, 2]), &rv(&[0, 1, 0, 1]));
        assert_eq!(cs.s, vec![1, 3]);
        assert_eq!(cs.components, vec![vec![1], vec![3]]);
        assert_eq!(cs.nu, vec![0, 0]);
        let cs = critical_structure(cm.quiver(), &rv(&[0, 1, 2, 2]), &rv(&[0, 1, 1, 1]));
        assert_eq!(cs.components, vec![vec![2, 3]]);
        assert_eq!(cs.nu, vec![0]);
        let cs = critical_structure(cm.quiver(), &rv(&[1, 1, 1, 1]), &rv(&[0, 1, 0, 1]));
        assert!(cs.s.is_empty());
    }

    #[test]
    fn b4_coefficients() {
        let cm = b4();
        let d = rv(&[1, 2, 2, 2]);
        assert_eq!(classical_coefficient(&cm, &d, &rv(&[1, 1, 1, 1])).unwrap(), 0);
        assert_eq!(classical_coefficient(&cm, &d, &rv(&[0, 1, 0, 1])).unwrap(), 4);
        assert_eq!(classical_coefficient(&cm, &d, &rv(&[0, 0, 0, 0])).unwrap(), 1);
        assert!(matches!(
            classical_coefficient(&cm, &rv(&[1, 0, 1, 0]), &rv(&[0, 0, 0, 0])),
            Err(Error::RootNotInType { .. })
        ));
    }

    #[test]
    fn b4_small_f_and_g() {
        let cm = b4();
        assert_eq!(f_polynomial_closed(&cm, &rv(&[0, 1, 0, 0])).unwrap().to_text("u"), "u2 + 1");
        assert_eq!(
            f_polynomial_closed(&cm, &rv(&[0, 1, 1, 0])).unwrap().to_text("u"),
            "u2*u3 + u2 + 1"
        );
        assert_eq!(g_vector_closed(&cm, &rv(&[0, 1, 0, 0])).unwrap(), rv(&[1, -1, 1, 0]));
        assert_eq!(g_vector_closed(&cm, &rv(&[0, 1, 2, 2])).unwrap(), rv(&[1, -1, 1, -2]));
        assert_eq!(g_vector_closed(&cm, &rv(&[0, 0, 0, 0])).unwrap(), rv(&[0, 0, 0, 0]));
        let big = f_polynomial_closed(&cm, &rv(&[1, 2, 2, 2])).unwrap();
        assert_eq!(big.len(), 24);
        assert_eq!(big.terms().map(|(_, c)| c).sum::<i64>(), 39);
        assert_eq!(big.coeff(&[0, 2, 1, 2]), 2);
        assert_eq!(big.coeff(&[0, 2, 2, 2]), 1);
    }

    #[test]
    fn b2_last_coordinate_component() {
        let b = ExchangeMatrix::from_rows(&[vec![0, -1], vec![2, 0]]).unwrap();
        let cm = ClassicalMatrix::from_canonical(b).unwrap();
        let d = rv(&[1, 2]);
        assert_eq!(classical_coefficient(&cm, &d, &rv(&[1, 1])).unwrap(), 0);
        assert_eq!(
            f_polynomial_closed(&cm, &d).unwrap().to_text("u"),
            "u1*u2^2 + u2^2 + 2*u2 + 1"
        );
    }

    #[test]
    fn quantum_examples() {
        let cm = b4();
        assert_eq!(
            quantum_coefficient(&cm, 2, &rv(&[0, 1, 0, 0]), &rv(&[0, 1, 0, 0])).unwrap(),
            QCoefficient::v_power(4)
        );
        assert_eq!(
            quantum_coefficient(&cm, 2, &rv(&[1, 2, 2, 2]), &rv(&[0, 1, 0, 1])).unwrap(),
            QCoefficient::from_terms([(6, 1), (10, 1), (14, 1), (18, 1)])
        );
        assert_eq!(
            quantum_coefficient(&cm, 2, &rv(&[1, 2, 2, 2]), &rv(&[0, 0, 0, 0])).unwrap(),
            QCoefficient::one()
        );
        let f = quantum_f_polynomial_closed(&cm, 2, &rv(&[0, 1, 1, 1])).unwrap();
        assert_eq!(f.to_text(), "q*Z^(0,1,1,1) + q^3*Z^(0,1,0,1) + q^2*Z2 + q*Z4 + 1");
        assert!(quantum_coefficient(&cm, 0, &rv(&[0, 1, 0, 0]), &rv(&[0, 1, 0, 0])).is_err());
    }

    #[test]
    fn bar_symmetry_examples() {
        let cm = b4();
        let t = cm.torus(2).unwrap();
        let d = rv(&[0, 1, 0, 0]);
        let f = quantum_f_polynomial_closed(&cm, 2, &d).unwrap();
        let g = g_vector_closed(&cm, &d).unwrap();
        assert!(check_bar_symmetry(&f, &g, t.delta_hat()));
        assert!(check_bar_symmetry(&QuantumTorusElement::one(&t), &rv(&[3, -1, 0, 2]), t.delta_hat()));
        let mut bad = f.clone();
        bad.add_term(rv(&[0, 1, 0, 0]), QCoefficient::one());
        assert!(!check_bar_symmetry(&bad, &g, t.delta_hat()));
    }

    #[test]
    fn non_canonical_rejected() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 2, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert!(matches!(ClassicalMatrix::from_canonical(b), Err(Error::NotCanonical(_))));
    }

    #[test]
    fn support_box_order() {
        let b = support_box(&rv(&[1, 2]));
        assert_eq!(b.len(), 6);
        assert_eq!(b[0], rv(&[0, 0]));
        assert_eq!(b[5], rv(&[1, 2]));
    }
}
