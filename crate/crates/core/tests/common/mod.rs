#![allow(dead_code)]

use std::sync::Arc;

use clusterpoly::exchange::{ExchangeMatrix, RootVector};
use clusterpoly::poly::{LaurentPoly, QCoefficient, QuantumTorus, QuantumTorusElement};

pub fn b4() -> ExchangeMatrix {
    ExchangeMatrix::from_rows(&[
        vec![0, -1, 0, 0],
        vec![1, 0, 1, 0],
        vec![0, -1, 0, -1],
        vec![0, 0, 2, 0],
    ])
    .unwrap()
}

pub fn rv(v: &[i32]) -> RootVector {
    RootVector::new(v.to_vec())
}

/// Splits on ` + ` outside parentheses.
fn top_level_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && c == '+' {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
        i += 1;
    }
    out.push(cur.trim().to_string());
    out
}

/// Parses `2*u1*u2^2 + u4 + 1`. Repeated monomials are summed.
pub fn parse_poly(vars: usize, s: &str) -> LaurentPoly {
    let mut p = LaurentPoly::zero(vars);
    for term in top_level_terms(s) {
        let mut e = vec![0; vars];
        let mut c = 1i64;
        for f in term.split('*') {
            let f = f.trim();
            if let Some(rest) = f.strip_prefix('u') {
                let (i, k) = match rest.split_once('^') {
                    Some((i, k)) => (i.parse::<usize>().unwrap(), k.parse::<i32>().unwrap()),
                    None => (rest.parse::<usize>().unwrap(), 1),
                };
                e[i - 1] += k;
            } else {
                c *= f.parse::<i64>().unwrap();
            }
        }
        p.add_term(e, c);
    }
    p
}

/// `q^k` with half-integer k written as `q^(1/2)` is not needed here.
fn parse_q_power(s: &str) -> i32 {
    match s.trim() {
        "q" => 2,
        t => 2 * t.strip_prefix("q^").unwrap().parse::<i32>().unwrap(),
    }
}

fn parse_qcoeff(s: &str) -> QCoefficient {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        let mut c = QCoefficient::zero();
        for t in inner.split('+') {
            c = c.add(&QCoefficient::v_power(parse_q_power(t)));
        }
        c
    } else {
        QCoefficient::v_power(parse_q_power(s))
    }
}

fn parse_z(s: &str) -> Vec<i32> {
    let inner = s
        .trim()
        .strip_prefix("Z^(")
        .and_then(|x| x.strip_suffix(')'))
        .unwrap();
    inner.split(',').map(|x| x.trim().parse().unwrap()).collect()
}

/// Parses `q^2*Z^(0,1,0,0) + (q + q^3)*Z^(0,0,0,1) + 1`.
pub fn parse_quantum(torus: &Arc<QuantumTorus>, s: &str) -> QuantumTorusElement {
    let n = torus.rank();
    let mut out = QuantumTorusElement::zero(torus);
    for term in top_level_terms(s) {
        if term == "1" {
            out.add_term(RootVector::zero(n), QCoefficient::one());
            continue;
        }
        let (c, z) = match term.rsplit_once('*') {
            Some((c, z)) => (parse_qcoeff(c), parse_z(z)),
            None => (QCoefficient::one(), parse_z(&term)),
        };
        out.add_term(RootVector::new(z), c);
    }
    out
}
