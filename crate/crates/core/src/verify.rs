//! Differential suites comparing the closed formulas, the mutation oracle,
//! folding projections and the polygon model.
//!
//! Cases fan out over rayon but are collected in a fixed order (rank, type,
//! orientation mask, root), so reports are deterministic.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exchange::{quiver_of, CartanFamily, CartanType, ExchangeMatrix, RootVector};
use crate::folding::{quotient_matrix, sink_source_admissibility, unfold, verify_folding};
use crate::formulas::{
    check_bar_symmetry, f_polynomial_closed, g_vector_closed, quantum_f_polynomial_closed, ClassicalMatrix,
};
use crate::oracle::{enumerate_finite_type, extract_denominator, initial_seed, ClusterTable, DEFAULT_CAP};
use crate::poly::LaurentPoly;
use crate::polygon::{denominator_of_orbit, initial_snake};

pub const POLYGON_SEQUENCES: usize = 100;
pub const POLYGON_MAX_LENGTH: usize = 20;
const POLYGON_SEED: u64 = 0x5eed_0001;
const FOLDING_MAX_RANK: usize = 4;
const POLYGON_MAX_RANK: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Formulas,
    Quantum,
    Folding,
    Polygon,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Formulas, Suite::Quantum, Suite::Folding, Suite::Polygon];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Formulas => "formulas",
            Suite::Quantum => "quantum",
            Suite::Folding => "folding",
            Suite::Polygon => "polygon",
        }
    }

    /// `all` expands to every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        match s {
            "all" => Ok(Suite::ALL.to_vec()),
            _ => Suite::ALL
                .into_iter()
                .find(|x| x.name() == s)
                .map(|x| vec![x])
                .ok_or_else(|| Error::Input(format!("unknown suite {s:?}; expected formulas, quantum, folding, polygon or all"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first failing case of a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    #[serde(rename = "type")]
    pub cartan: String,
    pub rank: usize,
    /// 1-based arrows of the initial quiver.
    pub orientation: Vec<[usize; 2]>,
    pub d: Option<RootVector>,
    pub e: Option<RootVector>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_rank: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

pub fn run_suites(suites: &[Suite], max_rank: usize) -> Result<VerifyReport> {
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, max_rank))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        max_rank,
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
    })
}

pub fn run_suite(suite: Suite, max_rank: usize) -> Result<SuiteReport> {
    let outcomes = match suite {
        Suite::Formulas => collect(classical_cases(max_rank), formulas_case)?,
        Suite::Quantum => collect(classical_cases(max_rank), quantum_case)?,
        Suite::Folding => collect(folded_cases(max_rank.min(FOLDING_MAX_RANK)), folding_case)?,
        Suite::Polygon => collect(folded_cases(max_rank.min(POLYGON_MAX_RANK)), polygon_case)?,
    };
    let cases = outcomes.iter().map(|o| o.cases).sum();
    let failures = outcomes.iter().map(|o| o.failures).sum();
    Ok(SuiteReport {
        suite,
        cases,
        failures,
        counterexample: outcomes.into_iter().find_map(|o| o.first),
    })
}

/// One orientation of one Dynkin diagram.
#[derive(Clone, Debug)]
pub struct OrientedCase {
    pub cartan: CartanType,
    pub mask: u64,
    pub matrix: ExchangeMatrix,
}

impl OrientedCase {
    pub fn arrows(&self) -> Vec<[usize; 2]> {
        quiver_of(self.matrix.matrix())
            .arrows()
            .iter()
            .map(|a| [a.from + 1, a.to + 1])
            .collect()
    }

    fn counterexample(&self, d: Option<RootVector>, e: Option<RootVector>, detail: String) -> Counterexample {
        Counterexample {
            cartan: self.cartan.to_string(),
            rank: self.cartan.rank,
            orientation: self.arrows(),
            d,
            e,
            detail,
        }
    }
}

fn cases_for(families: &[CartanFamily], max_rank: usize) -> Vec<OrientedCase> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for &family in families {
            let Ok(cartan) = CartanType::new(family, rank) else {
                continue;
            };
            for (mask, matrix) in cartan.all_orientations().into_iter().enumerate() {
                out.push(OrientedCase {
                    cartan,
                    mask: mask as u64,
                    matrix,
                });
            }
        }
    }
    out
}

/// Every orientation of A, B, C, D up to `max_rank`.
pub fn classical_cases(max_rank: usize) -> Vec<OrientedCase> {
    cases_for(&CartanFamily::ALL, max_rank)
}

/// Every orientation of B and C up to `max_rank`.
pub fn folded_cases(max_rank: usize) -> Vec<OrientedCase> {
    cases_for(&[CartanFamily::B, CartanFamily::C], max_rank)
}

struct Outcome {
    cases: usize,
    failures: usize,
    first: Option<Counterexample>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, cx: impl FnOnce() -> Counterexample) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(cx());
            }
        }
    }
}

fn collect(cases: Vec<OrientedCase>, f: fn(&OrientedCase) -> Result<Outcome>) -> Result<Vec<Outcome>> {
    cases.par_iter().map(f).collect()
}

/// Smallest exponent (lex) at which two polynomials differ.
pub fn first_difference(a: &LaurentPoly, b: &LaurentPoly) -> Option<RootVector> {
    let keys: BTreeSet<&Vec<i32>> = a.terms().map(|(e, _)| e).chain(b.terms().map(|(e, _)| e)).collect();
    keys.into_iter()
        .find(|e| a.coeff(e) != b.coeff(e))
        .map(|e| RootVector::new(e.clone()))
}

fn oracle_table(case: &OrientedCase) -> Result<ClusterTable> {
    enumerate_finite_type(&case.matrix, DEFAULT_CAP)
}

fn formulas_case(case: &OrientedCase) -> Result<Outcome> {
    let cm = ClassicalMatrix::new(case.matrix.clone(), case.cartan)?;
    let table = oracle_table(case)?;
    let mut out = Outcome::new();
    for d in cm.positive_roots() {
        let f = f_polynomial_closed(&cm, d)?;
        let g = g_vector_closed(&cm, d)?;
        let Some(rec) = table.get(d) else {
            out.record(false, || case.counterexample(Some(d.clone()), None, "oracle has no variable".into()));
            continue;
        };
        let diff = first_difference(&f, &rec.f);
        out.record(diff.is_none() && g == rec.g, || {
            let detail = if g == rec.g {
                "F-polynomial mismatch".to_string()
            } else {
                format!("g-vector mismatch: closed {g}, oracle {}", rec.g)
            };
            case.counterexample(Some(d.clone()), diff, detail)
        });
    }
    Ok(out)
}

fn quantum_case(case: &OrientedCase) -> Result<Outcome> {
    let cm = ClassicalMatrix::new(case.matrix.clone(), case.cartan)?;
    let mut out = Outcome::new();
    for d_scale in [1, 2] {
        let torus = cm.torus(d_scale)?;
        for d in cm.positive_roots() {
            let qf = quantum_f_polynomial_closed(&cm, d_scale, d)?;
            let f = f_polynomial_closed(&cm, d)?;
            let g = g_vector_closed(&cm, d)?;
            let diff = first_difference(&qf.specialize_classical(), &f);
            let bar = check_bar_symmetry(&qf, &g, torus.delta_hat());
            out.record(diff.is_none() && bar, || {
                let detail = if diff.is_some() {
                    format!("q = 1 specialization differs (d_scale {d_scale})")
                } else {
                    format!("bar symmetry fails (d_scale {d_scale})")
                };
                case.counterexample(Some(d.clone()), diff, detail)
            });
        }
    }
    Ok(out)
}

fn folding_case(case: &OrientedCase) -> Result<Outcome> {
    let mut out = Outcome::new();
    let (unfolded, g) = unfold(&case.matrix)?;
    let round_trip = quotient_matrix(unfolded.matrix(), &g)?;
    out.record(round_trip == *case.matrix.matrix(), || {
        case.counterexample(None, None, "quotient of the unfolded matrix differs".into())
    });
    let (_, admissible) = sink_source_admissibility(&unfolded, &g, DEFAULT_CAP)?;
    out.record(admissible, || {
        case.counterexample(None, None, "sink/source orbit mutation left the strongly admissible class".into())
    });
    let folded = oracle_table(case)?;
    let big = enumerate_finite_type(&unfolded, DEFAULT_CAP)?;
    let report = match verify_folding(&folded, &big, &g) {
        Ok(r) => r,
        Err(Error::NoUnfoldedRoot(d)) => {
            out.record(false, || case.counterexample(Some(d), None, "no unfolded root".into()));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    for m in &report.matches {
        out.record(m.f_match && m.g_match, || {
            case.counterexample(
                Some(m.dbar.clone()),
                None,
                format!(
                    "projection of d' = {} differs (F {}, g {})",
                    m.dprime,
                    if m.f_match { "ok" } else { "differs" },
                    if m.g_match { "ok" } else { "differs" }
                ),
            )
        });
    }
    Ok(out)
}

/// Random mutation sequences for one (type, rank), each starting at a random
/// orientation. Deterministic in `(family, rank)`.
pub fn polygon_sequences(cartan: CartanType) -> Vec<(u64, Vec<usize>)> {
    let seed = POLYGON_SEED ^ ((cartan.family.letter() as u64) << 32) ^ cartan.rank as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks = 1u64 << cartan.edges().len();
    (0..POLYGON_SEQUENCES)
        .map(|_| {
            let mask = rng.gen_range(0..masks);
            let len = rng.gen_range(1..=POLYGON_MAX_LENGTH);
            let seq = (0..len).map(|_| rng.gen_range(0..cartan.rank)).collect();
            (mask, seq)
        })
        .collect()
}

/// Checks one mutation sequence step by step. Returns the number of
/// comparisons and the first failure.
pub fn check_polygon_sequence(b: &ExchangeMatrix, seq: &[usize]) -> Result<(usize, Option<(Vec<usize>, Option<RootVector>, String)>)> {
    let snake = initial_snake(b)?;
    let n = b.rank();
    let mut seed = initial_seed(b);
    let mut diagonals = snake.clone();
    let mut checks = 0;
    for step in 0..=seq.len() {
        if step > 0 {
            let k = seq[step - 1];
            seed = seed.mutate(k)?;
            diagonals = diagonals.flip(k)?;
        }
        let prefix = seq[..step].to_vec();
        checks += 1;
        if diagonals.exchange_matrix()? != *seed.matrix.principal_part().matrix() {
            return Ok((checks, Some((prefix, None, "exchange matrix differs".into()))));
        }
        for i in 0..n {
            checks += 1;
            let oracle = extract_denominator(&seed.cluster[i]);
            let model = match snake.orbits().iter().position(|o| o == diagonals.orbit(i)) {
                Some(j) => -&RootVector::unit(n, j),
                None => denominator_of_orbit(diagonals.orbit(i), &snake)?,
            };
            if model != oracle {
                return Ok((
                    checks,
                    Some((prefix, Some(oracle), format!("position {}: polygon gives {model}", i + 1))),
                ));
            }
        }
    }
    Ok((checks, None))
}

fn polygon_case(case: &OrientedCase) -> Result<Outcome> {
    let mut out = Outcome::new();
    // sequences are drawn per type and rank; run them on the first orientation only
    if case.mask != 0 {
        return Ok(out);
    }
    for (mask, seq) in polygon_sequences(case.cartan) {
        let oriented = OrientedCase {
            cartan: case.cartan,
            mask,
            matrix: case.cartan.oriented_matrix(mask),
        };
        let (checks, failure) = check_polygon_sequence(&oriented.matrix, &seq)?;
        out.cases += checks - usize::from(failure.is_some());
        out.record(failure.is_none(), || {
            let (prefix, d, detail) = failure.clone().expect("failure present");
            let path: Vec<String> = prefix.iter().map(|k| (k + 1).to_string()).collect();
            oriented.counterexample(d, None, format!("after mutations [{}]: {detail}", path.join(",")))
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse("all").unwrap().len(), 4);
        assert_eq!(Suite::parse("polygon").unwrap(), vec![Suite::Polygon]);
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn case_counts() {
        // A1..A3: 1 + 2 + 4, B2, B3, C2, C3: 2 + 4 + 2 + 4
        assert_eq!(classical_cases(3).len(), 19);
        assert_eq!(folded_cases(3).len(), 12);
    }

    #[test]
    fn small_suites_pass() {
        let r = run_suites(&Suite::ALL, 3).unwrap();
        for s in &r.suites {
            assert!(s.passed(), "{:?}", s);
            assert!(s.cases > 0);
        }
        assert!(r.passed);
    }

    #[test]
    fn sequences_are_deterministic() {
        let t = CartanType::new(CartanFamily::C, 3).unwrap();
        assert_eq!(polygon_sequences(t), polygon_sequences(t));
        assert_eq!(polygon_sequences(t).len(), POLYGON_SEQUENCES);
    }
}
