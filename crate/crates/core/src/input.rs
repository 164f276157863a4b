//! The matrix input document.
//!
//! Either `{"matrix": [[...]]}` or
//! `{"cartan_type": "B", "rank": 4, "arrows": [[1,2],[3,2],[3,4]]}`, where the
//! 1-based arrows orient the canonical Dynkin diagram of that type.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exchange::{classify_cartan_type, CartanFamily, CartanType, Classification, ExchangeMatrix, IntMatrix};

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum InputDocument {
    Matrix {
        matrix: Vec<Vec<i32>>,
    },
    Diagram {
        cartan_type: String,
        rank: usize,
        arrows: Vec<[usize; 2]>,
    },
}

/// A validated input matrix with its classification.
#[derive(Clone, Debug)]
pub struct ParsedInput {
    pub matrix: ExchangeMatrix,
    pub classification: Classification,
}

pub fn parse_input(text: &str) -> Result<ParsedInput> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| {
        Error::Input(format!(
            "expected {{\"matrix\": ...}} or {{\"cartan_type\", \"rank\", \"arrows\"}}: {e}"
        ))
    })?;
    let matrix = match doc {
        InputDocument::Matrix { matrix } => ExchangeMatrix::new(IntMatrix::from_rows(&matrix)?)?,
        InputDocument::Diagram {
            cartan_type,
            rank,
            arrows,
        } => {
            let family = CartanFamily::from_letter(&cartan_type)
                .ok_or_else(|| Error::Input(format!("unknown Cartan type {cartan_type:?}")))?;
            diagram_matrix(CartanType::new(family, rank)?, &arrows)?
        }
    };
    let classification = classify_cartan_type(&matrix)?;
    Ok(ParsedInput {
        matrix,
        classification,
    })
}

/// Orients the canonical diagram of `t` by 1-based arrows.
pub fn diagram_matrix(t: CartanType, arrows: &[[usize; 2]]) -> Result<ExchangeMatrix> {
    let edges = t.edges();
    let mut used = vec![false; edges.len()];
    let mut m = IntMatrix::zeros(t.rank, t.rank);
    for &[from, to] in arrows {
        if from == 0 || to == 0 || from > t.rank || to > t.rank {
            return Err(Error::Input(format!("arrow {from}->{to} has a vertex outside 1..{}", t.rank)));
        }
        let (i, j) = (from - 1, to - 1);
        let e = edges
            .iter()
            .position(|&(a, b, _, _)| (a, b) == (i.min(j), i.max(j)))
            .ok_or_else(|| Error::Input(format!("arrow {from}->{to} is not an edge of {t}")))?;
        if used[e] {
            return Err(Error::Input(format!("edge {}-{} is oriented twice", edges[e].0 + 1, edges[e].1 + 1)));
        }
        used[e] = true;
        let (a, b, wab, wba) = edges[e];
        let (wij, wji) = if i == a { (wab, wba) } else { (wba, wab) };
        m.set(j, i, wji);
        m.set(i, j, -wij);
        let _ = b;
    }
    if let Some(e) = used.iter().position(|u| !u) {
        return Err(Error::Input(format!(
            "edge {}-{} of {t} has no arrow",
            edges[e].0 + 1,
            edges[e].1 + 1
        )));
    }
    ExchangeMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b4_diagram() {
        let p = parse_input(r#"{"cartan_type":"B","rank":4,"arrows":[[1,2],[3,2],[3,4]]}"#).unwrap();
        let expected = IntMatrix::from_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, -1, 0, -1],
            vec![0, 0, 2, 0],
        ])
        .unwrap();
        assert_eq!(*p.matrix.matrix(), expected);
        assert_eq!(p.classification.cartan.to_string(), "B4");
        assert!(p.classification.is_identity());
    }

    #[test]
    fn plain_matrix() {
        let p = parse_input(r#"{"matrix":[[0,-1],[1,0]]}"#).unwrap();
        assert_eq!(p.classification.cartan.to_string(), "A2");
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            parse_input(r#"{"cartan_type":"B","rank":4,"arrows":[[1,2],[3,2]]}"#),
            Err(Error::Input(_))
        ));
        assert!(parse_input(r#"{"cartan_type":"A","rank":3,"arrows":[[1,2],[2,1],[2,3]]}"#).is_err());
        assert!(parse_input(r#"{"cartan_type":"A","rank":3,"arrows":[[1,3],[2,3]]}"#).is_err());
        assert!(matches!(
            parse_input(r#"{"matrix":[[0,1,-1],[-1,0,1],[1,-1,0]]}"#),
            Err(Error::NotAcyclic)
        ));
        assert!(matches!(
            parse_input(r#"{"matrix":[[0,1],[1,0]]}"#),
            Err(Error::NotSkewSymmetrizable(_))
        ));
        assert!(parse_input("[1,2]").is_err());
    }
}
