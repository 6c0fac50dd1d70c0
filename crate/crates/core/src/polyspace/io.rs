use super::hompoly::HomPoly;
use super::multiindex::MultiIndex;
use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

/// On-disk form: `{"d": .., "N": .., "terms": [{"alpha": [..], "re": .., "im": ..}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl PolyFile {
    pub fn from_poly(q: &HomPoly) -> Self {
        let terms = q
            .terms()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(alpha, c)| TermRecord {
                alpha: alpha.to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect();
        Self {
            d: q.dim(),
            n: q.degree(),
            terms,
        }
    }

    pub fn to_poly(&self) -> Result<HomPoly> {
        if self.d == 0 {
            return Err(Error::Parse {
                field: "d".into(),
                message: "d must be at least 1".into(),
            });
        }
        let mut seen = HashSet::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let field = format!("terms[{i}].alpha");
            if t.alpha.len() != self.d + 1 {
                return Err(Error::Parse {
                    field,
                    message: format!("expected {} exponents, got {}", self.d + 1, t.alpha.len()),
                });
            }
            let total: u64 = t.alpha.iter().map(|&a| a as u64).sum();
            if total != self.n as u64 {
                return Err(Error::Parse {
                    field,
                    message: format!("|alpha| = {total} but N = {}", self.n),
                });
            }
            if !seen.insert(t.alpha.clone()) {
                return Err(Error::Parse {
                    field,
                    message: "duplicate multi-index".into(),
                });
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Parse {
                    field: format!("terms[{i}]"),
                    message: "coefficient is not finite".into(),
                });
            }
            terms.push((MultiIndex::new(t.alpha.clone()), Complex64::new(t.re, t.im)));
        }
        HomPoly::from_terms(self.d, self.n, terms)
    }
}

pub fn poly_to_json(q: &HomPoly) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PolyFile::from_poly(q))?)
}

pub fn poly_from_json(text: &str) -> Result<HomPoly> {
    let file: PolyFile = serde_json::from_str(text)?;
    file.to_poly()
}

pub fn read_poly(path: &Path) -> Result<HomPoly> {
    poly_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_poly(path: &Path, q: &HomPoly) -> Result<()> {
    std::fs::write(path, poly_to_json(q)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    #[test]
    fn json_round_trip_is_exact() {
        let mut rng = substream(5, Purpose::Polynomials, 0);
        let q = HomPoly::random_unit(2, 3, &mut rng).unwrap();
        let back = poly_from_json(&poly_to_json(&q).unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_degree = r#"{"d":1,"N":2,"terms":[{"alpha":[1,0],"re":1,"im":0}]}"#;
        assert!(matches!(poly_from_json(bad_degree), Err(Error::Parse { .. })));
        let unknown = r#"{"d":1,"N":1,"terms":[],"extra":1}"#;
        assert!(matches!(poly_from_json(unknown), Err(Error::Json(_))));
        let dup = r#"{"d":1,"N":1,"terms":[{"alpha":[1,0],"re":1,"im":0},{"alpha":[1,0],"re":1,"im":0}]}"#;
        assert!(matches!(poly_from_json(dup), Err(Error::Parse { .. })));
    }
}
