//! JSON file formats: polynomials, matrices, operators and subspace bases.
//!
//! Rationals are always written as `p/q` strings and complex entries as
//! `p/q+p/qi` or `p/q-p/qi`. Output is canonical: terms in exponent order,
//! zero terms purged, compact separators, trailing newline.

use std::collections::BTreeMap;
use std::path::Path;

use ngp_core::bargmann::GradedMatrix;
use ngp_core::linalg::Matrix;
use ngp_core::nilgroup::{DiffOp, Pbw};
use ngp_core::pairs::SubspaceBasis;
use ngp_core::{Exponents, MultiPoly, Rational, Scalar, VarSpace};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VarsJson {
    pub v: usize,
    pub z: usize,
    pub t: usize,
    pub xi: usize,
}

impl From<VarSpace> for VarsJson {
    fn from(s: VarSpace) -> Self {
        VarsJson { v: s.v, z: s.z, t: s.t, xi: s.xi }
    }
}

impl From<VarsJson> for VarSpace {
    fn from(j: VarsJson) -> Self {
        VarSpace::new(j.v, j.z, j.t, j.xi)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: VarsJson,
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &MultiPoly) -> PolyJson {
    PolyJson {
        vars: p.vars().into(),
        terms: p
            .terms()
            .map(|(e, c)| TermJson { exp: e.iter().map(|&x| x as u32).collect(), re: c.re.to_string(), im: c.im.to_string() })
            .collect(),
    }
}

fn parse_rational(s: &str, what: &str) -> CliResult<Rational> {
    s.parse().map_err(|_| CliError::Schema(format!("{}: {:?} is not a p/q rational", what, s)))
}

pub fn poly_from_json(j: &PolyJson) -> CliResult<MultiPoly> {
    let vars: VarSpace = j.vars.into();
    let n = vars.nvars();
    let mut terms = Vec::with_capacity(j.terms.len());
    for (k, t) in j.terms.iter().enumerate() {
        if t.exp.len() != n {
            return Err(CliError::Schema(format!("term {}: exponent length {}, expected {}", k, t.exp.len(), n)));
        }
        if let Some(x) = t.exp.iter().find(|&&x| x > u8::MAX as u32) {
            return Err(CliError::Schema(format!("term {}: exponent {} is too large", k, x)));
        }
        let re = parse_rational(&t.re, &format!("term {} re", k))?;
        let im = parse_rational(&t.im, &format!("term {} im", k))?;
        let e: Exponents = t.exp.iter().map(|&x| x as u8).collect();
        terms.push((e, Scalar::new(re, im)));
    }
    // duplicates are summed and zeros dropped by the constructor
    Ok(MultiPoly::from_terms(vars, terms)?)
}

fn syntax(e: serde_json::Error) -> CliError {
    CliError::Schema(format!("line {}, column {}: {}", e.line(), e.column(), e))
}

pub fn parse_poly(text: &str) -> CliResult<MultiPoly> {
    let j: PolyJson = serde_json::from_str(text).map_err(syntax)?;
    poly_from_json(&j)
}

pub fn write_poly(p: &MultiPoly) -> String {
    to_canonical(&poly_to_json(p))
}

/// Compact JSON with a trailing newline; the byte form of every output file.
pub fn to_canonical<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

pub fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn read_poly(path: &Path) -> CliResult<MultiPoly> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
    parse_poly(&text).map_err(|e| match e {
        CliError::Schema(m) => CliError::Schema(format!("{}: {}", path.display(), m)),
        other => other,
    })
}

pub fn scalar_string(c: &Scalar) -> String {
    c.to_string()
}

pub fn parse_scalar(s: &str) -> CliResult<Scalar> {
    s.parse().map_err(|_| CliError::Schema(format!("{:?} is not a p/q+p/qi scalar", s)))
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<String>]) -> CliResult<Matrix> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() != ncols {
            return Err(CliError::Schema(format!("matrix row {} has {} entries, expected {}", i, r.len(), ncols)));
        }
        out.push(r.iter().map(|s| parse_scalar(s)).collect::<CliResult<Vec<_>>>()?);
    }
    Ok(Matrix::from_rows(out))
}

#[derive(Serialize, Debug)]
pub struct GradedMatrixJson {
    pub source_degree: u32,
    pub target_degree: Option<u32>,
    pub source_basis: Vec<Vec<u32>>,
    pub target_basis: Vec<Vec<u32>>,
    pub entries: Vec<Vec<String>>,
}

pub fn graded_to_json(g: &GradedMatrix) -> GradedMatrixJson {
    let basis = |b: &ngp_core::bargmann::FockBasis| b.monomials().iter().map(|e| e.iter().map(|&x| x as u32).collect()).collect();
    GradedMatrixJson {
        source_degree: g.source.s,
        target_degree: if g.target.is_empty() { None } else { Some(g.target.s) },
        source_basis: basis(&g.source),
        target_basis: basis(&g.target),
        entries: matrix_to_json(&g.matrix),
    }
}

#[derive(Serialize, Deserialize, Debug)]
pub struct DiffOpTermJson {
    pub deriv_exp: Vec<u32>,
    pub coeff: PolyJson,
}

pub fn diffop_to_json(d: &DiffOp) -> Vec<DiffOpTermJson> {
    d.terms().map(|(a, f)| DiffOpTermJson { deriv_exp: a.iter().map(|&x| x as u32).collect(), coeff: poly_to_json(f) }).collect()
}

/// Normal ordered form `{"kappa", "terms": [{"z","zbar","t","coeff"}]}`.
pub fn pbw_to_json(p: &Pbw) -> Value {
    let k = p.kappa();
    let terms: Vec<Value> = p
        .terms()
        .map(|(key, c)| {
            serde_json::json!({
                "z": key[..k].iter().map(|&x| x as u32).collect::<Vec<_>>(),
                "zbar": key[k..2 * k].iter().map(|&x| x as u32).collect::<Vec<_>>(),
                "t": key[2 * k] as u32,
                "coeff": c.to_string(),
            })
        })
        .collect();
    serde_json::json!({ "kappa": k, "display": p.to_string(), "terms": terms })
}

#[derive(Serialize, Debug)]
pub struct SubspaceJson {
    pub label: String,
    pub degree: Option<[u32; 4]>,
    pub dim: usize,
    pub vectors: Vec<PolyJson>,
}

pub fn subspace_to_json(b: &SubspaceBasis) -> SubspaceJson {
    SubspaceJson {
        label: b.label.clone(),
        degree: b.degree.map(|d| [d.v, d.vbar, d.z, d.t]),
        dim: b.dim(),
        vectors: b.vectors.iter().map(poly_to_json).collect(),
    }
}

/// Scalar map keyed by display strings, for reports.
pub fn scalar_map<K: ToString>(m: &BTreeMap<K, Scalar>) -> BTreeMap<String, String> {
    m.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ngp_core::VarKind;

    #[test]
    fn canonical_roundtrip() {
        let vars = VarSpace::new(1, 1, 0, 0);
        let p = &MultiPoly::var(vars, VarKind::V, 0) * &MultiPoly::var(vars, VarKind::Z, 0).scale(&Scalar::frac(-3, 4));
        let text = write_poly(&p);
        assert_eq!(parse_poly(&text).unwrap(), p);
        assert_eq!(write_poly(&parse_poly(&text).unwrap()), text);
    }

    #[test]
    fn zero_terms_purged() {
        let text = r#"{"vars":{"v":1,"z":0,"t":0,"xi":0},"terms":[{"exp":[1,0],"re":"0/1","im":"0/1"},{"exp":[0,1],"re":"2/4","im":"0/1"}]}"#;
        let p = parse_poly(text).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(write_poly(&p), "{\"vars\":{\"v\":1,\"z\":0,\"t\":0,\"xi\":0},\"terms\":[{\"exp\":[0,1],\"re\":\"1/2\",\"im\":\"0/1\"}]}\n");
    }

    #[test]
    fn bad_exponent_length_names_term() {
        let text = r#"{"vars":{"v":1,"z":0,"t":0,"xi":0},"terms":[{"exp":[1,0],"re":"1","im":"0"},{"exp":[1],"re":"1","im":"0"}]}"#;
        let e = parse_poly(text).unwrap_err().to_string();
        assert!(e.contains("term 1"), "{}", e);
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_poly("{\"vars\":\n  {\"v\":1,}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{}", e);
    }

    #[test]
    fn matrix_strings() {
        let m = Matrix::from_rows(vec![vec![Scalar::new(Rational::new(1, 2), Rational::new(-3, 4)), Scalar::I]]);
        let j = matrix_to_json(&m);
        assert_eq!(j, vec![vec!["1/2-3/4i".to_string(), "0/1+1/1i".to_string()]]);
        assert_eq!(matrix_from_json(&j).unwrap(), m);
    }
}
