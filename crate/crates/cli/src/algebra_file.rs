//! Structure-constant files.
//!
//! ```text
//! # comment
//! dim 3
//! labels e h f
//! 1 2 -> 1:-2
//! 1 3 -> 2:1
//! 2 3 -> 3:-2
//! ```
//!
//! Indices are 1-based, coefficients are rationals `p` or `p/q`, omitted
//! pairs bracket to zero and `j i` follows from `i j` by antisymmetry.

use std::path::Path;

use hsc_core::lie::{validate_algebra, LieAlgebraData};
use hsc_core::linalg::SparseVec;
use hsc_core::Rational;

use crate::InputError;

fn err(line: usize, msg: impl Into<String>) -> InputError {
    InputError::Parse { line, msg: msg.into() }
}

fn index(tok: &str, dim: usize, line: usize) -> Result<usize, InputError> {
    let i: usize = tok.parse().map_err(|_| err(line, format!("`{tok}` is not an index")))?;
    if i == 0 || i > dim {
        return Err(err(line, format!("index {i} is outside 1..={dim}")));
    }
    Ok(i - 1)
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebraData, InputError> {
    let mut dim = None;
    let mut labels: Option<Vec<String>> = None;
    let mut brackets: Vec<(usize, usize, SparseVec)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("dim") {
            if dim.is_some() {
                return Err(err(line, "duplicate `dim` header"));
            }
            let n: usize = rest.trim().parse().map_err(|_| err(line, "`dim` needs a positive integer"))?;
            if n == 0 || n > 63 {
                return Err(err(line, "dimension must be in 1..=63"));
            }
            dim = Some(n);
            continue;
        }
        let n = dim.ok_or_else(|| err(line, "expected the `dim n` header first"))?;
        if let Some(rest) = body.strip_prefix("labels") {
            let ls: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if ls.len() != n {
                return Err(err(line, format!("expected {n} labels, found {}", ls.len())));
            }
            labels = Some(ls);
            continue;
        }
        let (lhs, rhs) = body.split_once("->").ok_or_else(|| err(line, "expected `i j -> k:c, ...`"))?;
        let pair: Vec<&str> = lhs.split_whitespace().collect();
        let [a, b] = pair[..] else {
            return Err(err(line, "the left side must be two indices"));
        };
        let (i, j) = (index(a, n, line)?, index(b, n, line)?);
        if i == j {
            return Err(err(line, "[x, x] is always zero"));
        }
        let mut terms = Vec::new();
        for term in rhs.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (t, c) = term.split_once(':').ok_or_else(|| err(line, format!("term `{term}` is not `k:c`")))?;
            let c: Rational = c.trim().parse().map_err(|_| err(line, format!("`{c}` is not a rational")))?;
            terms.push((index(t.trim(), n, line)?, c));
        }
        let v = SparseVec::from_entries(terms);
        if brackets.iter().any(|(x, y, _)| (*x, *y) == (i, j) || (*x, *y) == (j, i)) {
            return Err(err(line, format!("bracket of {} and {} given twice", i + 1, j + 1)));
        }
        brackets.push(if i < j { (i, j, v) } else { (j, i, v.scale(&Rational::from_int(-1))) });
    }
    let n = dim.ok_or_else(|| err(0, "missing `dim n` header"))?;
    let g = LieAlgebraData::from_brackets(n, brackets).map_err(|e| err(0, e.to_string()))?;
    let g = match labels {
        Some(l) => g.with_labels(l),
        None => g,
    };
    let report = validate_algebra(&g);
    if !report.is_valid() {
        return Err(err(0, format!("structure constants fail antisymmetry or Jacobi: {:?}", report.violations)));
    }
    Ok(g)
}

pub fn read_algebra(path: &Path) -> Result<LieAlgebraData, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(path.display().to_string(), e.to_string()))?;
    parse_algebra(&text).map_err(|e| match e {
        InputError::Parse { line, msg } => InputError::File { path: path.display().to_string(), line, msg },
        other => other,
    })
}

/// Resolves a vector spec against an algebra: a label, a 1-based index, or
/// a combination such as `2:1 3:-1/2`.
pub fn parse_vector(spec: &str, g: &LieAlgebraData) -> Result<SparseVec, InputError> {
    let spec = spec.trim();
    let bad = || InputError::Value(format!("`{spec}` names no basis vector"));
    if let Some(ls) = g.labels() {
        if let Some(i) = ls.iter().position(|l| l == spec) {
            return Ok(SparseVec::unit(i));
        }
    }
    let mut terms = Vec::new();
    for term in spec.split_whitespace() {
        let (i, c) = match term.split_once(':') {
            Some((i, c)) => (i, c.parse::<Rational>().map_err(|_| bad())?),
            None => (term, Rational::from_int(1)),
        };
        let i: usize = i.parse().map_err(|_| bad())?;
        if i == 0 || i > g.dim() {
            return Err(InputError::Value(format!("index {i} in `{spec}` is outside 1..={}", g.dim())));
        }
        terms.push((i - 1, c));
    }
    if terms.is_empty() {
        return Err(bad());
    }
    Ok(SparseVec::from_entries(terms))
}
