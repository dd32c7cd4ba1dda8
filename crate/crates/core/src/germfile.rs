//! Text format for germs:
//!
//! ```toml
//! truncation = 6
//! [weights]
//! u = 2
//! [[terms]]
//! i = 1
//! j = 1
//! m = 0
//! re = "1"
//! im = "0"
//! ```
//!
//! Every coefficient is listed explicitly, so a non-real term needs both
//! `(i, j, m)` and its conjugate `(j, i, m)`. `re` and `im` default to `"0"`.

use std::fmt;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Deserialize;
use toml::Spanned;

use crate::gq::{fmt_rational, parse_rational, GaussianRational as Gq, Rational};
use crate::hypersurface::Germ;
use crate::series::{RealSeries3, Weighting};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParseError")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if !self.field.is_empty() {
            write!(f, " in {}", self.field)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    truncation: Spanned<u32>,
    weights: RawWeights,
    #[serde(default)]
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    u: Spanned<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    i: Spanned<u32>,
    j: u32,
    m: u32,
    re: Option<Spanned<String>>,
    im: Option<Spanned<String>>,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

/// Parses and validates a germ file.
pub fn parse_germ(src: &str) -> Result<Germ, ParseError> {
    let raw: RawFile = toml::from_str(src).map_err(|e| ParseError {
        line: e.span().map(|s| line_of(src, s.start)),
        field: String::new(),
        message: e.message().to_string(),
    })?;
    let err = |span: std::ops::Range<usize>, field: String, message: String| ParseError {
        line: Some(line_of(src, span.start)),
        field,
        message,
    };
    let w = Weighting::new(*raw.weights.u.get_ref())
        .map_err(|e| err(raw.weights.u.span(), "weights.u".into(), e.to_string()))?;
    let trunc = *raw.truncation.get_ref();
    if trunc == 0 {
        return Err(err(raw.truncation.span(), "truncation".into(), "must be positive".into()));
    }
    let mut phi = RealSeries3::zero(w, trunc);
    for (t, term) in raw.terms.iter().enumerate() {
        let key = (*term.i.get_ref(), term.j, term.m);
        let at = term.i.span();
        let deg = w.real_degree(key.0, key.1, key.2);
        if deg > trunc {
            return Err(err(
                at,
                format!("terms[{t}]"),
                format!("monomial {key:?} has weighted degree {deg} above the truncation {trunc}"),
            ));
        }
        if phi.get(key).is_some() {
            return Err(err(at, format!("terms[{t}]"), format!("duplicate monomial {key:?}")));
        }
        let part = |s: &Option<Spanned<String>>, name: &str| match s {
            None => Ok(Rational::zero()),
            Some(s) => parse_rational(s.get_ref()).map_err(|m| err(s.span(), format!("terms[{t}].{name}"), m)),
        };
        phi.add_term(key, &Gq::new(part(&term.re, "re")?, part(&term.im, "im")?));
    }
    Germ::new(phi).map_err(|e| ParseError {
        line: None,
        field: "terms".into(),
        message: e.to_string(),
    })
}

/// Serializes a series in the germ file format, monomials sorted by
/// `(weighted degree, i, j, m)`.
pub fn to_germ_file(s: &RealSeries3) -> String {
    let mut out = format!("truncation = {}\n\n[weights]\nu = {}\n", s.trunc(), s.weighting().u_weight());
    for ((i, j, m), c) in s.sorted_terms() {
        let _ = write!(
            out,
            "\n[[terms]]\ni = {i}\nj = {j}\nm = {m}\nre = \"{}\"\nim = \"{}\"\n",
            fmt_rational(&c.re),
            fmt_rational(&c.im)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sphere() {
        let g = parse_germ("truncation = 4\n[weights]\nu = 2\n[[terms]]\ni = 1\nj = 1\nm = 0\nre = \"1\"\n").unwrap();
        assert_eq!(g.phi().coeff((1, 1, 0)), Gq::one());
        assert_eq!(g.phi().len(), 1);
    }

    #[test]
    fn diagnostics_name_the_line() {
        let src = "truncation = 4\n[weights]\nu = 2\n[[terms]]\ni = 1\nj = 1\nm = 0\nre = \"1/0\"\n";
        let e = parse_germ(src).unwrap_err();
        assert_eq!(e.line, Some(8));
        assert_eq!(e.field, "terms[0].re");
        let e = parse_germ("truncation = 4\n[weights]\nu = 2\n[[terms]]\ni = 2\nj = 1\nm = 0\nre = \"1\"\n").unwrap_err();
        assert!(e.message.contains("NotHermitian"), "{e}");
        let e = parse_germ("truncation = 4\n[weights]\nu = 2\n[[terms]]\ni = 5\nj = 1\nm = 0\n").unwrap_err();
        assert_eq!(e.line, Some(5));
    }
}
