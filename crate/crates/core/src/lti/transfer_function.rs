use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::poly;
use crate::error::{Error, Result};

/// Ratio of real polynomials in `s`, coefficients highest degree first.
///
/// Leading zeros in the numerator are kept as given, degrees are always
/// computed on the trimmed polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl TransferFunction {
    /// Builds a proper transfer function.
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        let tf = Self::controller(num, den)?;
        if !tf.is_proper() {
            return Err(Error::ImproperSystem {
                num_degree: tf.num_degree(),
                den_degree: tf.den_degree(),
            });
        }
        Ok(tf)
    }

    /// Builds a ratio that may be improper, such as an ideal PID controller.
    pub fn controller(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        match den.first() {
            Some(&lead) if lead != 0.0 => {}
            _ => return Err(Error::DegenerateDenominator),
        }
        if num.is_empty() {
            return Err(Error::InvalidConfig("numerator must be non-empty".into()));
        }
        for (part, coeffs) in [("numerator", &num), ("denominator", &den)] {
            if let Some(&value) = coeffs.iter().find(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoefficient { part, value });
            }
        }
        Ok(Self { num, den })
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn num_degree(&self) -> usize {
        poly::degree(&self.num)
    }

    pub fn den_degree(&self) -> usize {
        poly::degree(&self.den)
    }

    pub fn is_proper(&self) -> bool {
        self.num_degree() <= self.den_degree()
    }

    /// Denominator degree minus numerator degree; negative when improper.
    pub fn relative_degree(&self) -> isize {
        self.den_degree() as isize - self.num_degree() as isize
    }

    /// Multiplies the numerator by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::controller(poly::scale(&self.num, factor), self.den.clone())
    }
}

/// Text form `num: c_n .. c_0 / den: d_m .. d_0`.
impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |c: &[f64]| {
            c.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "num: {} / den: {}", join(&self.num), join(&self.den))
    }
}

impl FromStr for TransferFunction {
    type Err = Error;

    /// Parses the text form and requires the result to be proper.
    fn from_str(text: &str) -> Result<Self> {
        let (num, den) = parse_ratio(text)?;
        Self::new(num, den)
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

/// Parses `"num:" coeff+ "/" "den:" coeff+` into raw coefficient vectors.
pub fn parse_ratio(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let err = |position: usize, message: String| Error::Parse { position, message };
    let mut toks = tokens(text).peekable();

    let expect = |toks: &mut std::iter::Peekable<_>, want: &str| -> Result<()> {
        match Iterator::next(toks) {
            Some((_, tok)) if tok == want => Ok(()),
            Some((pos, tok)) => Err(err(pos, format!("expected `{want}`, found `{tok}`"))),
            None => Err(err(text.len(), format!("expected `{want}`, found end of input"))),
        }
    };

    expect(&mut toks, "num:")?;
    let mut num = Vec::new();
    while let Some(&(pos, tok)) = toks.peek() {
        if tok == "/" {
            break;
        }
        num.push(parse_coeff(pos, tok)?);
        toks.next();
    }
    if num.is_empty() {
        let pos = toks.peek().map_or(text.len(), |&(p, _)| p);
        return Err(err(pos, "numerator needs at least one coefficient".into()));
    }
    expect(&mut toks, "/")?;
    expect(&mut toks, "den:")?;
    let mut den = Vec::new();
    for (pos, tok) in toks {
        den.push(parse_coeff(pos, tok)?);
    }
    if den.is_empty() {
        return Err(err(text.len(), "denominator needs at least one coefficient".into()));
    }
    Ok((num, den))
}

fn parse_coeff(position: usize, tok: &str) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            position,
            message: format!("invalid coefficient `{tok}`"),
        }),
    }
}
