//! Text and file formats shared by the CLI: integer-coefficient polynomial
//! strings in t ("1 - 4t", "1+t^2"), rational-function strings "A / B", and
//! the JSON series file {precision, coeffs: ["num/den", ...]}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::QSeries;

/// "num/den" or "num"; den defaults to 1. Errors on zero denominators.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer '{num}'")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer '{den}'")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// On-disk form of a truncated series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub precision: usize,
    pub coeffs: Vec<String>,
}

impl SeriesFile {
    pub fn from_series(s: &QSeries) -> Self {
        SeriesFile {
            precision: s.precision(),
            coeffs: s.coeffs().iter().map(rational_to_string).collect(),
        }
    }

    pub fn to_series(&self) -> Result<QSeries> {
        if self.coeffs.len() != self.precision {
            return Err(Error::Parse(format!(
                "series file lists {} coefficients but precision {}",
                self.coeffs.len(),
                self.precision
            )));
        }
        if self.precision == 0 {
            return Err(Error::Parse("series file has precision 0".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(QSeries::new(coeffs))
    }
}

/// Integer-coefficient polynomial in t, e.g. "1+t^2", "1 - 4t", "3*t^2 - t".
/// Returns ascending coefficients with trailing zeros trimmed (zero
/// polynomial -> empty vector is not allowed; "0" yields [0]).
pub fn parse_poly(s: &str) -> Result<Vec<BigInt>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = compact.as_bytes();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero()];
    let mut pos = 0usize;
    let mut first = true;
    while pos < bytes.len() {
        let mut sign = 1i32;
        // sign prefix (mandatory between terms, optional on the first)
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -1;
                pos += 1;
            }
            _ if first => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected '+' or '-' before term at '{}'",
                    other as char
                )))
            }
        }
        first = false;
        // optional integer coefficient
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let mut coeff = if pos > digits_start {
            compact[digits_start..pos]
                .parse::<BigInt>()
                .map_err(|_| Error::Parse("bad coefficient".into()))?
        } else {
            BigInt::one()
        };
        if sign < 0 {
            coeff = -coeff;
        }
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
            if pos >= bytes.len() || bytes[pos] != b't' {
                return Err(Error::Parse("expected 't' after '*'".into()));
            }
        }
        let exp = if pos < bytes.len() && bytes[pos] == b't' {
            pos += 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let exp_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == exp_start {
                    return Err(Error::Parse("missing exponent after '^'".into()));
                }
                compact[exp_start..pos]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse("exponent out of range".into()))?
            } else {
                1
            }
        } else {
            if pos == digits_start {
                return Err(Error::Parse(format!(
                    "expected digits or 't' at offset {pos} in '{compact}'"
                )));
            }
            0
        };
        if exp > 1 << 20 {
            return Err(Error::Parse(format!("exponent {exp} too large")));
        }
        if exp >= coeffs.len() {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += coeff;
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// "A / B" with A, B integer polynomials in t; B must be nonzero.
pub fn parse_ratfun(s: &str) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse("rational function needs 'A / B'".into()))?;
    let num = parse_poly(num)?;
    let den = parse_poly(den)?;
    if den.iter().all(|c| c.is_zero()) {
        return Err(Error::Parse("zero denominator polynomial".into()));
    }
    Ok((num, den))
}

pub fn poly_to_string(coeffs: &[BigInt]) -> String {
    use num_traits::Signed;
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        match i {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push('t');
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
