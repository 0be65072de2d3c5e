//! Parsing of complex literals such as `3`, `-2i`, `0.5+0.1i` or `1e-3-2.5i`.

use num_complex::Complex64;
use thiserror::Error;

use crate::hyp3::ExtendedComplex;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("malformed complex literal {0:?}")]
pub struct LiteralError(pub String);

fn real(s: &str, whole: &str) -> Result<f64, LiteralError> {
    let v: f64 = s.parse().map_err(|_| LiteralError(whole.to_string()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(LiteralError(whole.to_string()))
    }
}

fn imaginary_coefficient(s: &str, whole: &str) -> Result<f64, LiteralError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s, whole),
    }
}

pub fn parse_complex(input: &str) -> Result<Complex64, LiteralError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(LiteralError(input.to_string()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(&s, input)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(
            real(&body[..k], input)?,
            imaginary_coefficient(&body[k..], input)?,
        )),
        None => Ok(Complex64::new(0.0, imaginary_coefficient(body, input)?)),
    }
}

/// A complex literal or `inf`.
pub fn parse_extended(input: &str) -> Result<ExtendedComplex, LiteralError> {
    match input.trim() {
        "inf" | "∞" => Ok(ExtendedComplex::Infinity),
        s => parse_complex(s).map(ExtendedComplex::Finite),
    }
}
