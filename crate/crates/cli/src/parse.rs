//! Value parsers for command-line arguments.

use bowditch::hyp3::{ExtendedComplex, Geodesic, H3Point};
use bowditch::literal::{parse_complex, parse_extended};
use bowditch::Complex64;

pub fn complex(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// `from:to`, each side a complex literal.
pub fn complex_range(s: &str) -> Result<(Complex64, Complex64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected FROM:TO, got {s:?}"))?;
    Ok((complex(a)?, complex(b)?))
}

/// `from:to` with real endpoints.
pub fn real_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = complex_range(s)?;
    if a.im != 0.0 || b.im != 0.0 {
        return Err(format!("expected a real range, got {s:?}"));
    }
    Ok((a.re, b.re))
}

/// `a,b,c` with `c > 0`.
pub fn point(s: &str) -> Result<H3Point, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad coordinate in {s:?}"))
        })
        .collect::<Result<_, _>>()?;
    let [a, b, c] = parts[..] else {
        return Err(format!("expected a,b,c, got {s:?}"));
    };
    H3Point::new(a, b, c).map_err(|e| format!("{s:?}: {e}"))
}

/// `u:v`, each endpoint a complex literal or `inf`.
pub fn geodesic(s: &str) -> Result<Geodesic, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected START:END, got {s:?}"))?;
    let end = |t: &str| -> Result<ExtendedComplex, String> {
        parse_extended(t).map_err(|e| e.to_string())
    };
    Geodesic::new(end(a)?, end(b)?).map_err(|e| format!("{s:?}: {e}"))
}

pub fn tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

/// Complex number in the literal syntax accepted on input.
pub fn format_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_points() {
        assert_eq!(real_range("2.5:3.5").unwrap(), (2.5, 3.5));
        assert!(real_range("1:2i").is_err());
        assert_eq!(complex_range("1+i:-2").unwrap().0, Complex64::new(1.0, 1.0));
        assert_eq!(point("0, 0, 2").unwrap().c, 2.0);
        assert!(point("0,0,-1").is_err());
        assert!(point("0,0").is_err());
        assert!(geodesic("0:inf").is_ok());
        assert!(geodesic("1:1").is_err());
        assert!(tolerance("0").is_err());
    }

    #[test]
    fn formatted_complex_parses_back() {
        for z in [
            Complex64::new(3.0, 0.0),
            Complex64::new(-0.5, -2.25),
            Complex64::new(1e-12, 7.0),
        ] {
            assert_eq!(complex(&format_complex(z)).unwrap(), z);
        }
    }
}
