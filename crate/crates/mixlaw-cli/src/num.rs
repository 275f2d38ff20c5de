//! Literal parsing and full-precision printing.

use crate::errors::CliError;
use mixlaw::Exponent;
use num_complex::Complex64;

/// 17 significant digits — enough that reparsing reproduces the f64
/// bit-for-bit.
pub fn format17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re+imi` / `re-imi` with both parts at full precision.
pub fn format17_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", format17(z.re), format17(z.im.abs()))
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

pub fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("{what}: expected a number, got '{s}'")))
}

/// `inf`, `-inf`, `0`, or any finite real.
pub fn parse_exponent(s: &str) -> Result<Exponent, CliError> {
    match s.trim() {
        "inf" | "+inf" => Ok(Exponent::PlusInfinity),
        "-inf" => Ok(Exponent::MinusInfinity),
        other => {
            let p = parse_f64(other, "exponent")?;
            if p == 0.0 {
                Ok(Exponent::Zero)
            } else {
                Exponent::finite(p).map_err(CliError::from)
            }
        }
    }
}

/// `re`, `re+imi`, `re-imi`, or `imi`. The split sign is the last +/-
/// that does not follow an exponent marker, so `1e-3+2e-4i` parses.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let t = s.trim();
    let Some(body) = t.strip_suffix(['i', 'I']) else {
        return Ok(Complex64::new(parse_f64(t, "value")?, 0.0));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => Ok(Complex64::new(
            parse_f64(&body[..i], "real part")?,
            parse_f64(&body[i..], "imaginary part")?,
        )),
        None => Ok(Complex64::new(0.0, parse_f64(body, "imaginary part")?)),
    }
}

pub fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|part| parse_f64(part, what)).collect()
}

/// Comma list with `_` marking the unknown entry.
pub fn parse_known_list(s: &str) -> Result<Vec<Option<f64>>, CliError> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            if part == "_" {
                Ok(None)
            } else {
                parse_f64(part, "known value").map(Some)
            }
        })
        .collect()
}

/// `lo,hi` pair.
pub fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let list = parse_f64_list(s, what)?;
    if list.len() != 2 {
        return Err(usage(format!("{what}: expected 'lo,hi', got '{s}'")));
    }
    Ok((list[0], list[1]))
}
