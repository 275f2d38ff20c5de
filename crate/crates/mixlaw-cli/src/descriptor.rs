//! Named generator descriptors for the `check` and `mix` surfaces.
//!
//! Grammar: `log`, `power:<p>`, `affine-power:<a>,<b>,<p>`,
//! `affine-log:<a>,<b>`, `witness:cubic-plus-linear`, `witness:exp`.

use crate::errors::CliError;
use crate::num::parse_f64;
use mixlaw::characterize::{witness_cubic_plus_linear, witness_exp};
use mixlaw::Generator;

pub fn parse_generator(desc: &str) -> Result<Generator, CliError> {
    let desc = desc.trim();
    let (name, args) = match desc.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (desc, None),
    };
    let build = |r: mixlaw::Result<Generator>| r.map_err(CliError::from);
    match (name, args) {
        ("log", None) => build(Generator::affine_log(1.0, 0.0)),
        ("power", Some(a)) => build(Generator::affine_power(
            1.0,
            0.0,
            parse_f64(a, "power exponent")?,
        )),
        ("affine-power", Some(a)) => {
            let parts: Vec<&str> = a.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::Usage(format!(
                    "affine-power takes '<a>,<b>,<p>', got '{a}'"
                )));
            }
            build(Generator::affine_power(
                parse_f64(parts[0], "a")?,
                parse_f64(parts[1], "b")?,
                parse_f64(parts[2], "p")?,
            ))
        }
        ("affine-log", Some(a)) => {
            let parts: Vec<&str> = a.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::Usage(format!(
                    "affine-log takes '<a>,<b>', got '{a}'"
                )));
            }
            build(Generator::affine_log(
                parse_f64(parts[0], "a")?,
                parse_f64(parts[1], "b")?,
            ))
        }
        ("witness", Some("cubic-plus-linear")) => Ok(witness_cubic_plus_linear()),
        ("witness", Some("exp")) => Ok(witness_exp()),
        _ => Err(CliError::Usage(format!(
            "unknown generator '{desc}' (expected log, power:<p>, affine-power:<a>,<b>,<p>, \
             affine-log:<a>,<b>, witness:cubic-plus-linear, or witness:exp)"
        ))),
    }
}
