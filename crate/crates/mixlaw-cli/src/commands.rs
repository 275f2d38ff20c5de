//! One function per subcommand. Every value flag is carried as text and
//! parsed here so config-supplied values take the identical path; exit
//! codes come from the [`CliError`] taxonomy, with `check`'s verdict codes
//! (0/1/3) returned directly.

use clap::Args;
use num_complex::Complex64;

use crate::config::{merge, merge_list, require, Config};
use crate::dataset::{parse_dataset, write_sweep_csv};
use crate::descriptor::parse_generator;
use crate::errors::CliError;
use crate::num::{
    format17, format17_complex, parse_complex, parse_exponent, parse_f64, parse_f64_list,
    parse_known_list, parse_pair,
};
use mixlaw::characterize::{check_scale_independence, GridSpec, Verdict};
use mixlaw::fit::{fit_p_global, per_sample_p, SampleOutcome, DEFAULT_BRACKET};
use mixlaw::invert::{
    archie_saturation, solve_fraction_two_phase, solve_phase_value, solve_phase_value_geometric,
};
use mixlaw::mean::{power_mean, power_mean_complex, quasi_arithmetic_mean, MixResult};
use mixlaw::{Composition, ComplexPhaseValues, Error, Exponent, PhaseValues};

#[derive(Args, Debug)]
pub struct MixArgs {
    /// Mixing exponent: any real, or 0 / inf / -inf for the limit laws.
    #[arg(long, value_name = "P", conflicts_with = "generator", allow_hyphen_values = true)]
    pub p: Option<String>,

    /// Named generator to mix through instead of an exponent
    /// (log, power:<p>, affine-power:<a>,<b>,<p>, ...).
    #[arg(long, value_name = "DESC")]
    pub generator: Option<String>,

    /// One phase as FRACTION:VALUE; repeat per phase. Values may be
    /// complex literals like 80+10i (finite nonzero p only).
    #[arg(long, value_name = "FRAC:VALUE")]
    pub phase: Vec<String>,

    /// Multiply every phase value by this factor before mixing.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    pub scale: Option<String>,
}

fn parse_phases(specs: &[String]) -> Result<(Vec<f64>, Vec<Complex64>), CliError> {
    if specs.is_empty() {
        return Err(CliError::Usage(
            "at least one --phase FRACTION:VALUE is required".into(),
        ));
    }
    let mut fractions = Vec::with_capacity(specs.len());
    let mut values = Vec::with_capacity(specs.len());
    for spec in specs {
        let Some((frac, val)) = spec.split_once(':') else {
            return Err(CliError::Usage(format!(
                "phase '{spec}' is not FRACTION:VALUE"
            )));
        };
        fractions.push(parse_f64(frac, "phase fraction")?);
        values.push(parse_complex(val)?);
    }
    Ok((fractions, values))
}

pub fn cmd_mix(args: MixArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("mix");
    let (p_str, gen_str) = match (args.p, args.generator) {
        (None, None) => (section.str("p")?, section.str("generator")?),
        given => given,
    };
    let phase_specs = merge_list(args.phase, &section, "phase")?;
    let scale = merge(args.scale, &section, "scale")?
        .map(|s| parse_f64(&s, "scale"))
        .transpose()?;

    let (fractions, values) = parse_phases(&phase_specs)?;
    let comp = Composition::new(fractions)?;
    let is_complex = values.iter().any(|z| z.im != 0.0);

    match (p_str, gen_str) {
        (Some(p), None) if is_complex => {
            // Raw f64 on purpose: the complex evaluator owns the rejection
            // of 0, infinities, and |p| beyond its branch-safe band.
            let p = parse_f64(&p, "exponent")?;
            let mut vals: Vec<Complex64> = values;
            if let Some(t) = scale {
                if !(t > 0.0) || !t.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "scale",
                        value: t,
                    }
                    .into());
                }
                vals = vals.into_iter().map(|z| z * t).collect();
            }
            let res = power_mean_complex(p, &comp, &ComplexPhaseValues::new(vals)?)?;
            println!("{}", format17_complex(res.value));
            if !res.flags.is_empty() {
                println!("flags: {}", res.flags);
            }
            Ok(0)
        }
        (Some(p), None) => {
            let p = parse_exponent(&p)?;
            let mut vals = PhaseValues::new(values.iter().map(|z| z.re).collect::<Vec<_>>())?;
            if let Some(t) = scale {
                vals = vals.scaled(t)?;
            }
            let res = power_mean(p, &comp, &vals)?;
            println!("{}", format17(res.value));
            if !res.flags.is_empty() {
                println!("flags: {}", res.flags);
            }
            Ok(0)
        }
        (None, Some(desc)) => {
            if is_complex {
                return Err(CliError::Usage(
                    "complex phase values need a finite --p, not --generator".into(),
                ));
            }
            let g = parse_generator(&desc)?;
            let mut vals = PhaseValues::new(values.iter().map(|z| z.re).collect::<Vec<_>>())?;
            if let Some(t) = scale {
                vals = vals.scaled(t)?;
            }
            println!("{}", format17(quasi_arithmetic_mean(&g, &comp, &vals)?));
            Ok(0)
        }
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --p or --generator, not both".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "one of --p or --generator is required".into(),
        )),
    }
}

#[derive(Args, Debug)]
pub struct InvertPhaseArgs {
    /// Mixing exponent (0 selects the geometric law).
    #[arg(long, value_name = "P", allow_hyphen_values = true)]
    pub p: Option<String>,
    /// All phase fractions, comma-separated.
    #[arg(long, value_name = "A1,A2,...", allow_hyphen_values = true)]
    pub comp: Option<String>,
    /// Known phase values with `_` marking the one to solve for.
    #[arg(long, value_name = "S1,_,S3,...", allow_hyphen_values = true)]
    pub known: Option<String>,
    /// Measured mixture value.
    #[arg(long, value_name = "M", allow_hyphen_values = true)]
    pub target: Option<String>,
}

pub fn cmd_invert_phase(args: InvertPhaseArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("invert");
    let p = parse_exponent(&require(args.p, &section, "p")?)?;
    let comp = Composition::new(parse_f64_list(
        &require(args.comp, &section, "comp")?,
        "comp",
    )?)?;
    let known = parse_known_list(&require(args.known, &section, "known")?)?;
    let target = parse_f64(&require(args.target, &section, "target")?, "target")?;
    let solved = match p {
        Exponent::Finite(p) => solve_phase_value(p, &comp, &known, target)?,
        Exponent::Zero => solve_phase_value_geometric(&comp, &known, target)?,
        // min/max flatten the missing value away; no finite answer exists
        Exponent::PlusInfinity | Exponent::MinusInfinity => {
            return Err(Error::UnsupportedExponent.into())
        }
    };
    println!("{}", format17(solved));
    Ok(0)
}

#[derive(Args, Debug)]
pub struct InvertFractionArgs {
    /// Mixing exponent (0 selects the geometric law).
    #[arg(long, value_name = "P", allow_hyphen_values = true)]
    pub p: Option<String>,
    /// First phase value.
    #[arg(long, value_name = "S1", allow_hyphen_values = true)]
    pub sigma1: Option<String>,
    /// Second phase value.
    #[arg(long, value_name = "S2", allow_hyphen_values = true)]
    pub sigma2: Option<String>,
    /// Measured mixture value.
    #[arg(long, value_name = "M", allow_hyphen_values = true)]
    pub target: Option<String>,
}

pub fn cmd_invert_fraction(args: InvertFractionArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("invert");
    let p = parse_exponent(&require(args.p, &section, "p")?)?;
    let sigma1 = parse_f64(&require(args.sigma1, &section, "sigma1")?, "sigma1")?;
    let sigma2 = parse_f64(&require(args.sigma2, &section, "sigma2")?, "sigma2")?;
    let target = parse_f64(&require(args.target, &section, "target")?, "target")?;
    println!(
        "{}",
        format17(solve_fraction_two_phase(p, sigma1, sigma2, target)?)
    );
    Ok(0)
}

#[derive(Args, Debug)]
pub struct InvertArchieArgs {
    /// Measured bulk conductivity.
    #[arg(long, value_name = "SIGMA", allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Brine conductivity.
    #[arg(long, value_name = "SIGMA_W", allow_hyphen_values = true)]
    pub sigma_w: Option<String>,
    /// Porosity in [0, 1].
    #[arg(long, value_name = "PHI", allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Cementation exponent.
    #[arg(long, value_name = "M", allow_hyphen_values = true)]
    pub m: Option<String>,
}

pub fn cmd_invert_archie(args: InvertArchieArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("invert");
    let sigma = parse_f64(&require(args.sigma, &section, "sigma")?, "sigma")?;
    let sigma_w = parse_f64(&require(args.sigma_w, &section, "sigma-w")?, "sigma-w")?;
    let phi = parse_f64(&require(args.phi, &section, "phi")?, "phi")?;
    let m = parse_f64(&require(args.m, &section, "m")?, "m")?;
    println!("{}", format17(archie_saturation(sigma, sigma_w, phi, m)?));
    Ok(0)
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Dataset CSV (header a1,...,an,s1,...,sn,measured).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<String>,
    /// Exponent search bracket as lo,hi (default -64,64).
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub bracket: Option<String>,
    /// Also print each sample's individually solved exponent or status.
    #[arg(long)]
    pub per_sample: bool,
}

pub fn cmd_fit(args: FitArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("fit");
    let csv_path = require(args.csv, &section, "csv")?;
    let bracket = match merge(args.bracket, &section, "bracket")? {
        Some(s) => parse_pair(&s, "bracket")?,
        None => DEFAULT_BRACKET,
    };
    let per_sample = args.per_sample || section.flag("per-sample")?;

    let text = std::fs::read_to_string(&csv_path)
        .map_err(|e| CliError::Io(format!("{csv_path}: {e}")))?;
    let dataset = parse_dataset(&text)?;
    let report = fit_p_global(&dataset, bracket)?;
    println!("p_hat: {}", format17(report.p_hat));
    println!("rss: {}", format17(report.rss));
    println!("iterations: {}", report.iterations);
    if per_sample {
        for (i, outcome) in per_sample_p(&dataset)? {
            match outcome {
                SampleOutcome::Solved(est) => {
                    let note = if est.max_exponent { " (max-exponent)" } else { "" };
                    println!("sample {}: p = {}{note}", i + 1, format17(est.p));
                }
                SampleOutcome::Degenerate => {
                    println!("sample {}: degenerate (every exponent fits)", i + 1);
                }
                SampleOutcome::Unsolvable(hint) => {
                    let limit = match hint {
                        mixlaw::LimitHint::PlusInfinity => "p -> +inf",
                        mixlaw::LimitHint::MinusInfinity => "p -> -inf",
                    };
                    println!("sample {}: unsolvable (measured at the {limit} limit)", i + 1);
                }
            }
        }
    }
    Ok(0)
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Generator to test: log, power:<p>, affine-power:<a>,<b>,<p>,
    /// affine-log:<a>,<b>, witness:cubic-plus-linear, witness:exp.
    #[arg(value_name = "GENERATOR")]
    pub generator: Option<String>,
    /// Override the scale factors, comma-separated.
    #[arg(long, value_name = "T1,T2,...", allow_hyphen_values = true)]
    pub t_values: Option<String>,
    /// Override the compositions; repeat per composition.
    #[arg(long, value_name = "A1,A2,...", allow_hyphen_values = true)]
    pub comp: Vec<String>,
    /// Override the phase value sets; repeat per set.
    #[arg(long, value_name = "S1,S2,...", allow_hyphen_values = true)]
    pub values: Vec<String>,
}

pub fn cmd_check(args: CheckArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("check");
    let g = parse_generator(&require(args.generator, &section, "generator")?)?;

    let mut grid = GridSpec::default_for(&g);
    if let Some(ts) = merge(args.t_values, &section, "t-values")? {
        grid.ts = parse_f64_list(&ts, "t-values")?;
    }
    let comps = merge_list(args.comp, &section, "comp")?;
    if !comps.is_empty() {
        grid.comps = comps
            .iter()
            .map(|c| Ok(Composition::new(parse_f64_list(c, "comp")?)?))
            .collect::<Result<_, CliError>>()?;
    }
    let value_sets = merge_list(args.values, &section, "values")?;
    if !value_sets.is_empty() {
        grid.value_sets = value_sets
            .iter()
            .map(|v| Ok(PhaseValues::new(parse_f64_list(v, "values")?)?))
            .collect::<Result<_, CliError>>()?;
    }

    let report = check_scale_independence(&g, &grid)?;
    let join = |xs: &[f64]| {
        xs.iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    println!("max residual: {}", format17(report.max_abs_residual));
    println!(
        "at: t = {}, comp = {}, values = {}",
        report.argmax_t,
        join(report.argmax_comp.fractions()),
        join(report.argmax_vals.values())
    );
    println!("grid: {} points", report.grid_size);
    println!("verdict: {}", report.verdict);
    Ok(match report.verdict {
        Verdict::Conforms => 0,
        Verdict::Violates => 1,
        Verdict::Inconclusive => 3,
    })
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// What to sweep: p, t, or fraction.
    #[arg(long, value_name = "p|t|fraction")]
    pub variable: Option<String>,
    /// Grid start (with --to and --steps).
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub from: Option<String>,
    /// Grid end, exclusive of nothing: the last point lands exactly here.
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub to: Option<String>,
    /// Number of grid points (>= 2).
    #[arg(long, value_name = "N", allow_hyphen_values = true)]
    pub steps: Option<String>,
    /// Explicit grid instead of from/to/steps, comma-separated (>= 2 points).
    #[arg(long, value_name = "X1,X2,...", conflicts_with_all = ["from", "to", "steps"])]
    pub list: Option<String>,
    /// Phase fractions, comma-separated.
    #[arg(long, value_name = "A1,A2,...", allow_hyphen_values = true)]
    pub comp: Option<String>,
    /// Phase values, comma-separated.
    #[arg(long, value_name = "S1,S2,...", allow_hyphen_values = true)]
    pub values: Option<String>,
    /// Fixed exponent (required when sweeping t or a fraction).
    #[arg(long, value_name = "P", allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Which fraction sweeps; the rest renormalize to the complement.
    #[arg(long, value_name = "J", allow_hyphen_values = true)]
    pub fraction_index: Option<String>,
    /// Output CSV path.
    #[arg(long, value_name = "PATH")]
    pub output: Option<String>,
}

fn parse_usize(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| CliError::Usage(format!("{what}: expected a nonnegative integer, got '{s}'")))
}

fn sweep_grid(
    list: Option<String>,
    from: Option<String>,
    to: Option<String>,
    steps: Option<String>,
) -> Result<Vec<f64>, CliError> {
    if let Some(list) = list {
        let points = parse_f64_list(&list, "list")?;
        if points.len() < 2 {
            return Err(CliError::Usage(format!(
                "list needs at least 2 points, got {}",
                points.len()
            )));
        }
        return Ok(points);
    }
    let (Some(from), Some(to), Some(steps)) = (from, to, steps) else {
        return Err(CliError::Usage(
            "give --list or all of --from/--to/--steps".into(),
        ));
    };
    let from = parse_f64(&from, "from")?;
    let to = parse_f64(&to, "to")?;
    let steps = parse_usize(&steps, "steps")?;
    if steps < 2 {
        return Err(CliError::Usage(format!("steps must be >= 2, got {steps}")));
    }
    if !(from < to) {
        return Err(CliError::Usage(format!(
            "from ({from}) must be below to ({to})"
        )));
    }
    Ok((0..steps)
        .map(|i| from + (to - from) * (i as f64) / ((steps - 1) as f64))
        .collect())
}

/// Fraction j takes x; the others share 1-x in their original proportions.
fn renormalized(base: &[f64], j: usize, x: f64) -> Result<Vec<f64>, CliError> {
    if base.len() == 2 {
        let mut f = [0.0; 2];
        f[j] = x;
        f[1 - j] = 1.0 - x;
        return Ok(f.to_vec());
    }
    let rest: f64 = base
        .iter()
        .enumerate()
        .filter_map(|(k, &a)| (k != j).then_some(a))
        .sum();
    if rest <= 0.0 {
        return Err(CliError::Usage(format!(
            "fraction-index {j} holds the whole mixture; nothing to renormalize"
        )));
    }
    Ok(base
        .iter()
        .enumerate()
        .map(|(k, &a)| if k == j { x } else { a * (1.0 - x) / rest })
        .collect())
}

pub fn cmd_sweep(args: SweepArgs, config: &Config) -> Result<i32, CliError> {
    let section = config.section("sweep");
    let variable = require(args.variable, &section, "variable")?;
    let output = require(args.output, &section, "output")?;
    let comp_list = parse_f64_list(&require(args.comp, &section, "comp")?, "comp")?;
    let comp = Composition::new(comp_list.clone())?;
    let vals = PhaseValues::new(parse_f64_list(
        &require(args.values, &section, "values")?,
        "values",
    )?)?;
    // A grid flag on the command line pins the grid's source; config only
    // fills in when no grid flag was given at all (list beats range there).
    let cli_range = args.from.is_some() || args.to.is_some() || args.steps.is_some();
    let grid = if args.list.is_some() {
        sweep_grid(args.list, None, None, None)?
    } else if cli_range {
        sweep_grid(
            None,
            merge(args.from, &section, "from")?,
            merge(args.to, &section, "to")?,
            merge(args.steps, &section, "steps")?,
        )?
    } else {
        sweep_grid(
            section.str("list")?,
            section.str("from")?,
            section.str("to")?,
            section.str("steps")?,
        )?
    };
    let fixed_p = merge(args.p, &section, "p")?;
    let need_p = |p: Option<String>| -> Result<Exponent, CliError> {
        let Some(p) = p else {
            return Err(CliError::Usage(format!(
                "sweeping {variable} needs a fixed --p"
            )));
        };
        parse_exponent(&p)
    };

    let mut rows: Vec<(f64, MixResult)> = Vec::with_capacity(grid.len());
    match variable.as_str() {
        "p" => {
            for x in grid {
                let p = if x == 0.0 {
                    Exponent::Zero
                } else {
                    Exponent::finite(x)?
                };
                rows.push((x, power_mean(p, &comp, &vals)?));
            }
        }
        "t" => {
            let p = need_p(fixed_p)?;
            for x in grid {
                rows.push((x, power_mean(p, &comp, &vals.scaled(x)?)?));
            }
        }
        "fraction" => {
            let p = need_p(fixed_p)?;
            let j = match merge(args.fraction_index, &section, "fraction-index")? {
                Some(s) => parse_usize(&s, "fraction-index")?,
                None => 0,
            };
            if j >= comp_list.len() {
                return Err(CliError::Usage(format!(
                    "fraction-index {j} out of range for {} phases",
                    comp_list.len()
                )));
            }
            for x in grid {
                let swept = Composition::new(renormalized(&comp_list, j, x)?)?;
                rows.push((x, power_mean(p, &swept, &vals)?));
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "variable must be p, t, or fraction, got '{other}'"
            )));
        }
    }
    write_sweep_csv(std::path::Path::new(&output), &variable, &rows)?;
    Ok(0)
}
