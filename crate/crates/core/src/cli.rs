//! Command-line front end. Every subcommand writes one JSON document (or CSV
//! where a table makes sense) to `--out` or standard output.
//!
//! Exit codes: 0 on success, 1 when arguments fail validation, 2 when the
//! computation itself reports an error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::density::{
    attracting_density_scan, bound_consistency_check, certify_full_symmetric, chebotarev_scan,
    find_common_good_prime,
};
use crate::exactpoly::{
    disc_recursion_check, eisenstein_tower, eisenstein_tower_check, format_rational, parse_rational, ExactPoly,
};
use crate::newton::{
    audit_specialization, check_getting_sd_conditions, construct_specialization, newton_polygon, predicted_segments,
    LemmaHypotheses,
};
use crate::wreath::{fpp_table, monte_carlo_fpp, tree_shape};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

/// Named polynomials accepted by `--poly`.
pub const NAMED_POLYNOMIALS: &[(&str, &str)] = &[("x3+5", "5,0,0,1"), ("x2+1", "1,0,1")];

#[derive(Debug, Parser)]
#[command(name = "critorbit", version, about = "Critical orbits, iterated preimages and prime scans")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PolyArg {
    /// Comma-separated rationals, constant term first, or a named example
    /// (`x3+5`, `x2+1`).
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of primes where some critical point is periodic.
    DensityScan {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        bound: u64,
        /// Break the counts down by residue class of the prime.
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Root frequency of the level-m critical preimage polynomial mod p.
    ChebScan {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also run the density scan and compare the two.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Fixed-point proportions of iterated wreath products.
    Fpp {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u32,
        /// Monte Carlo sample count at depth n (seeded by --seed).
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Discriminant of f and the iterate recursion at level n.
    DiscCheck {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Newton polygon of f at p.
    Newton {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Valuation hypotheses for x^d - b x^m - x0 at p.
    Hypotheses {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Build the specialization for (d, p, q) and audit it.
    Construct {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Eisenstein check along the tower F_1, ..., F_n.
    EisensteinTower {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        /// Include the tower polynomials themselves.
        #[arg(long)]
        polynomials: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Frobenius evidence that the Galois group of f is S_d.
    CertifySd {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest prime good for every map with no periodic critical point.
    CommonPrime {
        /// Repeat for each map.
        #[arg(long = "poly", allow_hyphen_values = true, required = true)]
        polys: Vec<String>,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Level sizes of the critical-point preimage tree.
    TreeShape {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Computation(String),
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Validation(format!("invalid value for --{field}: {msg}"))
}

fn computation(e: impl std::fmt::Display) -> Failure {
    Failure::Computation(e.to_string())
}

/// Parses `--poly`: a named example or a coefficient list.
pub fn parse_poly_spec(spec: &str) -> Result<ExactPoly, String> {
    let spec = spec.trim();
    let list = NAMED_POLYNOMIALS
        .iter()
        .find(|(name, _)| *name == spec)
        .map_or(spec, |(_, list)| list);
    let f = ExactPoly::parse_list(list).map_err(|e| e.to_string())?;
    if f.is_zero() {
        return Err("zero polynomial".into());
    }
    Ok(f)
}

fn poly(spec: &str) -> Result<ExactPoly, Failure> {
    parse_poly_spec(spec).map_err(|e| invalid("poly", e))
}

fn prime(field: &str, p: u64) -> Result<u64, Failure> {
    if primal::is_prime(p) {
        Ok(p)
    } else {
        Err(invalid(field, format!("{p} is not prime")))
    }
}

fn rational(field: &str, s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(|e| invalid(field, e))
}

fn workers(w: usize) -> Result<usize, Failure> {
    if w == 0 {
        return Err(invalid("workers", "must be at least 1"));
    }
    Ok(w)
}

enum Rendered {
    Json(serde_json::Value),
    Csv(String),
}

fn to_json<T: Serialize>(v: &T) -> Result<Rendered, Failure> {
    serde_json::to_value(v).map(Rendered::Json).map_err(computation)
}

fn json_only(format: Format, cmd: &str) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(invalid("format", format!("csv is not available for {cmd}"))),
    }
}

fn execute(command: Command) -> Result<(Rendered, Output), Failure> {
    match command {
        Command::DensityScan { poly: p, bound, modulus, workers: w, output } => {
            let f = poly(&p.poly)?;
            let w = workers(w)?;
            if modulus == Some(0) {
                return Err(invalid("modulus", "must be at least 1"));
            }
            let scan = attracting_density_scan(&f, bound, w, modulus).map_err(computation)?;
            let r = match output.format {
                Format::Json => to_json(&scan.report)?,
                Format::Csv => Rendered::Csv(scan.records_csv()),
            };
            Ok((r, output))
        }
        Command::ChebScan { poly: p, m, bound, workers: w, compare, output } => {
            let f = poly(&p.poly)?;
            let w = workers(w)?;
            if compare && output.format == Format::Csv {
                return Err(invalid("format", "csv is not available with --compare"));
            }
            let cheb = chebotarev_scan(&f, m, bound, w).map_err(computation)?;
            let r = match (output.format, compare) {
                (Format::Csv, _) => Rendered::Csv(cheb.records_csv()),
                (Format::Json, false) => to_json(&cheb.report)?,
                (Format::Json, true) => {
                    let density = attracting_density_scan(&f, bound, w, None).map_err(computation)?;
                    let consistent = bound_consistency_check(&density.report, &cheb.report);
                    Rendered::Json(json!({
                        "chebotarev": cheb.report,
                        "density": density.report,
                        "consistent": consistent,
                    }))
                }
            };
            Ok((r, output))
        }
        Command::Fpp { d, n, samples, seed, output } => {
            if !(2..=12).contains(&d) {
                return Err(invalid("d", "must lie in 2..=12"));
            }
            if let Some(s) = samples {
                json_only(output.format, "fpp --samples")?;
                if !(2..=6).contains(&d) || n > 8 {
                    return Err(invalid("samples", "sampling needs d <= 6 and n <= 8"));
                }
                let est = monte_carlo_fpp(d, n, s, seed).map_err(computation)?;
                return Ok((to_json(&est)?, output));
            }
            let table = fpp_table(d, n).map_err(computation)?;
            let r = match output.format {
                Format::Json => to_json(&table)?,
                Format::Csv => Rendered::Csv(table.to_csv()),
            };
            Ok((r, output))
        }
        Command::DiscCheck { poly: p, alpha, n, output } => {
            json_only(output.format, "disc-check")?;
            let f = poly(&p.poly)?;
            let alpha = rational("alpha", &alpha)?;
            if f.degree() < 2 || !f.is_monic() {
                return Err(invalid("poly", "must be monic of degree at least 2"));
            }
            let disc = f.discriminant().map_err(computation)?;
            let rec = disc_recursion_check(&f, &alpha, n as usize).map_err(computation)?;
            Ok((
                Rendered::Json(json!({
                    "f": f.to_string(),
                    "coefficients": f,
                    "alpha": format_rational(&alpha),
                    "n": n,
                    "discriminant": disc,
                    "recursion": rec,
                })),
                output,
            ))
        }
        Command::Newton { poly: p, p: pr, output } => {
            json_only(output.format, "newton")?;
            let f = poly(&p.poly)?;
            let pr = prime("p", pr)?;
            let polygon = newton_polygon(&f, pr).map_err(computation)?;
            Ok((to_json(&polygon)?, output))
        }
        Command::Hypotheses { d, m, b, x0, p, output } => {
            json_only(output.format, "hypotheses")?;
            let h = LemmaHypotheses {
                d,
                m,
                b: rational("b", &b)?,
                x0: rational("x0", &x0)?,
                p: prime("p", p)?,
            };
            let report = h.check();
            let predicted = predicted_segments(&h, h.v_x0())
                .ok()
                .map(|segs| {
                    segs.iter()
                        .map(|s| [*s.slope.numer(), *s.slope.denom(), s.length as i64])
                        .collect::<Vec<_>>()
                });
            Ok((
                Rendered::Json(json!({
                    "polynomial": h.polynomial(),
                    "report": report,
                    "sd_conditions": check_getting_sd_conditions(d, m),
                    "predicted_segments": predicted,
                })),
                output,
            ))
        }
        Command::Construct { d, p, q, output } => {
            json_only(output.format, "construct")?;
            let (p, q) = (prime("p", p)?, prime("q", q)?);
            let s = construct_specialization(d, p, q).map_err(computation)?;
            let audit = audit_specialization(&s).map_err(computation)?;
            let polygon = newton_polygon(&s.f, s.p).map_err(computation)?;
            Ok((
                Rendered::Json(json!({
                    "specialization": s,
                    "newton_polygon": polygon,
                    "audit": audit,
                })),
                output,
            ))
        }
        Command::EisensteinTower { d, n, p, polynomials, output } => {
            json_only(output.format, "eisenstein-tower")?;
            let p = prime("p", p)?;
            let levels = eisenstein_tower_check(d, n as usize, p).map_err(computation)?;
            let mut doc = json!({ "d": d, "n": n, "prime": p, "levels": levels });
            if polynomials {
                let tower = eisenstein_tower(d, n as usize, p).map_err(computation)?;
                doc["polynomials"] = serde_json::to_value(&tower).map_err(computation)?;
            }
            Ok((Rendered::Json(doc), output))
        }
        Command::CertifySd { poly: p, bound, output } => {
            json_only(output.format, "certify-sd")?;
            let f = poly(&p.poly)?;
            Ok((to_json(&certify_full_symmetric(&f, bound))?, output))
        }
        Command::CommonPrime { polys, bound, output } => {
            json_only(output.format, "common-prime")?;
            let maps = polys.iter().map(|s| poly(s)).collect::<Result<Vec<_>, _>>()?;
            let found = find_common_good_prime(&maps, bound).map_err(computation)?;
            Ok((to_json(&found)?, output))
        }
        Command::TreeShape { d, n, output } => {
            let shape = tree_shape(d, n).map_err(computation)?;
            let r = match output.format {
                Format::Json => to_json(&shape)?,
                Format::Csv => {
                    let mut s = String::from("level,size\n");
                    for (i, k) in shape.level_sizes.iter().enumerate() {
                        s.push_str(&format!("{i},{k}\n"));
                    }
                    Rendered::Csv(s)
                }
            };
            Ok((r, output))
        }
    }
}

fn emit(rendered: Rendered, output: &Output, stdout: &mut dyn Write) -> Result<(), Failure> {
    let text = match rendered {
        Rendered::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v).map_err(computation)?;
            s.push('\n');
            s
        }
        Rendered::Csv(s) => s,
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Computation(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Computation(e.to_string())),
    }
}

/// Runs the CLI on `argv` (program name first) with explicit streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = execute(config.command).and_then(|(rendered, output)| emit(rendered, &output, stdout));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_VALIDATION
        }
        Err(Failure::Computation(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_COMPUTATION
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
