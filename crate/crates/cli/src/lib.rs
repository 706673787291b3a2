//! Front-end plumbing for the `circlesplit` binary: polynomial file
//! parsing, job configuration, and command execution.
//!
//! Input format: one coefficient per line in ascending degree, each line
//! holding `re im` as decimal strings. `#` starts a comment, blank lines
//! are skipped. All reported numerics are decimal strings so output never
//! depends on binary float formatting.

use circlesplit::num::{decimal_string, float_from_decimal};
use circlesplit::{fact, mod_k, mod_max, mod_min, nrd, roots, Limits, Poly, Precision};
use circlesplit::{BigComplex, Error as NumError};
use rug::Float;
use serde::Serialize;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Factor,
    Roots,
    Count,
    ModMax,
    ModMin,
    ModK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Command,
    /// Relative factorization tolerance, or the log-tolerance `tau` for
    /// the count/modulus commands. Decimal string, `0 < eps < 1`.
    pub eps: String,
    pub precision_bits: u32,
    /// Disk radius (count command only), decimal string.
    pub disk_radius: Option<String>,
    /// Modulus index (modk command only).
    pub k_index: Option<usize>,
    /// Input path, or `-` for stdin.
    pub input_path: String,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input file; carries the 1-based line number.
    Parse { line: usize, msg: String },
    /// Bad flags or unusable values.
    Usage(String),
    Io(String),
    /// Numerical failure from the factorization engine.
    Numeric(NumError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        match e {
            NumError::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    /// Exit code policy: 1 for usage/parse problems, 2 for numerical
    /// failures (precision exhausted, split failed).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => 2,
            _ => 1,
        }
    }
}

/// Parses the documented text format into a polynomial at
/// `precision_bits`, round to nearest.
pub fn parse_poly(text: &str, precision_bits: u32) -> Result<Poly, CliError> {
    let prec = Precision::new(precision_bits);
    let mut coeffs: Vec<BigComplex> = Vec::new();
    let mut last_nonblank = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (re_s, im_s) = match (parts.next(), parts.next(), parts.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: format!("expected `re im`, got `{line}`"),
                })
            }
        };
        let re = float_from_decimal(prec, re_s).ok_or_else(|| CliError::Parse {
            line: line_no,
            msg: format!("bad decimal `{re_s}`"),
        })?;
        let im = float_from_decimal(prec, im_s).ok_or_else(|| CliError::Parse {
            line: line_no,
            msg: format!("bad decimal `{im_s}`"),
        })?;
        coeffs.push(BigComplex::from_parts(re, im));
        last_nonblank = line_no;
    }
    if coeffs.is_empty() {
        return Err(CliError::Parse {
            line: 1,
            msg: "no coefficients".into(),
        });
    }
    if coeffs.last().is_some_and(|c| c.is_zero()) {
        return Err(CliError::Parse {
            line: last_nonblank,
            msg: "leading coefficient is zero".into(),
        });
    }
    Ok(Poly::from_coeffs(coeffs))
}

#[derive(Serialize)]
struct RootsOut {
    degree: isize,
    eps: String,
    roots: Vec<ComplexOut>,
    residual: String,
    precision_bits: u32,
}

#[derive(Serialize)]
struct FactorsOut {
    degree: isize,
    eps: String,
    factors: Vec<Vec<ComplexOut>>,
    residual: String,
    precision_bits: u32,
}

#[derive(Serialize)]
struct ComplexOut {
    re: String,
    im: String,
}

#[derive(Serialize)]
struct CountOut {
    degree: isize,
    radius: String,
    tau: String,
    count: usize,
    precision_bits: u32,
}

#[derive(Serialize)]
struct ModulusOut {
    degree: isize,
    tau: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    value: String,
    precision_bits: u32,
}

fn complex_out(z: &BigComplex) -> ComplexOut {
    ComplexOut {
        re: decimal_string(z.re()),
        im: decimal_string(z.im()),
    }
}

/// Executes a job; returns the process exit code (0 success, 1 usage or
/// parse error, 2 numerical failure).
pub fn run(config: &JobConfig) -> i32 {
    match execute(config) {
        Ok(rendered) => match write_output(config, &rendered) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("circlesplit: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("circlesplit: {e}");
            e.exit_code()
        }
    }
}

fn write_output(config: &JobConfig, rendered: &str) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => {
            fs::write(path, rendered).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn execute(config: &JobConfig) -> Result<String, CliError> {
    if config.precision_bits < 53 {
        return Err(CliError::Usage("--bits must be at least 53".into()));
    }
    let prec = Precision::new(config.precision_bits);
    let eps = float_from_decimal(prec, &config.eps)
        .ok_or_else(|| CliError::Usage(format!("bad --eps `{}`", config.eps)))?;
    if !(eps.is_finite() && eps.is_sign_positive() && !eps.is_zero() && eps < 1u32) {
        return Err(CliError::Usage("--eps must satisfy 0 < eps < 1".into()));
    }

    let text = read_input(&config.input_path)?;
    let poly = parse_poly(&text, config.precision_bits)?;
    let limits = Limits::default();
    let degree = poly.degree();

    match config.command {
        Command::Factor | Command::Roots => {
            if degree < 1 {
                return Err(CliError::Parse {
                    line: 1,
                    msg: format!("degree {degree} polynomial cannot be factored"),
                });
            }
        }
        _ => {
            if degree < 1 {
                return Err(CliError::Usage(
                    "modulus queries need a polynomial of degree >= 1".into(),
                ));
            }
        }
    }

    match config.command {
        Command::Roots => {
            let out = roots(&poly, &eps, &limits)?;
            let payload = RootsOut {
                degree,
                eps: config.eps.clone(),
                roots: out.roots.iter().map(complex_out).collect(),
                residual: decimal_string(&out.residual),
                precision_bits: config.precision_bits,
            };
            Ok(match config.format {
                Format::Json => to_json(&payload),
                Format::Text => {
                    let mut s = String::new();
                    s.push_str(&format!("# degree: {degree}\n"));
                    s.push_str(&format!("# eps: {}\n", config.eps));
                    s.push_str(&format!("# residual: {}\n", payload.residual));
                    for r in &payload.roots {
                        s.push_str(&format!("{} {}\n", r.re, r.im));
                    }
                    s
                }
            })
        }
        Command::Factor => {
            let list = fact(&poly, &eps, &limits)?;
            let payload = FactorsOut {
                degree,
                eps: config.eps.clone(),
                factors: list
                    .factors
                    .iter()
                    .map(|f| f.coeffs().iter().map(complex_out).collect())
                    .collect(),
                residual: decimal_string(&list.residual),
                precision_bits: config.precision_bits,
            };
            Ok(match config.format {
                Format::Json => to_json(&payload),
                Format::Text => {
                    let mut s = String::new();
                    s.push_str(&format!("# degree: {degree}\n"));
                    s.push_str(&format!("# eps: {}\n", config.eps));
                    s.push_str(&format!("# residual: {}\n", payload.residual));
                    for f in &payload.factors {
                        let coeffs: Vec<String> =
                            f.iter().map(|c| format!("({}, {})", c.re, c.im)).collect();
                        s.push_str(&format!("factor: {}\n", coeffs.join(" ")));
                    }
                    s
                }
            })
        }
        Command::Count => {
            let radius_s = config
                .disk_radius
                .as_deref()
                .ok_or_else(|| CliError::Usage("count needs --radius".into()))?;
            let radius = float_from_decimal(prec, radius_s)
                .ok_or_else(|| CliError::Usage(format!("bad --radius `{radius_s}`")))?;
            if !(radius.is_finite() && radius.is_sign_positive() && !radius.is_zero()) {
                return Err(CliError::Usage("--radius must be positive".into()));
            }
            let tau = parse_tau(&config.eps)?;
            let count = nrd(&poly, &radius, tau, &limits)?;
            let payload = CountOut {
                degree,
                radius: radius_s.to_string(),
                tau: config.eps.clone(),
                count,
                precision_bits: config.precision_bits,
            };
            Ok(match config.format {
                Format::Json => to_json(&payload),
                Format::Text => format!("{count}\n"),
            })
        }
        Command::ModMax | Command::ModMin | Command::ModK => {
            let tau = parse_tau(&config.eps)?;
            let (est, k) = match config.command {
                Command::ModMax => (mod_max(&poly, tau, &limits)?, None),
                Command::ModMin => (mod_min(&poly, tau, &limits)?, None),
                _ => {
                    let k = config
                        .k_index
                        .ok_or_else(|| CliError::Usage("modk needs --k".into()))?;
                    (mod_k(&poly, k, tau, &limits)?, Some(k))
                }
            };
            let payload = ModulusOut {
                degree,
                tau: config.eps.clone(),
                k,
                value: decimal_string(&est.value),
                precision_bits: config.precision_bits,
            };
            Ok(match config.format {
                Format::Json => to_json(&payload),
                Format::Text => format!("{}\n", payload.value),
            })
        }
    }
}

fn parse_tau(text: &str) -> Result<f64, CliError> {
    let parsed = float_from_decimal(Precision::new(64), text)
        .ok_or_else(|| CliError::Usage(format!("bad tolerance `{text}`")))?;
    let tau = parsed.to_f64();
    if !(tau > 0.0 && tau < 1.0) {
        return Err(CliError::Usage(
            "tolerance must satisfy 0 < eps < 1".into(),
        ));
    }
    Ok(tau)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Rebuilds a float for tests or downstream tooling; mirrors
/// [`parse_poly`]'s number handling.
pub fn parse_decimal(text: &str, precision_bits: u32) -> Option<Float> {
    float_from_decimal(Precision::new(precision_bits), text)
}
