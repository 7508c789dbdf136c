//! Command-line front end. Every subcommand writes a CSV table with a header
//! row or a JSON document; numbers are printed round-trip exact.
//!
//! Exit codes: 0 on success, 2 when a reported verdict fails, 1 on usage or
//! evaluation errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{bounds_report, phi_envelope};
use crate::chaos::{default_dominance_grid, dominance_margin, law_of_polynomial, malliavin_g, HermiteSeries};
use crate::error::{Error, Result};
use crate::format::{real, real_json};
use crate::pearson::{classify, PearsonCoefficients, PearsonLaw};
use crate::stein::solve_indicator;
use crate::verify::{law_slope, mode_grid, run_scenario, slope_target, ScenarioSpec, SlopeMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "stein-pearson",
    version,
    about = "Pearson laws, Stein solutions and tail certificates"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive grid `a:b:n` of n evenly spaced points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    spec: String,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }
}

impl std::str::FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("grid '{s}' is not of the form a:b:n"));
        };
        let lo: f64 = a.parse().map_err(|_| format!("bad grid start '{a}'"))?;
        let hi: f64 = b.parse().map_err(|_| format!("bad grid end '{b}'"))?;
        let n: usize = n.parse().map_err(|_| format!("bad grid count '{n}'"))?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() || (n > 1 && !(hi > lo)) {
            return Err(format!("grid '{s}' needs finite a < b and n >= 1"));
        }
        Ok(Grid {
            lo,
            hi,
            n,
            spec: s.to_string(),
        })
    }
}

/// Reference law, from coefficients or from a file written by `law`.
#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "law_file")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "law_file")]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "law_file")]
    pub gamma: Option<f64>,
    /// JSON emitted by the `law` subcommand.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "gamma"])]
    pub law_file: Option<PathBuf>,
}

impl LawArgs {
    fn coefficients(&self) -> Result<PearsonCoefficients> {
        if let Some(path) = &self.law_file {
            let text =
                fs::read_to_string(path).map_err(|e| Error::InvalidScenario(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidScenario(e.to_string()))?;
            return Ok(PearsonLaw::from_json(&v)?.coefficients());
        }
        PearsonCoefficients::new(
            self.alpha.unwrap_or_default(),
            self.beta.unwrap_or_default(),
            self.gamma.unwrap_or_default(),
        )
    }

    fn law(&self) -> Result<PearsonLaw> {
        PearsonLaw::new(&self.coefficients()?)
    }
}

/// A single point or a grid.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Points {
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
}

impl Points {
    fn values(&self) -> Vec<f64> {
        match (&self.at, &self.grid) {
            (Some(x), _) => vec![*x],
            (_, Some(g)) => g.points(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymMode {
    Loglog,
    Loglinear,
    Stretched,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Pearson case of (α, β, γ).
    Classify(LawArgs),
    /// Emit the law parameters as JSON.
    Law(LawArgs),
    /// Density ρ∗ at points.
    Density {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        points: Points,
    },
    /// Tail Φ∗(z) = P[Z > z] at points.
    Tail {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        points: Points,
    },
    /// z with Φ∗(z) = p at probabilities.
    Quantile {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        points: Points,
    },
    /// Moments E[Z^m] for m = 0..max-order.
    Moments {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        max_order: u32,
    },
    /// Indicator Stein solution f, f′, residual and derivative certificate.
    Stein {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
    },
    /// Tail envelope g∗ρ∗·x/(x² + Q) .. g∗ρ∗/x around Φ∗.
    Envelope {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
    },
    /// Explicit lower bound and K·Φ∗ upper bound on a z grid.
    Bounds {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        z_grid: Grid,
        #[arg(long, default_value_t = 4.0)]
        c: f64,
        #[arg(long = "K")]
        k: Option<f64>,
    },
    /// G for X = Σ cₙHₙ(N), given as c0,c1,...,cN; with a reference, the
    /// dominance margin of G against g∗(X).
    ChaosG {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["ref_beta", "ref_gamma"])]
        ref_alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["ref_alpha", "ref_gamma"])]
        ref_beta: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["ref_alpha", "ref_beta"])]
        ref_gamma: Option<f64>,
        /// Sample (n, X(n), G(n)) on this N grid.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "density_grid")]
        grid: Option<Grid>,
        /// Sample (x, ρ_X(x), P[X > x]) on this x grid.
        #[arg(long, allow_hyphen_values = true)]
        density_grid: Option<Grid>,
    },
    /// Run a scenario file and print its tail report.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit the tail slope on the exact tail over a grid spaced evenly in the
    /// fit abscissa.
    Asym {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, value_enum)]
        mode: AsymMode,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value = "20:200:50")]
        z_grid: Grid,
    },
}

/// Rendered output plus whether every reported verdict passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn csv<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn table(format: Format, header: &[&str], rows: Vec<Vec<f64>>) -> String {
    match format {
        Format::Csv => csv(header, rows.iter().map(|r| r.iter().map(|&x| real(x)).collect())),
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .zip(r)
                            .map(|(h, &x)| (h.to_string(), real_json(x)))
                            .collect(),
                    )
                })
                .collect();
            json_text(&Value::Array(objs))
        }
    }
}

fn execute(cmd: &Command, format: Format) -> Result<Output> {
    match cmd {
        Command::Classify(l) => {
            let case = classify(&l.coefficients()?)?;
            Ok(Output::ok(match format {
                Format::Csv => format!("{}\n", case.name()),
                Format::Json => json_text(&json!({"case": case.name(), "number": case.number()})),
            }))
        }
        Command::Law(l) => Ok(Output::ok(json_text(&l.law()?.to_json()))),
        Command::Density { law, points } => {
            let law = law.law()?;
            let rows = points.values().into_iter().map(|x| vec![x, law.density(x)]).collect();
            Ok(Output::ok(table(format, &["x", "density"], rows)))
        }
        Command::Tail { law, points } => {
            let law = law.law()?;
            let rows = points.values().into_iter().map(|z| vec![z, law.tail(z)]).collect();
            Ok(Output::ok(table(format, &["z", "tail"], rows)))
        }
        Command::Quantile { law, points } => {
            let law = law.law()?;
            let mut rows = Vec::new();
            for p in points.values() {
                rows.push(vec![p, law.quantile(p)?]);
            }
            Ok(Output::ok(table(format, &["p", "quantile"], rows)))
        }
        Command::Moments { law, max_order } => {
            let c = law.coefficients()?;
            let rows: Vec<(u32, Option<f64>)> = (0..=*max_order).map(|m| (m, c.moment(m).ok())).collect();
            Ok(Output::ok(match format {
                Format::Csv => csv(
                    &["m", "moment", "exists"],
                    rows.iter()
                        .map(|&(m, v)| vec![m.to_string(), real(v.unwrap_or(f64::NAN)), v.is_some().to_string()]),
                ),
                Format::Json => json_text(&Value::Array(
                    rows.iter()
                        .map(|&(m, v)| json!({"m": m, "moment": v.map(real_json), "exists": v.is_some()}))
                        .collect(),
                )),
            }))
        }
        Command::Stein { law, z, grid } => {
            let law = law.law()?;
            let sol = solve_indicator(&law, *z)?;
            let xs = grid.points();
            let cert = sol.certify_fprime(&xs);
            let rows: Vec<Vec<f64>> = xs
                .iter()
                .map(|&x| {
                    let f = sol.f(x);
                    let fp = sol.fprime(x).unwrap_or(f64::NAN);
                    let res = law.g_star(x) * fp - x * f - (sol.h(x) - sol.eh());
                    vec![x, f, fp, res]
                })
                .collect();
            let header = ["x", "f", "fprime", "residual"];
            let text = match format {
                Format::Csv => table(format, &header, rows),
                Format::Json => {
                    let pts: Value = serde_json::from_str(&table(format, &header, rows)).expect("own output");
                    json_text(&json!({"points": pts, "certificate": cert.to_json(&law, grid.spec())}))
                }
            };
            Ok(Output {
                text,
                passed: cert.passed,
            })
        }
        Command::Envelope { law, grid } => {
            let law = law.law()?;
            let mut rows = Vec::new();
            let mut passed = true;
            for x in grid.points() {
                let e = phi_envelope(&law, x)?;
                let t = if e.bounds_cdf { law.cdf(x) } else { law.tail(x) };
                let inside = e.contains(t);
                passed &= inside;
                rows.push(vec![
                    x,
                    e.lower,
                    e.upper,
                    t,
                    f64::from(u8::from(e.bounds_cdf)),
                    f64::from(u8::from(inside)),
                ]);
            }
            let text = table(
                format,
                &["x", "lower", "upper", "value", "bounds_cdf", "contains"],
                rows,
            );
            Ok(Output { text, passed })
        }
        Command::Bounds { law, z_grid, c, k } => {
            let rep = bounds_report(&law.law()?, &z_grid.points(), *c, *k)?;
            let text = match format {
                Format::Csv => rep.to_csv(),
                Format::Json => json_text(&rep.to_json()),
            };
            Ok(Output {
                text,
                passed: rep.passed(),
            })
        }
        Command::ChaosG {
            coeffs,
            ref_alpha,
            ref_beta,
            ref_gamma,
            grid,
            density_grid,
        } => {
            let series = HermiteSeries::new(coeffs.clone())?;
            let g = malliavin_g(&series);
            if let Some(grid) = grid {
                let x = series.polynomial();
                let rows = grid
                    .points()
                    .into_iter()
                    .map(|n| vec![n, x.eval(n), g.eval(n)])
                    .collect();
                return Ok(Output::ok(table(format, &["n", "x", "G"], rows)));
            }
            if let Some(grid) = density_grid {
                let law = law_of_polynomial(&series);
                let rows = grid
                    .points()
                    .into_iter()
                    .map(|x| vec![x, law.density(x), law.tail(x)])
                    .collect();
                return Ok(Output::ok(table(format, &["x", "density", "tail"], rows)));
            }
            let dominance = match (ref_alpha, ref_beta, ref_gamma) {
                (Some(a), Some(b), Some(c)) => Some(dominance_margin(
                    &series,
                    &PearsonCoefficients::new(*a, *b, *c)?,
                    &default_dominance_grid(),
                )?),
                _ => None,
            };
            let text = match format {
                Format::Csv => {
                    let mut s = format!("{g}\n");
                    if let Some(d) = &dominance {
                        s.push_str(&csv(
                            &[
                                "min_margin",
                                "argmin",
                                "max_margin",
                                "argmax",
                                "lower_hypothesis",
                                "upper_hypothesis",
                            ],
                            [vec![
                                real(d.min_margin),
                                real(d.argmin),
                                real(d.max_margin),
                                real(d.argmax),
                                d.lower_hypothesis.to_string(),
                                d.upper_hypothesis.to_string(),
                            ]],
                        ));
                    }
                    s
                }
                Format::Json => {
                    let mut v = json!({
                        "G": g.to_string(),
                        "coefficients": g.coeffs().iter().map(|&c| real_json(c)).collect::<Vec<_>>(),
                        "variance": real_json(series.variance()),
                    });
                    if let Some(d) = &dominance {
                        v["dominance"] = json!({
                            "min_margin": real_json(d.min_margin),
                            "argmin": real_json(d.argmin),
                            "max_margin": real_json(d.max_margin),
                            "argmax": real_json(d.argmax),
                            "quadratic_min_margin": real_json(d.quadratic_min_margin),
                            "lower_hypothesis": d.lower_hypothesis,
                            "upper_hypothesis": d.upper_hypothesis,
                        });
                    }
                    json_text(&v)
                }
            };
            Ok(Output::ok(text))
        }
        Command::Verify { scenario, seed } => {
            let text = fs::read_to_string(scenario)
                .map_err(|e| Error::InvalidScenario(format!("{}: {e}", scenario.display())))?;
            let mut spec = ScenarioSpec::from_json_str(&text)?;
            if let Some(s) = seed {
                spec.seed = *s;
            }
            let rep = run_scenario(&spec)?;
            let text = match format {
                Format::Csv => rep.to_csv(),
                Format::Json => json_text(&rep.to_json()),
            };
            Ok(Output {
                text,
                passed: rep.passed(),
            })
        }
        Command::Asym { law, mode, p, z_grid } => {
            let coeffs = law.coefficients()?;
            let law = PearsonLaw::new(&coeffs)?;
            let mode = match mode {
                AsymMode::Loglog => SlopeMode::LogLog,
                AsymMode::Loglinear => SlopeMode::LogLinear,
                AsymMode::Stretched => SlopeMode::Stretched(*p),
            };
            let grid = mode_grid(z_grid.lo, z_grid.hi, z_grid.n.max(2), mode);
            let slope = law_slope(&law, &grid, mode)?;
            let target = slope_target(&coeffs, mode).unwrap_or(f64::NAN);
            Ok(Output::ok(table(
                format,
                &["slope", "target"],
                vec![vec![slope, target]],
            )))
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the exit code. Output goes to `out` or the `--output` file;
/// diagnostics go to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            // one line: the message up to clap's usage block
            let msg = e.to_string();
            let diag: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
                .collect();
            let _ = writeln!(err, "{}", diag.join(" ").trim_start_matches("error: "));
            return EXIT_USAGE;
        }
    };
    let output = match execute(&cli.command, cli.format) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &output.text),
        None => out.write_all(output.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "cannot write output: {e}");
        return EXIT_USAGE;
    }
    if output.passed {
        EXIT_OK
    } else {
        EXIT_VERDICT
    }
}

/// [`run_with`] on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
