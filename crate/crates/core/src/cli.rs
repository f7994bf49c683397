//! The `gnum` command line: loads a system, runs one experiment and writes
//! plain text, CSV or JSON.
//!
//! Exit codes: 0 success, 1 failed verification or I/O error, 2 invalid
//! input, 3 budget exceeded or `s` outside the half-plane of convergence,
//! 64 usage error.

use crate::analytic::{
    boundary_probe, cosine_criterion, density_constant, density_defect, geometric_ladder, l1_defect, BetaTermSpec,
    BoundKind, Comparator, CosineTerm, CosineTermSpec, DefectOptions, EvidenceRule, LogZeta, ProbeRegion,
    TailModel, ZetaMethod, ZetaOptions,
};
use crate::error::{GnumError, Result};
use crate::grid::MellinPoint;
use crate::harness;
use crate::semigroup::{budget_from_env, enumerate_with_budget, n_count, CountMethod};
use crate::summatory::{decay_report, summatory, wobble, GridSpec, Weight};
use crate::systems::{pi0_value, PrimeSystem, BUILTIN_NAMES};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "gnum", version, about = "Numerical laboratory for Beurling generalized number systems")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SystemArg {
    /// `builtin:NAME[:key=value,...]`, `primes:2,3,5`, or a JSON definition file.
    #[arg(long)]
    pub system: String,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid spacing in u = log x.
    #[arg(long, default_value_t = 1.0 / 256.0)]
    pub h: f64,
    /// Grid extent in u.
    #[arg(long = "u-max", default_value_t = 40.0)]
    pub u_max: f64,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    /// First rung of the ratio-2 ladder in u.
    #[arg(long = "ladder-start", default_value_t = 1.25)]
    pub start: f64,
    /// Number of rungs.
    #[arg(long, default_value_t = 6)]
    pub rungs: usize,
    /// Increment ratio required by the convergence rule.
    #[arg(long, default_value_t = 0.5)]
    pub factor: f64,
}

impl LadderArgs {
    fn ladder(&self) -> Vec<f64> {
        geometric_ladder(self.start, self.rungs)
    }

    fn rule(&self) -> EvidenceRule {
        EvidenceRule { factor: self.factor, ..EvidenceRule::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DefectKind {
    L1,
    Density,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the builtin systems, or describe one.
    Systems {
        #[arg(long)]
        system: Option<String>,
    },
    /// Generalized integers up to X with Ω, μ, λ and their factorization.
    Integers {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        x: f64,
    },
    /// N(x): exact for discrete systems, from the grid otherwise.
    Count {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// π(x) (discrete systems) alongside Π and Π₀.
    Pi {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// Π(x) alongside Π₀.
    #[command(name = "Pi")]
    BigPi {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// ζ(s) for Re s > 1.
    Zeta {
        #[command(flatten)]
        system: SystemArg,
        /// Points such as `2`, `1.5+4i`; repeat or separate with `;`.
        #[arg(long, value_delimiter = ';', required = true, allow_hyphen_values = true)]
        s: Vec<MellinPoint>,
        #[arg(long, value_enum, default_value_t = ZetaMethod::Auto)]
        method: ZetaMethod,
        /// Enumeration cutoff in x.
        #[arg(long, default_value_t = 1e6)]
        cutoff: f64,
        #[arg(long, default_value_t = std::f64::consts::LN_2 / 64.0)]
        h: f64,
        #[arg(long = "u-max", default_value_t = 60.0)]
        u_max: f64,
    },
    /// The density constant a = exp J(1), with L¹ convergence evidence.
    Density {
        #[command(flatten)]
        system: SystemArg,
        /// Log-cutoff U for J(1).
        #[arg(long = "U", default_value_t = 40.0)]
        u: f64,
        #[arg(long, value_enum, default_value_t = TailModel::Pi0)]
        tail: TailModel,
        #[command(flatten)]
        ladder: LadderArgs,
    },
    /// Partial defect integrals on a ratio-2 ladder with a verdict.
    Defect {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, value_enum, default_value_t = DefectKind::L1)]
        kind: DefectKind,
        #[arg(long, value_enum, default_value_t = Comparator::Pi0)]
        comparator: Comparator,
        /// Density constant for `--kind density` (default: computed).
        #[arg(long)]
        a: Option<f64>,
        #[command(flatten)]
        ladder: LadderArgs,
        /// Grid spacing for N in the density defect.
        #[arg(long, default_value_t = 1.0 / 256.0)]
        h: f64,
    },
    /// The cosine-term criterion `b (1+t²)^{1/2} cos(y + arctan t) < 2`.
    Criteria {
        /// Terms `b:t:y`, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        terms: String,
        /// Use the absolute-value form.
        #[arg(long)]
        strengthened: bool,
    },
    /// Samples log|ζ| against `Σ β_n log|σ-1+i(t-t_n)|` near Re s = 1.
    Probe {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        /// Terms `t:beta`, comma separated.
        #[arg(long = "beta-terms", default_value = "", allow_hyphen_values = true)]
        beta_terms: String,
        #[arg(long, value_enum, default_value_t = BoundKind::Upper)]
        kind: BoundKind,
        #[arg(long = "sigma-min", default_value_t = 1.001)]
        sigma_min: f64,
        #[arg(long = "sigma-max", default_value_t = 2.0)]
        sigma_max: f64,
        #[arg(long = "t-min", default_value_t = 0.5)]
        t_min: f64,
        #[arg(long = "t-max", default_value_t = 10.0)]
        t_max: f64,
        #[arg(long = "sigma-steps", default_value_t = 200)]
        sigma_steps: usize,
        #[arg(long = "t-steps", default_value_t = 400)]
        t_steps: usize,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        h: f64,
        #[arg(long = "u-max", default_value_t = 40.0)]
        u_max: f64,
    },
    /// m(x) on a ladder uniform in log x, with a decay verdict.
    Mobius(SummatoryArgs),
    /// ℓ(x) on a ladder uniform in log x, with a decay verdict.
    Liouville(SummatoryArgs),
    /// Extremes of N(x)/x over a window in log x.
    Wobble {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = std::f64::consts::LN_2 / 512.0)]
        h: f64,
        #[arg(long, default_value_t = 20.0)]
        lo: f64,
        #[arg(long, default_value_t = 45.0)]
        hi: f64,
    },
    /// Runs the bundled checks for one example (or `all`).
    VerifyPaper {
        example: String,
        /// Directory for CSV plot data.
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SummatoryArgs {
    #[command(flatten)]
    system: SystemArg,
    #[arg(long = "u-from", default_value_t = 0.0)]
    u_from: f64,
    #[arg(long = "u-to", default_value_t = 13.8)]
    u_to: f64,
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Grid spacing for continuous systems.
    #[arg(long, default_value_t = 1.0 / 256.0)]
    h: f64,
    /// Late sup must fall below this fraction of the early sup to count as decay.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let mut warnings = Vec::new();
    match execute(&cli, &mut warnings) {
        Ok(outcome) => {
            for w in &warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            if let Err(e) = emit(&cli, &outcome.text, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILED;
            }
            for (name, contents) in &outcome.artifacts {
                if let Err(e) = std::fs::write(name, contents) {
                    let _ = writeln!(err, "error: writing {}: {e}", name.display());
                    return EXIT_FAILED;
                }
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    }
}

struct Outcome {
    text: String,
    code: i32,
    artifacts: Vec<(PathBuf, String)>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: EXIT_OK, artifacts: Vec::new() }
    }
}

fn load(arg: &SystemArg) -> Result<PrimeSystem> {
    PrimeSystem::from_source(&arg.system)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Header plus rows, comma separated.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn execute(cli: &Cli, warnings: &mut Vec<String>) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Systems { system } => systems(fmt, system.as_deref()),
        Command::Integers { system, x } => integers(fmt, &load(system)?, *x),
        Command::Count { system, x, grid } => {
            let sys = load(system)?;
            let r = n_count(&sys, *x, grid.h, grid.u_max)?;
            let method = match r.method {
                CountMethod::Exact => "exact",
                CountMethod::Grid { .. } => "grid",
            };
            Ok(Outcome::ok(match fmt {
                Format::Text => format!("{}\n", r.value),
                Format::Csv => table(&["x", "N", "method"], &[vec![x.to_string(), r.value.to_string(), method.into()]]),
                Format::Json => pretty(&json!({ "x": x, "value": r.value, "method": method })),
            }))
        }
        Command::Pi { system, x } => pi_table(fmt, &load(system)?, x, true),
        Command::BigPi { system, x } => pi_table(fmt, &load(system)?, x, false),
        Command::Zeta { system, s, method, cutoff, h, u_max } => {
            let sys = load(system)?;
            let opts = ZetaOptions { method: *method, cutoff: *cutoff, h: *h, u_max: *u_max };
            let mut rows = Vec::new();
            let mut objs = Vec::new();
            for &p in s {
                let z = crate::analytic::zeta(&sys, p, &opts)?;
                rows.push(vec![
                    p.sigma.to_string(),
                    p.t.to_string(),
                    z.value.re.to_string(),
                    z.value.im.to_string(),
                    z.tail.to_string(),
                ]);
                objs.push(json!({ "s": { "sigma": p.sigma, "t": p.t }, "re": z.value.re, "im": z.value.im,
                                  "log_re": z.log_value.re, "log_im": z.log_value.im, "tail": z.tail, "method": z.method }));
            }
            Ok(Outcome::ok(match fmt {
                Format::Text => rows.iter().map(|r| format!("{}{:+}i\n", r[2], r[3].parse::<f64>().unwrap_or(0.0))).collect(),
                Format::Csv => table(&["sigma", "t", "re", "im", "tail"], &rows),
                Format::Json => pretty(&json!(objs)),
            }))
        }
        Command::Density { system, u, tail, ladder } => {
            let sys = load(system)?;
            let d = density_constant(&sys, *u, *tail, Some(&ladder.ladder()))?;
            if !d.reliable {
                warnings.push("the L1 defect does not show convergence evidence; the density constant is unreliable".into());
            }
            Ok(Outcome::ok(match fmt {
                Format::Text => format!("{}\n", d.value),
                Format::Csv => table(
                    &["a", "log_a", "tail", "evidence", "reliable"],
                    &[vec![
                        d.value.to_string(),
                        d.log_value.to_string(),
                        d.tail.to_string(),
                        d.evidence.map(|v| format!("{v:?}").to_lowercase()).unwrap_or_default(),
                        d.reliable.to_string(),
                    ]],
                ),
                Format::Json => pretty(&json!(d)),
            }))
        }
        Command::Defect { system, kind, comparator, a, ladder, h } => {
            let sys = load(system)?;
            let opts = DefectOptions { h: *h, rule: ladder.rule(), ..DefectOptions::default() };
            let rungs = ladder.ladder();
            let result = match kind {
                DefectKind::L1 => l1_defect(&sys, *comparator, &rungs, &opts)?,
                DefectKind::Density => {
                    let a = match a {
                        Some(a) => *a,
                        None => density_constant(&sys, 40.0, TailModel::Pi0, None)?.value,
                    };
                    density_defect(&sys, a, &rungs, &opts)?
                }
            };
            let rows: Vec<Vec<String>> =
                result.points.iter().map(|p| vec![p.u.to_string(), p.value.to_string()]).collect();
            Ok(Outcome::ok(match fmt {
                Format::Text => {
                    let mut s = table(&["U", "partial"], &rows);
                    let _ = writeln!(s, "# verdict: {:?}", result.verdict);
                    s
                }
                Format::Csv => table(&["U", "partial"], &rows),
                Format::Json => pretty(&json!(result)),
            }))
        }
        Command::Criteria { terms, strengthened } => {
            let spec = CosineTermSpec::new(parse_cosine_terms(terms)?)?;
            let r = cosine_criterion(&spec, *strengthened);
            let rows: Vec<Vec<String>> = spec
                .terms
                .iter()
                .zip(&r.values)
                .map(|(t, c)| vec![t.b.to_string(), t.t.to_string(), t.y.to_string(), c.to_string(), (*c < 2.0).to_string()])
                .collect();
            let code = if r.pass { EXIT_OK } else { EXIT_FAILED };
            let text = match fmt {
                Format::Text => format!("{}\n", if r.pass { "pass" } else { "fail" }),
                Format::Csv => table(&["b", "t", "y", "c", "below_two"], &rows),
                Format::Json => pretty(&json!(r)),
            };
            Ok(Outcome { text, code, artifacts: Vec::new() })
        }
        Command::Probe {
            system,
            eta,
            beta_terms,
            kind,
            sigma_min,
            sigma_max,
            t_min,
            t_max,
            sigma_steps,
            t_steps,
            h,
            u_max,
        } => {
            let sys = load(system)?;
            let spec = BetaTermSpec::new(*eta, BetaTermSpec::parse_terms(beta_terms)?, *kind)?;
            let lz = LogZeta::new(&sys, *h, *u_max)?;
            let region = ProbeRegion::new((*sigma_min, *sigma_max), (*t_min, *t_max)).with_steps(*sigma_steps, *t_steps);
            let r = boundary_probe(&lz, &spec, &region)?;
            Ok(Outcome::ok(match fmt {
                Format::Text => format!("{} at sigma = {}, t = {}\n", r.extremum, r.at_sigma, r.at_t),
                Format::Csv => {
                    let rows: Vec<Vec<String>> =
                        r.samples.iter().map(|(s, t, q)| vec![s.to_string(), t.to_string(), q.to_string()]).collect();
                    table(&["sigma", "t", "q"], &rows)
                }
                Format::Json => pretty(&json!(r)),
            }))
        }
        Command::Mobius(args) => summatory_cmd(fmt, args, Weight::Mobius),
        Command::Liouville(args) => summatory_cmd(fmt, args, Weight::Liouville),
        Command::Wobble { system, h, lo, hi } => {
            let sys = load(system)?;
            let build = sys.to_grid_report(*h, *hi)?;
            if build.misaligned_atoms > 0 {
                warnings.push(format!(
                    "{} atoms sit more than h/4 from their node (largest offset {:.3e})",
                    build.misaligned_atoms, build.max_misalignment
                ));
            }
            let r = wobble(&sys, GridSpec::new(*h, *hi), *lo, *hi)?;
            Ok(Outcome::ok(match fmt {
                Format::Text => format!("min {} at u = {}\nmax {} at u = {}\n", r.min, r.argmin, r.max, r.argmax),
                Format::Csv => {
                    let rows: Vec<Vec<String>> =
                        r.samples.iter().map(|(u, l, v)| vec![u.to_string(), l.to_string(), v.to_string()]).collect();
                    table(&["u", "n_over_x_left", "n_over_x"], &rows)
                }
                Format::Json => pretty(&json!(r)),
            }))
        }
        Command::VerifyPaper { example, out_dir } => {
            let report = harness::run(example)?;
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.criterion.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
                        c.name.clone(),
                        if c.pass { "PASS".into() } else { "FAIL".into() },
                        c.detail.clone(),
                    ]
                })
                .collect();
            let text = match fmt {
                Format::Text => {
                    let mut s = String::new();
                    for r in &rows {
                        let _ = writeln!(s, "[{:>2}] {:<4} {} ({})", r[0], r[2], r[1], r[3]);
                    }
                    s
                }
                Format::Csv => {
                    let quoted: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| r.iter().map(|f| format!("\"{}\"", f.replace('"', "\"\""))).collect())
                        .collect();
                    table(&["criterion", "check", "result", "detail"], &quoted)
                }
                Format::Json => pretty(&json!({ "example": example, "pass": report.all_pass(), "checks": report.checks })),
            };
            let artifacts = match out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| GnumError::Domain(format!("cannot create {}: {e}", dir.display())))?;
                    report.artifacts.iter().map(|(name, csv)| (dir.join(name), csv.clone())).collect()
                }
                None => Vec::new(),
            };
            let code = if report.all_pass() { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome { text, code, artifacts })
        }
    }
}

fn systems(fmt: Format, source: Option<&str>) -> Result<Outcome> {
    let describe = |sys: &PrimeSystem| -> serde_json::Value {
        match sys {
            PrimeSystem::Discrete(d) => json!({
                "label": d.label(), "kind": "discrete", "primes": d.primes().len(),
                "complete_to": if d.complete_to().is_finite() { json!(d.complete_to()) } else { json!(null) },
            }),
            PrimeSystem::Continuous(c) => json!({ "label": c.label(), "kind": "continuous" }),
        }
    };
    let list: Vec<serde_json::Value> = match source {
        Some(src) => vec![describe(&PrimeSystem::from_source(src)?)],
        None => BUILTIN_NAMES
            .iter()
            .map(|name| describe(&crate::systems::builtin(name).expect("every listed builtin builds")))
            .collect(),
    };
    let rows: Vec<Vec<String>> = list
        .iter()
        .map(|v| {
            vec![
                v["label"].as_str().unwrap_or_default().to_string(),
                v["kind"].as_str().unwrap_or_default().to_string(),
                v.get("primes").map(|p| p.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Outcome::ok(match fmt {
        Format::Text | Format::Csv => table(&["label", "kind", "primes"], &rows),
        Format::Json => pretty(&json!(list)),
    }))
}

fn integers(fmt: Format, sys: &PrimeSystem, x: f64) -> Result<Outcome> {
    let mut rows = Vec::new();
    for g in enumerate_with_budget(sys, x, budget_from_env())? {
        let g = g?;
        rows.push(vec![
            g.value.to_string(),
            g.omega().to_string(),
            g.mu().to_string(),
            g.lambda().to_string(),
            g.exponent_string(),
        ]);
    }
    Ok(Outcome::ok(match fmt {
        Format::Text | Format::Csv => table(&["value", "Omega", "mu", "lambda", "exponents"], &rows),
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|r| json!({ "value": r[0].parse::<f64>().unwrap_or(f64::NAN), "Omega": r[1].parse::<u32>().unwrap_or(0),
                             "mu": r[2].parse::<i32>().unwrap_or(0), "lambda": r[3].parse::<i32>().unwrap_or(0), "exponents": r[4] }))
            .collect::<Vec<_>>())),
    }))
}

fn pi_table(fmt: Format, sys: &PrimeSystem, xs: &[f64], small: bool) -> Result<Outcome> {
    let mut rows = Vec::new();
    for &x in xs {
        let pi = match sys {
            PrimeSystem::Discrete(_) => Some(sys.pi_count(x)?),
            PrimeSystem::Continuous(_) => None,
        };
        if small && pi.is_none() {
            return Err(GnumError::Unsupported("π(x) is defined for discrete systems only; use `Pi`".into()));
        }
        rows.push((x, pi, sys.big_pi(x)?, pi0_value(x.max(1.0))?));
    }
    Ok(Outcome::ok(match fmt {
        Format::Text => rows
            .iter()
            .map(|(_, pi, big, _)| format!("{}\n", if small { pi.unwrap_or(f64::NAN) } else { *big }))
            .collect(),
        Format::Csv => table(
            &["x", "pi", "Pi", "Pi0"],
            &rows
                .iter()
                .map(|(x, pi, big, p0)| vec![x.to_string(), pi.map(|v| v.to_string()).unwrap_or_default(), big.to_string(), p0.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|(x, pi, big, p0)| json!({ "x": x, "pi": pi, "Pi": big, "Pi0": p0 }))
            .collect::<Vec<_>>())),
    }))
}

fn summatory_cmd(fmt: Format, args: &SummatoryArgs, weight: Weight) -> Result<Outcome> {
    let sys = load(&args.system)?;
    if !(args.u_to > args.u_from && args.u_from >= 0.0 && args.points >= 2) {
        return Err(GnumError::Domain("need 0 <= u-from < u-to and at least two points".into()));
    }
    let us: Vec<f64> = (0..args.points)
        .map(|i| args.u_from + (args.u_to - args.u_from) * i as f64 / (args.points - 1) as f64)
        .collect();
    let xs: Vec<f64> = us.iter().map(|u| u.exp()).collect();
    let grid = GridSpec::new(args.h, args.u_to + args.h);
    let r = summatory(&sys, weight, &xs, grid)?;
    let samples: Vec<(f64, f64)> = us.iter().copied().zip(r.values.iter().copied()).collect();
    let mid = 0.5 * (args.u_from + args.u_to);
    let decay = decay_report(&samples, (args.u_from, mid), (mid, args.u_to), args.threshold);
    let column = match weight {
        Weight::Mobius => "m",
        Weight::Liouville => "l",
    };
    Ok(Outcome::ok(match fmt {
        Format::Text | Format::Csv => table(
            &["x", column],
            &xs.iter().zip(&r.values).map(|(x, v)| vec![x.to_string(), v.to_string()]).collect::<Vec<_>>(),
        ),
        Format::Json => pretty(&json!({ "decays": decay.decays, "sup_tail": decay.sup_tail, "sup_early": decay.sup_early,
                                        "ratio": decay.ratio, "ladder": r })),
    }))
}

/// Parses `"b:t:y,b:t:y"`.
pub fn parse_cosine_terms(text: &str) -> Result<Vec<CosineTerm>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            let fields: Vec<&str> = part.split(':').collect();
            if fields.len() != 3 {
                return Err(GnumError::InvalidSpec(format!("expected b:t:y, got `{part}`")));
            }
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| GnumError::InvalidSpec(format!("not a number: `{v}`")));
            Ok(CosineTerm { b: num(fields[0])?, t: num(fields[1])?, y: num(fields[2])? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("gnum").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn count_rational() {
        let (code, out, _) = run_args(&["count", "--system", "builtin:rational", "--x", "100"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "100");
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["count", "--x", "10"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn validation_and_domain_exit_codes() {
        assert_eq!(run_args(&["count", "--system", "primes:3,2", "--x", "10"]).0, 2);
        assert_eq!(run_args(&["zeta", "--system", "primes:2,3", "--s", "0.5"]).0, 3);
        assert_eq!(run_args(&["count", "--system", "builtin:nope", "--x", "10"]).0, 2);
    }

    #[test]
    fn zeta_text_and_json() {
        let (code, out, _) = run_args(&["zeta", "--system", "primes:2,3", "--s", "2"]);
        assert_eq!(code, 0);
        let value: f64 = out.trim().trim_end_matches('i').split('+').next().unwrap().parse().unwrap();
        assert!((value - 1.5).abs() < 1e-3);
        let (_, out, _) = run_args(&["--format", "json", "zeta", "--system", "primes:2,3", "--s", "2;3"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
    }

    #[test]
    fn criteria_reports_value() {
        let (code, out, _) = run_args(&["--format", "csv", "criteria", "--terms", "0.7071067811865476:1:-0.7853981633974483"]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        let c: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!((c - 1.0).abs() < 1e-9);
        assert_eq!(run_args(&["criteria", "--terms", "2:1:-0.7853981633974483"]).0, EXIT_FAILED);
    }

    #[test]
    fn integers_csv() {
        let (code, out, _) = run_args(&["--format", "csv", "integers", "--system", "primes:2,3", "--x", "6"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "value,Omega,mu,lambda,exponents");
        assert_eq!(lines.len(), 6);
        assert!(lines[5].starts_with("6,2,1,1,"));
    }
}
