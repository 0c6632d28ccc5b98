//! Batch front end: subcommand dispatch, flat config files, CSV/JSON
//! output with embedded provenance headers.
//!
//! The seed resolves as flag, then `FORMS_LAB_SEED` environment variable,
//! then config file, then default; other keys resolve as flag, then config
//! file. Every output file starts with `#`-prefixed `key = value` lines
//! carrying the fully resolved configuration, so a run can be reproduced
//! from its own output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::divisor;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::fit::{self, PolePair};
use crate::forms::{FormSystem, HomogeneousForm, Term};
use crate::lattice::{self, CountRequest};
use crate::sato::{self, Lct};
use crate::twist::{self, TwistExperiment};
use crate::volume;

/// Exit codes per failure class.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "forms-lab",
    about = "Counting, volume, and singularity experiments for homogeneous forms",
    version
)]
struct CliArgs {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (CSV or JSON depending on the subcommand); stdout if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on parallel threads (default: all logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed override (precedence: flag > FORMS_LAB_SEED > config > 1).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct GeometryArgs {
    /// Form expressions like `x1^2 + x2^2 - x3^2`; repeat for a system.
    #[arg(long = "form")]
    forms: Vec<String>,

    /// Forms as a JSON array of term arrays `[{"exponents": [...], "coeff": c}, ...]`.
    #[arg(long = "form-json")]
    forms_json: Vec<String>,

    /// Domain descriptor: `{"ball": r}`, `{"box": [[lo,hi],...]}` or
    /// `{"polytope": [{"a": [...], "b": b}, ...]}`.
    #[arg(long)]
    domain: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact lattice count of ‖F(m)‖ <= T^(d-alpha) over m in T·K.
    Count {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Dilation values T (comma separated).
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Monte Carlo volume of the sublevel set.
    Volume {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Explicit threshold b overriding T^(d-alpha).
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
        /// Fail (exit 3) when stderr/value exceeds this bound.
        #[arg(long)]
        max_rel_stderr: Option<f64>,
    },
    /// Monte Carlo volume of one hyperplane slice of the sublevel set.
    Slice {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Unit direction v, comma separated.
        #[arg(long, value_delimiter = ',')]
        v: Vec<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Flatness profile M(eps) and fitted exponent q.
    Flatness {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Decreasing eps grid, comma separated.
        #[arg(long, value_delimiter = ',')]
        eps_grid: Vec<f64>,
        #[arg(long)]
        directions: Option<usize>,
        #[arg(long)]
        offsets: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Fit the growth pair (r, m) from a CSV of T,value rows.
    Fit {
        /// Input CSV path with header `T,value`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        alpha: Option<f64>,
        /// Candidate log orders, comma separated (default 1..n).
        #[arg(long, value_delimiter = ',')]
        m_candidates: Vec<u32>,
    },
    /// Count + volume + fit chained into one comparison table.
    Report {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        m_candidates: Vec<u32>,
    },
    /// Bernstein–Sato roots of a monomial or sum of squares.
    Sb {
        /// Monomial exponents, comma separated.
        #[arg(long, value_delimiter = ',')]
        monomial: Vec<u32>,
        /// Number of squared variables.
        #[arg(long)]
        sum_squares: Option<u32>,
    },
    /// Log-canonical threshold of a monomial with weight exponents.
    Lct {
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        /// Weight exponents (default all zero).
        #[arg(long, value_delimiter = ',')]
        h: Vec<u32>,
        /// Real-orthant convention instead of the complex one.
        #[arg(long)]
        real: bool,
    },
    /// Piltz divisor summatory values and main-term comparison.
    Divisor {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Exact counterexample bracket for the product form on the unit cube.
    Bracket {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "T")]
        t: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Random-twist experiments: success curve or band-count series.
    Twist {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// `success` or `series`.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_delimiter = ',')]
        eps_schedule: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        t_grid: Vec<f64>,
        #[arg(long)]
        matrices: Option<usize>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        norm_bound: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
    },
}

/// Resolved key=value configuration embedded into every output.
#[derive(Debug, Default, Clone)]
pub struct ResolvedConfig {
    entries: BTreeMap<String, String>,
}

impl ResolvedConfig {
    fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            writeln!(s, "# {k} = {v}").unwrap();
        }
        s
    }
}

/// Flat `key = value` file, `#` comments allowed.
fn parse_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    parse_config_text(&text)
}

pub(crate) fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

struct Ctx {
    file_config: BTreeMap<String, String>,
    resolved: ResolvedConfig,
    out: Option<PathBuf>,
    seed: u64,
    threads: usize,
}

impl Ctx {
    fn lookup(&self, key: &str) -> Option<&str> {
        self.file_config.get(key).map(|s| s.as_str())
    }

    fn string_opt(&mut self, key: &str, flag: Option<String>) -> Option<String> {
        let v = flag.or_else(|| self.lookup(key).map(|s| s.to_string()));
        if let Some(ref val) = v {
            self.resolved.set(key, val);
        }
        v
    }

    fn parse_or<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: std::str::FromStr + ToString,
    {
        let v = match flag {
            Some(v) => v,
            None => match self.lookup(key) {
                Some(raw) => raw
                    .parse()
                    .map_err(|_| Error::Config(format!("bad value for `{key}`: `{raw}`")))?,
                None => default,
            },
        };
        self.resolved.set(key, v.to_string());
        Ok(v)
    }

    fn list_or<T>(&mut self, key: &str, flag: Vec<T>, default: &[T]) -> Result<Vec<T>>
    where
        T: std::str::FromStr + ToString + Clone,
    {
        let vals: Vec<T> = if !flag.is_empty() {
            flag
        } else if let Some(raw) = self.lookup(key) {
            raw.split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad list entry in `{key}`: `{s}`")))
                })
                .collect::<Result<Vec<T>>>()?
        } else {
            default.to_vec()
        };
        self.resolved.set(
            key,
            vals.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        Ok(vals)
    }

    fn write_output(&self, body: &str, summary: &str) -> Result<()> {
        let mut content = self.resolved.header();
        content.push_str(body);
        match &self.out {
            Some(path) => {
                fs::write(path, content)?;
                println!("{summary} -> {}", path.display());
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
                eprintln!("{summary}");
            }
        }
        Ok(())
    }
}

fn parse_system(ctx: &mut Ctx, geometry: &GeometryArgs) -> Result<FormSystem> {
    let mut forms: Vec<HomogeneousForm> = Vec::new();
    let form_texts: Vec<String> = if !geometry.forms.is_empty() {
        geometry.forms.clone()
    } else if let Some(raw) = ctx.lookup("form") {
        vec![raw.to_string()]
    } else {
        Vec::new()
    };
    for text in &form_texts {
        forms.push(text.parse()?);
    }
    for json in &geometry.forms_json {
        let terms: Vec<Term> = serde_json::from_str(json)?;
        let n = terms
            .first()
            .map(|t| t.exponents.len())
            .ok_or_else(|| Error::input("empty JSON form"))?;
        forms.push(HomogeneousForm::new(n, terms)?);
    }
    if forms.is_empty() {
        return Err(Error::Config("no form given (use --form)".into()));
    }
    if !form_texts.is_empty() {
        ctx.resolved.set("form", form_texts.join(" | "));
    }
    let n = forms.iter().map(|f| f.num_vars()).max().unwrap_or(0);
    FormSystem::new(
        forms
            .into_iter()
            .map(|f| f.widened(n))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn parse_domain(ctx: &mut Ctx, geometry: &GeometryArgs, n: usize) -> Result<Domain> {
    let descriptor = ctx
        .string_opt("domain", geometry.domain.clone())
        .ok_or_else(|| Error::Config("no domain given (use --domain)".into()))?;
    let domain = Domain::from_json(&descriptor, n)?;
    if domain.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: domain.dim(),
        });
    }
    Ok(domain)
}

fn format_float(v: f64) -> String {
    // shortest round-trip representation keeps CSV reproducible
    format!("{v}")
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            // clap handles --help/--version via this path with success status
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Input(_) | Error::Dimension { .. } | Error::Json(_) => {
                    EXIT_CONFIG
                }
                Error::InsufficientData(_) => EXIT_NUMERICAL,
                Error::Overflow(_)
                | Error::SearchBudget { .. }
                | Error::RejectionLimit(_)
                | Error::Io(_) => EXIT_RESOURCE,
            }
        }
    }
}

fn dispatch(args: CliArgs) -> Result<()> {
    let file_config = match &args.config {
        Some(p) => parse_config_file(p)?,
        None => BTreeMap::new(),
    };
    let seed = match args.seed {
        Some(s) => s,
        None => match std::env::var("FORMS_LAB_SEED") {
            Ok(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("bad FORMS_LAB_SEED `{v}`")))?,
            Err(_) => match file_config.get("seed") {
                Some(raw) => raw
                    .parse()
                    .map_err(|_| Error::Config(format!("bad seed `{raw}`")))?,
                None => 1,
            },
        },
    };
    let threads = match args.threads {
        Some(t) => t,
        None => file_config
            .get("threads")
            .map(|raw| {
                raw.parse()
                    .map_err(|_| Error::Config(format!("bad threads `{raw}`")))
            })
            .transpose()?
            .unwrap_or(0),
    };
    let mut ctx = Ctx {
        file_config,
        resolved: ResolvedConfig::default(),
        out: args.out.clone(),
        seed,
        threads,
    };
    ctx.resolved.set("seed", seed);
    if threads > 0 {
        ctx.resolved.set("threads", threads);
    }

    let command = args.command;
    lattice::with_thread_cap(ctx.threads, move || run_command(&mut ctx, command))
}

fn run_command(ctx: &mut Ctx, command: Command) -> Result<()> {
    match command {
        Command::Count { geometry, t, alpha } => {
            ctx.resolved.set("command", "count");
            let system = parse_system(ctx, &geometry)?;
            let domain = parse_domain(ctx, &geometry, system.num_vars())?;
            let alpha = ctx.parse_or("alpha", alpha, 1.0)?;
            let ts = ctx.list_or("t", t, &[])?;
            if ts.is_empty() {
                return Err(Error::Config("no T values given (use --t)".into()));
            }
            let mut body = String::from("T,alpha,count,wall_time_ms\n");
            let mut last = 0u64;
            for &tv in &ts {
                let started = Instant::now();
                let req = CountRequest::new(system.clone(), domain.clone(), tv, alpha)?;
                let count = lattice::count_inequality(&req)?;
                let ms = started.elapsed().as_millis();
                writeln!(
                    body,
                    "{},{},{count},{ms}",
                    format_float(tv),
                    format_float(alpha)
                )
                .unwrap();
                last = count;
            }
            ctx.write_output(
                &body,
                &format!("count: {} T values, last count {last}", ts.len()),
            )
        }
        Command::Volume {
            geometry,
            t,
            alpha,
            threshold,
            samples,
            max_rel_stderr,
        } => {
            ctx.resolved.set("command", "volume");
            let system = parse_system(ctx, &geometry)?;
            let domain = parse_domain(ctx, &geometry, system.num_vars())?;
            let alpha = ctx.parse_or("alpha", alpha, 1.0)?;
            let samples = ctx.parse_or("samples", samples, 1_000_000u64)?;
            let ts = ctx.list_or("t", t, &[])?;
            if ts.is_empty() {
                return Err(Error::Config("no T values given (use --t)".into()));
            }
            if let Some(th) = threshold {
                ctx.resolved.set("threshold", th);
            }
            let mut body = String::from("T,value,stderr,n_samples,seed\n");
            let mut worst_rel = 0.0f64;
            for (i, &tv) in ts.iter().enumerate() {
                let est = match threshold {
                    Some(b) => volume::volume_sublevel_threshold(
                        &system,
                        &domain,
                        tv,
                        b,
                        samples,
                        volume::derive_seed(ctx.seed, i as u64),
                    )?,
                    None => volume::volume_sublevel(
                        &system,
                        &domain,
                        tv,
                        alpha,
                        samples,
                        volume::derive_seed(ctx.seed, i as u64),
                    )?,
                };
                if est.value > 0.0 {
                    worst_rel = worst_rel.max(est.stderr / est.value);
                }
                writeln!(
                    body,
                    "{},{},{},{},{}",
                    format_float(tv),
                    format_float(est.value),
                    format_float(est.stderr),
                    est.n_samples,
                    est.seed
                )
                .unwrap();
            }
            if let Some(bound) = max_rel_stderr {
                ctx.resolved.set("max_rel_stderr", bound);
                if worst_rel > bound {
                    return Err(Error::InsufficientData(format!(
                        "relative stderr {worst_rel:.3e} exceeds target {bound:.3e}"
                    )));
                }
            }
            ctx.write_output(&body, &format!("volume: {} T values", ts.len()))
        }
        Command::Slice {
            geometry,
            v,
            sigma,
            eps,
            samples,
        } => {
            ctx.resolved.set("command", "slice");
            let system = parse_system(ctx, &geometry)?;
            let domain = parse_domain(ctx, &geometry, system.num_vars())?;
            let v = ctx.list_or("v", v, &[])?;
            if v.is_empty() {
                return Err(Error::Config("no direction given (use --v)".into()));
            }
            let sigma = ctx.parse_or("sigma", sigma, 0.0)?;
            let eps = ctx.parse_or("eps", eps, 0.1)?;
            let samples = ctx.parse_or("samples", samples, 100_000u64)?;
            let est = volume::slice_volume(&system, &domain, &v, sigma, eps, samples, ctx.seed)?;
            let mut body = String::from("value,stderr,n_samples,seed\n");
            writeln!(
                body,
                "{},{},{},{}",
                format_float(est.value),
                format_float(est.stderr),
                est.n_samples,
                est.seed
            )
            .unwrap();
            ctx.write_output(
                &body,
                &format!("slice volume {:.6} +- {:.2e}", est.value, est.stderr),
            )
        }
        Command::Flatness {
            geometry,
            eps_grid,
            directions,
            offsets,
            samples,
        } => {
            ctx.resolved.set("command", "flatness");
            let system = parse_system(ctx, &geometry)?;
            let domain = parse_domain(ctx, &geometry, system.num_vars())?;
            let default_grid = volume::geometric_eps_grid(0.1, 8);
            let eps_grid = ctx.list_or("eps_grid", eps_grid, &default_grid)?;
            let directions = ctx.parse_or("directions", directions, 16usize)?;
            let offsets = ctx.parse_or("offsets", offsets, 9usize)?;
            let samples = ctx.parse_or("samples", samples, 20_000u64)?;
            let profile = volume::flatness_profile(
                &system, &domain, &eps_grid, directions, offsets, samples, ctx.seed,
            )?;
            let exponent = volume::flatness_exponent(&profile)?;
            let mut body = String::from("eps,m_value,stderr,n_samples,seed\n");
            for (e, m) in profile.eps_grid.iter().zip(&profile.m_values) {
                writeln!(
                    body,
                    "{},{},{},{},{}",
                    format_float(*e),
                    format_float(m.value),
                    format_float(m.stderr),
                    m.n_samples,
                    m.seed
                )
                .unwrap();
            }
            writeln!(body, "# q_hat = {}", format_float(exponent.q_hat)).unwrap();
            writeln!(body, "# halfwidth = {}", format_float(exponent.halfwidth)).unwrap();
            writeln!(
                body,
                "# pointwise_ratio = {}",
                format_float(exponent.pointwise_ratio)
            )
            .unwrap();
            writeln!(body, "# oscillation_flag = {}", exponent.oscillation_flag).unwrap();
            ctx.write_output(
                &body,
                &format!(
                    "flatness: q_hat = {:.4} +- {:.4}{}",
                    exponent.q_hat,
                    exponent.halfwidth,
                    if exponent.oscillation_flag {
                        " (oscillation flagged)"
                    } else {
                        ""
                    }
                ),
            )
        }
        Command::Fit {
            data,
            n,
            d,
            alpha,
            m_candidates,
        } => {
            ctx.resolved.set("command", "fit");
            ctx.resolved.set("data", data.display());
            ctx.resolved.set("n", n);
            ctx.resolved.set("d", d);
            let alpha = ctx.parse_or("alpha", alpha, 1.0)?;
            let default_ms: Vec<u32> = (1..=n as u32).collect();
            let ms = ctx.list_or("m_candidates", m_candidates, &default_ms)?;
            let samples = read_t_value_csv(&data)?;
            let fit = fit::fit_volume_growth(&samples, n, d, alpha, &ms)?;
            let body = serde_json::to_string_pretty(&fit)? + "\n";
            ctx.write_output(
                &body,
                &format!("fit: gamma={:.4} r={:.4} m={}", fit.gamma, fit.r, fit.m),
            )
        }
        Command::Report {
            geometry,
            t,
            alpha,
            samples,
            m_candidates,
        } => {
            ctx.resolved.set("command", "report");
            let system = parse_system(ctx, &geometry)?;
            let domain = parse_domain(ctx, &geometry, system.num_vars())?;
            let alpha = ctx.parse_or("alpha", alpha, 1.0)?;
            let samples = ctx.parse_or("samples", samples, 1_000_000u64)?;
            let ts = ctx.list_or("t", t, &[])?;
            if ts.is_empty() {
                return Err(Error::Config("no T grid given (use --t)".into()));
            }
            let n = system.num_vars();
            let default_ms: Vec<u32> = (1..=n as u32).collect();
            let ms = ctx.list_or("m_candidates", m_candidates, &default_ms)?;

            let mut body = String::from("T,count,volume,vol_stderr,ratio\n");
            let mut vol_samples: Vec<(f64, f64)> = Vec::new();
            for (i, &tv) in ts.iter().enumerate() {
                let req = CountRequest::new(system.clone(), domain.clone(), tv, alpha)?;
                let count = lattice::count_inequality(&req)?;
                let est = volume::volume_sublevel(
                    &system,
                    &domain,
                    tv,
                    alpha,
                    samples,
                    volume::derive_seed(ctx.seed, i as u64),
                )?;
                let ratio = count as f64 / est.value;
                vol_samples.push((tv, est.value));
                writeln!(
                    body,
                    "{},{count},{},{},{}",
                    format_float(tv),
                    format_float(est.value),
                    format_float(est.stderr),
                    format_float(ratio)
                )
                .unwrap();
            }
            let fit = fit::fit_volume_growth(&vol_samples, n, system.degree(), alpha, &ms)?;
            writeln!(body, "# fit = {}", serde_json::to_string(&fit)?).unwrap();
            ctx.write_output(
                &body,
                &format!(
                    "report: fitted gamma={:.4} (r, m)=({:.4}, {})",
                    fit.gamma, fit.r, fit.m
                ),
            )
        }
        Command::Sb {
            monomial,
            sum_squares,
        } => {
            ctx.resolved.set("command", "sb");
            let roots = if !monomial.is_empty() {
                ctx.resolved.set(
                    "monomial",
                    monomial
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                );
                sato::sb_monomial(&monomial)?
            } else if let Some(n) = sum_squares {
                ctx.resolved.set("sum_squares", n);
                sato::sb_sum_of_squares(n)?
            } else if let Some(raw) = ctx.lookup("monomial").map(|s| s.to_string()) {
                let ks: Vec<u32> = raw
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::Config(format!("bad exponent `{s}`")))
                    })
                    .collect::<Result<_>>()?;
                ctx.resolved.set("monomial", raw);
                sato::sb_monomial(&ks)?
            } else {
                return Err(Error::Config(
                    "need --monomial k1,k2,... or --sum-squares n".into(),
                ));
            };
            let json = serde_json::json!({
                "roots": roots
                    .roots()
                    .iter()
                    .map(|(r, m)| serde_json::json!({
                        "num": r.numer(),
                        "den": r.denom(),
                        "mult": m,
                    }))
                    .collect::<Vec<_>>(),
            });
            let body = serde_json::to_string_pretty(&json)? + "\n";
            ctx.write_output(
                &body,
                &format!("sb: {} distinct roots", roots.roots().len()),
            )
        }
        Command::Lct { k, h, real } => {
            ctx.resolved.set("command", "lct");
            if k.is_empty() {
                return Err(Error::Config("need --k exponents".into()));
            }
            let h = if h.is_empty() { vec![0; k.len()] } else { h };
            ctx.resolved.set(
                "k",
                k.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            ctx.resolved.set(
                "h",
                h.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            ctx.resolved.set("real", real);
            let lct = if real {
                sato::lct_monomial_real(&k, &h)?
            } else {
                sato::lct_monomial_complex(&k, &h)?
            };
            let json = match lct {
                Lct::Finite { r, m } => serde_json::json!({
                    "r": {"num": r.numer(), "den": r.denom()},
                    "m": m,
                }),
                Lct::Infinite => serde_json::json!({"infinite": true}),
            };
            let body = serde_json::to_string_pretty(&json)? + "\n";
            let summary = match lct {
                Lct::Finite { r, m } => format!("lct: ({r}, {m})"),
                Lct::Infinite => "lct: infinite".to_string(),
            };
            ctx.write_output(&body, &summary)
        }
        Command::Divisor { n, t } => {
            ctx.resolved.set("command", "divisor");
            ctx.resolved.set("n", n);
            let ts = ctx.list_or("t", t, &[])?;
            if ts.is_empty() {
                return Err(Error::Config("no t values given (use --t)".into()));
            }
            let mut body = String::from("n,t,delta,main_term,error\n");
            for &tv in &ts {
                let delta = divisor::divisor_summatory(n, tv)?;
                let (main, err) = if n == 2 || n == 3 {
                    let main = tv * divisor::q_poly_eval(n, tv.ln())?;
                    (format_float(main), format_float(delta as f64 - main))
                } else {
                    (String::from(""), String::from(""))
                };
                writeln!(body, "{n},{},{delta},{main},{err}", format_float(tv)).unwrap();
            }
            ctx.write_output(&body, &format!("divisor: {} values", ts.len()))
        }
        Command::Bracket { n, t, alpha } => {
            ctx.resolved.set("command", "bracket");
            let n = ctx.parse_or("n", n, 2u32)?;
            let t = ctx.parse_or("T", t, 10u64)?;
            let alpha = ctx.parse_or("alpha", alpha, 1.0)?;
            let check = divisor::counterexample_bracket(n, t, alpha)?;
            let mut body = String::from("n,T,alpha,count,divisor_term,bracket,upper,holds\n");
            writeln!(
                body,
                "{n},{t},{},{},{},{},{},{}",
                format_float(alpha),
                check.count,
                check.divisor_term,
                check.bracket,
                check.upper,
                check.holds
            )
            .unwrap();
            ctx.write_output(
                &body,
                &format!(
                    "bracket: holds={}, bracket={}, upper={}",
                    check.holds, check.bracket, check.upper
                ),
            )
        }
        Command::Twist {
            geometry,
            mode,
            eps_schedule,
            t_grid,
            matrices,
            kappa,
            delta,
            norm_bound,
            r,
            m,
            a,
            b,
        } => {
            ctx.resolved.set("command", "twist");
            let system = parse_system(ctx, &geometry)?;
            let mode = ctx
                .string_opt("mode", mode)
                .unwrap_or_else(|| "success".to_string());
            let r = ctx.parse_or("r", r, 1.0)?;
            let m = ctx.parse_or("m", m, 1u32)?;
            let pair = PolePair::new(r, m)?;
            match mode.as_str() {
                "success" => {
                    let default_schedule = [0.5, 0.35, 0.25, 0.17, 0.12];
                    let eps_schedule =
                        ctx.list_or("eps_schedule", eps_schedule, &default_schedule)?;
                    let matrices = ctx.parse_or("matrices", matrices, 50usize)?;
                    let kappa = ctx.parse_or("kappa", kappa, 10.0)?;
                    let delta = ctx.parse_or("delta", delta, 0.2)?;
                    let norm_bound = ctx.parse_or("norm_bound", norm_bound, 3.0)?;
                    let exp = TwistExperiment::new(
                        system,
                        pair,
                        eps_schedule,
                        matrices,
                        kappa,
                        delta,
                        norm_bound,
                        ctx.seed,
                    )?;
                    let curve = twist::success_curve(&exp, exp.trial_exponent()?)?;
                    let mut body = String::from("eps,successes,total,wilson_lo,wilson_hi\n");
                    for p in &curve {
                        writeln!(
                            body,
                            "{},{},{},{},{}",
                            format_float(p.eps),
                            p.successes,
                            p.total,
                            format_float(p.wilson_lo),
                            format_float(p.wilson_hi)
                        )
                        .unwrap();
                    }
                    let last = curve.last().expect("nonempty schedule");
                    ctx.write_output(
                        &body,
                        &format!(
                            "twist success: fraction {:.3} at eps {}",
                            last.fraction, last.eps
                        ),
                    )
                }
                "series" => {
                    let t_grid = ctx.list_or("t_grid", t_grid, &[20.0, 40.0, 80.0, 160.0])?;
                    let a = ctx.parse_or("a", a, 0.0)?;
                    let b = ctx.parse_or("b", b, 1.0)?;
                    let norm_bound = ctx.parse_or("norm_bound", norm_bound, 3.0)?;
                    let g = twist::sample_unimodular(system.num_vars(), ctx.seed, norm_bound)?;
                    let rows = twist::twisted_count_series(&system, &g, a, b, &t_grid, &pair)?;
                    let mut body = String::from("T,count,normalized\n");
                    for row in &rows {
                        writeln!(
                            body,
                            "{},{},{}",
                            format_float(row.t),
                            row.count,
                            format_float(row.normalized)
                        )
                        .unwrap();
                    }
                    let last = rows.last().expect("nonempty grid");
                    ctx.write_output(
                        &body,
                        &format!(
                            "twist series: normalized {:.4} at T {}",
                            last.normalized, last.t
                        ),
                    )
                }
                other => Err(Error::Config(format!(
                    "twist mode must be `success` or `series`, got `{other}`"
                ))),
            }
        }
    }
}

fn read_t_value_csv(path: &PathBuf) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',');
        let a = parts.next().unwrap_or("");
        let b = parts.next().unwrap_or("");
        if a.eq_ignore_ascii_case("t") {
            continue; // header
        }
        let t: f64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad T `{a}`")))?;
        let v: f64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad value `{b}`")))?;
        out.push((t, v));
    }
    Ok(out)
}
