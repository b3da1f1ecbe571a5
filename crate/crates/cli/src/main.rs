use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use deltacert::algebra::Rational;
use deltacert::certify::{certify_range, from_json_lines, markdown_summary, to_json_lines};
use deltacert::delta::{flag_report, s_of_family};
use deltacert::family::{build_sn, default_epsilon, Model};
use deltacert::link::{b2_link, classify_smale, genus_branch_curve, SmaleType, Torsion, WeightedHypersurface};
use deltacert::surface::LogDelPezzo;
use deltacert::zariski::{decompose_family, ZariskiFamily};

#[derive(Parser)]
#[command(name = "deltacert", version)]
#[command(about = "Exact certification of delta-invariant bounds for the surfaces S_n with boundary W/2")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Base,
    Enlarged,
    Blowup,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Base => Model::Base,
            ModelArg::Enlarged => Model::Enlarged,
            ModelArg::Blowup => Model::Blowup,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify delta > 1 for every n in a range
    Certify {
        /// Inclusive range `A..B`, or a single value
        #[arg(long, value_parser = parse_range)]
        n: (i64, i64),
        /// Worker threads; 1 runs serially, 0 uses every core
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Slack in the coefficient bounds, as `p/q`
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        /// Write reports here instead of standard output (JSON also gets a `.md` summary)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Upper limit for n
        #[arg(long, env = "DELTACERT_MAX_N", default_value_t = 1000)]
        max_n: i64,
    },
    /// Invariants of a surface described in JSON, or of a built-in model
    Surface {
        /// Surface description file
        file: Option<PathBuf>,
        /// Built-in model of S_n instead of a file
        #[arg(long, conflicts_with = "file")]
        sn: Option<i64>,
        #[arg(long, value_enum, default_value_t = ModelArg::Base, requires = "sn")]
        model: ModelArg,
        /// Flag `CURVE:POINT` to bound (repeatable)
        #[arg(long = "flag")]
        flags: Vec<String>,
        /// Print the surface description and stop
        #[arg(long)]
        export: bool,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Smale type of the link for a given n
    Link {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Render JSON-lines certification reports as Markdown
    Report {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let r = Rational::from_str(s).map_err(|e| e.to_string())?;
    if !r.is_positive() {
        return Err(format!("epsilon must be positive, got {r}"));
    }
    Ok(r)
}

/// Failure of the certification itself, as opposed to a usage or I/O error.
struct Uncertified;

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn cmd_certify(
    (lo, hi): (i64, i64),
    jobs: usize,
    epsilon: Option<Rational>,
    out: Option<PathBuf>,
    format: Format,
    max_n: i64,
) -> Result<Result<(), Uncertified>> {
    if lo < 2 {
        bail!("n = {lo} is outside the family range n >= 2");
    }
    if lo > hi {
        bail!("empty range {lo}..{hi}");
    }
    if hi > max_n {
        bail!("n = {hi} exceeds the configured maximum {max_n} (DELTACERT_MAX_N)");
    }
    let epsilon = epsilon.unwrap_or_else(default_epsilon);
    let jobs = if jobs == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        jobs
    };
    let ns: Vec<i64> = (lo..=hi).collect();
    info!("certifying n = {lo}..{hi} with {jobs} job(s), epsilon = {epsilon}");
    let start = Instant::now();
    let reports = certify_range(&ns, &epsilon, jobs)?;
    info!("{} reports in {:.2?}", reports.len(), start.elapsed());

    match format {
        Format::Json => {
            emit(out.as_deref(), &to_json_lines(&reports))?;
            if let Some(path) = &out {
                let md = path.with_extension("md");
                fs::write(&md, markdown_summary(&reports)).with_context(|| format!("writing {}", md.display()))?;
            }
        }
        Format::Md => emit(out.as_deref(), &markdown_summary(&reports))?,
    }
    let failed: Vec<u64> = reports
        .iter()
        .filter(|r| !r.verdict.is_certified())
        .map(|r| r.n)
        .collect();
    if failed.is_empty() {
        info!("all {} values certified", reports.len());
        Ok(Ok(()))
    } else {
        log::warn!("{} value(s) not certified, first n = {}", failed.len(), failed[0]);
        Ok(Err(Uncertified))
    }
}

fn load_surface(file: Option<&Path>, sn: Option<i64>, model: ModelArg) -> Result<LogDelPezzo> {
    let surface = match (file, sn) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            LogDelPezzo::from_json(&text).with_context(|| format!("loading {}", path.display()))?
        }
        (None, Some(n)) => build_sn(n)?.model(model.into()).clone(),
        (None, None) => bail!("give a surface file or --sn N"),
    };
    let problems = surface.validate();
    if !problems.is_empty() {
        bail!("invalid surface {}: {}", surface.name, problems.join("; "));
    }
    Ok(surface)
}

fn family_json(surface: &LogDelPezzo, family: &ZariskiFamily) -> serde_json::Value {
    let lattice = &surface.lattice;
    let segments: Vec<_> = family
        .segments
        .iter()
        .map(|seg| {
            let named = |polys: &[deltacert::algebra::Poly]| -> serde_json::Map<String, serde_json::Value> {
                polys
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(i, p)| (lattice.name(i).to_string(), json!(p.coeffs())))
                    .collect()
            };
            json!({
                "lo": seg.lo,
                "hi": seg.hi,
                "support": seg.support.iter().map(|&i| lattice.name(i)).collect::<Vec<_>>(),
                "negative": named(&seg.negative),
            })
        })
        .collect();
    json!({ "tau": family.tau, "segments": segments })
}

fn cmd_surface(
    file: Option<PathBuf>,
    sn: Option<i64>,
    model: ModelArg,
    flags: Vec<String>,
    export: bool,
    format: Format,
) -> Result<()> {
    let surface = load_surface(file.as_deref(), sn, model)?;
    if export {
        return emit(None, &(surface.to_json() + "\n"));
    }

    let mut curves = Vec::new();
    let mut md = format!("# {}\n\nA^2 = {}\n\n", surface.name, surface.volume_a2().to_markdown());
    md.push_str("| curve | tau | S | breakpoints | negative part on last segment |\n|---|---|---|---|---|\n");
    for c in surface.lattice.curves() {
        let entry = match decompose_family(&surface, &c.name) {
            Ok(family) => {
                let s = s_of_family(&surface, &family)?;
                let breaks: Vec<String> = family.breakpoints().iter().map(|b| b.to_markdown()).collect();
                let last = family.segments.last().map(|seg| {
                    seg.negative
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| !p.is_zero())
                        .map(|(i, p)| format!("({p}) {}", surface.lattice.name(i)))
                        .collect::<Vec<_>>()
                        .join(" + ")
                });
                let _ = writeln!(
                    md,
                    "| {} | {} | {} | {} | {} |",
                    c.name,
                    family.tau.to_markdown(),
                    s.to_markdown(),
                    breaks.join(", "),
                    last.filter(|s| !s.is_empty()).unwrap_or_else(|| "0".to_string())
                );
                json!({ "curve": c.name, "s": s, "family": family_json(&surface, &family) })
            }
            Err(e) => {
                let _ = writeln!(md, "| {} | - | - | - | {e} |", c.name);
                json!({ "curve": c.name, "error": e.to_string() })
            }
        };
        curves.push(entry);
    }

    let mut reports = Vec::new();
    if !flags.is_empty() {
        md.push_str("\n| flag | S(C) | S(W^C;p) | A | delta bound |\n|---|---|---|---|---|\n");
    }
    for spec in &flags {
        let (curve, point) = spec
            .split_once(':')
            .ok_or_else(|| anyhow!("flag {spec:?} is not of the form CURVE:POINT"))?;
        let family = decompose_family(&surface, curve)?;
        let p = surface.point(curve, point)?;
        let r = flag_report(&surface, &family, p)?;
        let _ = writeln!(
            md,
            "| {curve}:{point} | {} | {} | {} | {} |",
            r.s_curve.to_markdown(),
            r.s_flag.to_markdown(),
            r.a_log.to_markdown(),
            r.delta_bound.to_markdown()
        );
        reports.push(r);
    }

    match format {
        Format::Json => {
            let value = json!({ "name": surface.name, "a2": surface.volume_a2(), "curves": curves, "flags": reports });
            emit(None, &(serde_json::to_string_pretty(&value)? + "\n"))
        }
        Format::Md => emit(None, &md),
    }
}

fn smale_md(n: i64, smale: &SmaleType, genus: u64) -> String {
    format!(
        "{}\n\n| n | genus | b2 | torsion |\n|---|---|---|---|\n| {n} | {genus} | {} | {} |\n",
        smale.label, smale.b2, smale.torsion
    )
}

fn cmd_link(n: i64, format: Format) -> Result<()> {
    if n < 1 {
        bail!("n = {n}: the link is defined for n >= 1");
    }
    let genus = genus_branch_curve(n as u64);
    let smale = if n == 1 {
        let h = WeightedHypersurface::family(1);
        let smale = SmaleType::new(
            b2_link(&h.weights, h.degree)?,
            Torsion::new(h.branch_multiplicity, genus),
        );
        eprintln!("note: n = 1 lies outside the certified family n >= 2; shown for reference");
        smale
    } else {
        classify_smale(n)?
    };
    match format {
        Format::Json => emit(
            None,
            &(serde_json::to_string(&json!({ "n": n, "genus": genus, "smale": smale }))? + "\n"),
        ),
        Format::Md => emit(None, &smale_md(n, &smale, genus)),
    }
}

fn cmd_report(file: &Path, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let reports = from_json_lines(&text).with_context(|| format!("parsing {}", file.display()))?;
    emit(out, &markdown_summary(&reports))
}

fn run(cli: Cli) -> Result<Result<(), Uncertified>> {
    match cli.cmd {
        Command::Certify {
            n,
            jobs,
            epsilon,
            out,
            format,
            max_n,
        } => cmd_certify(n, jobs, epsilon, out, format, max_n),
        Command::Surface {
            file,
            sn,
            model,
            flags,
            export,
            format,
        } => cmd_surface(file, sn, model, flags, export, format).map(Ok),
        Command::Link { n, format } => cmd_link(n, format).map(Ok),
        Command::Report { file, out } => cmd_report(&file, out.as_deref()).map(Ok),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Uncertified)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
