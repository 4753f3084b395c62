use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fatoulab_cli::config::Config;
use fatoulab_cli::render::{self, Coloring, MapFamily, RenderJob, Viewport};
use fatoulab_cli::{suite, thread_count, thread_pool, ReportBundle};
use fatoulab_core::cf::{classical_cf_value, expand_cf, BrjunoLedger, CfDocument, ModifiedCF};
use fatoulab_core::dynamics::{orbit, MapKind, MapSpec};
use fatoulab_core::prec::to_c64;
use num_complex::Complex64;
use rug::{Float, Integer};

#[derive(Parser)]
#[command(name = "fatoulab", version, about = "Near-parabolic renormalization laboratory")]
struct Cli {
    /// Worker threads (capped by FATOULAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nearest-integer continued fraction of α as JSON.
    Cf(CfArgs),
    /// Brjuno partial sums and the product sequence of α as JSON.
    Brjuno(CfArgs),
    /// Dump an orbit as CSV or JSON.
    Orbit(OrbitArgs),
    /// Escape-time render of the filled Julia set.
    RenderJulia(JuliaArgs),
    /// Density render of the critical orbit of the quadratic map.
    RenderPc(PcArgs),
    /// Semiconjugacy, near-translation and Abel reports for one map.
    FatouCheck(CheckArgs),
    /// Renormalization rotation and return-time report for one map.
    RenormCheck(CheckArgs),
    /// Run the verification suite and write a report bundle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AlphaArgs {
    /// Rotation number as a decimal, read at the working precision.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Partial quotients "a0,a1,..." (positive signs).
    #[arg(long = "cf", value_name = "A0,A1,...")]
    quotients: Option<String>,
    #[arg(long = "precision-bits", default_value_t = 256)]
    precision_bits: u32,
}

#[derive(Args)]
struct CfArgs {
    #[command(flatten)]
    alpha: AlphaArgs,
    #[arg(long, default_value_t = 30)]
    depth: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Quadratic,
    Cubic,
}

impl MapArg {
    fn kind(self) -> MapKind {
        match self {
            MapArg::Quadratic => MapKind::Quadratic,
            MapArg::Cubic => MapKind::CubicModel,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MapArg::Quadratic => "quadratic",
            MapArg::Cubic => "cubic",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, value_enum, default_value = "quadratic")]
    map: MapArg,
    /// Starting point "re,im"; the critical value when omitted.
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    #[arg(short, long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 4.0)]
    escape_radius: f64,
    /// Output format; inferred from the extension of --out, CSV otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long = "precision-bits", default_value_t = 128)]
    precision_bits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoringArg {
    EscapeTime,
    OrbitTrap,
}

#[derive(Args)]
struct JuliaArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "quadratic")]
    map: MapArg,
    /// "cx,cy,width"
    #[arg(long, default_value = "0,0,4", allow_hyphen_values = true)]
    viewport: String,
    #[arg(long, default_value_t = 512)]
    res: usize,
    #[arg(long, default_value_t = 500)]
    max_iter: u32,
    #[arg(long, default_value_t = 4.0)]
    escape_radius: f64,
    #[arg(long, value_enum, default_value = "escape-time")]
    coloring: ColoringArg,
    /// Output image; `.png` selects PNG, anything else binary PPM.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PcArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Classical continued fraction "0,a1,...,ak", continued with quotients 1.
    #[arg(long = "cf", value_name = "A0,A1,...")]
    quotients: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value = "0,0,1.5", allow_hyphen_values = true)]
    viewport: String,
    #[arg(long, default_value_t = 512)]
    res: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "quadratic")]
    map: MapArg,
    #[arg(long = "precision-bits")]
    precision_bits: Option<u32>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "precision-bits")]
    precision_bits: Option<u32>,
    /// Bundle destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_quotients(s: &str) -> Result<Vec<Integer>> {
    s.split(',')
        .map(|t| t.trim().parse::<Integer>().map_err(|e| anyhow!("bad partial quotient `{t}`: {e}")))
        .collect()
}

fn parse_float(s: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|e| anyhow!("bad number `{s}`: {e}"))?;
    Ok(Float::with_val(prec, parsed))
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().context("expected \"re,im\"")?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => bail!("expected two comma-separated numbers, got `{s}`"),
    }
}

fn parse_viewport(s: &str) -> Result<Viewport> {
    let v: Vec<f64> =
        s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().context("expected \"cx,cy,width\"")?;
    match v[..] {
        [cx, cy, w] => Ok(Viewport::new(cx, cy, w)),
        _ => bail!("viewport needs three comma-separated numbers, got `{s}`"),
    }
}

fn cf_from(args: &AlphaArgs, depth: usize) -> Result<ModifiedCF> {
    match (&args.alpha, &args.quotients) {
        (Some(a), None) => Ok(expand_cf(&parse_float(a, args.precision_bits)?, depth)?),
        (None, Some(q)) => {
            let a = parse_quotients(q)?;
            let eps = vec![1i8; a.len()];
            Ok(ModifiedCF::from_quotients(&a, &eps, args.precision_bits)?)
        }
        _ => bail!("give exactly one of --alpha and --cf"),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn json_bytes<T: serde::Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Writes the bundle and turns a failed report into exit code 1 with a summary on stderr.
fn finish(bundle: ReportBundle, out: Option<&Path>) -> Result<ExitCode> {
    emit(out, bundle.to_json().as_bytes())?;
    if bundle.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{}", bundle.failure_summary());
        Ok(ExitCode::from(1))
    }
}

fn load_config(path: Option<&Path>, precision: Option<u32>) -> Result<Config> {
    let mut cfg = match path {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(bits) = precision {
        cfg.precision_bits = bits;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Cf(a) => {
            let cf = cf_from(&a.alpha, a.depth)?;
            emit(a.out.as_deref(), &json_bytes(&CfDocument::new(&cf))?)?;
        }
        Command::Brjuno(a) => {
            let cf = cf_from(&a.alpha, a.depth)?;
            emit(a.out.as_deref(), &json_bytes(&BrjunoLedger::from_cf(&cf))?)?;
        }
        Command::Orbit(a) => {
            if a.n > 100_000_000 {
                bail!("orbit length {} above 10^8", a.n);
            }
            let map = MapSpec::new(a.map.kind(), parse_float(&a.alpha, a.precision_bits)?);
            let z0 = match &a.z0 {
                Some(s) => {
                    let (re, im) = parse_pair(s)?;
                    Complex64::new(re, im)
                }
                None => to_c64(&map.eval(&map.main_critical_point()?)?),
            };
            let rec = orbit(&map, z0, a.n, a.escape_radius)?;
            let format = a.format.unwrap_or(match a.out.as_ref().and_then(|p| p.extension()) {
                Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
                _ => Format::Csv,
            });
            let bytes = match format {
                Format::Json => json_bytes(&rec)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    rec.write_csv(&mut buf)?;
                    buf
                }
            };
            emit(a.out.as_deref(), &bytes)?;
        }
        Command::RenderJulia(a) => {
            let job = RenderJob {
                map: match a.map {
                    MapArg::Quadratic => MapFamily::Quadratic,
                    MapArg::Cubic => MapFamily::Cubic,
                },
                alpha: a.alpha,
                viewport: parse_viewport(&a.viewport)?,
                resolution: a.res,
                max_iter: a.max_iter,
                escape_radius: a.escape_radius,
                coloring: match a.coloring {
                    ColoringArg::EscapeTime => Coloring::EscapeTime,
                    ColoringArg::OrbitTrap => Coloring::OrbitTrapOrigin,
                },
            };
            render::render_julia(&job)?.save(&a.out)?;
        }
        Command::RenderPc(a) => {
            let alpha = match (a.alpha, &a.quotients) {
                (Some(x), None) => x,
                (None, Some(q)) => {
                    let head: Vec<u64> = parse_quotients(q)?
                        .iter()
                        .skip(1)
                        .map(|v| v.to_u64().ok_or_else(|| anyhow!("partial quotient {v} too large")))
                        .collect::<Result<_>>()?;
                    classical_cf_value(&head, 1, 256).to_f64()
                }
                _ => bail!("give exactly one of --alpha and --cf"),
            };
            render::render_postcritical(alpha, a.budget, &parse_viewport(&a.viewport)?, a.res)?.save(&a.out)?;
        }
        Command::FatouCheck(a) => {
            let mut cfg = load_config(a.config.as_deref(), a.precision_bits)?;
            let m = a.map.name().to_string();
            cfg.sections = vec!["semiconjugacy".into(), "near_translation".into(), "abel".into()];
            cfg.semiconjugacy_alphas = vec![a.alpha];
            cfg.semiconjugacy_maps = vec![m.clone()];
            cfg.near_translation_alphas = vec![a.alpha];
            cfg.near_translation_maps = vec![m.clone()];
            cfg.abel_alpha = a.alpha;
            cfg.abel_maps = vec![m];
            let bundle = ReportBundle::new(&cfg, suite::run_suite(&cfg));
            return finish(bundle, a.out.as_deref());
        }
        Command::RenormCheck(a) => {
            let mut cfg = load_config(a.config.as_deref(), a.precision_bits)?;
            cfg.sections = vec!["rotation".into()];
            cfg.rotation_alphas = vec![a.alpha];
            cfg.rotation_map = a.map.name().to_string();
            let bundle = ReportBundle::new(&cfg, suite::run_suite(&cfg));
            return finish(bundle, a.out.as_deref());
        }
        Command::Verify(a) => {
            let cfg = load_config(a.config.as_deref(), a.precision_bits)?;
            let bundle = ReportBundle::new(&cfg, suite::run_suite(&cfg));
            return finish(bundle, a.out.as_deref());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = thread_pool(thread_count(cli.threads));
    match pool.install(|| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
