use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pipfract::config::{RunConfig, CACHE_ENV};
use pipfract::daleth::{daleth_batch, daleth_range, quantize256, sign_filter, DalethSpec, Series};
use pipfract::pip::{pip_range, PipSpec};
use pipfract::render::{gridplot_rows, render_gridplot, write_ppm, Colormap, Geometry};
use pipfract::sieve::PrimeEngine;
use pipfract::stats;
use pipfract::{Error, Result};

/// Inclusive `lo:hi` range; a bare `n` means `n:n`.
#[derive(Clone, Copy, Debug)]
struct Span<T> {
    lo: T,
    hi: T,
}

impl<T: FromStr + PartialOrd + Copy> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |v: &str| v.trim().parse::<T>().map_err(|_| format!("bad range bound {v:?}"));
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("range {s} is empty"));
        }
        Ok(Span { lo, hi })
    }
}

#[derive(Parser)]
#[command(name = "pipfract", version, about = "Iterated prime-indexed primes and their finite differences")]
#[command(disable_help_flag = true)]
struct Cli {
    #[arg(long, global = true, action = ArgAction::Help, help = "Print help")]
    help: Option<bool>,

    /// `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Checkpoint cache file.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,

    #[arg(long, global = true)]
    universe_bound: Option<u64>,

    #[arg(long, global = true)]
    segment_span: Option<u64>,

    #[arg(long, global = true)]
    checkpoint_stride: Option<u64>,

    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for relative output paths.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve to a limit and write the checkpoint cache.
    Cache {
        #[arg(long)]
        limit: u64,
        /// Overrides --cache.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Print q_s^k(i) as `i,value`.
    Pip {
        #[arg(short)]
        k: u32,
        #[arg(short, default_value_t = 0)]
        s: u64,
        #[arg(short, value_name = "LO:HI")]
        i: Span<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the finite difference series as `i,value`.
    Daleth {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short)]
        k: u32,
        #[arg(short, value_name = "LO:HI")]
        i: Span<u64>,
        #[arg(long, value_enum, default_value_t = FilterArg::None)]
        filter: FilterArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Statistics over a finite difference series.
    #[command(subcommand)]
    Stats(StatsCommand),
    /// Render a gridplot to PPM and print row metadata.
    Render {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short, value_name = "LO:HI")]
        k: Span<u32>,
        #[arg(short, value_name = "LO:HI")]
        i: Span<u64>,
        #[arg(long, value_enum, default_value_t = Style::Sign3)]
        style: Style,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        band_width: u32,
        #[arg(long, default_value_t = 40)]
        row_height: u32,
        #[arg(long, default_value_t = 8)]
        gap: u32,
    },
}

#[derive(Args, Clone, Copy)]
struct DiffArgs {
    /// Spacing.
    #[arg(short, default_value_t = 1)]
    h: u64,
    /// Difference order.
    #[arg(short, default_value_t = 2)]
    n: u32,
    /// Index-set shift.
    #[arg(short, default_value_t = 0)]
    s: u64,
}

impl DiffArgs {
    fn spec(self, k: u32) -> DalethSpec {
        DalethSpec::new(self.h, self.n, self.s, k)
    }
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Rolling mean and variance as `i,mean,variance`.
    Rolling {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short)]
        k: u32,
        #[arg(long = "T")]
        t: u64,
        #[arg(short, long)]
        w: usize,
        #[arg(short, long, default_value_t = 1)]
        y: usize,
        /// Apply the sign filter first.
        #[arg(long)]
        sign: bool,
    },
    /// Pairwise Pearson matrix with linear fits.
    Corr {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short, value_name = "LO:HI")]
        k: Span<u32>,
        #[arg(long = "T")]
        t: u64,
    },
    /// Histogram with the mod-6 dip score when applicable.
    Hist {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short)]
        k: u32,
        #[arg(long = "T")]
        t: u64,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, default_value_t = -50.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 51.0, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, value_enum, default_value_t = Norm::Counts)]
        norm: Norm,
    },
    /// Laplace and Gaussian fits plus excess kurtosis.
    Laplace {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short)]
        k: u32,
        #[arg(long = "T")]
        t: u64,
    },
    /// Zero counts per k and the exponential density fit.
    Zeros {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(short, value_name = "LO:HI")]
        k: Span<u32>,
        /// One sample size for every k, or a comma list with one per k.
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<u64>,
    },
    /// Sign census over a grid of orders.
    Outliers {
        #[command(flatten)]
        d: DiffArgs,
        #[arg(long)]
        imax: u64,
        #[arg(short, value_name = "LO:HI")]
        k: Span<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    None,
    Sign,
    Quant256,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Sign3,
    Jet256,
}

impl From<Style> for Colormap {
    fn from(s: Style) -> Self {
        match s {
            Style::Sign3 => Colormap::Sign3,
            Style::Jet256 => Colormap::Jet256,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Counts,
    Pdf,
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.cache {
            cfg.cache_path = Some(v.clone());
        }
        if let Some(v) = self.universe_bound {
            cfg.universe_bound = v;
        }
        if let Some(v) = self.segment_span {
            cfg.segment_span = v;
        }
        if let Some(v) = self.checkpoint_stride {
            cfg.checkpoint_stride = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn engine(cfg: &RunConfig) -> Result<PrimeEngine> {
    let mut e = PrimeEngine::new(cfg.engine_config())?;
    if let Some(path) = &cfg.cache_path {
        if path.exists() {
            e.load_cache(path)?;
        }
    }
    Ok(e)
}

fn resolve(cfg: &RunConfig, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        cfg.output_dir.join(p)
    }
}

/// Name the file in I/O errors.
fn at_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Io(e) => Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))),
        other => other,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn print_pairs(rows: impl Iterator<Item = (u64, String)>, format: Format) -> Result<()> {
    let mut out = BufWriter::new(io::stdout().lock());
    match format {
        Format::Csv => {
            writeln!(out, "i,value")?;
            for (i, v) in rows {
                writeln!(out, "{i},{v}")?;
            }
        }
        Format::Json => {
            // values are integers, so they can be spliced in as-is
            write!(out, "[")?;
            for (n, (i, v)) in rows.enumerate() {
                let sep = if n == 0 { "" } else { "," };
                write!(out, "{sep}\n  {{\"i\": {i}, \"value\": {v}}}")?;
            }
            writeln!(out, "\n]")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn series(e: &PrimeEngine, spec: DalethSpec, t: u64) -> Result<Series> {
    daleth_range(e, spec, 1, t)
}

fn run_stats(e: &PrimeEngine, cmd: StatsCommand) -> Result<()> {
    match cmd {
        StatsCommand::Rolling { d, k, t, w, y, sign } => {
            let mut s = series(e, d.spec(k), t)?;
            if sign {
                s = sign_filter(&s);
            }
            let r = stats::rolling_moments(&s, w, y)?;
            let mut out = BufWriter::new(io::stdout().lock());
            writeln!(out, "i,mean,variance")?;
            for row in &r.rows {
                writeln!(out, "{},{},{}", row.i, row.mean, row.variance)?;
            }
            out.flush()?;
        }
        StatsCommand::Corr { d, k, t } => {
            let specs: Vec<DalethSpec> = (k.lo..=k.hi).map(|k| d.spec(k)).collect();
            let cols: Vec<Vec<f64>> = daleth_batch(e, &specs, 1, t)?.iter().map(Series::as_f64).collect();
            let matrix = stats::correlation_matrix(&cols)?;
            let mut fits = Vec::new();
            for a in 0..cols.len() {
                for b in a + 1..cols.len() {
                    let fit = stats::ols_fit(&cols[a], &cols[b])?;
                    fits.push(json!({"x_k": specs[a].k, "y_k": specs[b].k, "r": matrix[a][b], "fit": fit}));
                }
            }
            let ks: Vec<u32> = specs.iter().map(|s| s.k).collect();
            print_json(&json!({"k": ks, "T": t, "matrix": matrix, "pairs": fits}))?;
        }
        StatsCommand::Hist { d, k, t, width, lo, hi, norm } => {
            let s = series(e, d.spec(k), t)?;
            let normalization = match norm {
                Norm::Counts => stats::Normalization::Counts,
                Norm::Pdf => stats::Normalization::Pdf,
            };
            let h = stats::histogram(&s.as_f64(), width, lo, hi, normalization)?;
            let mod6 = stats::mod6_dip_score(&h).ok();
            print_json(&json!({"k": k, "T": t, "histogram": h, "mod6_dip_score": mod6}))?;
        }
        StatsCommand::Laplace { d, k, t } => {
            let x = series(e, d.spec(k), t)?.as_f64();
            let laplace = stats::fit_laplace(&x)?;
            let gaussian = stats::fit_gaussian(&x)?;
            let kurt = stats::excess_kurtosis(&x)?;
            print_json(&json!({
                "k": k, "T": t, "laplace": laplace, "gaussian": gaussian, "excess_kurtosis": kurt
            }))?;
        }
        StatsCommand::Zeros { d, k, t } => {
            let ks: Vec<u32> = (k.lo..=k.hi).collect();
            let ts = match t.len() {
                1 => vec![t[0]; ks.len()],
                n if n == ks.len() => t,
                _ => {
                    return Err(Error::InvalidArgument(
                        "--T takes one value or one per k".into(),
                    ))
                }
            };
            print_json(&stats::zero_density_fit(e, d.spec(0), &ks, &ts)?)?;
        }
        StatsCommand::Outliers { d, imax, k } => {
            print_json(&stats::outlier_census(e, imax, k.lo, k.hi, d.spec(0))?)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = cli.run_config()?;
    match cli.command {
        Command::Cache { limit, path } => {
            let path = path
                .or(cfg.cache_path.clone())
                .unwrap_or_else(|| cfg.output_dir.join("pipfract.cache"));
            let mut e = PrimeEngine::new(cfg.engine_config())?;
            let summary = e.build_cache(limit, &path).map_err(|e| at_path(e, &path))?;
            print_json(&json!({
                "count": summary.count,
                "max": summary.max,
                "stride": summary.stride,
                "checkpoints": summary.checkpoints,
                "path": path,
            }))?;
        }
        Command::Pip { k, s, i, format } => {
            let e = engine(&cfg)?;
            let p = pip_range(&e, PipSpec::new(k, s), i.lo, i.hi)?;
            print_pairs((p.start..).zip(p.values.iter().map(u64::to_string)), format)?;
        }
        Command::Daleth { d, k, i, filter, format } => {
            let e = engine(&cfg)?;
            let raw = daleth_range(&e, d.spec(k), i.lo, i.hi)?;
            let s = match filter {
                FilterArg::None => raw,
                FilterArg::Sign => sign_filter(&raw),
                FilterArg::Quant256 => quantize256(&raw)?,
            };
            print_pairs(s.indexed().map(|(i, v)| (i, v.to_string())), format)?;
        }
        Command::Stats(cmd) => {
            let e = engine(&cfg)?;
            run_stats(&e, cmd)?;
        }
        Command::Render { d, k, i, style, out, band_width, row_height, gap } => {
            let e = engine(&cfg)?;
            let style = Colormap::from(style);
            let rows = gridplot_rows(&e, d.spec(0), k.lo, k.hi, i.lo, i.hi, style)?;
            let geometry = Geometry { band_width, row_height, gap };
            let img = render_gridplot(&rows, style, geometry)?;
            let path = resolve(&cfg, &out);
            write_ppm(&img, &path).map_err(|e| at_path(e, &path))?;
            print_json(&json!({
                "path": path,
                "width": img.width,
                "height": img.height,
                "style": style,
                "i": [i.lo, i.hi],
                "rows": img.meta,
            }))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pipfract: {e}");
            ExitCode::FAILURE
        }
    }
}
