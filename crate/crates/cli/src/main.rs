use clap::{Args, Parser, Subcommand};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use superyang_cli::{human_summary, init_threads, parse_points, run, RunConfig, SuiteName};
use superyang_core::exact::{parse_rat, Rat};
use superyang_core::relations::{DeltaSign, Relation};
use superyang_core::rmatrix::YbeMode;
use superyang_core::Error;

/// Exact checks for the super Yangian double DY_ħ[gl(m|n)] at c = 0.
#[derive(Parser)]
#[command(name = "superyang", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Deformation parameter, `p` or `p/q`.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    hbar: String,
    /// Truncation order; each suite has its own default.
    #[arg(long)]
    order: Option<i32>,
    /// Write the JSON report here; `-` for stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall-clock times in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct DeltaArgs {
    /// Sign convention of the X+ X- delta terms: `paper` or `corrected`.
    #[arg(long, default_value = "paper")]
    delta_sign: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Graded Yang–Baxter equation plus unitarity and R(0) = P.
    YbeCheck {
        #[command(flatten)]
        common: Common,
        /// Symbolic identity (the default).
        #[arg(long, conflicts_with = "samples")]
        symbolic: bool,
        /// Exact evaluation at K random rational points.
        #[arg(long, value_name = "K")]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// RLL relations on the two-site monodromy at points a, b.
    RllCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "5", allow_hyphen_values = true)]
        b: String,
    },
    /// Gauss decomposition of L±(u) on the evaluation module at a.
    Gauss {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        a: String,
        /// Include the factors in the JSON report.
        #[arg(long)]
        dump: bool,
    },
    /// Defining relations of the currents; two-site when --b is given.
    Relations {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        delta: DeltaArgs,
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Restrict to one relation family.
        #[arg(long, value_name = "REL")]
        only: Option<String>,
    },
    /// Coproduct, counit, antipode and coassociativity.
    HopfCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        delta: DeltaArgs,
        /// Two or three distinct points, comma separated.
        #[arg(long, default_value = "3,5,7", allow_hyphen_values = true)]
        points: String,
    },
    /// Every suite that applies to the given dimensions.
    All {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        delta: DeltaArgs,
        #[arg(long, default_value = "3,5,7", allow_hyphen_values = true)]
        points: String,
        /// Comma-separated subset of ybe,rll,gauss,relations,serre,gl11,hopf.
        #[arg(long)]
        suites: Option<String>,
    },
}

fn base(c: &Common) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::new(c.m, c.n);
    cfg.hbar = parse_rat(&c.hbar)?;
    cfg.order = c.order;
    cfg.timings = c.timings;
    Ok(cfg)
}

fn suites(xs: &[SuiteName]) -> BTreeSet<SuiteName> {
    xs.iter().copied().collect()
}

fn point(s: &str) -> Result<Rat, Error> {
    parse_rat(s)
}

fn build(cmd: &Cmd) -> Result<(RunConfig, Option<PathBuf>), Error> {
    let (cfg, json) = match cmd {
        Cmd::YbeCheck { common, samples, seed, .. } => {
            let mut cfg = base(common)?;
            cfg.suites = suites(&[SuiteName::Ybe]);
            cfg.points.clear();
            if let Some(k) = samples {
                cfg.ybe_mode = YbeMode::Sampled { samples: *k, seed: *seed };
            }
            (cfg, common.json.clone())
        }
        Cmd::RllCheck { common, a, b } => {
            let mut cfg = base(common)?;
            cfg.suites = suites(&[SuiteName::Rll]);
            cfg.points = vec![point(a)?, point(b)?];
            (cfg, common.json.clone())
        }
        Cmd::Gauss { common, a, dump } => {
            let mut cfg = base(common)?;
            cfg.suites = suites(&[SuiteName::Gauss]);
            cfg.points = vec![point(a)?];
            cfg.dump = *dump;
            (cfg, common.json.clone())
        }
        Cmd::Relations { common, delta, a, b, only } => {
            let mut cfg = base(common)?;
            cfg.delta_sign = DeltaSign::parse(&delta.delta_sign)?;
            cfg.only = only.as_deref().map(Relation::parse).transpose()?;
            cfg.points = vec![point(a)?];
            if let Some(b) = b {
                cfg.points.push(point(b)?);
            }
            cfg.suites = match cfg.only {
                Some(r) if r.is_serre() => suites(&[SuiteName::Serre]),
                Some(_) => suites(&[SuiteName::Relations]),
                None => suites(&[SuiteName::Relations, SuiteName::Serre]),
            };
            (cfg, common.json.clone())
        }
        Cmd::HopfCheck { common, delta, points } => {
            let mut cfg = base(common)?;
            cfg.delta_sign = DeltaSign::parse(&delta.delta_sign)?;
            cfg.suites = suites(&[SuiteName::Hopf]);
            cfg.points = parse_points(points)?;
            (cfg, common.json.clone())
        }
        Cmd::All { common, delta, points, suites: only } => {
            let mut cfg = base(common)?;
            cfg.delta_sign = DeltaSign::parse(&delta.delta_sign)?;
            cfg.points = parse_points(points)?;
            if let Some(s) = only {
                cfg.suites = s.split(',').map(|x| SuiteName::parse(x.trim())).collect::<Result<_, _>>()?;
            }
            (cfg, common.json.clone())
        }
    };
    Ok((cfg, json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("superyang: {e}");
        return ExitCode::from(2);
    }
    let (cfg, json) = match build(&cli.cmd).and_then(|(c, j)| c.validate().map(|_| (c, j))) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("superyang: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("superyang: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match json.as_deref() {
        Some(p) if p.as_os_str() == "-" => print!("{text}"),
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("superyang: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
            print!("{}", human_summary(&report));
        }
        None => print!("{}", human_summary(&report)),
    }
    ExitCode::from(report.exit_code() as u8)
}
