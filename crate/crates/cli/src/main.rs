use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use dynaheight::algebra::algebraic::parse_point;
use dynaheight::bounds::{certificate_with, enumerate_periodic, CertifyOptions};
use dynaheight::classify::{classify, normal_form};
use dynaheight::commute::{commuter_set, default_k_max, symmetry_group};
use dynaheight::experiment::{emit, preset, ExperimentConfig, ExperimentKind, Format, PRESETS};
use dynaheight::heights::{canonical_height, weil_height};
use dynaheight::varieties::{enumerate_signatures, AmbientVariety};
use dynaheight::{Error, Poly, Result};

#[derive(Parser)]
#[command(name = "dynaheight", version, about = "Heights, commuting polynomials and periodic subvarieties of (P^1)^n")]
struct Cli {
    /// worker threads (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify f as power, Chebyshev or disintegrated
    Classify {
        #[arg(long)]
        f: String,
    },
    #[command(subcommand)]
    Heights(HeightsCmd),
    #[command(subcommand)]
    Commute(CommuteCmd),
    #[command(subcommand)]
    Varieties(VarietiesCmd),
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Run an experiment from a JSON config or a bundled preset
    Run(RunArgs),
}

#[derive(Subcommand)]
enum HeightsCmd {
    /// Absolute logarithmic Weil height
    Weil {
        /// rational, `inf`, or `minpoly@re[,im]`
        #[arg(long)]
        point: String,
    },
    /// Canonical height for f
    Canonical {
        #[arg(long)]
        f: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1e-9)]
        err: f64,
    },
}

#[derive(Subcommand)]
enum CommuteCmd {
    /// Linear polynomials commuting with an iterate of f
    Group {
        #[arg(long)]
        f: String,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Polynomials commuting with an iterate of f, by degree
    List {
        #[arg(long)]
        f: String,
        #[arg(long)]
        max_deg: usize,
        #[arg(long)]
        k_max: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VarietiesCmd {
    /// Periodic subvarieties with fixed-point constants and bounded generator degree
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        codim: usize,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 4)]
        max_gen_deg: usize,
        /// only count signatures
        #[arg(long)]
        signatures_only: bool,
    },
}

#[derive(Args)]
struct VarietyArgs {
    /// file with the equations of X, one per line
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    f: String,
    /// codimension of V, equal to dim X
    #[arg(long)]
    codim: usize,
    /// ambient dimension (default: largest variable index in X)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Height certificates for every signature of the given codimension
    Certify {
        #[command(flatten)]
        var: VarietyArgs,
        #[arg(long, default_value_t = dynaheight::varieties::ambient::DEFAULT_PROJECTION_SAMPLES)]
        samples: usize,
    },
    /// Certificates checked against exact intersection points
    Verify {
        #[command(flatten)]
        var: VarietyArgs,
        #[arg(long, default_value_t = 16)]
        max_gen_deg: usize,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Degree bound M and the graph hypersurfaces it allows
    Structure {
        #[command(flatten)]
        var: VarietyArgs,
    },
    /// Growth table of an unbounded-height family
    Reproduce {
        #[arg(long)]
        example: u8,
        #[arg(long)]
        f: String,
        /// range `a..b` (inclusive)
        #[arg(long, default_value = "1..5")]
        m: String,
        #[arg(long)]
        a1: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        err: f64,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// one of the bundled presets
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    max_gen_deg: Option<usize>,
    #[arg(long)]
    target_error: Option<f64>,
    #[arg(long, default_value = "json")]
    format: String,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn print_json<T: Serialize>(v: &T) -> Result<u8> {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    Ok(0)
}

fn parse_poly(s: &str) -> Result<Poly> {
    s.parse()
}

fn read_variety(args: &VarietyArgs) -> Result<(Vec<String>, usize)> {
    let text = std::fs::read_to_string(&args.x)
        .map_err(|e| Error::invalid(format!("{}: {e}", args.x.display())))?;
    let eqs: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    let n = match args.n {
        Some(n) => n,
        None => max_variable(&eqs),
    };
    Ok((eqs, n))
}

fn max_variable(eqs: &[String]) -> usize {
    let mut best = 0;
    for e in eqs {
        let b = e.as_bytes();
        for i in 0..b.len() {
            if b[i] == b'x' {
                let digits: String = e[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                if let Ok(k) = digits.parse::<usize>() {
                    best = best.max(k);
                }
            }
        }
    }
    best
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::invalid(format!("bad range '{s}', expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.trim_start_matches('=');
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn write_report(config: &ExperimentConfig, format: &str, out: Option<&Path>) -> Result<u8> {
    let format: Format = format.parse()?;
    let report = dynaheight::experiment::run(config)?;
    let bytes = emit(&report, format);
    match out {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| Error::invalid(format!("{}: {e}", p.display())))?,
        None => std::io::stdout().write_all(&bytes).map_err(|e| Error::invalid(e.to_string()))?,
    }
    if !report.passed() {
        let v = serde_json::to_string(&report.violations).expect("serializable");
        eprintln!("bound violated at {v}");
    }
    Ok(report.exit_code() as u8)
}

fn variety_config(kind: ExperimentKind, var: &VarietyArgs) -> Result<ExperimentConfig> {
    let (x, n) = read_variety(var)?;
    let mut c = preset("line").expect("bundled preset");
    c.name = var.x.display().to_string();
    c.kind = kind;
    c.f = var.f.clone();
    c.x = x;
    c.n = n;
    c.codim = var.codim;
    c.seed = var.seed;
    Ok(c)
}

fn run_command(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Classify { f } => {
            let f = parse_poly(&f)?;
            let label = classify(&f)?;
            let nf = normal_form(&f)?;
            print_json(&json!({
                "class": label.to_string(),
                "conjugator": {
                    "alpha": nf.alpha,
                    "beta": nf.beta.to_string(),
                },
                "normal_form": nf.format_g(),
            }))
        }
        Command::Heights(HeightsCmd::Weil { point }) => print_json(&weil_height(&parse_point(&point)?)?),
        Command::Heights(HeightsCmd::Canonical { f, point, err }) => {
            print_json(&canonical_height(&parse_poly(&f)?, &parse_point(&point)?, err)?)
        }
        Command::Commute(CommuteCmd::Group { f, k_max }) => {
            let f = parse_poly(&f)?;
            let k = k_max.map_or_else(|| default_k_max(&f), Ok)?;
            print_json(&symmetry_group(&f, k)?.report())
        }
        Command::Commute(CommuteCmd::List { f, max_deg, k_max }) => {
            let f = parse_poly(&f)?;
            let k = k_max.map_or_else(|| default_k_max(&f), Ok)?;
            let set = commuter_set(&f, k)?;
            let list: Vec<_> = set
                .elements_up_to(max_deg)
                .iter()
                .map(|c| {
                    json!({
                        "g": set.format(c),
                        "degree": c.degree,
                        "m": c.m,
                        "symmetry": c.symmetry,
                        "witness": c.witness,
                    })
                })
                .collect();
            print_json(&list)
        }
        Command::Varieties(VarietiesCmd::Enumerate { n, codim, f, max_gen_deg, signatures_only }) => {
            if codim > n {
                return Err(Error::invalid(format!("codimension {codim} exceeds n = {n}")));
            }
            if signatures_only {
                return print_json(&enumerate_signatures(n, codim));
            }
            print_json(&enumerate_periodic(n, codim, &parse_poly(&f)?, max_gen_deg)?)
        }
        Command::Bounds(BoundsCmd::Certify { var, samples }) => {
            let (eqs, n) = read_variety(&var)?;
            let x = AmbientVariety::parse(&eqs.join("\n"), n, var.codim)?;
            let f = parse_poly(&var.f)?;
            let opts = CertifyOptions { samples, seed: var.seed };
            let mut out = Vec::new();
            for sig in enumerate_signatures(n, var.codim) {
                match certificate_with(&x, &sig, &f, &opts) {
                    Ok(c) => out.push(json!({ "signature": sig, "status": "certified", "certificate": c })),
                    Err(Error::XoaEmpty(why)) => {
                        out.push(json!({ "signature": sig, "status": "xoa_empty", "reason": why }))
                    }
                    Err(e) => return Err(e),
                }
            }
            print_json(&out)
        }
        Command::Bounds(BoundsCmd::Verify { var, max_gen_deg, budget, format }) => {
            let mut c = variety_config(ExperimentKind::Verify, &var)?;
            c.max_gen_deg = max_gen_deg;
            c.budget = budget;
            write_report(&c, &format, None)
        }
        Command::Bounds(BoundsCmd::Structure { var }) => {
            let c = variety_config(ExperimentKind::Structure, &var)?;
            write_report(&c, "json", None)
        }
        Command::Bounds(BoundsCmd::Reproduce { example, f, m, a1, err, format }) => {
            let mut c = preset("growth4").expect("bundled preset");
            c.name = format!("reproduce-{example}");
            c.example = Some(example);
            c.f = f;
            c.m_range = parse_range(&m)?;
            c.a1 = a1;
            c.target_error = err;
            write_report(&c, &format, None)
        }
        Command::Run(args) => {
            let mut c = match (&args.config, &args.preset) {
                (Some(p), _) => {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| Error::invalid(format!("{}: {e}", p.display())))?;
                    ExperimentConfig::from_json(&text)?
                }
                (None, Some(name)) => preset(name).ok_or_else(|| {
                    Error::invalid(format!("unknown preset {name}; available: {}", PRESETS.join(", ")))
                })?,
                (None, None) => return Err(Error::invalid("run needs --config or --preset")),
            };
            if let Some(f) = args.f {
                c.f = f;
            }
            if let Some(s) = args.seed {
                c.seed = s;
            }
            if let Some(b) = args.budget {
                c.budget = b;
            }
            if let Some(d) = args.max_gen_deg {
                c.max_gen_deg = d;
            }
            if let Some(e) = args.target_error {
                c.target_error = e;
            }
            write_report(&c, &args.format, args.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run_command(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
