use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shadowcover::containment::{max_scale, min_cover_dilate, translate_into};
use shadowcover::mixedvol::{base_height_mixed, optimize_interp, steiner_fit};
use shadowcover::polytope::{make_body, reflected_scaled};
use shadowcover::shadow::{bound_report, covering_sweep_with, SweepOptions};
use shadowcover::{tol, Body, BodyKind, Strategy, Tolerances};
use shadowcover_cli::{canonical, repro};

/// Shadow covering experiments on convex polytopes.
///
/// Exit status: 0 when the tested property holds, 1 when it fails, 2 on
/// input or numerical errors.
#[derive(Parser)]
#[command(name = "shadowcover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every sampled shadow of L contains a translate of the shadow of K.
    Covering {
        k: PathBuf,
        l: PathBuf,
        #[arg(long = "codim", default_value_t = 1)]
        codim: usize,
        #[arg(long, default_value_t = 2000)]
        dirs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Subdivide around low-margin directions (codimension 1).
        #[arg(long)]
        refine: bool,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Emit the per-projection CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Decide whether L contains a translate of K.
    Contain { k: PathBuf, l: PathBuf },
    /// Least dilate λ with K + x ⊆ λL.
    Dilate { k: PathBuf, l: PathBuf },
    /// Largest α with αK + x ⊆ L.
    Scale { k: PathBuf, l: PathBuf },
    /// Mixed volumes of (K, L) from the Steiner polynomial.
    Mixed { k: PathBuf, l: PathBuf },
    /// Maximize V((1-t)K + tT) over t in [0, 1].
    Optimize {
        k: PathBuf,
        t: PathBuf,
        /// Emit the ratio-vs-t curve as CSV with this many samples.
        #[arg(long)]
        curve: Option<usize>,
    },
    /// Constants bounding V(K)/V(L) under codimension-d covering.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Regenerate every reference number as a JSON report.
    PaperRepro {
        #[arg(long, default_value_t = repro::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a named body as JSON.
    Make {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex count for `ball` and `random`.
        #[arg(long, default_value_t = 12)]
        vertices: usize,
        /// Prism axis (zero-based).
        #[arg(long, default_value_t = 0)]
        axis: usize,
        /// Scale about the origin; negative values also reflect.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        scale: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Fibonacci,
    Gaussian,
    Informed,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Fibonacci => Strategy::Fibonacci,
            StrategyArg::Gaussian => Strategy::Gaussian,
            StrategyArg::Informed => Strategy::Informed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    StandardSimplex,
    RegularSimplex,
    Cube,
    CrossPolytope,
    CapBody,
    Prism,
    Ball,
    Random,
}

fn read_body(path: &Path) -> Result<Body> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Body::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn tolerance_fields() -> Value {
    let t = tol::get();
    json!({"feasibility": t.feasibility, "vertex": t.vertex, "rank": t.rank})
}

fn emit(kind: &str, payload: &impl serde::Serialize) -> Result<()> {
    print!("{}", canonical::envelope(kind, payload, &[("tolerance", tolerance_fields())])?);
    Ok(())
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Covering { k, l, codim, dirs, seed, refine, strategy, csv } => {
            let (k, l) = (read_body(&k)?, read_body(&l)?);
            let opts = SweepOptions {
                strategy: strategy.map(Into::into),
                refine,
                ..SweepOptions::default()
            };
            let report = covering_sweep_with(&k, &l, codim, dirs, seed, opts)?;
            if csv {
                print!("{}", report.to_csv());
            } else {
                emit("covering", &report)?;
            }
            Ok(status(report.all_covered))
        }
        Command::Contain { k, l } => {
            let w = translate_into(&read_body(&k)?, &read_body(&l)?)?;
            emit("containment", &json!({
                "feasible": w.feasible,
                "margin": w.margin,
                "translation": w.translation.as_ref().map(|x| x.as_slice().to_vec()),
                "violated_normal": w.violated_facet.as_ref().map(|f| f.normal.as_slice().to_vec()),
                "deficit": w.violated_facet.as_ref().map(|f| f.deficit),
            }))?;
            Ok(status(w.feasible))
        }
        Command::Dilate { k, l } => {
            let r = min_cover_dilate(&read_body(&k)?, &read_body(&l)?)?;
            emit("dilate", &json!({"lambda": r.lambda, "translation": r.translation.as_slice()}))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scale { k, l } => {
            let r = max_scale(&read_body(&k)?, &read_body(&l)?)?;
            emit("scale", &json!({"alpha": r.alpha, "translation": r.translation.as_slice()}))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mixed { k, l } => {
            let (k, l) = (read_body(&k)?, read_body(&l)?);
            let fit = steiner_fit(&k, &l)?;
            let facet = if k.is_full_dimensional() {
                Some(base_height_mixed(&k, &l)?)
            } else {
                None
            };
            emit("mixed", &json!({
                "coefficients": fit.values,
                "fit_residual": fit.residual,
                "facet_formula_first": facet,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize { k, t, curve } => {
            let (k, t) = (read_body(&k)?, read_body(&t)?);
            let opt = optimize_interp(&k, &t)?;
            let vt = t.volume()?;
            if let Some(samples) = curve {
                if samples < 2 {
                    bail!("--curve needs at least 2 samples");
                }
                println!("t,volume,ratio");
                for i in 0..samples {
                    let s = i as f64 / (samples - 1) as f64;
                    let v = opt.family.eval(s);
                    println!("{:.12e},{:.12e},{:.12e}", s, v, v / vt);
                }
            } else {
                emit("optimize", &json!({
                    "t_star": opt.t,
                    "value": opt.value,
                    "ratio": opt.value / vt,
                    "f_prime_one": opt.family.f_prime_one(),
                    "coefficients": opt.family.poly.0,
                }))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { n, d } => {
            emit("bounds", &bound_report(n, d)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::PaperRepro { seed, out } => {
            let report = repro::run(seed)?;
            let text = canonical::to_string(&report)?;
            match out {
                Some(path) => std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            for item in report.items.iter().filter(|i| !i.pass) {
                eprintln!("FAIL {}: computed {} vs {}", item.id, item.computed_value, item.paper_value);
            }
            Ok(status(report.all_pass))
        }
        Command::Make { kind, n, seed, vertices, axis, scale } => {
            let kind = match kind {
                KindArg::StandardSimplex => BodyKind::StandardSimplex,
                KindArg::RegularSimplex => BodyKind::RegularSimplex,
                KindArg::Cube => BodyKind::Cube,
                KindArg::CrossPolytope => BodyKind::CrossPolytope,
                KindArg::CapBody => BodyKind::CapBody,
                KindArg::Prism => BodyKind::Prism { axis },
                KindArg::Ball => BodyKind::Ball { vertices },
                KindArg::Random => BodyKind::Random { vertices },
            };
            let body = make_body(kind, n, seed)?;
            let name = body.name().map(str::to_owned);
            let mut body = if scale < 0.0 {
                reflected_scaled(&body, -scale)?
            } else {
                body.scaled(scale)?
            };
            if let Some(name) = name {
                let label = if scale == 1.0 { name } else { format!("{scale}*{name}") };
                body = body.with_name(label);
            }
            print!("{}", canonical::to_string(&body.to_json())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    tol::install(Tolerances::from_env());
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
