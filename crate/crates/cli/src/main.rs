use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use flagmirror::combinat::{FlagShape, Partition};
use flagmirror::critical::{
    cp_points, find_all_critical, grad_wp, identity_residuals, karp_points_with_sign, karp_sign,
    CriticalCandidate, GRADIENT_TOLERANCE,
};
use flagmirror::mirror::{build_ladder, build_wp, Externals};
use flagmirror::schubert::flag_pieri;
use flagmirror::verify::{check_main_theorem_with, check_structure};
use flagmirror::{selftest, Error};

/// Plücker-coordinate superpotentials of type A flag varieties.
#[derive(Parser)]
#[command(name = "flagmirror", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Print W_P.
    Wp {
        /// Flag shape `n:r1,...,rρ`.
        shape: FlagShape,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the ladder diagram as JSON, or as Graphviz with `--dot`.
    Ladder {
        shape: FlagShape,
        #[arg(long)]
        dot: bool,
    },
    /// Check W_P = φ*(W_T) at random exact points, plus the structural invariants.
    Verify {
        shape: FlagShape,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// `cumulative` (q1⋯qi at corner i) or `plain` (qi).
        #[arg(long, default_value = "cumulative")]
        externals: Externals,
    },
    /// Quantum Pieri product s^i_□ * s^i_λ.
    Pieri {
        shape: FlagShape,
        #[arg(short = 'i', long)]
        level: usize,
        /// Parts of λ, e.g. `2,2,2`.
        #[arg(long)]
        lambda: Partition,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Critical points of W_P: closed-form candidates, identity residuals and a multistart search.
    Crit {
        shape: FlagShape,
        /// Quantum parameters, comma separated; complex values as `a+bi`.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<Complex64>,
        /// Random starts for the search; 0 skips it.
        #[arg(long, default_value_t = 10_000)]
        starts: usize,
    },
    /// Run every documented reference example.
    Selftest,
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print_json(v: &Value) {
    emit(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn cx(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn candidate_json(c: &CriticalCandidate, shape: &FlagShape) -> Value {
    let grad = grad_wp(c, shape).map(|g| g.norm).unwrap_or(f64::NAN);
    let mut v = c.to_json_value();
    v["grad_norm"] = json!(grad);
    v
}

fn crit(shape: &FlagShape, q: &[Complex64], starts: usize, seed: u64) -> Result<bool, Error> {
    if q.len() != shape.rho() {
        return Err(Error::InvalidShape(format!(
            "{shape} needs {} values of q, got {}",
            shape.rho(),
            q.len()
        )));
    }
    let mut ok = true;
    let mut out =
        json!({ "shape": shape.spec_string(), "q": q.iter().map(cx).collect::<Vec<_>>() });

    let mut closed: Vec<CriticalCandidate> = Vec::new();
    if shape.is_grassmannian() {
        let (n, r) = (shape.n(), shape.r(1));
        let sign = karp_sign(n, r, q[0])?;
        let worst = |s: i32| -> Result<f64, Error> {
            karp_points_with_sign(n, r, q[0], s)?
                .iter()
                .map(|c| grad_wp(c, shape).map(|g| g.norm))
                .try_fold(0.0f64, |a, b| b.map(|b| a.max(b)))
        };
        out["karp"] = json!({
            "sign": sign,
            "max_grad_norm": { "plus": worst(1)?, "minus": worst(-1)? },
        });
        closed = karp_points_with_sign(n, r, q[0], sign)?;
    } else if shape.ranks() == [2, 1] {
        match cp_points(shape.n(), q[0], q[1]) {
            Ok(c) => closed = c,
            Err(e @ Error::DegenerateParameters(_)) => out["cp_points"] = json!(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    if !closed.is_empty() {
        let points: Vec<Value> = closed.iter().map(|c| candidate_json(c, shape)).collect();
        ok &= points.iter().all(|p| {
            p["grad_norm"]
                .as_f64()
                .is_some_and(|g| g < GRADIENT_TOLERANCE)
        });
        out["closed_form"] = json!({ "count": closed.len(), "points": points });
    }
    if shape.ranks() == [2, 1] && shape.n() >= 4 && !closed.is_empty() {
        let mut ids = Vec::new();
        for c in &closed {
            let r = identity_residuals(shape.n(), c)?;
            ok &= r.max() < 1e-8 && r.display < 1e-6 && r.gu_sharpe < 1e-6;
            ids.push(serde_json::to_value(r).expect("serializable"));
        }
        out["identities"] = Value::Array(ids);
    }

    if starts > 0 && shape.dimension() <= 6 {
        let search = find_all_critical(shape, q, starts, seed)?;
        out["count"] = json!(search.count);
        out["points"] = serde_json::to_value(&search.points).expect("serializable");
        out["search"] = json!({
            "starts": search.starts,
            "seed": search.seed,
            "converged": search.converged,
            "note": search.note,
        });
    } else {
        out["count"] = json!(closed.len());
        out["points"] = out
            .get("closed_form")
            .map_or(json!([]), |c| c["points"].clone());
    }
    print_json(&out);
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Wp { shape, format } => {
            let wp = build_wp(&shape);
            match format {
                Format::Text => emit(&wp.to_text()),
                Format::Latex => emit(&wp.to_latex()),
                Format::Json => print_json(&wp.to_json_value()),
            }
            Ok(true)
        }
        Command::Ladder { shape, dot } => {
            let d = build_ladder(&shape);
            if dot {
                let _ = write!(std::io::stdout().lock(), "{}", d.to_dot());
            } else {
                print_json(&d.to_json_value());
            }
            Ok(true)
        }
        Command::Verify {
            shape,
            trials,
            externals,
        } => {
            let structure = check_structure(&shape);
            let report = check_main_theorem_with(&shape, trials, cli.seed, externals)?;
            eprintln!("verify: {:.3?}", report.elapsed);
            print_json(&json!({
                "structure": structure.to_json_value(),
                "main_theorem": report.to_json_value(),
            }));
            Ok(structure.passed() && report.passed())
        }
        Command::Pieri {
            shape,
            level,
            lambda,
            format,
        } => {
            let e = flag_pieri(level, &lambda, &shape)?;
            match format {
                Format::Json => print_json(&e.to_json_value()),
                _ => emit(&format!("{e}")),
            }
            Ok(true)
        }
        Command::Crit { shape, q, starts } => crit(&shape, &q, starts, cli.seed),
        Command::Selftest => {
            let results = selftest::run_all();
            let mut ok = true;
            for r in &results {
                match &r.outcome {
                    Ok(()) => emit(&format!("PASS {}", r.name)),
                    Err(m) => {
                        ok = false;
                        emit(&format!("FAIL {}: {m}", r.name));
                    }
                }
                eprintln!("{}: {:.3?}", r.name, r.elapsed);
            }
            let passed = results.iter().filter(|r| r.outcome.is_ok()).count();
            emit(&format!("{passed}/{} passed", results.len()));
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("FLAGMIRROR_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        // Only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let start = Instant::now();
    let code = match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    };
    eprintln!("elapsed: {:.3?}", start.elapsed());
    code
}
