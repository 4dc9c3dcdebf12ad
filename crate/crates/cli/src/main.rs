//! `lorentz`: command-line front end for lorentz-core.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lorentz_core::decomposition::epsilon_decomposition;
use lorentz_core::duality::dual_norm;
use lorentz_core::level::{level_alpha, level_function};
use lorentz_core::norms::{lorentz_norm, maximal_norm};
use lorentz_core::suite::{registry, Outcome, SuiteConfig};
use lorentz_core::{Exponents, Function, SecondIndex};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "lorentz", version, about = "Lorentz-space functionals on piecewise-monomial functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (default: json for single results, csv for tables).
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Single {
    #[arg(long)]
    p: f64,
    /// Second index; `inf` for the weak space.
    #[arg(long)]
    s: SecondIndex,
    /// Function file (JSON).
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-norm and maximal norm.
    Norm(Single),
    /// Level function of f* for the weight attached to (p, s).
    Level(Single),
    /// Dual norm with its witness.
    Dual(Single),
    /// Equal-norm decomposition certificate.
    Decompose {
        #[command(flatten)]
        single: Single,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Table of constants over comma-separated p and s lists.
    Constants {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<SecondIndex>,
    },
    /// Run the property suite.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Print the registry instead of running it.
        #[arg(long)]
        list: bool,
    },
}

/// Input problem: reported on one line, exit code 2.
struct InputError(String);

impl From<lorentz_core::Error> for InputError {
    fn from(e: lorentz_core::Error) -> Self {
        InputError(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<Function, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn exponents(p: f64, s: SecondIndex) -> Result<Exponents, InputError> {
    Ok(Exponents::new(p, s)?)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut out = serde_json::to_string(v).expect("results serialize");
    out.push('\n');
    out
}

fn fmt6(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x:.6}")
    }
}

fn constants_table(ps: &[f64], ss: &[SecondIndex], format: Format) -> Result<String, InputError> {
    let mut rows = Vec::new();
    for &p in ps {
        for &s in ss {
            rows.push(exponents(p, s)?);
        }
    }
    Ok(match format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "p": e.p, "s": e.s, "p_prime": e.p_conj, "s_prime": e.s_conj,
                        "alpha": e.alpha, "c_ps": e.c_ps,
                        "char_norm": e.char_norm(), "char_dual": e.char_dual(),
                    })
                })
                .collect();
            json(&rows)
        }
        Format::Csv => {
            let mut out = String::from("p,s,p_prime,s_prime,alpha,c_ps,char_norm,char_dual\n");
            for e in rows {
                let cells = [
                    e.p,
                    e.s.as_f64(),
                    e.p_conj,
                    e.s_conj.as_f64(),
                    e.alpha,
                    e.c_ps,
                    e.char_norm(),
                    e.char_dual(),
                ];
                let line: Vec<String> = cells.iter().map(|&x| fmt6(x)).collect();
                writeln!(out, "{}", line.join(",")).unwrap();
            }
            out
        }
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs properties on scoped threads; results keep registry order.
fn run_suite(cfg: &SuiteConfig) -> Vec<(&'static str, Outcome)> {
    let props = registry();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(props.len());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Outcome>> = vec![None; props.len()];
    let done = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(prop) = props.get(i) else { break };
                let outcome = prop.run(cfg);
                done.lock().unwrap()[i] = Some(outcome);
            });
        }
    });
    props.iter().zip(slots).map(|(p, o)| (p.module, o.expect("every property ran"))).collect()
}

enum Report {
    Ok(String),
    Failed(String),
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let single_format = cli.format.unwrap_or(Format::Json);
    let table_format = cli.format.unwrap_or(Format::Csv);
    let out = match &cli.command {
        Command::Norm(a) => {
            let e = exponents(a.p, a.s)?;
            let f = load(&a.file)?;
            let norm = lorentz_norm(&f, &e)?;
            let maximal = match &f {
                Function::Step(step) => Some(maximal_norm(step, &e)?),
                Function::Monomial(_) => None,
            };
            match single_format {
                Format::Json => json(&serde_json::json!({"p": e.p, "s": e.s, "norm": norm, "maximal": maximal})),
                Format::Csv => format!(
                    "p,s,norm,maximal_norm\n{},{},{},{}\n",
                    fmt6(e.p),
                    fmt6(e.s.as_f64()),
                    fmt6(norm.value),
                    maximal.map_or(String::new(), |m| fmt6(m.value))
                ),
            }
        }
        Command::Level(a) => {
            let e = exponents(a.p, a.s)?;
            let f = step_input(load(&a.file)?, "level")?;
            let lr = level_function(&f.rearrange(), level_alpha(&e)?)?;
            match single_format {
                Format::Json => json(&lr),
                Format::Csv => {
                    let mut out = String::from("a,b,slope\n");
                    for (&(a, b), &l) in lr.intervals.iter().zip(&lr.slopes) {
                        writeln!(out, "{},{},{}", fmt6(a), fmt6(b), fmt6(l)).unwrap();
                    }
                    out
                }
            }
        }
        Command::Dual(a) => {
            let e = exponents(a.p, a.s)?;
            let f = step_input(load(&a.file)?, "dual")?;
            let r = dual_norm(&f, &e)?;
            match single_format {
                Format::Json => json(&r),
                Format::Csv => format!("value,branch\n{},{}\n", fmt6(r.value), json(&r.branch).trim().trim_matches('"')),
            }
        }
        Command::Decompose { single: a, epsilon } => {
            if !(*epsilon > 0.0 && epsilon.is_finite()) {
                return Err(InputError(format!("epsilon: must be positive, got {epsilon}")));
            }
            let e = exponents(a.p, a.s)?;
            let f = step_input(load(&a.file)?, "decompose")?;
            let c = epsilon_decomposition(&f, &e, *epsilon)?;
            match single_format {
                Format::Json => json(&c),
                Format::Csv => format!(
                    "lower,upper,epsilon,delta,N,nu\n{},{},{},{},{},{}\n",
                    fmt6(c.lower),
                    fmt6(c.upper),
                    fmt6(c.epsilon),
                    fmt6(c.delta),
                    c.n,
                    c.nu
                ),
            }
        }
        Command::Constants { p, s } => constants_table(p, s, table_format)?,
        Command::Verify { trials, seed, list } => {
            if *list {
                let reg = registry();
                return Ok(Report::Ok(match table_format {
                    Format::Json => json(
                        &reg.iter()
                            .map(|p| serde_json::json!({"name": p.name, "module": p.module, "description": p.description}))
                            .collect::<Vec<_>>(),
                    ),
                    Format::Csv => {
                        let mut out = String::from("name,module,description\n");
                        for p in reg {
                            writeln!(out, "{},{},{}", p.name, p.module, csv_field(p.description)).unwrap();
                        }
                        out
                    }
                }));
            }
            let results = run_suite(&SuiteConfig { trials: *trials, seed: *seed });
            let all = results.iter().all(|(_, o)| o.passed);
            let text = match table_format {
                Format::Json => json(&results.iter().map(|(_, o)| o).collect::<Vec<_>>()),
                Format::Csv => {
                    let mut out = String::from("property,module,status,checks,violations,detail\n");
                    for (module, o) in &results {
                        let status = if o.passed { "PASS" } else { "FAIL" };
                        let detail = o.detail.as_deref().map(csv_field).unwrap_or_default();
                        writeln!(out, "{},{module},{status},{},{},{detail}", o.name, o.checks, o.violations).unwrap();
                    }
                    out
                }
            };
            return Ok(if all { Report::Ok(text) } else { Report::Failed(text) });
        }
    };
    Ok(Report::Ok(out))
}

fn step_input(f: Function, command: &str) -> Result<lorentz_core::StepFunction, InputError> {
    match f {
        Function::Step(s) => Ok(s),
        Function::Monomial(_) => Err(InputError(format!("kind: {command} expects a step function"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(Report::Ok(t)) => (t, 0),
        Ok(Report::Failed(t)) => (t, 1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
