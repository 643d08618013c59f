//! Command-line front end: solve normal logic programs over the
//! infinite-valued truth domain and check models of the stratified axioms.
//!
//! [`run`] holds all the logic so it can be tested without spawning a
//! process. Exit codes: 0 success, 2 user error, 3 internal invariant failure.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use stratafix::axioms::{check_all, check_structure, AxiomReport, CarrierIndex, CheckConfig, Regime, TABLE_LIMIT};
use stratafix::fixpoint::{verify_least_prefix, FixpointTrace};
use stratafix::lp::{
    collapse, fixed_points_bruteforce, infinite_valued_model, least_model_bruteforce, parse_program,
    solve_with_kappa, tp_saturating, wfs_oracle, LpError, Program, Solution, ThreeValuedModel,
};
use stratafix::with_builtin;
use stratafix::zoo::{builtin_model, Interpretation, InterpretationModel};
use stratafix::{Exec, LatticeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stratafix", version, about = "Infinite-valued semantics for normal logic programs")]
pub struct Cli {
    /// Worker threads for exhaustive scans (1 runs sequentially).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the infinite-valued model and its three-valued collapse.
    Solve {
        program: PathBuf,
        /// Print the per-stage iteration trace.
        #[arg(long)]
        trace: bool,
        /// Number of stages; defaults to the number of atoms plus two.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        kappa: Option<u64>,
        /// Compare the collapse with the alternating fixpoint construction.
        #[arg(long)]
        cross_check: bool,
    },
    /// Print the well-founded model.
    Wfs {
        program: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        kappa: Option<u64>,
        #[arg(long)]
        cross_check: bool,
    },
    /// Check the axioms on a built-in model such as V:3, VZ:2:2, PROD:V:2,V:2 or NSP.
    CheckAxioms {
        model: String,
        /// Carriers up to this size are checked over all subsets.
        #[arg(long, default_value_t = 25)]
        exhaustive_limit: usize,
        /// Random instances per axiom for larger carriers.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Confirm the computed model against exhaustive enumeration.
    Verify {
        program: PathBuf,
        /// Number of stages to enumerate; defaults to one more than the
        /// largest order in the model, plus one.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        kappa: Option<u64>,
    },
}

/// Error carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn user(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USER,
            msg: msg.into(),
        }
    }

    fn internal(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            msg: msg.into(),
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::user(e.to_string())
    }
}

/// Errors while solving: with an explicit kappa a truncation or instability
/// means the user picked too few stages.
fn lp_failure(e: LpError, explicit_kappa: bool) -> Failure {
    match e {
        LpError::Truncation { .. } | LpError::Unstable { .. } if explicit_kappa => {
            Failure::user(format!("{e}; try a larger --kappa"))
        }
        e if e.is_user_error() => Failure::user(e.to_string()),
        e => Failure::internal(e.to_string()),
    }
}

type Out = Result<(String, i32), Failure>;

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USER };
        }
    };
    let result = match with_jobs(cli.jobs, |exec| dispatch(&cli, exec)) {
        Ok(r) => r,
        Err(f) => Err(f),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<R: Send>(jobs: Option<u64>, f: impl FnOnce(Exec) -> R + Send) -> Result<R, Failure> {
    match jobs {
        None => Ok(f(Exec::Parallel)),
        Some(1) => Ok(f(Exec::Sequential)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n as usize)
                .build()
                .map_err(|e| Failure::internal(format!("thread pool: {e}")))?;
            Ok(pool.install(|| f(Exec::Parallel)))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<R>(_jobs: Option<u64>, f: impl FnOnce(Exec) -> R) -> Result<R, Failure> {
    Ok(f(Exec::Sequential))
}

fn dispatch(cli: &Cli, exec: Exec) -> Out {
    match &cli.command {
        Command::Solve {
            program,
            trace,
            kappa,
            cross_check,
        } => solve(cli.json, program, *kappa, *trace, *cross_check, true),
        Command::Wfs {
            program,
            kappa,
            cross_check,
        } => solve(cli.json, program, *kappa, false, *cross_check, false),
        Command::CheckAxioms {
            model,
            exhaustive_limit,
            samples,
            seed,
        } => check_axioms(
            cli.json,
            model,
            CheckConfig {
                exhaustive_limit: *exhaustive_limit,
                samples: *samples,
                seed: *seed,
                exec,
            },
        ),
        Command::Verify { program, kappa } => verify(cli.json, program, *kappa, exec),
    }
}

fn load(path: &PathBuf) -> Result<Program, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::user(format!("{}: {e}", path.display())))?;
    parse_program(&text).map_err(|e| Failure::user(format!("{}: {e}", path.display())))
}

fn kappa_arg(kappa: Option<u64>) -> Result<Option<usize>, Failure> {
    kappa
        .map(|k| usize::try_from(k).map_err(|_| Failure::user("--kappa is too large")))
        .transpose()
}

fn interp_json(program: &Program, i: &Interpretation) -> Value {
    let map: Map<String, Value> = program
        .atoms()
        .iter()
        .zip(i.values())
        .map(|(a, v)| (a.clone(), Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

fn tri_json(program: &Program, m: &ThreeValuedModel) -> Value {
    let map: Map<String, Value> = program
        .atoms()
        .iter()
        .zip(&m.values)
        .map(|(a, v)| (a.clone(), Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

fn trace_json(program: &Program, trace: &FixpointTrace<Interpretation>) -> Value {
    trace
        .stages
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage,
                "start": interp_json(program, &s.start),
                "value": interp_json(program, &s.value),
                "inner_steps": s.inner_steps,
            })
        })
        .collect()
}

fn solve(json_out: bool, path: &PathBuf, kappa: Option<u64>, trace: bool, cross_check: bool, full: bool) -> Out {
    let program = load(path)?;
    let kappa = kappa_arg(kappa)?;
    let Solution {
        model,
        trace: steps,
        kappa: used,
    } = infinite_valued_model(&program, kappa).map_err(|e| lp_failure(e, kappa.is_some()))?;
    let wf = collapse(&model);
    let agrees = cross_check.then(|| wfs_oracle(&program) == wf);
    let code = if agrees == Some(false) { EXIT_INTERNAL } else { EXIT_OK };

    if json_out {
        let mut doc = Map::new();
        if full {
            doc.insert("kappa".into(), json!(used));
            doc.insert("atoms".into(), interp_json(&program, &model));
        }
        doc.insert("well_founded".into(), tri_json(&program, &wf));
        if trace {
            doc.insert("trace".into(), trace_json(&program, &steps));
        }
        if let Some(a) = agrees {
            let mut cc = json!({ "agrees": a });
            if !a {
                cc["alternating_fixpoint"] = tri_json(&program, &wfs_oracle(&program));
            }
            doc.insert("cross_check".into(), cc);
        }
        return Ok((format!("{}\n", Value::Object(doc)), code));
    }

    let mut s = String::new();
    if full {
        let _ = writeln!(s, "infinite-valued model (kappa = {used}):");
        for (a, v) in program.atoms().iter().zip(model.values()) {
            let _ = writeln!(s, "  {a} = {v}");
        }
    }
    let _ = writeln!(s, "well-founded model:");
    for (a, v) in program.atoms().iter().zip(&wf.values) {
        let _ = writeln!(s, "  {a} = {v}");
    }
    if trace {
        let _ = writeln!(s, "trace:");
        for st in &steps.stages {
            let _ = writeln!(
                s,
                "  stage {}: {} -> {} in {} steps",
                st.stage,
                st.start.render_with(program.atoms()),
                st.value.render_with(program.atoms()),
                st.inner_steps
            );
        }
    }
    match agrees {
        Some(true) => s.push_str("cross-check: agrees with the alternating fixpoint\n"),
        Some(false) => {
            let _ = writeln!(
                s,
                "cross-check: DISAGREES with the alternating fixpoint {}",
                wfs_oracle(&program).render_with(program.atoms())
            );
        }
        None => {}
    }
    Ok((s, code))
}

fn regime_json(r: Regime) -> Value {
    match r {
        Regime::Exhaustive => json!("exhaustive"),
        Regime::Sampled { samples, seed } => json!({ "samples": samples, "seed": seed }),
    }
}

fn check_axioms(json_out: bool, spec: &str, cfg: CheckConfig) -> Out {
    let model = builtin_model(spec)?;
    let reports: Vec<AxiomReport> = with_builtin!(&model, |m| {
        let mut r = vec![check_structure(m, &cfg)?];
        r.extend(check_all(m, &cfg)?);
        r
    });
    let ok = reports.iter().filter(|r| r.axiom <= 4).all(AxiomReport::passed);
    let code = if ok { EXIT_OK } else { EXIT_INTERNAL };
    if json_out {
        let list: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "axiom": r.axiom,
                    "passed": r.passed(),
                    "regime": regime_json(r.regime),
                    "witness": r.witness,
                })
            })
            .collect();
        return Ok((format!("{}\n", json!({ "model": spec, "axioms": list })), code));
    }
    let mut s = format!("{spec}:\n");
    for r in &reports {
        let _ = writeln!(s, "  {r}");
    }
    Ok((s, code))
}

fn verify(json_out: bool, path: &PathBuf, kappa: Option<u64>, exec: Exec) -> Out {
    let program = load(path)?;
    let kappa = kappa_arg(kappa)?;
    let solution = infinite_valued_model(&program, kappa).map_err(|e| lp_failure(e, kappa.is_some()))?;
    let kb = match kappa {
        Some(k) => k,
        None => solution.model.values().iter().filter_map(|v| v.order()).max().map_or(1, |o| o as usize + 2),
    };
    let at_kb = if kb == solution.kappa {
        solution.clone()
    } else {
        solve_with_kappa(&program, kb).map_err(|e| lp_failure(e, kappa.is_some()))?
    };
    if at_kb.model != solution.model {
        return Err(Failure::internal(format!(
            "model with kappa = {kb} is {} but with kappa = {} it is {}",
            at_kb.model.render_with(program.atoms()),
            solution.kappa,
            solution.model.render_with(program.atoms())
        )));
    }
    let (fixed, scanned) = fixed_points_bruteforce(&program, kb, exec).map_err(|e| lp_failure(e, false))?;
    let least = least_model_bruteforce(&program, kb, exec).map_err(|e| lp_failure(e, false))?;
    if least != solution.model {
        return Err(Failure::internal(format!(
            "enumeration gives least model {} but the engine computed {}",
            least.render_with(program.atoms()),
            solution.model.render_with(program.atoms())
        )));
    }
    let space = InterpretationModel::new(program.atoms().to_vec(), kb)?;
    let prefix = match CarrierIndex::new(&space, TABLE_LIMIT, exec) {
        Ok(idx) => {
            let f = |i: &Interpretation| tp_saturating(&program, kb, i);
            verify_least_prefix(&idx, &f, &solution.model, exec)
                .map_err(|w| Failure::internal(format!("least pre-fixed point check failed: {w}")))?;
            "passed"
        }
        Err(LatticeError::SizeLimit { .. }) => "skipped",
        Err(e) => return Err(Failure::internal(e.to_string())),
    };

    if json_out {
        let doc = json!({
            "verified": true,
            "kappa": kb,
            "interpretations": scanned,
            "fixed_points": fixed.len(),
            "atoms": interp_json(&program, &solution.model),
            "least_prefixed_point": prefix,
        });
        return Ok((format!("{doc}\n"), EXIT_OK));
    }
    let mut s = String::new();
    let _ = writeln!(s, "verified: {}", solution.model.render_with(program.atoms()));
    let _ = writeln!(
        s,
        "  kappa = {kb}, {scanned} interpretations, {} fixed point{}",
        fixed.len(),
        if fixed.len() == 1 { " (unique)" } else { "s" }
    );
    let _ = writeln!(s, "  least fixed point and below every model: yes");
    let _ = writeln!(s, "  least pre-fixed point check: {prefix}");
    Ok((s, EXIT_OK))
}
