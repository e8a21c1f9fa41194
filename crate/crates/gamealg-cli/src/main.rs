//! Command-line interface for the nonlocal-game workbench.
//!
//! Exit codes: 0 on success, 1 for validation/usage errors, 2 for
//! numerical failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gamealg::games::{bcs_game, canonicalize, game_value, xor_bias, Game};
use gamealg::harness::{
    breakpoints_to_csv, instance_library, rows_to_csv, run_sweep, run_trial, INSTANCE_NAMES,
};
use gamealg::json::{
    AssignmentWire, DefectReportWire, ExtractionWire, GameValueWire, GameWire, LiftWire,
    MatrixWire, RoundingWire, SlopesWire, SolutionWire, StrategyWire, SweepConfigWire,
};
use gamealg::lifting::{lift_bcs, lift_synchronous, lift_xor, synch_assignment_from_bcs};
use gamealg::matcore::DensityFactor;
use gamealg::rounding::round_representation;
use gamealg::starpoly::{
    bcs_algebra, defect, iso_symbolic_residual, synch_from_synchbcs, synchbcs_algebra,
    synchbcs_from_synch, synchronous_algebra, xor_solution_algebra, MatrixAssignment, NormKind,
};
use gamealg::strategy2rep::{extract_bcs, extract_synchronous, extract_xor};
use gamealg::xorsdp::{optimal_bias, tsirelson_strategy};
use gamealg::{Error as LibError, Result as LibResult};

#[derive(Parser)]
#[command(
    name = "gamealg",
    version,
    about = "Nonlocal games, game algebras, and strategy rounding"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Winning probability of a PVM strategy, with the per-input table
    Value {
        /// Library instance name or game JSON path
        #[arg(long)]
        game: String,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bias of an observables strategy on an XOR game
    Bias {
        #[arg(long)]
        game: String,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-relation defect of an assignment against the game's algebra
    Defect {
        #[arg(long)]
        game: String,
        #[arg(long)]
        assignment: PathBuf,
        /// One of: op, F, f, rho
        #[arg(long, default_value = "f")]
        norm: String,
        /// Density factor JSON (matrix), required for the rho norm
        #[arg(long)]
        lambda: Option<PathBuf>,
        /// Vector solution JSON; required for XOR games (marginal biases)
        #[arg(long)]
        solution: Option<PathBuf>,
        /// For synchronous games: score against `synch` (default) or
        /// `synchbcs` relations
        #[arg(long, default_value = "synch")]
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a rho-seminorm near-representation from a strategy
    Extract {
        #[arg(long)]
        game: String,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Round an extraction to the little Frobenius norm on a subspace
    Round {
        #[arg(long)]
        game: String,
        #[arg(long)]
        extraction: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV of (breakpoint, functional, rank)
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Lift an assignment to an exact-measurement strategy
    Lift {
        #[arg(long)]
        game: String,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vector optimization of an XOR game's bias
    XorSolve {
        #[arg(long)]
        game: String,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Defaults to $GAMEALG_SEED, then 0
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the Clifford strategy realizing the solution
        #[arg(long)]
        strategy_out: Option<PathBuf>,
    },
    /// Perturbation sweep with fitted log-log slopes
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV output path
        #[arg(long)]
        out: PathBuf,
        /// Slopes JSON path (stdout when omitted)
        #[arg(long)]
        slopes_out: Option<PathBuf>,
        /// Directory for per-trial strategy JSONs; feed them back through
        /// `extract`/`round`/`lift` to re-derive any CSV row
        #[arg(long)]
        artifacts_dir: Option<PathBuf>,
    },
    /// Verify the synchronous/SynchBCS isomorphism round trip on a game
    CheckIso {
        #[arg(long)]
        game: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a library instance's files (game, assignment, strategy, ...)
    Instance {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                AppError::Lib(LibError::Numerical(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

#[derive(Debug)]
enum AppError {
    Usage(String),
    Lib(LibError),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(msg) => write!(f, "{msg}"),
            AppError::Lib(err) => write!(f, "{err}"),
        }
    }
}

impl From<LibError> for AppError {
    fn from(err: LibError) -> Self {
        AppError::Lib(err)
    }
}

type AppResult<V> = Result<V, AppError>;

fn read_json<V: serde::de::DeserializeOwned>(path: &Path) -> AppResult<V> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))
}

fn write_output(out: &Option<PathBuf>, text: &str) -> AppResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<V: serde::Serialize>(value: &V) -> AppResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| AppError::Usage(e.to_string()))
}

/// Resolve `--game`: an existing file is parsed as JSON, otherwise the name
/// is looked up in the instance library.
fn load_game(source: &str) -> AppResult<Game<f64>> {
    let path = Path::new(source);
    if path.exists() {
        let wire: GameWire<f64> = read_json(path)?;
        return Ok(wire.into_game()?);
    }
    if INSTANCE_NAMES.contains(&source) {
        return Ok(instance_library::<f64>(source)?.game);
    }
    Err(AppError::Usage(format!(
        "`{source}` is neither a file nor a library instance (known: {})",
        INSTANCE_NAMES.join(", ")
    )))
}

fn load_strategy(path: &Path) -> AppResult<gamealg::games::Strategy<f64>> {
    let wire: StrategyWire<f64> = read_json(path)?;
    let s = wire.into_strategy()?;
    s.validate()?;
    Ok(s)
}

fn load_assignment(path: &Path) -> AppResult<MatrixAssignment<f64>> {
    let wire: AssignmentWire<f64> = read_json(path)?;
    Ok(wire.into_assignment()?)
}

fn load_solution(
    path: &Option<PathBuf>,
    context: &str,
) -> AppResult<gamealg::xorsdp::VectorSolution<f64>> {
    match path {
        Some(p) => {
            let wire: SolutionWire<f64> = read_json(p)?;
            Ok(wire.into_solution())
        }
        None => Err(AppError::Usage(format!(
            "{context} requires --solution (vector solution JSON from xor-solve)"
        ))),
    }
}

fn default_seed(explicit: Option<u64>) -> u64 {
    explicit.unwrap_or_else(|| {
        std::env::var("GAMEALG_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn presentation_for(
    game: &Game<f64>,
    solution: &Option<PathBuf>,
    algebra: &str,
) -> AppResult<gamealg::starpoly::AlgebraPresentation<f64>> {
    match game {
        Game::Synchronous(g) => match algebra {
            "synch" => Ok(synchronous_algebra(g)),
            "synchbcs" => Ok(synchbcs_algebra(g)),
            other => Err(AppError::Usage(format!(
                "unknown --algebra `{other}` (use synch or synchbcs)"
            ))),
        },
        Game::Bcs(b) => Ok(bcs_algebra(b)?),
        Game::Xor(g) => {
            let sol = load_solution(solution, "defect on an XOR game")?;
            Ok(xor_solution_algebra(g, &sol.c)?)
        }
        Game::Predicate(_) => Err(AppError::Usage(
            "general predicate games carry no finitely presented algebra here".into(),
        )),
    }
}

fn run(cli: Cli) -> AppResult<()> {
    match cli.cmd {
        Cmd::Value {
            game,
            strategy,
            out,
        } => {
            let game = load_game(&game)?;
            let strategy = load_strategy(&strategy)?;
            let nonlocal = match &game {
                Game::Predicate(p) => p.clone(),
                Game::Synchronous(s) => s.to_nonlocal(),
                Game::Bcs(b) => bcs_game(b)?,
                Game::Xor(_) => {
                    return Err(AppError::Usage(
                        "XOR games are scored by `bias`, not `value`".into(),
                    ))
                }
            };
            let gv = game_value(&nonlocal, &strategy)?;
            write_output(&out, &to_json(&GameValueWire::from_value(&gv))?)
        }
        Cmd::Bias {
            game,
            strategy,
            out,
        } => {
            let game = load_game(&game)?;
            let strategy = load_strategy(&strategy)?;
            let g = match &game {
                Game::Xor(g) => g,
                _ => return Err(AppError::Usage("`bias` needs an XOR game".into())),
            };
            let bias = xor_bias(g, &strategy)?;
            write_output(&out, &to_json(&serde_json::json!({ "bias": bias }))?)
        }
        Cmd::Defect {
            game,
            assignment,
            norm,
            lambda,
            solution,
            algebra,
            out,
        } => {
            let game = load_game(&game)?;
            let assignment = load_assignment(&assignment)?;
            let kind = NormKind::parse(&norm)?;
            let lam = match &lambda {
                Some(path) => {
                    let wire: MatrixWire<f64> = read_json(path)?;
                    Some(DensityFactor::new(wire.into_matrix()?)?)
                }
                None => None,
            };
            let pres = presentation_for(&game, &solution, &algebra)?;
            let report = defect(&pres, &assignment, kind, lam.as_ref())?;
            write_output(&out, &to_json(&DefectReportWire::from_report(&report))?)
        }
        Cmd::Extract {
            game,
            strategy,
            solution,
            out,
        } => {
            let game = load_game(&game)?;
            let strategy = load_strategy(&strategy)?;
            let (canonical, _) = if strategy.canonical {
                (strategy, None)
            } else {
                let (s, lam) = canonicalize(&strategy)?;
                (s, Some(lam))
            };
            let extraction = match &game {
                Game::Synchronous(g) => extract_synchronous(g, &canonical)?,
                Game::Bcs(b) => extract_bcs(b, &canonical)?,
                Game::Xor(g) => {
                    let sol = load_solution(&solution, "extract on an XOR game")?;
                    extract_xor(g, &canonical, &sol.c)?
                }
                Game::Predicate(_) => {
                    return Err(AppError::Usage(
                        "extraction needs a synchronous, BCS, or XOR game".into(),
                    ))
                }
            };
            write_output(
                &out,
                &to_json(&ExtractionWire::from_extraction(&extraction))?,
            )
        }
        Cmd::Round {
            game,
            extraction,
            tol,
            solution,
            out,
            csv,
        } => {
            let game = load_game(&game)?;
            let wire: ExtractionWire<f64> = read_json(&extraction)?;
            let ext = wire.into_extraction()?;
            // Synchronous extractions hold projections; rounding always
            // runs in the observable (SynchBCS) picture.
            let (assignment, pres) = match &game {
                Game::Synchronous(g) => {
                    (synchbcs_from_synch(&ext.assignment)?, synchbcs_algebra(g))
                }
                Game::Bcs(b) => (ext.assignment.clone(), bcs_algebra(b)?),
                Game::Xor(g) => {
                    let sol = load_solution(&solution, "round on an XOR game")?;
                    (ext.assignment.clone(), xor_solution_algebra(g, &sol.c)?)
                }
                Game::Predicate(_) => {
                    return Err(AppError::Usage(
                        "rounding needs a synchronous, BCS, or XOR game".into(),
                    ))
                }
            };
            let rounded = round_representation(&assignment, &ext.lambda, &pres, tol)?;
            if let Some(path) = csv {
                fs::write(&path, breakpoints_to_csv(&rounded.breakpoints))
                    .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
            }
            write_output(&out, &to_json(&RoundingWire::from_rounding(&rounded))?)
        }
        Cmd::Lift {
            game,
            assignment,
            solution,
            out,
        } => {
            let game = load_game(&game)?;
            let assignment = load_assignment(&assignment)?;
            let lift = match &game {
                Game::Synchronous(g) => {
                    // Accept either picture; z-assignments come from the
                    // rounding step and map through the isomorphism.
                    let in_p = assignment
                        .names()
                        .next()
                        .is_some_and(|n| n.starts_with('p'));
                    let p_assignment = if in_p {
                        assignment
                    } else {
                        synch_assignment_from_bcs(&assignment, g)?.assignment
                    };
                    lift_synchronous(&p_assignment, g)?
                }
                Game::Bcs(b) => lift_bcs(&assignment, b)?,
                Game::Xor(g) => {
                    let sol = load_solution(&solution, "lift on an XOR game")?;
                    lift_xor(&assignment, g, &sol)?
                }
                Game::Predicate(_) => {
                    return Err(AppError::Usage(
                        "lifting needs a synchronous, BCS, or XOR game".into(),
                    ))
                }
            };
            write_output(&out, &to_json(&LiftWire::from_lift(&lift))?)
        }
        Cmd::XorSolve {
            game,
            restarts,
            tol,
            seed,
            out,
            strategy_out,
        } => {
            let game = load_game(&game)?;
            let g = match &game {
                Game::Xor(g) => g,
                _ => return Err(AppError::Usage("`xor-solve` needs an XOR game".into())),
            };
            let sol = optimal_bias(g, restarts, tol, default_seed(seed))?;
            if let Some(path) = strategy_out {
                let strat = tsirelson_strategy(&sol)?;
                fs::write(&path, to_json(&StrategyWire::from_strategy(&strat))?)
                    .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
            }
            write_output(&out, &to_json(&SolutionWire::from_solution(&sol))?)
        }
        Cmd::Sweep {
            config,
            out,
            slopes_out,
            artifacts_dir,
        } => {
            let wire: SweepConfigWire<f64> = read_json(&config)?;
            let cfg = wire.into_config()?;
            let result = run_sweep(&cfg)?;
            fs::write(&out, rows_to_csv(&result.rows))
                .map_err(|e| AppError::Usage(format!("{}: {e}", out.display())))?;
            if let Some(dir) = artifacts_dir {
                fs::create_dir_all(&dir)
                    .map_err(|e| AppError::Usage(format!("{}: {e}", dir.display())))?;
                let instance = instance_library::<f64>(&cfg.instance)?;
                for di in 0..cfg.delta_grid.len() {
                    for trial in 0..cfg.trials_per_delta {
                        let art = run_trial(&cfg, &instance, di, trial)?;
                        let path = dir.join(format!("strategy_d{di}_t{trial}.json"));
                        fs::write(&path, to_json(&StrategyWire::from_strategy(&art.strategy))?)
                            .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
                    }
                }
            }
            let slopes = to_json(&SlopesWire::from_slopes(&result.slopes))?;
            match slopes_out {
                Some(path) => fs::write(&path, slopes)
                    .map_err(|e| AppError::Usage(format!("{}: {e}", path.display()))),
                None => {
                    println!("{slopes}");
                    Ok(())
                }
            }
        }
        Cmd::CheckIso { game, out } => {
            let game = load_game(&game)?;
            let g = match &game {
                Game::Synchronous(g) => g,
                _ => {
                    return Err(AppError::Usage(
                        "`check-iso` needs a synchronous game".into(),
                    ))
                }
            };
            let symbolic = iso_symbolic_residual(g);
            let numeric = numeric_iso_residual(g)?;
            write_output(
                &out,
                &to_json(&serde_json::json!({
                    "symbolic_residual": symbolic,
                    "numeric_residual": numeric,
                }))?,
            )
        }
        Cmd::Instance { name, out_dir } => {
            let inst = instance_library::<f64>(&name)?;
            fs::create_dir_all(&out_dir)
                .map_err(|e| AppError::Usage(format!("{}: {e}", out_dir.display())))?;
            let write = |file: &str, text: String| -> AppResult<()> {
                let path = out_dir.join(file);
                fs::write(&path, text)
                    .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))
            };
            write("game.json", to_json(&GameWire::from_game(&inst.game))?)?;
            write(
                "assignment.json",
                to_json(&AssignmentWire::from_assignment(&inst.assignment))?,
            )?;
            write(
                "strategy.json",
                to_json(&StrategyWire::from_strategy(&inst.strategy))?,
            )?;
            if let Some(sol) = &inst.solution {
                write("solution.json", to_json(&SolutionWire::from_solution(sol))?)?;
            }
            if let Some(classical) = &inst.classical_strategy {
                write(
                    "classical_strategy.json",
                    to_json(&StrategyWire::from_strategy(classical))?,
                )?;
            }
            Ok(())
        }
    }
}

/// Deterministic numeric round-trip residual on a dyadic-grid assignment,
/// which floating point maps through the isomorphism exactly.
fn numeric_iso_residual(g: &gamealg::games::SynchronousGame<f64>) -> LibResult<f64> {
    use std::collections::BTreeMap;
    let mut images = BTreeMap::new();
    let mut state = 0x243f6a8885a308d3u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        ((state >> 20) as i64 % 2048) as f64 / 1024.0
    };
    for i in 0..g.questions.len() {
        for a in 0..g.answers.len() {
            let m = gamealg::Matrix64::from_fn(4, |_, _| gamealg::scalar::c(next(), next()));
            images.insert(format!("z[{i},{a}]"), m);
        }
    }
    let za = MatrixAssignment::new(images)?;
    let round = synchbcs_from_synch(&synch_from_synchbcs(&za)?)?;
    let mut worst = 0.0f64;
    for name in za.names() {
        let diff = (za.get(name)? - round.get(name)?).frobenius_norm();
        worst = worst.max(diff);
    }
    Ok(worst)
}
