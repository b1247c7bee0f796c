//! `randgroups`: sample presentations, inspect pieces and diagrams, build the
//! explicit constructions and run the Monte Carlo experiments.
//!
//! Exit status is 0 on success, 2 when a requested check fails and 1 on
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randgroups::bounds;
use randgroups::constructions::{build_counterexample, build_three_face, build_two_face, ConstructionSummary};
use randgroups::dehn::{greendlinger_check, random_trivial_word, DehnIndex};
use randgroups::diagram::{is_reduced_diagram, isoperimetric_check, Diagram};
use randgroups::experiments::{
    run_greendlinger_experiment, run_isoperimetry_experiment, run_piece_experiment, ExperimentConfig, DEFAULT_EPSILON,
};
use randgroups::pieces::{piece_spectrum, small_cancellation_check, RotationIndex};
use randgroups::presentation::{sample_seeded, Presentation, SampleOptions};
use randgroups::words::Word;
use serde_json::json;

#[derive(Parser)]
#[command(name = "randgroups", version, about = "Random groups in the density model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a presentation and print it as JSON.
    Sample {
        #[command(flatten)]
        model: Model,
        /// Exact relator count instead of (2m-1)^(d·ell).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of piece lengths as `length,count` CSV.
    Pieces {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the C'(lambda) small cancellation condition.
    Cancellation {
        #[command(flatten)]
        source: Source,
        /// A fraction such as `1/6`.
        #[arg(long, default_value = "1/6")]
        lambda: Ratio<u64>,
    },
    /// Run Dehn's algorithm on a word and print the trace.
    Dehn {
        #[command(flatten)]
        source: Source,
        /// The word to reduce; defaults to a random product of conjugates of relators.
        #[arg(long)]
        word: Option<String>,
        /// Conjugates in the random word.
        #[arg(long, default_value_t = 3)]
        conjugates: usize,
        /// Seed for the random word.
        #[arg(long, default_value_t = 0)]
        word_seed: u64,
        /// Let matches wrap around the end of the word.
        #[arg(long)]
        cyclic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate or check a stored diagram.
    Diagram {
        #[command(subcommand)]
        action: DiagramAction,
    },
    /// Build one of the explicit diagrams.
    Construct {
        kind: ConstructionKind,
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        /// Where to write the diagram JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the closed-form constants.
    Bounds(BoundsArgs),
    /// Run a Monte Carlo experiment; the summary CSV goes to stdout.
    Experiment {
        kind: ExperimentKind,
        #[command(flatten)]
        grid: Grid,
        /// Where to write the per-trial CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DiagramAction {
    /// Structural validation against the presentation.
    Validate {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Reducedness, isoperimetry and the Greendlinger property.
    Check {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
        /// Density used by the checks; defaults to the presentation's.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionKind {
    TwoFace,
    ThreeFace,
    Counterexample,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Pieces,
    Greendlinger,
    Isoperimetry,
}

#[derive(Args)]
struct Model {
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 20)]
    ell: usize,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A presentation file, or sampling parameters.
#[derive(Args)]
struct Source {
    /// Presentation JSON; when absent one is sampled.
    #[arg(long)]
    presentation: Option<PathBuf>,
    #[command(flatten)]
    model: Model,
}

#[derive(Args)]
struct Grid {
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 60)]
    ell: usize,
    /// Comma-separated densities.
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    density: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Face count for the Greendlinger experiment.
    #[arg(long, default_value_t = 4)]
    faces: usize,
    /// Comma-separated face targets for the isoperimetry experiment.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    face_grid: Vec<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Isoperimetric constant in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Size scale; defaults to 3000/C⁴.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 100.0)]
    ell: f64,
    #[arg(long, default_value_t = 0.25)]
    density: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Slack of the seven-face extension bound.
    #[arg(long, default_value_t = 0.001)]
    epsilon_prime: f64,
}

type Failure = Box<dyn std::error::Error>;

enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_presentation(path: &Path) -> Result<Presentation, Failure> {
    Ok(Presentation::load(fs::File::open(path)?)?)
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    Ok(Diagram::from_json(&fs::read_to_string(path)?)?)
}

impl Model {
    fn sample(&self, count: Option<usize>) -> Result<Presentation, Failure> {
        let options = SampleOptions { count_override: count, ..SampleOptions::default() };
        Ok(sample_seeded(self.m, self.ell, self.density, self.seed, options)?)
    }
}

impl Source {
    fn presentation(&self) -> Result<Presentation, Failure> {
        match &self.presentation {
            Some(path) => load_presentation(path),
            None => self.model.sample(None),
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Sample { model, count, out } => {
            let p = model.sample(count)?;
            emit(&(p.to_json() + "\n"), out.as_deref())?;
            Ok(Outcome::Ok)
        }
        Command::Pieces { source, out } => {
            let p = source.presentation()?;
            let spectrum = piece_spectrum(&RotationIndex::new(&p));
            emit(&spectrum.to_csv(), out.as_deref())?;
            if out.is_some() {
                println!("max_length: {}", spectrum.max_length);
                if let Some(w) = &spectrum.witness {
                    println!("witness: {}", w.to_json());
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Cancellation { source, lambda } => {
            if *lambda.numer() == 0 || lambda > Ratio::from_integer(1) {
                return Err(format!("lambda must lie in (0, 1], got {lambda}").into());
            }
            let p = source.presentation()?;
            let report = small_cancellation_check(&RotationIndex::new(&p), lambda);
            println!("lambda: {}", report.lambda);
            println!("max_piece: {}", report.max_length);
            println!("ell: {}", p.ell());
            println!("holds: {}", report.holds);
            if let Some(w) = &report.worst {
                println!("worst: {}", w.to_json());
            }
            Ok(verdict(report.holds))
        }
        Command::Dehn { source, word, conjugates, word_seed, cyclic, out } => {
            let p = source.presentation()?;
            let w = match word {
                Some(text) => text.parse::<Word>()?,
                None => random_trivial_word(&p, conjugates, &mut ChaCha8Rng::seed_from_u64(word_seed)),
            };
            let trace = DehnIndex::new(&p).reduce(&w, cyclic);
            emit(&trace.to_text(), out.as_deref())?;
            Ok(verdict(trace.succeeded()))
        }
        Command::Diagram { action } => diagram_command(action),
        Command::Construct { kind, source, epsilon, out } => {
            let p = source.presentation()?;
            let built = match kind {
                ConstructionKind::TwoFace => build_two_face(&p, epsilon).map(|c| ("two-face", c.diagram, c.targets)),
                ConstructionKind::ThreeFace => {
                    build_three_face(&p, epsilon)?.map(|c| ("three-face", c.diagram, c.targets))
                }
                ConstructionKind::Counterexample => {
                    build_counterexample(&p, epsilon)?.map(|c| ("counterexample", c.diagram, c.targets))
                }
            };
            let Some((name, diagram, targets)) = built else {
                eprintln!("no construction found");
                return Ok(Outcome::CheckFailed);
            };
            let summary = ConstructionSummary::new(name, &diagram, p.density(), epsilon, targets);
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if let Some(path) = out {
                fs::write(path, diagram.to_json() + "\n")?;
            }
            Ok(Outcome::Ok)
        }
        Command::Bounds(args) => bounds_command(&args),
        Command::Experiment { kind, grid, out } => {
            let config = ExperimentConfig {
                m: grid.m,
                ell: grid.ell,
                densities: grid.density,
                trials: grid.trials,
                master_seed: grid.seed,
                eps: grid.epsilon,
                workers: grid.workers,
            };
            let output = match kind {
                ExperimentKind::Pieces => run_piece_experiment(&config)?,
                ExperimentKind::Greendlinger => run_greendlinger_experiment(&config, grid.faces)?,
                ExperimentKind::Isoperimetry => run_isoperimetry_experiment(&config, &grid.face_grid)?,
            };
            if let Some(path) = out {
                fs::write(path, &output.trials)?;
            }
            print!("{}", output.summary);
            Ok(Outcome::Ok)
        }
    }
}

fn diagram_command(action: DiagramAction) -> Result<Outcome, Failure> {
    match action {
        DiagramAction::Validate { presentation, diagram } => {
            let p = load_presentation(&presentation)?;
            let report = load_diagram(&diagram)?.validate(&p);
            println!("{report}");
            Ok(verdict(report.is_valid()))
        }
        DiagramAction::Check { presentation, diagram, density, epsilon } => {
            let p = load_presentation(&presentation)?;
            let d = load_diagram(&diagram)?;
            let valid = d.validate(&p);
            if !valid.is_valid() {
                println!("{valid}");
                return Ok(Outcome::CheckFailed);
            }
            let density = density.unwrap_or(p.density());
            let reduced = is_reduced_diagram(&d);
            let iso = isoperimetric_check(&d, density, epsilon);
            println!("faces: {}", d.face_count());
            println!("boundary: {}", d.boundary_length());
            println!("reduced: {reduced}");
            println!("isoperimetry: {} (ratio {}, threshold {})", iso.holds, iso.ratio, iso.threshold);
            let greendlinger = match greendlinger_check(&d, density, epsilon) {
                Ok(r) => {
                    println!("greendlinger: {} (long-run faces {:?})", r.holds, r.long_run_faces);
                    r.holds
                }
                Err(e) => {
                    println!("greendlinger: skipped ({e})");
                    true
                }
            };
            Ok(verdict(reduced && iso.holds && greendlinger))
        }
    }
}

fn bounds_command(args: &BoundsArgs) -> Result<Outcome, Failure> {
    let a = match args.a {
        Some(a) => a,
        None => bounds::min_a(args.c)?,
    };
    let boot = bounds::bootstrap_beta(args.beta, a, args.steps)?;
    let report = json!({
        "c": args.c,
        "alpha": bounds::alpha(args.c).ok(),
        "min_k": bounds::min_k(args.c)?,
        "min_a": bounds::min_a(args.c)?,
        "side_conditions": bounds::side_conditions(args.c, a)?,
        "main_assembly": bounds::main_assembly(args.c, args.epsilon)?,
        "geometric_deficit": bounds::geometric_deficit(),
        "bootstrap": {
            "beta": boot.beta,
            "a": boot.a,
            "claimed_bound": boot.claimed_bound,
            "as_displayed_infimum": boot.as_displayed.infimum,
            "as_displayed_holds": boot.as_displayed_holds,
            "lemma_scale_infimum": boot.lemma_scale.infimum,
            "lemma_scale_holds": boot.lemma_scale_holds,
        },
        "delta_bound": bounds::delta_bound(args.ell, args.density, args.epsilon).ok(),
        "greendlinger_threshold": bounds::greendlinger_threshold(args.ell, args.density, args.epsilon),
        "counterexample_margin": bounds::counterexample_margin(args.ell, args.density, args.epsilon, args.epsilon_prime).ok(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(Outcome::Ok)
}
