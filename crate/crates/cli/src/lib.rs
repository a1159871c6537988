//! Command-line front end. `run` is the whole program; `main` only wires
//! it to the process streams.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use npc2_core::algebra::group::Pi1Model;
use npc2_core::collapse::{verify_certificate, CollapseOutcome};
use npc2_core::harness::generators::{generate, Generator};
use npc2_core::harness::scan::{scan_pairs, ScanConfig, ScanVerdict};
use npc2_core::io::{
    emit_complex, emit_report, parse_complex, parse_subcomplex_files, subcomplex_from_file, Cat0Report, CollapseReport,
    ComponentPi1, Format, HomologyReport, InputError, ParsedComplex, Pi1Report, Report, SubcomplexFile,
    ValidationReport,
};
use npc2_core::metric::{check_link_condition, is_cat0, Cat0Options, LinkVerdict, DEFAULT_TOLERANCE};
use npc2_core::{complex_homology, Budget, Subcomplex, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "npc2", version, about = "Curvature, collapses and pi_1-injectivity of finite 2-complexes")]
struct Cli {
    /// Output format; `machine` is versioned JSON.
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Human)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the input is a well-formed 2-complex.
    Validate(Input),
    /// Link condition at every vertex.
    Curvature {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Link condition plus trivial pi_1.
    Cat0 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        metric: MetricFlags,
        #[command(flatten)]
        budget: BudgetFlags,
    },
    /// Integral homology.
    Homology(Input),
    /// Fundamental group of each component.
    Pi1 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: BudgetFlags,
    },
    /// Search for a collapse to a vertex.
    Collapse {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: BudgetFlags,
    },
    /// Test pairs of subcomplexes for pi_1-injectivity of the intersection.
    Scan(ScanArgs),
    /// Print a builtin complex as a complex file.
    Generate {
        /// triangle, disk_grid, octahedron, torus_grid, cone or path
        name: String,
        /// Grid side for disk_grid and torus_grid.
        #[arg(long)]
        n: Option<u32>,
        /// Cycle length for cone, edge count for path.
        #[arg(long)]
        k: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Complex file; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MetricFlags {
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Accept links with systole exactly 2 pi (within tolerance).
    #[arg(long)]
    assume_flat_ok: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetFlags {
    #[arg(long, env = "NPC2_BUDGET_TIETZE_MOVES")]
    budget_tietze_moves: Option<usize>,
    #[arg(long, env = "NPC2_BUDGET_MAX_COSETS")]
    budget_max_cosets: Option<usize>,
    #[arg(long, env = "NPC2_BUDGET_WITNESS_LENGTH")]
    budget_witness_length: Option<usize>,
    #[arg(long, env = "NPC2_BUDGET_WITNESS_WORDS")]
    budget_witness_words: Option<usize>,
    #[arg(long, env = "NPC2_BUDGET_COLLAPSE_NODES")]
    budget_collapse_nodes: Option<usize>,
}

impl BudgetFlags {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            tietze_moves: self.budget_tietze_moves.unwrap_or(d.tietze_moves),
            max_cosets: self.budget_max_cosets.unwrap_or(d.max_cosets),
            witness_length: self.budget_witness_length.unwrap_or(d.witness_length),
            witness_words: self.budget_witness_words.unwrap_or(d.witness_words),
            collapse_nodes: self.budget_collapse_nodes.unwrap_or(d.collapse_nodes),
        }
    }
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    input: Input,
    /// Candidate Y subcomplexes (a subcomplex file or an array of them);
    /// repeatable. All subcomplexes within --max-y when omitted.
    #[arg(long = "y")]
    y: Vec<PathBuf>,
    /// Candidate Z subcomplexes, as for --y.
    #[arg(long = "z")]
    z: Vec<PathBuf>,
    /// Largest enumerated Y, in simplices.
    #[arg(long)]
    max_y: Option<usize>,
    /// Largest enumerated Z, in simplices.
    #[arg(long)]
    max_z: Option<usize>,
    /// Also enumerate disconnected subcomplexes.
    #[arg(long)]
    include_disconnected: bool,
    /// Also test Y that are not themselves pi_1-injective.
    #[arg(long)]
    any_y: bool,
    /// Violation and unknown classes to record in full.
    #[arg(long, default_value_t = 20)]
    max_recorded: usize,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    budget: BudgetFlags,
}

enum Failure {
    Usage(String),
    Input(String),
}

/// Runs the program on `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Machine => Format::Machine,
    };
    match dispatch(cli.command, format, stdin) {
        Ok((text, code)) => {
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return EXIT_USAGE;
            }
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "npc2: usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "npc2: input error: {msg}");
            EXIT_USAGE
        }
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String, Failure> {
    match input.input.as_deref() {
        Some(p) if p != Path::new("-") => read_path(p),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure::Input(format!("<stdin>: {e}")))?;
            Ok(s)
        }
    }
}

fn read_path(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<ParsedComplex, Failure> {
    let text = read_input(input, stdin)?;
    parse_complex(&text).map_err(|e| located(input.input.as_deref(), e))
}

fn located(path: Option<&Path>, e: InputError) -> Failure {
    let name = path.map(|p| p.display().to_string()).unwrap_or_else(|| "<stdin>".into());
    Failure::Input(format!("{name}: {e}"))
}

fn render<R: Report>(r: &R, format: Format, code: i32) -> Result<(String, i32), Failure> {
    Ok((emit_report(r, format), code))
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_OK,
        Verdict::No => EXIT_NO,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn check_tolerance(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--tol must be a finite nonnegative number, got {tol}")))
    }
}

fn dispatch(command: Command, format: Format, stdin: &mut dyn Read) -> Result<(String, i32), Failure> {
    match command {
        Command::Validate(input) => {
            let text = read_input(&input, stdin)?;
            match parse_complex(&text) {
                Ok(p) => render(&ValidationReport::valid(&p.complex, &p.metric), format, EXIT_OK),
                Err(InputError::Validation(e)) => render(&ValidationReport::invalid(&e), format, EXIT_NO),
                Err(e) => Err(located(input.input.as_deref(), e)),
            }
        }
        Command::Curvature { input, metric } => {
            check_tolerance(metric.tol)?;
            let p = load(&input, stdin)?;
            let report = check_link_condition(&p.complex, &p.metric, metric.tol)
                .map_err(|e| Failure::Input(e.to_string()))?
                .assuming_flat_ok(metric.assume_flat_ok);
            let code = match report.overall {
                LinkVerdict::Pass => EXIT_OK,
                LinkVerdict::Marginal => EXIT_UNKNOWN,
                LinkVerdict::Fail => EXIT_NO,
            };
            render(&report, format, code)
        }
        Command::Cat0 { input, metric, budget } => {
            check_tolerance(metric.tol)?;
            let p = load(&input, stdin)?;
            let budget = budget.budget();
            let opts = Cat0Options { tol: metric.tol, assume_flat_ok: metric.assume_flat_ok };
            let result = is_cat0(&p.complex, &p.metric, &budget, &opts).map_err(|e| Failure::Input(e.to_string()))?;
            let code = verdict_code(result.value);
            let report = Cat0Report { tolerance: metric.tol, assume_flat_ok: metric.assume_flat_ok, budget, result };
            render(&report, format, code)
        }
        Command::Homology(input) => {
            let p = load(&input, stdin)?;
            render(&HomologyReport::new(complex_homology(&p.complex)), format, EXIT_OK)
        }
        Command::Pi1 { input, budget } => {
            let p = load(&input, stdin)?;
            let budget = budget.budget();
            let mut components = Vec::new();
            for comp in p.complex.components() {
                let base = *comp.vertices().iter().next().expect("components are nonempty");
                let model =
                    Pi1Model::new(&comp, base, budget.tietze_moves).map_err(|e| Failure::Input(e.to_string()))?;
                components.push(ComponentPi1::of(&model, &budget));
            }
            render(&Pi1Report { budget, components }, format, EXIT_OK)
        }
        Command::Collapse { input, budget } => {
            let p = load(&input, stdin)?;
            let budget = budget.budget();
            let result = npc2_core::is_collapsible(&p.complex, &budget);
            let certificate_verified = match &result.certificate {
                Some(CollapseOutcome::Certificate(c)) => Some(verify_certificate(&p.complex, c).is_ok()),
                _ => None,
            };
            let code = match certificate_verified {
                Some(false) => EXIT_UNKNOWN,
                _ => verdict_code(result.value),
            };
            render(&CollapseReport { budget, result, certificate_verified }, format, code)
        }
        Command::Scan(args) => scan(args, format, stdin),
        Command::Generate { name, n, k } => {
            let g = Generator::from_name(&name, n, k).map_err(|e| Failure::Usage(e.to_string()))?;
            let (c, m) = generate(&g).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((emit_complex(Some(&g.to_string()), None, &c, &m), EXIT_OK))
        }
    }
}

fn read_subcomplexes(paths: &[PathBuf]) -> Result<Vec<(PathBuf, SubcomplexFile)>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        let files = parse_subcomplex_files(&read_path(p)?).map_err(|e| located(Some(p), e))?;
        out.extend(files.into_iter().map(|f| (p.clone(), f)));
    }
    Ok(out)
}

fn scan(args: ScanArgs, format: Format, stdin: &mut dyn Read) -> Result<(String, i32), Failure> {
    let ys = read_subcomplexes(&args.y)?;
    let zs = read_subcomplexes(&args.z)?;
    // Without an explicit input, a parent named by a listed file is used.
    let parent_input = match &args.input.input {
        Some(_) => Input { input: args.input.input.clone() },
        None => {
            let named = ys
                .iter()
                .chain(&zs)
                .find_map(|(path, f)| f.parent.as_ref().map(|p| path.parent().unwrap_or(Path::new(".")).join(p)));
            Input { input: named }
        }
    };
    let parsed = load(&parent_input, stdin)?;
    let parent = Arc::new(parsed.complex);
    let resolve = |list: &[(PathBuf, SubcomplexFile)]| -> Result<Vec<Subcomplex>, Failure> {
        list.iter().map(|(p, f)| subcomplex_from_file(f, &parent).map_err(|e| located(Some(p), e))).collect()
    };
    let y_list = resolve(&ys)?;
    let z_list = resolve(&zs)?;
    let cfg = ScanConfig {
        max_y: args.max_y,
        max_z: args.max_z,
        budget: args.budget.budget(),
        require_y_pi1_injective: !args.any_y,
        connected_only: !args.include_disconnected,
        max_recorded: args.max_recorded,
    };
    let go = || {
        scan_pairs(
            &parent,
            (!args.y.is_empty()).then_some(y_list.as_slice()),
            (!args.z.is_empty()).then_some(z_list.as_slice()),
            &cfg,
        )
    };
    let report = match args.threads {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(go),
        None => go(),
    }
    .map_err(|e| Failure::Input(e.to_string()))?;
    let code = match report.verdict {
        ScanVerdict::Clean => EXIT_OK,
        ScanVerdict::Violation => EXIT_NO,
        ScanVerdict::Inconclusive => EXIT_UNKNOWN,
    };
    render(&report, format, code)
}
