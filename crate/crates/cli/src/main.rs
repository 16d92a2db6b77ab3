use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pcm_core::{
    check_uniqueness, consistency_index, cr_optimal_complete, em_weights, gm_weights, ici, lex_complete,
    lls_optimal_complete, matrix_ki, matrix_ti, CompletePcm, CompletionResult, IncompletePcm, RiProvenance, RiTable,
};
use pcm_cli::format::{self, fixed};
use pcm_cli::simulation::{self, SimConfig};
use pcm_cli::CliError;

#[derive(Parser)]
#[command(name = "pcm", version, about = "Complete and compare incomplete pairwise comparison matrices")]
struct Cli {
    /// Decimals in printed numbers
    #[arg(long, global = true, default_value_t = 4)]
    precision: usize,

    /// Write the main output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Lex,
    Eig,
    Lls,
    All,
}

impl MethodArg {
    fn expand(self) -> Vec<MethodArg> {
        match self {
            MethodArg::All => vec![MethodArg::Lex, MethodArg::Eig, MethodArg::Lls],
            m => vec![m],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Gm,
    Em,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Structure of a matrix: missing entries, connectivity, uniqueness, indices
    Analyze { path: PathBuf },
    /// Fill the missing entries
    Complete {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "lex")]
        method: MethodArg,
        /// Complete a disconnected matrix anyway (lexicographic method only)
        #[arg(long)]
        allow_nonunique: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Fills of all methods side by side with their pairwise ICI
    Compare {
        path: PathBuf,
        /// Random index table overriding the shipped one
        #[arg(long)]
        ri_table: Option<PathBuf>,
    },
    /// Priority vectors in percent
    Weights {
        path: PathBuf,
        /// Completion method, required for incomplete input
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, value_enum, default_value = "both")]
        scheme: Scheme,
    },
    /// Random matrix experiment comparing lexicographic and eigenvalue-optimal fills
    Simulate {
        /// case-5-1, case-5-2, case-6-6 or case-10-1
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Give up after this many candidates per requested sample
        #[arg(long)]
        guard_factor: Option<u64>,
        #[arg(long)]
        ri_table: Option<PathBuf>,
        /// Also write the JSON summary here
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Estimate the random index of (n, m) by simulation
    EstimateRi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn read_matrix(path: &Path) -> Result<IncompletePcm, CliError> {
    let text = fs::read_to_string(path)?;
    format::parse_matrix_or_record(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn ri_table(path: Option<&Path>) -> Result<RiTable, CliError> {
    let mut table = pcm_cli::default_ri_table();
    if let Some(p) = path {
        let text = fs::read_to_string(p)?;
        let user = format::parse_ri_table(&text, RiProvenance::UserSupplied)
            .map_err(|source| CliError::Parse { path: p.display().to_string(), source })?;
        table.merge(&user);
    }
    Ok(table)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn complete_with(matrix: &IncompletePcm, method: MethodArg) -> Result<CompletionResult, CliError> {
    Ok(match method {
        MethodArg::Lex => lex_complete(matrix)?,
        MethodArg::Eig => cr_optimal_complete(matrix)?,
        MethodArg::Lls => lls_optimal_complete(matrix)?,
        MethodArg::All => unreachable!("expanded by the caller"),
    })
}

fn analyze(matrix: &IncompletePcm, p: usize) -> Result<String, CliError> {
    let mut out = String::new();
    let graph = matrix.graph();
    let _ = writeln!(out, "order: n = {}", matrix.order());
    let _ = writeln!(
        out,
        "connected: {}, unique completion: {}, m = {}",
        yes_no(graph.is_connected()),
        yes_no(check_uniqueness(matrix)),
        matrix.missing_count()
    );
    if !matrix.missing_cells().is_empty() {
        let cells: Vec<String> = matrix.missing_cells().iter().map(|(i, j)| format!("({},{})", i + 1, j + 1)).collect();
        let _ = writeln!(out, "missing: {}", cells.join(" "));
    }
    if matrix.is_complete() {
        let c = matrix.fill(&[])?;
        if c.order() >= 3 {
            let _ = writeln!(
                out,
                "KI = {}, TI = {}, CI = {}",
                fixed(matrix_ki(&c)?, p),
                fixed(matrix_ti(&c)?, p),
                fixed(consistency_index(&c)?, p)
            );
        } else {
            let _ = writeln!(out, "CI = {}", fixed(consistency_index(&c)?, p));
        }
    }
    Ok(out)
}

fn complete(
    matrix: &IncompletePcm,
    method: MethodArg,
    allow_nonunique: bool,
    fmt: OutputFormat,
    p: usize,
) -> Result<String, CliError> {
    if !matrix.graph().is_connected() && !allow_nonunique {
        return Err(pcm_core::Error::NonUnique.into());
    }
    let methods = method.expand();
    let mut results = Vec::new();
    for m in &methods {
        match complete_with(matrix, *m) {
            Ok(r) => results.push(r),
            // with --allow-nonunique only the lexicographic fill is defined
            Err(CliError::Core(pcm_core::Error::NonUnique)) if allow_nonunique && method == MethodArg::All => {}
            Err(e) => return Err(e),
        }
    }
    if fmt == OutputFormat::Csv {
        return format::write_fills_csv(&results, p);
    }
    let mut out = String::new();
    for (k, r) in results.iter().enumerate() {
        if k > 0 {
            out.push_str("---\n");
        }
        out.push_str(&format::write_record(r, p));
    }
    if results.len() > 1 {
        out.push_str("---\n");
        out.push_str(&ici_table(&results, p)?);
    }
    Ok(out)
}

fn ici_table(results: &[CompletionResult], p: usize) -> Result<String, CliError> {
    let mut out = String::from("ici:\n");
    for a in 0..results.len() {
        for b in a + 1..results.len() {
            let v = ici(&results[a].matrix, &results[b].matrix)?;
            let _ = writeln!(out, "  {} {} {}", results[a].method.name(), results[b].method.name(), fixed(v, p));
        }
    }
    Ok(out)
}

fn compare(matrix: &IncompletePcm, ri: &RiTable, p: usize) -> Result<String, CliError> {
    let results = [MethodArg::Lex, MethodArg::Eig, MethodArg::Lls]
        .into_iter()
        .map(|m| complete_with(matrix, m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::from("cell");
    for r in &results {
        let _ = write!(out, " {}", r.method.name());
    }
    out.push('\n');
    for (k, (i, j)) in matrix.missing_cells().iter().enumerate() {
        let _ = write!(out, "({},{})", i + 1, j + 1);
        for r in &results {
            let _ = write!(out, " {}", fixed(r.filled[k].1, p));
        }
        out.push('\n');
    }
    let _ = write!(out, "lambda_max");
    for r in &results {
        let _ = write!(out, " {}", fixed(pcm_core::lambda_max(&r.matrix)?, p));
    }
    out.push('\n');
    if matrix.order() >= 3 {
        let _ = write!(out, "max TI");
        for r in &results {
            let _ = write!(out, " {}", fixed(r.theta.head(), p));
        }
        out.push('\n');
    }
    match pcm_core::cr_incomplete(matrix, ri) {
        Ok(cr) => {
            let _ = writeln!(out, "CR of the incomplete matrix: {}", fixed(cr, p));
        }
        Err(pcm_core::Error::MissingRandomIndex { n, m }) => {
            let _ = writeln!(out, "CR of the incomplete matrix: no random index for n = {n}, m = {m}");
        }
        Err(e) => return Err(e.into()),
    }
    out.push_str(&ici_table(&results, p)?);
    Ok(out)
}

fn weight_lines(label: &str, m: &CompletePcm, scheme: Scheme, p: usize) -> Result<String, CliError> {
    let mut out = String::new();
    let mut line = |name: &str, w: pcm_core::WeightVector| {
        let values: Vec<String> = w.values().iter().map(|&v| format!("{v:.p$}")).collect();
        let rank: Vec<String> = w.ranking().iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "{label} {name}: {}  rank: {}", values.join(" "), rank.join(" > "));
    };
    if scheme != Scheme::Em {
        line("GM", gm_weights(m)?);
    }
    if scheme != Scheme::Gm {
        line("EM", em_weights(m)?);
    }
    Ok(out)
}

fn weights(matrix: &IncompletePcm, method: Option<MethodArg>, scheme: Scheme, p: usize) -> Result<String, CliError> {
    if matrix.is_complete() {
        return weight_lines("input", &matrix.fill(&[])?, scheme, p);
    }
    let Some(method) = method else {
        return Err(CliError::Usage("the matrix is incomplete; choose a completion with --method".into()));
    };
    let mut out = String::new();
    for m in method.expand() {
        let r = complete_with(matrix, m)?;
        out.push_str(&weight_lines(r.method.name(), &r.matrix, scheme, p)?);
    }
    Ok(out)
}

fn sim_config(preset: Option<&str>, n: Option<usize>, m: Option<usize>, seed: u64) -> Result<SimConfig, CliError> {
    match (preset, n, m) {
        (Some(name), _, _) => {
            let mut c = SimConfig::preset(name, seed)
                .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`, expected one of {:?}", simulation::PRESETS)))?;
            c.n = n.unwrap_or(c.n);
            c.m = m.unwrap_or(c.m);
            Ok(c)
        }
        (None, Some(n), Some(m)) => Ok(SimConfig::new(n, m, 0.1, 500, seed)),
        _ => Err(CliError::Usage("give --preset or both --n and --m".into())),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let p = cli.precision;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Analyze { path } => emit(out, &analyze(&read_matrix(&path)?, p)?),
        Command::Complete { path, method, allow_nonunique, format } => {
            emit(out, &complete(&read_matrix(&path)?, method, allow_nonunique, format, p)?)
        }
        Command::Compare { path, ri_table: table } => {
            emit(out, &compare(&read_matrix(&path)?, &ri_table(table.as_deref())?, p)?)
        }
        Command::Weights { path, method, scheme } => emit(out, &weights(&read_matrix(&path)?, method, scheme, p)?),
        Command::Simulate { preset, n, m, threshold, target, guard_factor, seed, ri_table: table, summary } => {
            let ri = ri_table(table.as_deref())?;
            let mut config = sim_config(preset.as_deref(), n, m, seed)?;
            config.cr_threshold = threshold.unwrap_or(config.cr_threshold);
            config.target_count = target.unwrap_or(config.target_count);
            config.guard_factor = guard_factor.unwrap_or(config.guard_factor);
            let exp = simulation::run_experiment(&config, &ri)?;
            emit(out, &simulation::write_csv(&exp, None)?)?;
            let s = exp.summary;
            if let Some(path) = summary {
                fs::write(path, simulation::summary_json(&s))?;
            }
            eprint!("{}", simulation::summary_text(&s, p));
            Ok(())
        }
        Command::EstimateRi { n, m, samples, seed } => {
            let v = simulation::estimate_random_index(n, m, samples, seed)?;
            emit(out, &format!("{n} {m} {v:.6}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
