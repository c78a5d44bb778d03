//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification or I/O error, 2 malformed
//! input, 3 degenerate matrix, 4 node limit reached, 5 subtraction without an
//! embedding.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kgraph_core::enumerator::{SearchConfig, SearchError};
use kgraph_core::exactalg::RowSystem;
use kgraph_core::tiling::{fundamental_sets, is_prime, TilingError, TilingExpression, DEFAULT_COEFF_BOUND};
use kgraph_core::vgraph::{is_kirchhoff, multiplicity, KirchhoffVerdict, VectorGraph};

use crate::document::{DocumentError, GraphDocument};
use crate::matrix::{load_system, MatrixError, MatrixMode};
use crate::parallel;
use crate::render;

pub const DEFAULT_PRIME_BUDGET: u64 = 50_000_000;

#[derive(Parser, Debug)]
#[command(name = "kgraph", version, about = "Enumerate and tile uniform Kirchhoff graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixArgs {
    /// Matrix file: one row per line, integers or p/q, `#` comments
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = MatrixMode::RowMatrix)]
    pub mode: MatrixMode,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long)]
    pub m_max: u32,
    /// Keep anchor cuts whose neighbours have negative coordinate sums
    #[arg(long)]
    pub no_negative_sum_prune: bool,
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Worker threads (default: all available)
    #[arg(long)]
    pub workers: Option<usize>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        let mut c = SearchConfig::new(self.m_max);
        c.prune_negative_sum = !self.no_negative_sum_prune;
        c.node_limit = self.node_limit;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate all uniform Kirchhoff graphs up to a multiplicity
    Enumerate {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// JSON document destination
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        classify_prime: bool,
        #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
        prime_budget: u64,
    },
    /// Check both Kirchhoff conditions for every graph of a document
    Verify { document: PathBuf },
    /// Evaluate a tiling expression such as `4*G0@(0,0) - 1*G1@(1,1)`
    Tile {
        expression: String,
        /// Document whose graph ids the expression refers to
        #[arg(long, conflicts_with = "matrix")]
        doc: Option<PathBuf>,
        #[arg(long, requires = "m_max")]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MatrixMode::RowMatrix)]
        mode: MatrixMode,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        check_prime: bool,
        #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
        prime_budget: u64,
    },
    /// Draw graphs of a document, one file per graph
    Render {
        document: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated graph ids (default: all)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        select: Option<Vec<usize>>,
    },
    /// Minimum-cardinality generating subsets within the search bounds
    Fundamental {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = DEFAULT_COEFF_BOUND)]
        coeff_bound: u32,
    },
    /// Smallest multiplicity with a nonempty Kirchhoff graph
    MinMultiplicity {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, default_value_t = 8)]
        m_limit: u32,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("node limit reached after {0} graphs; output is incomplete")]
    NodeLimit(usize),
    #[error("{0}")]
    NoEmbedding(TilingError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NodeLimit(_) => 4,
            CliError::NoEmbedding(_) => 5,
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Degenerate(_) => CliError::Degenerate(e.to_string()),
            MatrixError::Io(_) => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn workers(w: Option<usize>) -> usize {
    w.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<GraphDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    Ok(GraphDocument::from_json(&text)?)
}

/// Enumerates and builds the annotated document. A truncated search still
/// yields a document (flagged incomplete) alongside the error.
pub fn enumerate_document(
    sys: &Arc<RowSystem>,
    search: &SearchArgs,
    classify: Option<u64>,
) -> (GraphDocument, Option<CliError>) {
    let w = workers(search.workers);
    let (result, err) = match parallel::enumerate(sys, &search.config(), w) {
        Ok(r) => (r, None),
        Err(SearchError::NodeLimitExceeded(partial)) => {
            let n = partial.graphs.len();
            (*partial, Some(CliError::NodeLimit(n)))
        }
        Err(SearchError::InvalidConfig) => {
            return (
                GraphDocument::new(sys, [], Some(search.m_max), false),
                Some(CliError::Input("--m-max must be positive".into())),
            )
        }
    };
    let mut doc = GraphDocument::new(sys, &result.graphs, Some(search.m_max), result.complete);
    if let Some(budget) = classify {
        let graphs: Vec<VectorGraph> = result.graphs.into_iter().collect();
        doc.set_primality(&parallel::classify_primes(&graphs, budget, w));
    }
    (doc, err)
}

fn verdict_text(v: &KirchhoffVerdict) -> String {
    match v {
        KirchhoffVerdict::Ok => "ok".into(),
        KirchhoffVerdict::Trivial => "trivial".into(),
        KirchhoffVerdict::BadVertex { vertex, cut } => format!("bad_vertex {vertex} cut {cut:?}"),
        KirchhoffVerdict::BadCycle { cycle } => format!("bad_cycle {cycle:?}"),
        KirchhoffVerdict::CycleSpaceDeficient { found, required } => {
            format!("cycle_space_deficient rank {found} < {required}")
        }
    }
}

fn cmd_enumerate(
    matrix: &MatrixArgs,
    search: &SearchArgs,
    out_path: Option<&Path>,
    classify: Option<u64>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sys = load_system(&matrix.matrix, matrix.mode)?;
    let (doc, err) = enumerate_document(&sys, search, classify);
    writeln!(out, "{}", doc.summary())?;
    if let Some(p) = out_path {
        write_file(p, &doc.to_json())?;
    }
    err.map_or(Ok(()), Err)
}

fn cmd_verify(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = read_document(path)?;
    let (_, graphs) = doc.to_graphs()?;
    let mut failed = 0;
    for (r, g) in doc.graphs.iter().zip(&graphs) {
        let v = is_kirchhoff(g);
        if !matches!(v, KirchhoffVerdict::Ok | KirchhoffVerdict::Trivial) {
            failed += 1;
        }
        writeln!(out, "G{}: {}", r.id, verdict_text(&v))?;
    }
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} graphs failed", graphs.len())));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_tile(
    expression: &str,
    doc_path: Option<&Path>,
    matrix: Option<&MatrixArgs>,
    m_max: Option<u32>,
    out_path: Option<&Path>,
    format: Format,
    check_prime: Option<u64>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let expr: TilingExpression = expression.parse().map_err(|e: TilingError| CliError::Input(e.to_string()))?;
    let (sys, graphs) = match (doc_path, matrix) {
        (Some(p), _) => read_document(p)?.to_graphs()?,
        (None, Some(m)) => {
            let sys = load_system(&m.matrix, m.mode)?;
            let search = SearchArgs {
                m_max: m_max.unwrap_or(1),
                no_negative_sum_prune: false,
                node_limit: None,
                workers: None,
            };
            let (doc, err) = enumerate_document(&sys, &search, None);
            if let Some(e) = err {
                return Err(e);
            }
            doc.to_graphs()?
        }
        (None, None) => return Err(CliError::Input("tile needs --doc or --matrix with --m-max".into())),
    };
    let g = match expr.evaluate(&graphs) {
        Ok(g) => g,
        Err(e @ TilingError::NoEmbeddingAtOffset { .. }) => return Err(CliError::NoEmbedding(e)),
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let verdict = is_kirchhoff(&g);
    let m = multiplicity(&g);
    let mut line = format!("{expr}: {}", verdict_text(&verdict));
    if let Some(m) = m.m {
        line.push_str(&format!("; m = {m}"));
    } else {
        line.push_str(&format!("; counts {:?}", m.counts));
    }
    let mut doc = GraphDocument::new(&sys, [&g], None, true);
    if let (Some(budget), true) = (check_prime, verdict.is_ok()) {
        let p = is_prime(&g, budget);
        line.push_str(&format!("; {}", p.label()));
        doc.set_primality(&[p]);
    }
    writeln!(out, "{line}")?;
    if let Some(p) = out_path {
        let text = match format {
            Format::Json => doc.to_json(),
            Format::Dot => render::to_dot(&g, "tiling"),
            Format::Svg => render::to_svg(&g),
        };
        write_file(p, &text)?;
    }
    if !matches!(verdict, KirchhoffVerdict::Ok | KirchhoffVerdict::Trivial) {
        return Err(CliError::Failed("result is not a Kirchhoff graph".into()));
    }
    Ok(())
}

fn cmd_render(
    path: &Path,
    format: Format,
    dir: &Path,
    select: Option<&[usize]>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let doc = read_document(path)?;
    let (sys, graphs) = doc.to_graphs()?;
    let ids: Vec<usize> = match select {
        Some(s) => s.to_vec(),
        None => (0..graphs.len()).collect(),
    };
    if ids.is_empty() {
        return Ok(());
    }
    if sys.k() > 2 {
        writeln!(err, "warning: k = {} > 2, drawing the first two coordinates only", sys.k())?;
    }
    fs::create_dir_all(dir)?;
    for id in ids {
        let g = graphs.get(id).ok_or_else(|| CliError::Input(format!("no graph with id {id}")))?;
        let (ext, text) = match format {
            Format::Svg => ("svg", render::to_svg(g)),
            Format::Dot => ("dot", render::to_dot(g, &format!("G{id}"))),
            Format::Json => ("json", GraphDocument::new(&sys, [g], None, true).to_json()),
        };
        let file = dir.join(format!("G{id}.{ext}"));
        write_file(&file, &text)?;
        writeln!(out, "{}", file.display())?;
    }
    Ok(())
}

fn cmd_fundamental(matrix: &MatrixArgs, search: &SearchArgs, coeff_bound: u32, out: &mut dyn Write) -> Result<(), CliError> {
    let sys = load_system(&matrix.matrix, matrix.mode)?;
    let (doc, err) = enumerate_document(&sys, search, None);
    if let Some(e) = err {
        return Err(e);
    }
    let (_, graphs) = doc.to_graphs()?;
    writeln!(out, "{}", doc.summary())?;
    if graphs.is_empty() {
        writeln!(out, "no graphs, no fundamental set")?;
        return Ok(());
    }
    let f = fundamental_sets(&graphs, coeff_bound);
    writeln!(
        out,
        "bound-relative: coefficient bound {}, offset window = target box grown by the largest generator extent",
        f.coeff_bound
    )?;
    if let Some(m) = f.tier_multiplicity {
        writeln!(out, "candidates drawn from multiplicity {m}: {}", id_list(&f.candidate_pool))?;
    }
    for s in &f.subsets {
        writeln!(out, "{}", id_list(s))?;
    }
    Ok(())
}

fn id_list(ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(|i| format!("G{i}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_min_multiplicity(matrix: &MatrixArgs, m_limit: u32, w: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    let sys = load_system(&matrix.matrix, matrix.mode)?;
    for m in 1..=m_limit {
        let r = parallel::enumerate(&sys, &SearchConfig::new(m), workers(w))
            .map_err(|e| CliError::Failed(e.to_string()))?;
        if !r.graphs.is_empty() {
            writeln!(out, "m* = {m} ({} graphs)", r.graphs.len())?;
            return Ok(());
        }
    }
    writeln!(out, "no Kirchhoff graph with m <= {m_limit}")?;
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Enumerate {
            matrix,
            search,
            out: path,
            classify_prime,
            prime_budget,
        } => cmd_enumerate(matrix, search, path.as_deref(), classify_prime.then_some(*prime_budget), out),
        Command::Verify { document } => cmd_verify(document, out),
        Command::Tile {
            expression,
            doc,
            matrix,
            mode,
            m_max,
            out: path,
            format,
            check_prime,
            prime_budget,
        } => {
            let matrix = matrix.as_ref().map(|m| MatrixArgs {
                matrix: m.clone(),
                mode: *mode,
            });
            cmd_tile(
                expression,
                doc.as_deref(),
                matrix.as_ref(),
                *m_max,
                path.as_deref(),
                *format,
                check_prime.then_some(*prime_budget),
                out,
            )
        }
        Command::Render {
            document,
            format,
            out: dir,
            select,
        } => cmd_render(document, *format, dir, select.as_deref(), out, err),
        Command::Fundamental {
            matrix,
            search,
            coeff_bound,
        } => cmd_fundamental(matrix, search, *coeff_bound, out),
        Command::MinMultiplicity { matrix, m_limit, workers } => cmd_min_multiplicity(matrix, *m_limit, *workers, out),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return e.exit_code();
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
