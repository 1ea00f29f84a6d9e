//! Command-line entry point: batch verification pipelines over JSON files.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error. Reports are
//! single-line JSON on stdout with sorted keys and floats rounded to 12
//! significant digits; every failure prints a structured error object.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{
    annihilator, commutator_norm, conjugation_check, convolve, creator, dirac_generator, evolve,
    hamiltonian, hamiltonian_diag, involve, represent, AlgebraElement, AlgebraError, EvolutionMode,
    HamiltonianMode, OperatorMatrix,
};
use crate::bounds::{
    gibbs_functional, localized_zeta, moebius, necklace_q, partition_function, partitions,
    rational_homotopy_dim, BoundsError, MultiplicityOracle,
};
use crate::cobordism::{
    cell_dagger, dagger, declare_equivalence, horizontal_compose, horizontal_order_evolution,
    two_cell_convolve, validate_quotient, vertical_compose, vertical_evolution, CellProduct,
    CobordismError,
};
use crate::covering::{
    branching_indices, check_coloring, orbits, search_colorings, CoveringError, SearchFilter,
};
use crate::io::{
    round_sig12, CellTableDto, ColoringDto, DeclarationDto, ElementDto, IoError, OracleDto,
    PresentationDto, RequestDto, SessionDto, TableDto,
};
use crate::presentation::{parse_pd, wirtinger, Presentation, PresentationError};
use crate::session::{Session, SessionError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    ReadFile { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Table(#[from] AlgebraError),
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::ReadFile { .. } => "read_file",
            CliError::Io(_) => "io",
            CliError::Presentation(_) => "presentation",
            CliError::Covering(_) => "covering",
            CliError::Session(_) => "session",
            CliError::Table(_) => "table",
            CliError::Cobordism(_) => "cobordism",
            CliError::Bounds(_) => "bounds",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_report(&self) -> Value {
        json!({"error": {"code": self.code(), "message": self.to_string()}})
    }
}

/// Residual tolerance: 1e-9 unless CORRCALC_PRECISION overrides it.
pub fn tolerance() -> f64 {
    std::env::var("CORRCALC_PRECISION")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1e-9)
}

#[derive(Parser, Debug)]
#[command(
    name = "corrcalc",
    version,
    about = "Branched-covering correspondence workbench"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify a coloring of a diagram or presentation and report its
    /// orbit and branching data.
    Verify(VerifyArgs),
    /// Enumerate colorings up to simultaneous conjugation.
    Cover(CoverArgs),
    /// Run composition requests against a session; optionally emit the
    /// composition table.
    Compose(ComposeArgs),
    /// Convolution-algebra operations over a composition table.
    Algebra(AlgebraArgs),
    /// Quotient a table by a declared equivalence and report the spectrum.
    Quotient(QuotientArgs),
    /// Two-cell operations over a cell table.
    Cells(CellsArgs),
    /// Partition, necklace, dimension, and zeta/Gibbs numerics.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// PD-code text file.
    #[arg(long)]
    pub pd: Option<PathBuf>,
    /// Presentation JSON file (alternative to --pd).
    #[arg(long)]
    pub presentation: Option<PathBuf>,
    /// Extra crossingless unknot components for --pd.
    #[arg(long, default_value_t = 0)]
    pub unknot_components: usize,
    /// Coloring JSON file.
    #[arg(long)]
    pub coloring: PathBuf,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[arg(long)]
    pub pd: Option<PathBuf>,
    #[arg(long)]
    pub presentation: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub unknot_components: usize,
    /// Covering degree to search.
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub transitive: bool,
    #[arg(long)]
    pub nontrivial: bool,
    #[arg(long)]
    pub non_cyclic: bool,
    /// Cap on raw colorings collected before truncation.
    #[arg(long, default_value_t = 100_000)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    /// Session JSON file.
    #[arg(long)]
    pub session: PathBuf,
    /// Single composition request JSON.
    #[arg(long)]
    pub request: Option<PathBuf>,
    /// JSON array of composition requests.
    #[arg(long)]
    pub requests: Option<PathBuf>,
    /// Emit the resulting composition table instead of per-request reports.
    #[arg(long)]
    pub emit_table: bool,
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    /// Composition table JSON.
    #[arg(long)]
    pub table: PathBuf,
    /// Accept class-level tables (repeated components allowed).
    #[arg(long)]
    pub relaxed: bool,
    #[command(subcommand)]
    pub op: AlgebraOp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    L,
    R,
    Ratio,
}

impl From<ModeArg> for EvolutionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::L => EvolutionMode::Left,
            ModeArg::R => EvolutionMode::Right,
            ModeArg::Ratio => EvolutionMode::Ratio,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum AlgebraOp {
    /// f1 * f2.
    Convolve {
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
    },
    /// The involution f∨.
    Involve {
        #[arg(long)]
        f: PathBuf,
    },
    /// Time evolution of f.
    Evolve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Matrix of the representation of f on a basis.
    Represent {
        #[arg(long)]
        f: PathBuf,
        /// Comma-separated basis labels.
        #[arg(long)]
        basis: String,
    },
    /// Annihilation operator matrix of a label.
    Annihilator {
        #[arg(long)]
        label: String,
        #[arg(long)]
        basis: String,
    },
    /// Creation operator matrix of a label.
    Creator {
        #[arg(long)]
        label: String,
        #[arg(long)]
        basis: String,
    },
    /// Diagonal Hamiltonian over a basis.
    Hamiltonian {
        #[arg(long)]
        basis: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Ratio generator diagonal and commutator norms with each basis label.
    Dirac {
        #[arg(long)]
        basis: String,
    },
    /// Residual of the Hamiltonian conjugation identity.
    Residuals {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        basis: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Declaration JSON {"equiv": [[a,b],...]}.
    #[arg(long)]
    pub equiv: PathBuf,
}

#[derive(Args, Debug)]
pub struct CellsArgs {
    /// Cell table JSON.
    #[arg(long)]
    pub table: PathBuf,
    #[command(subcommand)]
    pub op: CellsOp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CellModeArg {
    Vertical,
    Horizontal,
}

#[derive(Subcommand, Debug)]
pub enum CellsOp {
    /// Convolution over declared factorizations.
    Convolve {
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
        #[arg(long, value_enum)]
        mode: CellModeArg,
    },
    /// Function-level dagger through the declared pairing.
    Dagger {
        #[arg(long)]
        f: PathBuf,
    },
    /// Dagger of a single cell through a correspondence table.
    DaggerCell {
        #[arg(long)]
        cell: String,
        #[arg(long)]
        corr_table: PathBuf,
    },
    /// Inclusion-exclusion vertical evolution.
    VerticalEvolve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        invariant: String,
    },
    /// Covering-order horizontal evolution.
    HorizontalEvolve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Glue two cells along their shared boundary.
    VerticalCompose {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Fibered product of two cells through a correspondence table.
    HorizontalCompose {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        #[arg(long)]
        corr_table: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// p(n).
    #[arg(long)]
    pub pn: Option<u64>,
    /// Möbius function.
    #[arg(long)]
    pub moebius: Option<u64>,
    /// Q(a, b), two values.
    #[arg(long = "Q", num_args = 2, value_names = ["A", "B"])]
    pub q: Option<Vec<u64>>,
    /// Rational homotopy dimension, two values k n.
    #[arg(long, num_args = 2, value_names = ["K", "N"])]
    pub dim: Option<Vec<u64>>,
    /// Partition function, two values beta n_max; needs --oracle.
    #[arg(long, num_args = 2, value_names = ["BETA", "NMAX"])]
    pub zeta: Option<Vec<f64>>,
    /// Localized zeta, three values p beta n_max; needs --oracle.
    #[arg(long, num_args = 3, value_names = ["P", "BETA", "NMAX"])]
    pub localized: Option<Vec<f64>>,
    /// Gibbs functional input JSON {"values": {...}, "basis": {...}};
    /// needs --beta.
    #[arg(long)]
    pub gibbs: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Multiplicity oracle JSON {"N": {...}}.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::ReadFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    Ok(serde_json::from_str(&text).map_err(IoError::Json)?)
}

fn load_presentation(
    pd: &Option<PathBuf>,
    presentation: &Option<PathBuf>,
    unknot_components: usize,
) -> Result<Presentation, CliError> {
    match (pd, presentation) {
        (Some(pd_path), None) => {
            let text = read_text(pd_path)?;
            Ok(wirtinger(&parse_pd(&text, unknot_components)?))
        }
        (None, Some(pres_path)) => {
            let dto: PresentationDto = read_json(pres_path)?;
            Ok(dto.to_presentation()?)
        }
        _ => Err(CliError::Usage(
            "exactly one of --pd and --presentation is required".into(),
        )),
    }
}

fn element_from(path: &Path) -> Result<AlgebraElement, CliError> {
    let dto: ElementDto = read_json(path)?;
    Ok(dto.to_element())
}

fn basis_list(csv: &str) -> Vec<String> {
    csv.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn matrix_value(m: &OperatorMatrix) -> Value {
    let rows: Vec<Value> = (0..m.dim)
        .map(|r| {
            let row: Vec<Value> = (0..m.dim)
                .map(|c| {
                    let z = m[(r, c)];
                    json!([round_sig12(z.re), round_sig12(z.im)])
                })
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

fn element_value(e: &AlgebraElement) -> Value {
    serde_json::to_value(ElementDto::from_element(e)).expect("element serializes")
}

fn bigint_value(v: &num_bigint::BigInt) -> Value {
    match i64::try_from(v.clone()) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

/// Run a parsed command and produce the report.
pub fn run(command: &Command) -> Result<Value, CliError> {
    match command {
        Command::Verify(args) => run_verify(args),
        Command::Cover(args) => run_cover(args),
        Command::Compose(args) => run_compose(args),
        Command::Algebra(args) => run_algebra(args),
        Command::Quotient(args) => run_quotient(args),
        Command::Cells(args) => run_cells(args),
        Command::Bounds(args) => run_bounds(args),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<Value, CliError> {
    let presentation = load_presentation(&args.pd, &args.presentation, args.unknot_components)?;
    let coloring: ColoringDto = read_json(&args.coloring)?;
    let images = coloring.to_images(presentation.generator_count)?;
    let rep = check_coloring(&presentation, images, coloring.degree)?;
    let orbit = orbits(&rep);
    let mut indices = BTreeMap::new();
    for g in 1..=presentation.generator_count {
        indices.insert(format!("arc{g}"), branching_indices(&rep, g)?);
    }
    Ok(json!({
        "valid": true,
        "orbits": orbit.blocks.len(),
        "indices": indices,
    }))
}

fn run_cover(args: &CoverArgs) -> Result<Value, CliError> {
    let presentation = load_presentation(&args.pd, &args.presentation, args.unknot_components)?;
    if args.degree == 0 {
        return Err(CliError::Usage("--degree must be positive".into()));
    }
    let filter = SearchFilter {
        transitive: args.transitive,
        nontrivial: args.nontrivial,
        non_cyclic: args.non_cyclic,
    };
    let outcome = search_colorings(&presentation, args.degree, &filter, args.cap);
    let classes: Vec<Value> = outcome
        .classes
        .iter()
        .map(|class| {
            let images: BTreeMap<String, String> = class
                .images
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("g{}", i + 1), p.to_string()))
                .collect();
            json!({"images": images, "orbits": class.orbit_count})
        })
        .collect();
    Ok(json!({
        "count": classes.len(),
        "classes": classes,
        "truncated": outcome.truncated,
    }))
}

fn composite_value(cc: &crate::correspondence::CompositeCorrespondence) -> Value {
    let components: Vec<Value> = cc
        .components
        .iter()
        .map(|comp| {
            let images: BTreeMap<String, String> = comp
                .middle_rep
                .images
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("g{}", i + 1), p.to_string()))
                .collect();
            json!({
                "label": comp.label,
                "middle_degree": comp.middle_rep.degree,
                "outer": [comp.outer_left_degree, comp.outer_right_degree],
                "middle_images": images,
            })
        })
        .collect();
    json!({
        "label": cc.label,
        "outer": [cc.outer_left_degree, cc.outer_right_degree],
        "components": components,
        "left_locus": cc.left_locus.render(),
        "right_locus": cc.right_locus.render(),
        "cyclic_divergence": cc.cyclic_divergence,
    })
}

fn run_compose(args: &ComposeArgs) -> Result<Value, CliError> {
    let dto: SessionDto = read_json(&args.session)?;
    let mut session = Session::from_dto(&dto)?;
    let mut requests: Vec<RequestDto> = Vec::new();
    if let Some(path) = &args.request {
        requests.push(read_json(path)?);
    }
    if let Some(path) = &args.requests {
        let mut batch: Vec<RequestDto> = read_json(path)?;
        requests.append(&mut batch);
    }
    if requests.is_empty() && !args.emit_table {
        return Err(CliError::Usage(
            "provide --request/--requests, or --emit-table".into(),
        ));
    }
    let mut reports = Vec::new();
    for request in &requests {
        let composite = session.run_request(request)?;
        reports.push(composite_value(composite));
    }
    if args.emit_table {
        let (table, gaps) = session.emit_table()?;
        let gaps: Vec<Value> = gaps.iter().map(|(a, b)| json!([a, b])).collect();
        Ok(json!({
            "table": serde_json::to_value(TableDto::from_table(&table)).map_err(IoError::Json)?,
            "closure_gaps": gaps,
        }))
    } else if reports.len() == 1 {
        Ok(reports.pop().unwrap())
    } else {
        Ok(json!({"composites": reports}))
    }
}

fn run_algebra(args: &AlgebraArgs) -> Result<Value, CliError> {
    let dto: TableDto = read_json(&args.table)?;
    let table = if args.relaxed {
        dto.to_table_relaxed()?
    } else {
        dto.to_table()?
    };
    match &args.op {
        AlgebraOp::Convolve { f1, f2 } => {
            let result = convolve(&element_from(f1)?, &element_from(f2)?, &table)?;
            Ok(element_value(&result))
        }
        AlgebraOp::Involve { f } => {
            let result = involve(&element_from(f)?, &table)?;
            Ok(element_value(&result))
        }
        AlgebraOp::Evolve { f, t, mode } => {
            let result = evolve(&element_from(f)?, *t, (*mode).into(), &table)?;
            Ok(element_value(&result))
        }
        AlgebraOp::Represent { f, basis } => {
            let basis = basis_list(basis);
            let m = represent(&element_from(f)?, &basis, &table)?;
            Ok(json!({"basis": basis, "matrix": matrix_value(&m)}))
        }
        AlgebraOp::Annihilator { label, basis } => {
            let basis = basis_list(basis);
            let m = annihilator(label, &basis, &table)?;
            Ok(json!({"basis": basis, "matrix": matrix_value(&m)}))
        }
        AlgebraOp::Creator { label, basis } => {
            let basis = basis_list(basis);
            let m = creator(label, &basis, &table)?;
            Ok(json!({"basis": basis, "matrix": matrix_value(&m)}))
        }
        AlgebraOp::Hamiltonian { basis, mode } => {
            let basis = basis_list(basis);
            let h_mode = match mode {
                ModeArg::L => HamiltonianMode::Left,
                ModeArg::R => HamiltonianMode::Right,
                ModeArg::Ratio => {
                    return Err(CliError::Usage(
                        "hamiltonian mode must be l or r; use dirac for the ratio generator".into(),
                    ))
                }
            };
            let diag = hamiltonian_diag(&basis, h_mode, &table)?;
            let _ = hamiltonian(&basis, h_mode, &table)?;
            let rounded: Vec<f64> = diag.iter().map(|&x| round_sig12(x)).collect();
            Ok(json!({"basis": basis, "diagonal": rounded}))
        }
        AlgebraOp::Dirac { basis } => {
            let basis = basis_list(basis);
            let d = dirac_generator(&basis, &table)?;
            let diag: Vec<f64> = (0..d.dim).map(|i| round_sig12(d[(i, i)].re)).collect();
            let mut commutators = BTreeMap::new();
            for label in &basis {
                let a = annihilator(label, &basis, &table);
                if let Ok(a) = a {
                    commutators.insert(label.clone(), round_sig12(commutator_norm(&d, &a)));
                }
            }
            Ok(json!({"basis": basis, "diagonal": diag, "commutators": commutators}))
        }
        AlgebraOp::Residuals { f, t, basis, mode } => {
            let basis = basis_list(basis);
            let residual =
                conjugation_check(&element_from(f)?, *t, &basis, &table, (*mode).into())?;
            let tol = tolerance();
            Ok(json!({
                "conjugation_residual": round_sig12(residual),
                "tolerance": tol,
                "pass": residual < tol,
            }))
        }
    }
}

fn run_quotient(args: &QuotientArgs) -> Result<Value, CliError> {
    let dto: TableDto = read_json(&args.table)?;
    let table = dto.to_table()?;
    let declaration: DeclarationDto = read_json(&args.equiv)?;
    let pairs: Vec<(String, String)> = declaration
        .equiv
        .iter()
        .map(|[a, b]| (a.clone(), b.clone()))
        .collect();
    let decl = declare_equivalence(&pairs, &table)?;
    let quotient = validate_quotient(&decl, &table)?;
    let classes: BTreeMap<String, Vec<String>> = decl.classes();
    let spectrum = |mode: HamiltonianMode| -> Result<Vec<Value>, CliError> {
        let degrees = quotient.labels().values().map(|info| match mode {
            HamiltonianMode::Left => info.n as u64,
            HamiltonianMode::Right => info.m as u64,
        });
        let oracle = MultiplicityOracle::from_degrees(degrees)?;
        let summary = crate::bounds::SpectralSummary::from_oracle(&oracle, (0.0, f64::INFINITY))?;
        Ok(summary
            .eigenvalues
            .iter()
            .map(|(eig, mult)| json!([round_sig12(*eig), mult]))
            .collect())
    };
    Ok(json!({
        "classes": classes,
        "table": serde_json::to_value(TableDto::from_table(&quotient)).map_err(IoError::Json)?,
        "spectrum": {"L": spectrum(HamiltonianMode::Left)?, "R": spectrum(HamiltonianMode::Right)?},
    }))
}

fn cell_value(w: &crate::cobordism::TwoCell) -> Value {
    let invariants: BTreeMap<String, f64> = w
        .invariants
        .iter()
        .map(|(k, &v)| (k.clone(), round_sig12(v)))
        .collect();
    json!({
        "label": w.label,
        "src": w.source,
        "tgt": w.target,
        "deg": w.degree,
        "inv": invariants,
    })
}

fn run_cells(args: &CellsArgs) -> Result<Value, CliError> {
    let dto: CellTableDto = read_json(&args.table)?;
    let table = dto.to_cell_table()?;
    match &args.op {
        CellsOp::Convolve { f1, f2, mode } => {
            let product = match mode {
                CellModeArg::Vertical => CellProduct::Vertical,
                CellModeArg::Horizontal => CellProduct::Horizontal,
            };
            let result =
                two_cell_convolve(&element_from(f1)?, &element_from(f2)?, product, &table)?;
            Ok(element_value(&result))
        }
        CellsOp::Dagger { f } => {
            let result = cell_dagger(&element_from(f)?, &table)?;
            Ok(element_value(&result))
        }
        CellsOp::DaggerCell { cell, corr_table } => {
            let corr: TableDto = read_json(corr_table)?;
            let corr = corr.to_table_relaxed()?;
            let w = table.cell(cell)?;
            Ok(cell_value(&dagger(w, &corr)?))
        }
        CellsOp::VerticalEvolve { f, t, invariant } => {
            let result = vertical_evolution(&element_from(f)?, *t, invariant, &table)?;
            Ok(element_value(&result))
        }
        CellsOp::HorizontalEvolve { f, t } => {
            let result = horizontal_order_evolution(&element_from(f)?, *t, &table)?;
            Ok(element_value(&result))
        }
        CellsOp::VerticalCompose { w1, w2 } => {
            let glued = vertical_compose(table.cell(w1)?, table.cell(w2)?, &table.boundary)?;
            Ok(cell_value(&glued))
        }
        CellsOp::HorizontalCompose { w1, w2, corr_table } => {
            let corr: TableDto = read_json(corr_table)?;
            let corr = corr.to_table_relaxed()?;
            let composed = horizontal_compose(table.cell(w1)?, table.cell(w2)?, &corr)?;
            Ok(cell_value(&composed))
        }
    }
}

fn run_bounds(args: &BoundsArgs) -> Result<Value, CliError> {
    let selected = [
        args.pn.is_some(),
        args.moebius.is_some(),
        args.q.is_some(),
        args.dim.is_some(),
        args.zeta.is_some(),
        args.localized.is_some(),
        args.gibbs.is_some(),
    ]
    .iter()
    .filter(|&&s| s)
    .count();
    if selected != 1 {
        return Err(CliError::Usage(
            "choose exactly one of --pn, --moebius, --Q, --dim, --zeta, --localized, --gibbs"
                .into(),
        ));
    }
    let load_oracle = |path: &Option<PathBuf>| -> Result<MultiplicityOracle, CliError> {
        let path = path
            .as_ref()
            .ok_or_else(|| CliError::Usage("--oracle file is required".into()))?;
        let dto: OracleDto = read_json(path)?;
        Ok(MultiplicityOracle::new(dto.to_counts()?)?)
    };

    if let Some(n) = args.pn {
        let p = partitions(n);
        return Ok(json!({"p": bigint_value(&num_bigint::BigInt::from(p))}));
    }
    if let Some(d) = args.moebius {
        return Ok(json!({"mu": moebius(d)?}));
    }
    if let Some(q_args) = &args.q {
        let value = necklace_q(q_args[0], q_args[1])?;
        return Ok(json!({"Q": bigint_value(&value)}));
    }
    if let Some(dim_args) = &args.dim {
        let value = rational_homotopy_dim(dim_args[0], dim_args[1])?;
        return Ok(json!({"D": bigint_value(&value)}));
    }
    if let Some(zeta_args) = &args.zeta {
        let oracle = load_oracle(&args.oracle)?;
        let result = partition_function(zeta_args[0], &oracle, zeta_args[1] as u64)?;
        return Ok(json!({
            "Z": round_sig12(result.value),
            "zeta_lower": round_sig12(result.zeta_lower),
        }));
    }
    if let Some(loc_args) = &args.localized {
        let path = args
            .oracle
            .as_ref()
            .ok_or_else(|| CliError::Usage("--oracle file is required".into()))?;
        let dto: OracleDto = read_json(path)?;
        let counts = dto.to_counts()?;
        let value = localized_zeta(loc_args[1], loc_args[0] as u64, &counts, loc_args[2] as u64)?;
        return Ok(json!({"Z_p": round_sig12(value)}));
    }
    if let Some(gibbs_path) = &args.gibbs {
        let beta = args
            .beta
            .ok_or_else(|| CliError::Usage("--beta is required with --gibbs".into()))?;
        #[derive(serde::Deserialize)]
        struct GibbsInput {
            values: BTreeMap<String, f64>,
            basis: BTreeMap<String, u64>,
        }
        let input: GibbsInput = read_json(gibbs_path)?;
        let basis: Vec<(String, u64)> = input
            .basis
            .iter()
            .map(|(label, &deg)| (label.clone(), deg))
            .collect();
        let oracle = match &args.oracle {
            Some(_) => Some(load_oracle(&args.oracle)?),
            None => None,
        };
        let value = gibbs_functional(&input.values, beta, &basis, oracle.as_ref())?;
        return Ok(json!({"phi": round_sig12(value)}));
    }
    unreachable!("argument selection is checked above");
}
