//! File formats and run orchestration behind the `prmi` binary.
//!
//! A state file is JSON, row-major in the product basis `|a⟩⊗|b⟩` with `b`
//! fastest:
//!
//! ```json
//! {"d_a": 2, "d_b": 2, "matrix": [[{"re": 0.25, "im": 0.0}, ...], ...]}
//! ```
//!
//! A PMF file is a headerless CSV matrix with one row per `x`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use prmi::am::{self, AmConfig, ConvergenceTrace, Initializer, Termination};
use prmi::classical::{self, ClassicalConfig, ClassicalInit, JointPmf, Pmf};
use prmi::exec::{map_slice, Execution};
use prmi::operator::CMatrix;
use prmi::{BipartiteState, ExtReal, HermitianOperator, SupportCutoff};
use serde::{Deserialize, Serialize};

/// Exit status when every run stopped on its certificate.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MAX_ITER: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl From<prmi::Error> for CliError {
    fn from(e: prmi::Error) -> Self {
        match e {
            prmi::Error::InvalidState(what) => CliError::Validation(what.to_string()),
            prmi::Error::InvalidPmf(what) => CliError::Validation(what.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Entry {
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    d_a: usize,
    d_b: usize,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Debug, Deserialize)]
struct OperatorFile {
    matrix: Vec<Vec<Entry>>,
}

fn to_rows(m: &CMatrix) -> Vec<Vec<Entry>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Entry { re: m[(i, j)].re, im: m[(i, j)].im }).collect())
        .collect()
}

fn from_rows(rows: &[Vec<Entry>]) -> Result<HermitianOperator, CliError> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(CliError::Validation("matrix must be square and nonempty".into()));
    }
    let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j].re, rows[i][j].im));
    Ok(HermitianOperator::new(m)?)
}

pub fn parse_state(json: &str) -> Result<BipartiteState, CliError> {
    let f: StateFile = serde_json::from_str(json).map_err(|e| CliError::Parse(e.to_string()))?;
    let op = from_rows(&f.matrix)?;
    if f.d_a * f.d_b != op.dim() {
        return Err(CliError::Validation("dimension".into()));
    }
    Ok(BipartiteState::new(op, f.d_a, f.d_b)?)
}

pub fn load_state(path: &Path) -> Result<BipartiteState, CliError> {
    parse_state(&read(path)?)
}

pub fn save_state(path: &Path, state: &BipartiteState) -> Result<(), CliError> {
    let f = StateFile { d_a: state.d_a(), d_b: state.d_b(), matrix: to_rows(state.op().matrix()) };
    write(path, &serde_json::to_string_pretty(&f).expect("serializable"))
}

fn parse_csv_rows(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
            rec.iter().map(|s| s.parse::<f64>().map_err(|e| CliError::Parse(format!("{s:?}: {e}")))).collect()
        })
        .collect()
}

pub fn load_pmf(path: &Path) -> Result<JointPmf, CliError> {
    let rows = parse_csv_rows(&read(path)?)?;
    Ok(JointPmf::from_rows(&rows)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitChoice {
    Marginal,
    Uniform,
    /// Quantum: JSON with a `matrix` field. Classical: one CSV row.
    File(PathBuf),
}

impl std::str::FromStr for InitChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "marginal" => Ok(InitChoice::Marginal),
            "uniform" => Ok(InitChoice::Uniform),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(InitChoice::File(PathBuf::from(p))),
                _ => Err(format!("expected marginal, uniform or file:PATH, got {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub mode: Mode,
    pub alpha_list: Vec<f64>,
    pub eps0: f64,
    pub input_path: PathBuf,
    pub init: InitChoice,
    pub trace_path: PathBuf,
    pub record_states: bool,
    pub max_iter: usize,
    pub uncertified: bool,
    pub support_tol: Option<f64>,
}

/// Where the trace for `alpha` goes: the given path for a single order,
/// otherwise `_alpha{α}` inserted before the extension.
pub fn trace_path_for(base: &Path, alpha: f64, multiple: bool) -> PathBuf {
    if !multiple {
        return base.to_owned();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_alpha{alpha}.{}", ext.to_string_lossy()),
        None => format!("{stem}_alpha{alpha}"),
    };
    base.with_file_name(name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Certified,
    Uncertified,
}

fn route(mode: Mode, alpha: f64, uncertified: bool) -> Option<Route> {
    if !(alpha.is_finite() && alpha > 0.0) || alpha == 1.0 {
        return None;
    }
    let certified = match mode {
        Mode::Quantum => (alpha > 0.5 && alpha < 1.0) || (alpha > 1.0 && alpha <= 2.0),
        Mode::Classical => alpha > 0.5,
    };
    if uncertified {
        Some(Route::Uncertified)
    } else if certified {
        Some(Route::Certified)
    } else {
        None
    }
}

#[derive(Serialize)]
struct RecordOut {
    n: usize,
    x_n: f64,
    eps_n: ExtReal,
    q_n: f64,
    wall_ms: f64,
}

#[derive(Serialize)]
struct StateOut<T> {
    n: usize,
    sigma_a: T,
    tau_b: T,
}

#[derive(Serialize)]
struct TraceOut<T> {
    alpha: f64,
    terminated_by: Termination,
    final_x: f64,
    records: Vec<RecordOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<StateOut<T>>>,
}

fn trace_document<A, B, T: Serialize>(
    t: &ConvergenceTrace<A, B>,
    record_states: bool,
    conv: impl Fn(&A) -> T,
    conv_b: impl Fn(&B) -> T,
) -> String {
    let doc = TraceOut {
        alpha: t.alpha,
        terminated_by: t.terminated_by,
        final_x: t.final_x,
        records: t
            .records
            .iter()
            .map(|r| RecordOut { n: r.n, x_n: r.x, eps_n: r.eps, q_n: r.q, wall_ms: r.wall_time * 1e3 })
            .collect(),
        states: record_states.then(|| {
            t.snapshots.iter().map(|s| StateOut { n: s.n, sigma_a: conv(&s.sigma_a), tau_b: conv_b(&s.tau_b) }).collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Summary of one finished run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub alpha: f64,
    pub final_x: f64,
    pub final_eps: ExtReal,
    pub iterations: usize,
    pub terminated_by: Termination,
    pub trace_path: PathBuf,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "alpha={} final_x={:.12} eps={} iterations={} terminated_by={:?} trace={}",
            self.alpha,
            self.final_x,
            self.final_eps,
            self.iterations,
            self.terminated_by,
            self.trace_path.display()
        )
    }
}

enum Input {
    Quantum(BipartiteState, Initializer),
    Classical(JointPmf, ClassicalInit),
}

fn load_input(spec: &RunSpec) -> Result<Input, CliError> {
    match spec.mode {
        Mode::Quantum => {
            let rho = load_state(&spec.input_path)?;
            let init = match &spec.init {
                InitChoice::Marginal => Initializer::MarginalRhoA,
                InitChoice::Uniform => Initializer::Uniform,
                InitChoice::File(p) => {
                    let f: OperatorFile = serde_json::from_str(&read(p)?).map_err(|e| CliError::Parse(e.to_string()))?;
                    Initializer::Explicit(from_rows(&f.matrix)?)
                }
            };
            Ok(Input::Quantum(rho, init))
        }
        Mode::Classical => {
            let p = load_pmf(&spec.input_path)?;
            let init = match &spec.init {
                InitChoice::Marginal => ClassicalInit::MarginalPx,
                InitChoice::Uniform => ClassicalInit::Uniform,
                InitChoice::File(path) => {
                    let rows = parse_csv_rows(&read(path)?)?;
                    match rows.as_slice() {
                        [row] => ClassicalInit::Explicit(Pmf::new(row.clone())?),
                        _ => return Err(CliError::Validation("initializer CSV must have one row".into())),
                    }
                }
            };
            Ok(Input::Classical(p, init))
        }
    }
}

fn run_one(spec: &RunSpec, input: &Input, alpha: f64, route: Route, cut: SupportCutoff) -> Result<RunSummary, CliError> {
    let path = trace_path_for(&spec.trace_path, alpha, spec.alpha_list.len() > 1);
    let (doc, final_x, final_eps, iterations, terminated_by) = match input {
        Input::Quantum(rho, init) => {
            let cfg = AmConfig::new(alpha, spec.eps0)
                .with_init(init.clone())
                .with_max_iter(spec.max_iter)
                .with_cut(cut)
                .recording_states(spec.record_states);
            let t = match route {
                Route::Certified => am::certified(rho, &cfg)?,
                Route::Uncertified => am::run_uncertified(rho, &cfg)?,
            };
            let conv = |x: &HermitianOperator| to_rows(x.matrix());
            (trace_document(&t, spec.record_states, conv, conv), t.final_x, t.final_eps, t.iterations(), t.terminated_by)
        }
        Input::Classical(p, init) => {
            let cfg = ClassicalConfig::new(alpha, spec.eps0)
                .with_init(init.clone())
                .with_max_iter(spec.max_iter)
                .recording_states(spec.record_states);
            let t = match route {
                Route::Certified => classical::algorithm_classical(p, &cfg)?,
                Route::Uncertified => classical::run_uncertified_classical(p, &cfg)?,
            };
            let conv = |x: &Pmf| x.weights().to_vec();
            (trace_document(&t, spec.record_states, conv, conv), t.final_x, t.final_eps, t.iterations(), t.terminated_by)
        }
    };
    write(&path, &doc)?;
    Ok(RunSummary { alpha, final_x, final_eps, iterations, terminated_by, trace_path: path })
}

fn validate(spec: &RunSpec) -> Result<Vec<Route>, CliError> {
    if spec.alpha_list.is_empty() {
        return Err(CliError::Validation("at least one --alpha is required".into()));
    }
    if !(spec.eps0 > 0.0 && spec.eps0.is_finite()) {
        return Err(CliError::Validation(format!("eps must be positive, got {}", spec.eps0)));
    }
    if spec.max_iter == 0 {
        return Err(CliError::Validation("max-iter must be positive".into()));
    }
    spec.alpha_list
        .iter()
        .map(|&a| {
            route(spec.mode, a, spec.uncertified).ok_or_else(|| {
                CliError::Validation(format!("alpha={a} is outside the certified range (use --uncertified to iterate anyway)"))
            })
        })
        .collect()
}

/// Runs every order in `spec`, writes one trace per order and a one-line
/// summary per order to `out`. Returns the process exit code: 0 when all runs
/// stopped normally, 2 on invalid input, 3 when any run hit `max_iter`.
pub fn run(spec: &RunSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prepared = validate(spec).and_then(|routes| {
        let cut = match spec.support_tol {
            Some(t) => SupportCutoff::new(t)?,
            None => SupportCutoff::default(),
        };
        Ok((routes, cut, load_input(spec)?))
    });
    let (routes, cut, input) = match prepared {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let jobs: Vec<(f64, Route)> = spec.alpha_list.iter().copied().zip(routes).collect();
    let results = map_slice(Execution::default(), &jobs, |&(a, r)| run_one(spec, &input, a, r, cut));

    let mut code = EXIT_OK;
    for res in results {
        match res {
            Ok(s) => {
                let _ = writeln!(out, "{s}");
                if s.terminated_by == Termination::MaxIter && code == EXIT_OK {
                    code = EXIT_MAX_ITER;
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                code = EXIT_INVALID;
            }
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_choice_parsing() {
        assert_eq!("marginal".parse::<InitChoice>().unwrap(), InitChoice::Marginal);
        assert_eq!("uniform".parse::<InitChoice>().unwrap(), InitChoice::Uniform);
        assert_eq!("file:a.json".parse::<InitChoice>().unwrap(), InitChoice::File("a.json".into()));
        assert!("file:".parse::<InitChoice>().is_err());
        assert!("random".parse::<InitChoice>().is_err());
    }

    #[test]
    fn trace_paths() {
        let base = Path::new("/tmp/out/trace.json");
        assert_eq!(trace_path_for(base, 1.5, false), base);
        assert_eq!(trace_path_for(base, 1.5, true), Path::new("/tmp/out/trace_alpha1.5.json"));
        assert_eq!(trace_path_for(Path::new("t"), 0.75, true), Path::new("t_alpha0.75"));
    }

    #[test]
    fn routes() {
        assert_eq!(route(Mode::Quantum, 0.75, false), Some(Route::Certified));
        assert_eq!(route(Mode::Quantum, 2.5, false), None);
        assert_eq!(route(Mode::Quantum, 2.5, true), Some(Route::Uncertified));
        assert_eq!(route(Mode::Classical, 4.0, false), Some(Route::Certified));
        assert_eq!(route(Mode::Quantum, 0.3, false), None);
        assert_eq!(route(Mode::Quantum, 1.0, true), None);
    }

    #[test]
    fn state_validation_names_invariant() {
        let bad = r#"{"d_a":1,"d_b":2,"matrix":[[{"re":0.45,"im":0}, {"re":0,"im":0}],[{"re":0,"im":0},{"re":0.45,"im":0}]]}"#;
        match parse_state(bad) {
            Err(CliError::Validation(w)) => assert_eq!(w, "trace"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_state("{"), Err(CliError::Parse(_))));
    }
}
