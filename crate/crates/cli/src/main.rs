use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use prmi_cli::{run, InitChoice, Mode, RunSpec};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Quantum,
    Classical,
}

/// Doubly minimized Petz Rényi mutual information by alternating minimization.
#[derive(Debug, Parser)]
#[command(name = "prmi", version)]
struct Args {
    /// State file (JSON) in quantum mode, PMF file (CSV) in classical mode.
    input: PathBuf,
    /// Order α; repeat for a sweep.
    #[arg(long = "alpha", required = true)]
    alpha: Vec<f64>,
    /// Target accuracy ε₀ of the certificate.
    #[arg(long = "eps", default_value_t = 1e-6)]
    eps: f64,
    /// marginal, uniform, or file:PATH.
    #[arg(long, default_value = "marginal")]
    init: InitChoice,
    #[arg(long, value_enum, default_value = "quantum")]
    mode: ModeArg,
    /// Trace JSON path; with several orders, `_alpha{α}` is inserted before the extension.
    #[arg(long = "trace-out", default_value = "trace.json")]
    trace_out: PathBuf,
    /// Store every iterate in the trace instead of the first and last.
    #[arg(long)]
    record_states: bool,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Allow orders without a certificate and stop on stalled progress.
    #[arg(long)]
    uncertified: bool,
}

fn main() {
    let args = Args::parse();
    let support_tol = match std::env::var("PRMI_SUPPORT_TOL") {
        Ok(v) => match v.parse::<f64>() {
            Ok(t) => Some(t),
            Err(_) => {
                eprintln!("error: PRMI_SUPPORT_TOL={v:?} is not a number");
                std::process::exit(prmi_cli::EXIT_INVALID);
            }
        },
        Err(_) => None,
    };
    let spec = RunSpec {
        mode: match args.mode {
            ModeArg::Quantum => Mode::Quantum,
            ModeArg::Classical => Mode::Classical,
        },
        alpha_list: args.alpha,
        eps0: args.eps,
        input_path: args.input,
        init: args.init,
        trace_path: args.trace_out,
        record_states: args.record_states,
        max_iter: args.max_iter,
        uncertified: args.uncertified,
        support_tol,
    };
    let code = run(&spec, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
