//! `secure-isac`: frontier searches, evaluators, FME projection and the
//! scheme simulator.
//!
//! Exit codes: 0 success, 1 internal or output error, 2 input error,
//! 3 infeasible, 4 resource cap.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "secure-isac", version, about = "Secure rate-distortion regions for sensing-aided wiretap channels")]
struct Cli {
    /// Seed for every randomized step. Overrides seeds stored in input files.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SECURE_ISAC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Achievable (D, R_M) frontier of a Gaussian scenario, as CSV.
    GaussFrontier(GaussFrontierArgs),
    /// Every rate term, bound and slack of one Gaussian parameter choice.
    GaussEval(GaussEvalArgs),
    /// Every rate term, bound and slack of one discrete auxiliary channel.
    DmcEval(DmcEvalArgs),
    /// Randomized search over discrete auxiliary channels, as CSV.
    DmcSearch(DmcSearchArgs),
    /// Fourier-Motzkin elimination of a linear inequality system.
    Fme(FmeArgs),
    /// Monte-Carlo run of the coding scheme on a discrete instance.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
struct GaussFrontierArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// none, message_only, message_and_state or all (default: the file's mode).
    #[arg(long)]
    mode: Option<String>,
    /// Parameter evaluations per mode.
    #[arg(long, default_value_t = 200_000)]
    budget: usize,
    /// Distortion buckets used to steer the search.
    #[arg(long, default_value_t = 64)]
    targets: usize,
    /// CSV destination (default stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GaussEvalArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DmcEvalArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    aux: PathBuf,
    /// Default: message_and_state.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DmcSearchArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// none, message_only, message_and_state or all.
    #[arg(long, default_value = "all")]
    mode: String,
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    /// Alphabet sizes of U and V.
    #[arg(long, default_value_t = 1)]
    u: usize,
    #[arg(long, default_value_t = 2)]
    v: usize,
    #[arg(long, default_value_t = 32)]
    targets: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the frontier's auxiliary channels as JSON.
    #[arg(long)]
    aux_output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["file", "scheme"]))]
struct FmeArgs {
    /// Inequality file (one `lhs <= rhs` per line, `#` comments, optional
    /// leading `vars ...` line).
    file: Option<PathBuf>,
    /// I(U;S) I(U,V;S) I(V;Xi,Z|U) I(U,V;Y) I(V;Y|U), in nats.
    #[arg(long, num_args = 5, value_names = ["IUS", "IUVS", "IVXIZ_U", "IUVY", "IVY_U"], allow_negative_numbers = true)]
    scheme: Option<Vec<f64>>,
    /// Comma-separated variables to eliminate, in order
    /// (default: R_I,R_J where present).
    #[arg(long, value_delimiter = ',')]
    eliminate: Option<Vec<String>>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    experiment: PathBuf,
    /// Overrides the file's trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// CSV destination (default stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// JSON report destination (default stderr).
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = cli.seed;
    let res = match cli.cmd {
        Command::GaussFrontier(a) => commands::gauss_frontier(a, seed),
        Command::GaussEval(a) => commands::gauss_eval(a),
        Command::DmcEval(a) => commands::dmc_eval(a),
        Command::DmcSearch(a) => commands::dmc_search(a, seed),
        Command::Fme(a) => commands::fme(a),
        Command::Simulate(a) => commands::simulate(a, seed),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
