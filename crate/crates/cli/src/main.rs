use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use enumtc_core::claims::{claim_ids, registry, run_claims, ClaimStatus, Config, VerificationReport};

#[derive(Parser)]
#[command(name = "enumtc", version, about = "Machine-check Schwarz-genus and TC lower bounds for enumerative problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run claims and everything they depend on.
    Verify(VerifyArgs),
    /// List registered claim ids with their dependencies.
    List,
}

#[derive(Args)]
struct VerifyArgs {
    /// Claim ids to verify.
    #[arg(required_unless_present = "all")]
    ids: Vec<String>,
    /// Verify every registered claim.
    #[arg(long, conflicts_with = "ids")]
    all: bool,
    /// Restrict the ∇-generator checks to one prime.
    #[arg(long, value_name = "P")]
    prime: Option<u32>,
    /// Largest even degree for the ∇-generator checks.
    #[arg(long, value_name = "D", default_value_t = 12)]
    max_degree: u32,
    /// Residual tolerance for flexes and the numeric equivalence fallback.
    #[arg(long, value_name = "T", default_value_t = 1e-8)]
    tol: f64,
    /// Write the full JSON report here ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Worker threads for the parallel kernels.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Report zero elapsed times so the JSON is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn status_label(s: ClaimStatus) -> &'static str {
    match s {
        ClaimStatus::Verified => "verified",
        ClaimStatus::Failed => "FAILED",
        ClaimStatus::AssumedFromLiterature => "assumed",
        ClaimStatus::OutOfScope => "out-of-scope",
        ClaimStatus::Blocked => "BLOCKED",
    }
}

fn print_table(report: &VerificationReport) {
    let width = report.claims.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &report.claims {
        println!("{:<width$}  {:<12}  {:>8} ms  {}", c.id, status_label(c.status), c.elapsed_ms, c.statement);
    }
    let s = &report.summary;
    println!(
        "\n{} claims: {} verified, {} failed, {} blocked, {} assumed, {} out of scope; consistent: {}",
        s.total, s.verified, s.failed, s.blocked, s.assumed_from_literature, s.out_of_scope, s.consistent
    );
}

fn verify(args: VerifyArgs) -> Result<bool, String> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    let config = Config {
        prime: args.prime,
        max_degree: args.max_degree,
        tol: args.tol,
        timing: !args.no_timing,
        ..Config::default()
    };
    let ids: Vec<String> =
        if args.all { claim_ids().into_iter().map(String::from).collect() } else { args.ids };
    let report = run_claims(&ids, &config).map_err(|e| e.to_string())?;
    match args.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => println!("{}", report.to_json_pretty()),
        Some(p) => {
            std::fs::write(p, report.to_json_pretty() + "\n").map_err(|e| format!("{}: {e}", p.display()))?;
            print_table(&report);
        }
        None => print_table(&report),
    }
    Ok(report.accepted(&ids))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for c in registry() {
                println!("{:<22} {}", c.id, c.dependencies.join(", "));
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => match verify(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
