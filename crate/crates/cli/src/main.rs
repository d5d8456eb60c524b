//! `diampart`: run the partition, covering and bound computations and print
//! a JSON report. Exit status 0 on success, 2 when a verification fails,
//! 1 on usage or input errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "diampart",
    version,
    about = "Certified diameter partitions and bounds"
)]
struct Cli {
    /// Also write the report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for stochastic searches.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Constructive partitions.
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// Ball-covering search.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Banach–Mazur sandwich bounds.
    #[command(subcommand)]
    Bm(BmCmd),
    /// β upper bounds.
    #[command(subcommand)]
    Beta(BetaCmd),
    /// Exact identities.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Exact β of a finite point set.
    Oracle(OracleArgs),
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Tetrahedron into 5, 8 or 9 pieces.
    Simplex {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        norm: Option<String>,
        /// Grid resolution of the coverage certificate.
        #[arg(long, default_value_t = 64)]
        verify: usize,
        /// Simplex body file (default: a regular tetrahedron).
        #[arg(long)]
        body: Option<PathBuf>,
    },
    /// `[−1,1]ⁿ` into 2ⁿ subcubes.
    Cube {
        #[arg(long)]
        n: usize,
    },
    /// Triangle into four half-size triangles.
    Triangle {
        #[arg(long)]
        norm: Option<String>,
    },
    /// Euclidean disk into quadrants.
    Disk,
}

#[derive(Subcommand)]
enum CoverCmd {
    Search {
        /// l1ball, l2ball, l2disk, cube, or a body file.
        #[arg(long)]
        body: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: String,
        #[arg(long)]
        norm: Option<String>,
        /// Write the found centers as a fixture.
        #[arg(long, value_name = "FILE")]
        fixture_out: Option<PathBuf>,
    },
    /// Re-confirm a stored fixture.
    Check {
        #[arg(long)]
        fixture: PathBuf,
    },
}

#[derive(Subcommand)]
enum BmCmd {
    Bound {
        #[arg(long)]
        p: String,
    },
    Scan {
        #[arg(long, default_value_t = 1.0)]
        lo: f64,
        #[arg(long, default_value_t = 2.0)]
        hi: f64,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
}

#[derive(Subcommand)]
enum BetaCmd {
    Table {
        #[arg(long, default_value = "lp3")]
        space: String,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value = "1,2,inf")]
        p_list: String,
    },
    Minmax {
        #[arg(long)]
        eta: String,
        #[arg(long)]
        ball: String,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    #[command(name = "corollary-221-328")]
    Corollary,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value = "l2")]
    norm: String,
}

fn run(cli: &Cli) -> anyhow::Result<(String, report::Outcome)> {
    use commands::*;
    Ok(match &cli.command {
        Command::Partition(p) => match p {
            PartitionCmd::Simplex {
                m,
                norm,
                verify,
                body,
            } => (
                "partition simplex".into(),
                partition_simplex(*m, norm.as_deref(), *verify, body.as_deref())?,
            ),
            PartitionCmd::Cube { n } => ("partition cube".into(), partition_cube(*n)?),
            PartitionCmd::Triangle { norm } => (
                "partition triangle".into(),
                partition_triangle(norm.as_deref())?,
            ),
            PartitionCmd::Disk => ("partition disk".into(), partition_disk()?),
        },
        Command::Cover(c) => match c {
            CoverCmd::Search {
                body,
                m,
                r,
                norm,
                fixture_out,
            } => (
                "cover search".into(),
                cover_search(
                    body,
                    *m,
                    r,
                    norm.as_deref(),
                    cli.seed,
                    fixture_out.as_deref(),
                )?,
            ),
            CoverCmd::Check { fixture } => ("cover check".into(), cover_check(fixture)?),
        },
        Command::Bm(b) => match b {
            BmCmd::Bound { p } => ("bm bound".into(), bm_bound(p)?),
            BmCmd::Scan { lo, hi, step } => ("bm scan".into(), bm_scan(*lo, *hi, *step)?),
        },
        Command::Beta(b) => match b {
            BetaCmd::Table { space, m, p_list } => {
                ("beta table".into(), beta_table(space, *m, p_list)?)
            }
            BetaCmd::Minmax { eta, ball } => ("beta minmax".into(), beta_minmax(eta, ball)?),
        },
        Command::Check(CheckCmd::Corollary) => {
            ("check corollary-221-328".into(), check_corollary()?)
        }
        Command::Oracle(o) => ("oracle".into(), oracle(&o.points, o.m, &o.norm)?),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let (command, outcome) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            let verification = matches!(
                e.downcast_ref::<diampart::Error>(),
                Some(diampart::Error::VerificationFailed(_))
            );
            return ExitCode::from(if verification { 2 } else { 1 });
        }
    };
    let elapsed = cli.timings.then(|| start.elapsed());
    let text = serde_json::to_string_pretty(&report::envelope(&command, &outcome, elapsed))
        .expect("reports serialize")
        + "\n";
    print!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
