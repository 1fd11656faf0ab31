mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mvop_core::bispec::SearchConfig;
use mvop_core::exact::{parse_rational, Rational};
use mvop_core::weights::Normalization;

use commands::{out_path, Status};
use io::CliError;

#[derive(Parser)]
#[command(name = "mvop", version)]
#[command(about = "Exact block Darboux transforms, matrix orthogonal polynomials and bispectral checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Absolute,
    Relative,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Absolute => Normalization::Absolute,
            NormArg::Relative => Normalization::Relative,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Matrix moments of a weight
    Moments {
        weight: PathBuf,
        #[arg(long)]
        count: usize,
        /// Defaults to relative without point masses, absolute with them
        #[arg(long, value_enum)]
        normalization: Option<NormArg>,
        /// Sign of the origin mass of a darboux_gegenbauer02 weight
        #[arg(long, allow_hyphen_values = true)]
        delta_sign: Option<i8>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block recurrence coefficients from the moments of a weight
    Recurrence {
        weight: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(long, value_enum)]
        normalization: Option<NormArg>,
        #[arg(long, allow_hyphen_values = true)]
        delta_sign: Option<i8>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form recurrence of the gegenbauer02 weight
    GegenbauerOperator {
        #[arg(long, value_parser = parse_lambda)]
        lambda: Rational,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor L0 = alpha beta and emit L = beta alpha
    Darboux {
        op: PathBuf,
        alpha0: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the bidiagonal factors
        #[arg(long)]
        factors: Option<PathBuf>,
        /// Also write the lower factor as a banded block matrix
        #[arg(long)]
        beta_out: Option<PathBuf>,
    },
    /// Check P_n D = Lambda_n P_n for n < N
    Verify {
        op: PathBuf,
        diffop: PathBuf,
        eigen: PathBuf,
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Dimensions of the operator algebra by order
    Search {
        op: PathBuf,
        #[arg(long)]
        max_order: usize,
        /// Defaults to 2 * max_order + 6
        #[arg(long)]
        n_train: Option<usize>,
        #[arg(long, default_value_t = 5)]
        n_verify: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the basis operators
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check (ad L)^p (Lambda) = 0 on the exact window
    Adcheck {
        op: PathBuf,
        eigen: PathBuf,
        #[arg(long)]
        power: usize,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build the differential operator of order m from its eigenvalues
    Construct {
        op: PathBuf,
        eigen: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check U L0 = L U on the exact window
    Intertwine {
        u: PathBuf,
        l0: PathBuf,
        l: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn init_logging() {
    let level = match std::env::var("MVOP_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
}

fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Moments {
            weight,
            count,
            normalization,
            delta_sign,
            out,
        } => commands::moments_cmd(&weight, count, normalization.map(Into::into), delta_sign, out_path(&out)),
        Command::Recurrence {
            weight,
            levels,
            normalization,
            delta_sign,
            out,
        } => commands::recurrence_cmd(&weight, levels, normalization.map(Into::into), delta_sign, out_path(&out)),
        Command::GegenbauerOperator { lambda, levels, out } => commands::gegenbauer_cmd(&lambda, levels, out_path(&out)),
        Command::Darboux {
            op,
            alpha0,
            out,
            factors,
            beta_out,
        } => commands::darboux_cmd(&op, &alpha0, out_path(&out), out_path(&factors), out_path(&beta_out)),
        Command::Verify {
            op,
            diffop,
            eigen,
            n,
            report,
        } => commands::verify_cmd(&op, &diffop, &eigen, n, out_path(&report)),
        Command::Search {
            op,
            max_order,
            n_train,
            n_verify,
            report,
            out,
        } => {
            let mut config = SearchConfig::new(max_order);
            config.n_verify = n_verify;
            if let Some(t) = n_train {
                config.n_train = t;
            }
            commands::search_cmd(&op, config, out_path(&report), out_path(&out))
        }
        Command::Adcheck {
            op,
            eigen,
            power,
            levels,
            report,
        } => commands::adcheck_cmd(&op, &eigen, power, levels, out_path(&report)),
        Command::Construct { op, eigen, order, out } => commands::construct_cmd(&op, &eigen, order, out_path(&out)),
        Command::Intertwine { u, l0, l, report } => commands::intertwine_cmd(&u, &l0, &l, out_path(&report)),
    }
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.variant());
            ExitCode::from(2)
        }
    }
}
