//! `dmoments`: moments of Dirichlet and simplex splines and the
//! hypergeometric functions they generate, from the command line.

mod commands;
mod input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet_moments::hypergeo::SeriesControl;
use dirichlet_moments::IntegrationControl;

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "dmoments", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(flatten)]
    controls: Controls,
}

/// Series truncation and quadrature accuracy overrides.
#[derive(Debug, Args)]
struct Controls {
    /// Highest order summed before a series is declared non-convergent.
    #[arg(long, global = true)]
    series_max_order: Option<u32>,
    /// Absolute threshold for a negligible series block.
    #[arg(long, global = true)]
    series_abs_tol: Option<f64>,
    /// Relative threshold for a negligible series block.
    #[arg(long, global = true)]
    series_rel_tol: Option<f64>,
    /// Absolute accuracy target for quadrature.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative accuracy target for quadrature.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Largest number of Gauss nodes per axis.
    #[arg(long, global = true)]
    max_nodes: Option<usize>,
}

impl Controls {
    fn series(&self) -> SeriesControl {
        let d = SeriesControl::default();
        SeriesControl {
            max_order: self.series_max_order.unwrap_or(d.max_order),
            abs_tol: self.series_abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.series_rel_tol.unwrap_or(d.rel_tol),
            ..d
        }
    }

    fn integration(&self) -> IntegrationControl {
        let d = IntegrationControl::default();
        IntegrationControl {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_nodes: self.max_nodes.unwrap_or(d.max_nodes),
            ..d
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments m_β(b;X) of a Dirichlet spline.
    Moment(MomentArgs),
    /// Lauricella polynomial L_j(x) = F_B(-j, β; γ; x).
    Lauricella(LauricellaArgs),
    /// Carlson's R_{-a}(b; z).
    RHyper(RArgs),
    /// Carlson's S(b; z).
    SHyper(SArgs),
    /// Appell's F4(α, β; γ, δ; x1(1-x2), x2(1-x1)).
    F4(F4Args),
    /// Lauricella's F_B(α, β; γ; x) as a power series.
    Fb(FbArgs),
    /// Seeded identity sweeps.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Expansion,
    CoalescentKnots,
    #[value(name = "recurrence-54")]
    Recurrence54,
    Elevation,
}

#[derive(Debug, Args)]
struct MomentArgs {
    /// CSV file with one knot per row and one column per coordinate.
    #[arg(long)]
    knots: PathBuf,
    /// Moment order, e.g. `2,1`.
    #[arg(long, conflicts_with = "max_order", required_unless_present = "max_order")]
    beta: Option<String>,
    /// Tabulate every moment of total order up to this value instead.
    #[arg(long)]
    max_order: Option<u32>,
    /// `ones` or a comma-separated list with one entry per knot.
    #[arg(long, default_value = "ones")]
    params: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Also evaluate the multinomial expansion and report the difference.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LauricellaMethodArg {
    Series,
    Moments,
    Recurrence,
    All,
}

#[derive(Debug, Args)]
struct LauricellaArgs {
    /// Degree multi-index j.
    #[arg(long)]
    j: String,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    beta: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = LauricellaMethodArg::Recurrence)]
    method: LauricellaMethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RMethodArg {
    Quadrature,
    Series,
}

#[derive(Debug, Args)]
struct RArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Dirichlet parameters b.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    params: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    z: Vec<f64>,
    #[arg(long, value_enum, default_value_t = RMethodArg::Quadrature)]
    method: RMethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SMethodArg {
    Series,
    DividedDifference,
}

#[derive(Debug, Args)]
struct SArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    params: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    z: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SMethodArg::Series)]
    method: SMethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum F4MethodArg {
    Series,
    Moments,
    Both,
}

#[derive(Debug, Args)]
struct F4Args {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, allow_hyphen_values = true)]
    x1: f64,
    #[arg(long, allow_hyphen_values = true)]
    x2: f64,
    #[arg(long, value_enum, default_value_t = F4MethodArg::Moments)]
    method: F4MethodArg,
}

#[derive(Debug, Args)]
struct FbArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    beta: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    x: Vec<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let series = cli.controls.series();
    let integration = cli.controls.integration();
    let result = match &cli.command {
        Command::Moment(a) => commands::moment(a),
        Command::Lauricella(a) => commands::lauricella(a, &series),
        Command::RHyper(a) => commands::r_hyper(a, &series, &integration),
        Command::SHyper(a) => commands::s_hyper(a, &series),
        Command::F4(a) => commands::f4(a, &series, &integration),
        Command::Fb(a) => commands::fb(a, &series),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(report) => {
            let text = report.render(cli.format);
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}
