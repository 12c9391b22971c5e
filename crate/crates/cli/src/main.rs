//! `pphull`: reproducible runs of the pphull toolkit from flags and config files.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Args, CommandFactory, Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::Common;

/// Exit codes: 1 for usage and schema errors, 2 for numeric failures inside
/// the library, 3 when artifacts cannot be written.
#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Numeric(pphull::Error),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(e) => write!(f, "numeric failure: {e}"),
            CliError::Io(m) => write!(f, "cannot write artifacts: {m}"),
        }
    }
}

impl From<pphull::Error> for CliError {
    fn from(e: pphull::Error) -> Self {
        CliError::Numeric(e)
    }
}

/// Every flag is also a key of the command's config section; flags win.
/// Values are read as TOML literals when they parse as one, as strings
/// otherwise, so `--depth 30` is an integer and `--threshold e2` a string.
#[derive(Parser)]
#[command(name = "pphull", version, about = "Polynomial hulls of graphs: decompositions, rational approximation, psh fields, thinness and harmonic measure")]
struct Cli {
    /// Config file: top-level common keys, a [function] table and one table per command.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for the JSON report and CSV traces (default: out).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<String>,
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<String>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_name = "INT")]
    threads: Option<String>,
    /// Principal tolerance of the command (Laurent truncation, Wiener increment, absorption distance).
    #[arg(long, global = true, value_name = "FLOAT")]
    tolerance: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FunctionFlags {
    /// Function preset: exp-reciprocal, recip-sin-pi, gaussian-poles, geometric-poles,
    /// pole-series, rational, single-pole, two-pole, laurent-example.
    #[arg(long)]
    function: Option<String>,
    /// Number of stored terms of a pole-series preset.
    #[arg(long)]
    n_max: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Laurent, at-infinity or Mittag-Leffler splitting with a reconstruction check.
    Decompose {
        #[command(flatten)]
        function: FunctionFlags,
        /// laurent, infinity or mittag_leffler.
        #[arg(long)]
        mode: Option<String>,
        /// Contour center `re,im`.
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        radius: Option<String>,
        #[arg(long)]
        k_max: Option<String>,
        #[arg(long)]
        check_points: Option<String>,
        /// Cover disk `x,y,r` (repeatable).
        #[arg(long = "disk", id = "disks", action = ArgAction::Append)]
        disks: Vec<String>,
    },
    /// Leja points and the capacity estimate of a compact sample.
    Fekete {
        #[command(flatten)]
        function: FunctionFlags,
        /// poles, singular, segment or points.
        #[arg(long)]
        sample: Option<String>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        depth: Option<String>,
        #[arg(long)]
        segment_start: Option<String>,
        #[arg(long)]
        segment_end: Option<String>,
        #[arg(long)]
        segment_points: Option<String>,
    },
    /// Rational approximation with poles on the sample, scanned over a schedule.
    Approx {
        #[command(flatten)]
        function: FunctionFlags,
        #[arg(long)]
        sample: Option<String>,
        #[arg(long)]
        depth: Option<String>,
        #[arg(long)]
        segment_start: Option<String>,
        #[arg(long)]
        segment_end: Option<String>,
        #[arg(long)]
        segment_points: Option<String>,
        #[arg(long)]
        m: Option<String>,
        /// Items `m:N`, comma separated.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<String>,
        #[arg(long)]
        target_center: Option<String>,
        #[arg(long)]
        target_radius: Option<String>,
        #[arg(long)]
        cluster_link: Option<String>,
        #[arg(long)]
        radius_multiplier: Option<String>,
    },
    /// Certified plurisubharmonic field detecting the graph.
    Psh {
        #[command(flatten)]
        function: FunctionFlags,
        /// f64 or double.
        #[arg(long)]
        precision: Option<String>,
        #[arg(long)]
        nu_max: Option<String>,
        #[arg(long)]
        density: Option<String>,
        #[arg(long)]
        max_big_n: Option<String>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        cluster_link: Option<String>,
        /// Probe point `re,im` (repeatable).
        #[arg(long = "probe", id = "probes", action = ArgAction::Append)]
        probes: Vec<String>,
        #[arg(long)]
        probe_offset: Option<String>,
        #[arg(long)]
        slice_z: Option<String>,
    },
    /// Wiener test of the sublevel cover {|f| >= R} at a point.
    Thin {
        #[command(flatten)]
        function: FunctionFlags,
        /// Threshold R; `e`, `e2`, ... denote powers of e.
        #[arg(long)]
        threshold: Option<String>,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        depth: Option<String>,
        #[arg(long)]
        cover_radius: Option<String>,
        #[arg(long)]
        max_index: Option<String>,
        #[arg(long)]
        witness: bool,
    },
    /// Harmonic measure by walk on spheres or grid relaxation.
    Hmeasure {
        /// `r,R`: the annulus r < |z| < R with target |z| = r.
        #[arg(long)]
        annulus: Option<String>,
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        walks: Option<String>,
        /// wos or grid.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
        /// Domain disk `x,y,r`.
        #[arg(long)]
        domain: Option<String>,
        /// Target circle `x,y,r`.
        #[arg(long)]
        target_circle: Option<String>,
        /// Obstacle disk `x,y,r` (repeatable).
        #[arg(long = "obstacle", id = "obstacles", action = ArgAction::Append)]
        obstacles: Vec<String>,
        #[command(flatten)]
        function: FunctionFlags,
        /// Threshold of the function cover used as obstacles.
        #[arg(long)]
        obstacle_threshold: Option<String>,
    },
    /// Classification of the hull fibers over singular points.
    Hull {
        #[command(flatten)]
        function: FunctionFlags,
        /// Singular point `re,im` (repeatable).
        #[arg(long = "point", id = "points", action = ArgAction::Append)]
        points: Vec<String>,
        /// Thresholds, comma separated; `e`, `e2`, ... denote powers of e.
        #[arg(long, value_delimiter = ',')]
        r_grid: Vec<String>,
        #[arg(long)]
        depth: Option<String>,
        #[arg(long)]
        cover_radius: Option<String>,
        #[arg(long)]
        max_index: Option<String>,
        #[arg(long)]
        keep_reports: bool,
        /// Also report the summability conditions of a pole series.
        #[arg(long)]
        series: bool,
        #[arg(long)]
        vn_threshold: Option<String>,
        #[arg(long)]
        vn_disc: Option<String>,
        #[arg(long)]
        vn_probe: Option<String>,
        #[arg(long, value_delimiter = ',')]
        vn_n: Vec<String>,
    },
}

const GLOBAL_IDS: [&str; 5] = ["config", "out", "seed", "threads", "tolerance"];

fn literal(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => match t.remove("v") {
            Some(v @ (toml::Value::Integer(_) | toml::Value::Float(_) | toml::Value::Boolean(_))) => v,
            _ => toml::Value::String(raw.into()),
        },
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// Flags given on the command line, split into common and command keys.
fn flag_tables(sub: &ArgMatches, cmd: &clap::Command) -> (toml::Table, toml::Table) {
    let mut common = toml::Table::new();
    let mut own = toml::Table::new();
    for id in sub.ids() {
        let id = id.as_str();
        if sub.value_source(id) != Some(ValueSource::CommandLine) || id == "config" {
            continue;
        }
        // argument groups from flattened structs are ids too
        let Some(arg) = cmd.get_arguments().find(|a| a.get_id() == id) else { continue };
        let Some(raw) = sub.get_raw(id) else { continue };
        let values: Vec<toml::Value> = raw.map(|v| literal(&v.to_string_lossy())).collect();
        let list = matches!(arg.get_action(), ArgAction::Append) || arg.get_value_delimiter().is_some();
        let value = if list { toml::Value::Array(values) } else { values.into_iter().next().expect("one value") };
        if GLOBAL_IDS.contains(&id) {
            common.insert(id.into(), value);
        } else {
            own.insert(id.into(), value);
        }
    }
    (common, own)
}

fn execute(command: &str, section: toml::Table, common: &Common) -> Result<Outcome, CliError> {
    use config::typed;
    match command {
        "decompose" => commands::decompose(typed(section, command)?, common),
        "fekete" => commands::fekete(typed(section, command)?, common),
        "approx" => commands::approx(typed(section, command)?, common),
        "psh" => commands::psh(typed(section, command)?, common),
        "thin" => commands::thin(typed(section, command)?, common),
        "hmeasure" => commands::hmeasure(typed(section, command)?, common),
        "hull" => commands::hull(typed(section, command)?, common),
        other => Err(CliError::Schema(format!("unknown command {other}"))),
    }
}

fn run(args: Vec<OsString>) -> Result<(), CliError> {
    let mut cli = Cli::command();
    let matches = match cli.try_get_matches_from_mut(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return Ok(());
            }
            return Err(CliError::Schema(e.to_string().trim_end().to_string()));
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let sub_cmd = cli.find_subcommand(name).expect("known subcommand");
    let (common_flags, flags) = flag_tables(sub, sub_cmd);
    let file = match sub.get_one::<PathBuf>("config").or(matches.get_one::<PathBuf>("config")) {
        Some(p) => Some(config::read_file(p)?),
        None => None,
    };
    let resolved = config::resolve(file, name, common_flags, flags)?;
    let common = resolved.common;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::Schema("threads must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Io(e.to_string()))?;
    log::info!("running {name} with {} threads", pool.current_num_threads());
    let outcome = pool.install(|| execute(name, resolved.section, &common))?;
    let out_dir = PathBuf::from(common.out.clone().unwrap_or_else(|| "out".into()));
    let written = output::write(Path::new(&out_dir), name, &common, &outcome)?;
    println!("{}", outcome.summary.trim_end());
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PPHULL_LOG", "warn")).init();
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pphull: {e}");
            ExitCode::from(e.code())
        }
    }
}
