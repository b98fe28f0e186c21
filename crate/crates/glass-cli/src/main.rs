//! `glass`: validate, simulate, and analyze piecewise-linear switching
//! networks described by JSON spec files.
//!
//! Exit codes: 0 on success, 1 on a domain violation (invalid network,
//! ambiguous simulation, cycle that is not a cyclic attractor), 2 on I/O,
//! parse, or usage errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use glass_core::network::{transition_graph, validate, TransitionGraph};
use glass_core::{
    find_cyclic_attractors, simulate, spine, CycleSpec, EventTrajectory, GlassNetwork,
    RegionIndex, SimulationLimits, SimulationStatus, Spine,
};
use glass_cli::report::{self, fmt_f64, Json};
use glass_cli::spec_file::{self, NetworkSpecFile};

#[derive(Parser)]
#[command(name = "glass", version, about = "Glass network analysis tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file against the structural invariants.
    Validate {
        /// Network spec file (JSON).
        path: PathBuf,
    },
    /// Run the event-driven simulator and write the trajectory as CSV.
    Simulate {
        /// Network spec file (JSON).
        path: PathBuf,
        /// Start point, comma-separated coordinates, e.g. "-1,0".
        #[arg(long, value_name = "X1,..,XN", allow_hyphen_values = true)]
        start: String,
        /// Stop after this many wall crossings.
        #[arg(long, default_value_t = 1000)]
        max_events: usize,
        /// Stop once cumulative time would exceed this bound.
        #[arg(long, default_value_t = f64::INFINITY)]
        t_max: f64,
        /// Output file; stdout when omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Export the state transition graph as a DOT digraph.
    Std {
        /// Network spec file (JSON).
        path: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Classify a cycle, or discover and classify all cyclic attractors.
    Analyze {
        /// Network spec file (JSON).
        path: PathBuf,
        /// Cycle as region tokens separated by '>'. A token is either one
        /// digit per variable ("00>10>11>01") or comma-separated levels
        /// ("0,0>1,0>1,1>0,1").
        #[arg(long, value_name = "CYCLE", conflicts_with = "auto", required_unless_present = "auto")]
        cycle: Option<String>,
        /// Discover all cyclic attractors and classify each.
        #[arg(long)]
        auto: bool,
        /// Report file; stdout when omitted.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
}

/// A failed command: the process exit code plus an optional stderr line.
struct Failure {
    code: u8,
    message: Option<String>,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: Some(message.into()) }
    }

    fn parse(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: Some(message.into()) }
    }

    fn silent(code: u8) -> Failure {
        Failure { code, message: None }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(failure) = run(cli.command) {
        if let Some(message) = failure.message {
            eprintln!("error: {message}");
        }
        std::process::exit(failure.code.into());
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Simulate { path, start, max_events, t_max, out } => {
            cmd_simulate(&path, &start, max_events, t_max, out.as_deref())
        }
        Command::Std { path, out } => cmd_std(&path, out.as_deref()),
        Command::Analyze { path, cycle, auto, report } => {
            cmd_analyze(&path, cycle.as_deref(), auto, report.as_deref())
        }
    }
}

fn load(path: &std::path::Path) -> Result<(NetworkSpecFile, GlassNetwork), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    let file = spec_file::parse(&text)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let net = file
        .to_network()
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    Ok((file, net))
}

fn emit(out: Option<&std::path::Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_validate(path: &std::path::Path) -> Result<(), Failure> {
    let (_, net) = load(path)?;
    let report = validate(&net);
    if report.is_valid() {
        println!("ok");
        Ok(())
    } else {
        for issue in &report.issues {
            println!("{issue}");
        }
        Err(Failure::silent(1))
    }
}

fn parse_start(arg: &str, dimension: usize) -> Result<Vec<f64>, Failure> {
    let coords: Result<Vec<f64>, _> = arg.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let coords = coords
        .map_err(|e| Failure::parse(format!("start point {arg:?} is not a list of numbers: {e}")))?;
    if coords.len() != dimension {
        return Err(Failure::parse(format!(
            "start point has {} coordinates, the network has {dimension} variables",
            coords.len()
        )));
    }
    Ok(coords)
}

/// Spines of every discovered cyclic attractor, so the simulator can halt
/// when a trajectory collapses onto one in finite time. Best effort: a
/// network whose transition graph cannot be built simply gets no spines.
fn known_spines(net: &GlassNetwork) -> Vec<Spine> {
    find_cyclic_attractors(net)
        .map(|cycles| {
            cycles
                .iter()
                .filter_map(|c| spine(net, c).ok())
                .filter(|s| !s.is_empty())
                .collect()
        })
        .unwrap_or_default()
}

fn cmd_simulate(
    path: &std::path::Path,
    start: &str,
    max_events: usize,
    t_max: f64,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let (_, net) = load(path)?;
    let x0 = parse_start(start, net.dimension())?;
    let limits = SimulationLimits { max_events, t_max, spines: known_spines(&net), ..Default::default() };
    let traj = simulate(&net, &x0, &limits).map_err(|e| Failure::domain(e.to_string()))?;
    emit(out, &trajectory_csv(&traj))?;
    if let SimulationStatus::SimultaneousSwitch { first, second } = traj.status {
        return Err(Failure::domain(format!(
            "simultaneous switch at event {}: coordinates {first} and {second} \
             reach their thresholds at the same time",
            traj.events.len() + 1
        )));
    }
    Ok(())
}

fn status_label(status: &SimulationStatus) -> &'static str {
    match status {
        SimulationStatus::Budget => "Budget",
        SimulationStatus::TimeLimit => "TimeLimit",
        SimulationStatus::InteriorEquilibrium => "InteriorEquilibrium",
        SimulationStatus::SpineConvergence => "SpineConvergence",
        SimulationStatus::SimultaneousSwitch { .. } => "SimultaneousSwitch",
    }
}

fn trajectory_csv(traj: &EventTrajectory) -> String {
    let n = traj.start.len();
    let mut out = String::from("event_index,cumulative_time");
    for i in 1..=n {
        write!(out, ",x_{i}").unwrap();
    }
    out.push_str(",wall\n");
    write!(out, "0,{}", fmt_f64(0.0)).unwrap();
    for &x in &traj.start {
        write!(out, ",{}", fmt_f64(x)).unwrap();
    }
    out.push_str(",start\n");
    for (i, event) in traj.events.iter().enumerate() {
        write!(out, "{},{}", i + 1, fmt_f64(event.cumulative_time)).unwrap();
        for &x in &event.point {
            write!(out, ",{}", fmt_f64(x)).unwrap();
        }
        // Descriptor indexes variables the way the column headers do (1-based).
        let w = &event.wall;
        let dir = match w.orientation {
            glass_core::network::Orientation::Up => "up",
            glass_core::network::Orientation::Down => "down",
        };
        writeln!(out, ",x_{}@{}:{dir}", w.coord + 1, w.threshold_level).unwrap();
    }
    // Status row, padded to the same column count.
    write!(out, "status,{}", status_label(&traj.status)).unwrap();
    for _ in 0..=n {
        out.push(',');
    }
    out.push('\n');
    out
}

fn cmd_std(path: &std::path::Path, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let (_, net) = load(path)?;
    let graph = transition_graph(&net).map_err(|e| Failure::domain(e.to_string()))?;
    emit(out, &dot_digraph(&graph))
}

fn dot_digraph(graph: &TransitionGraph) -> String {
    let mut out = String::from("digraph std {\n");
    for node in graph.nodes() {
        writeln!(out, "  \"{node}\";").unwrap();
    }
    for (from, successors) in graph.iter() {
        for to in successors {
            writeln!(out, "  \"{from}\" -> \"{to}\";").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn parse_cycle(arg: &str, dimension: usize) -> Result<CycleSpec, Failure> {
    let mut regions = Vec::new();
    for token in arg.split('>') {
        let token = token.trim();
        let levels: Vec<usize> = if token.contains(',') {
            token
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::parse(format!("bad region token {token:?} in cycle")))?
        } else {
            token
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Failure::parse(format!("bad region token {token:?} in cycle")))?
        };
        if levels.len() != dimension {
            return Err(Failure::parse(format!(
                "region token {token:?} has {} levels, the network has {dimension} variables",
                levels.len()
            )));
        }
        regions.push(RegionIndex::new(levels));
    }
    CycleSpec::new(regions).map_err(|e| Failure::domain(e.to_string()))
}

fn cmd_analyze(
    path: &std::path::Path,
    cycle: Option<&str>,
    auto: bool,
    out: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let (file, net) = load(path)?;
    let cycles = if auto {
        find_cyclic_attractors(&net).map_err(|e| Failure::domain(e.to_string()))?
    } else {
        vec![parse_cycle(cycle.expect("clap requires --cycle without --auto"), net.dimension())?]
    };
    let digest = file.digest();
    let mut reports = Vec::with_capacity(cycles.len());
    for (spec, result) in cycles.iter().zip(glass_core::batch::classify_batch(&net, &cycles)) {
        let classification = result.map_err(|e| Failure::domain(e.to_string()))?;
        reports.push(report::analysis_json(&digest, spec, &classification));
    }
    emit(out, &Json::Arr(reports).render())
}
