//! `bellpoly`: command-line front end for the correlation polytope toolkit.
//!
//! Exit codes: 0 on success or when a point is inside, 1 on a semantic
//! negative (outside, signaling input, disagreeing proofs), 2 on usage or
//! input format errors.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use bellpoly_core::bounds::{bacon_toner_ensemble, hat_distribution, lower_bound_report};
use bellpoly_core::coords::project;
use bellpoly_core::format::{
    parse_inequalities, parse_point, parse_table, parse_vertices, write_class_report, write_ensemble,
    write_inequalities, write_lower_bound_report, write_membership, write_table,
    write_vertices, InequalityFile, VertexFile,
};
use bellpoly_core::polyhedra::{affine_dimension, facets_from_vertices, membership, MembershipResult};
use bellpoly_core::strategies::{
    enumerate_bidir_cc_vertices, enumerate_fixed_cc_vertices, enumerate_lsr_vertices, stirling_second_kind,
};
use bellpoly_core::symmetry::Classifier;
use bellpoly_core::{Direction, Error, ReducedPoint, Scenario, Space, VRep};

#[derive(Parser)]
#[command(name = "bellpoly", version, about = "Exact correlation polytopes with classical communication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Lsr,
    FixedAb,
    FixedBa,
    Bidir,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Fixed,
    FixedBa,
    Bidir,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Fixed => Space::Fixed(Direction::AliceToBob),
            SpaceArg::FixedBa => Space::Fixed(Direction::BobToAlice),
            SpaceArg::Bidir => Space::Bidir,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the deterministic vertices of a model.
    Vertices {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        ma: usize,
        #[arg(long)]
        mb: usize,
        /// Bits of communication (ignored for lsr).
        #[arg(long, default_value_t = 1)]
        bits: u32,
        /// Coordinate space for lsr vertices.
        #[arg(long, value_enum, default_value = "bidir")]
        space: SpaceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a vertex list to its facets and affine hull.
    Facets {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group facets into local-equivalence classes.
    Classes {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print each representative in chart layout.
        #[arg(long)]
        pretty_chart: bool,
    },
    /// Decide whether a point (or table) lies in the hull of a vertex list.
    Check {
        /// Point file, or a table file projected into the vertices' space.
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        vertices: PathBuf,
    },
    /// Build the exact simulation ensemble of a no-signaling table.
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stirling number of the second kind.
    Stirling { n: usize, k: usize },
    /// Write the lower-bound witness table.
    Hat {
        #[arg(long)]
        ma: usize,
        #[arg(long)]
        mb: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the witness table needs more than the given bits.
    Lowerbound {
        #[arg(long)]
        ma: usize,
        #[arg(long)]
        mb: usize,
        #[arg(long, default_value_t = 1)]
        bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures that map to exit code 1 rather than 2.
#[derive(Debug)]
struct Negative(String);

impl std::fmt::Display for Negative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Negative {}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_file<T>(path: &Path, parse: impl Fn(&str) -> bellpoly_core::Result<T>) -> anyhow::Result<T> {
    parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Writes to `out`, or to stdout when no path is given. Returns whether a
/// file was written.
fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<bool> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(true)
        }
        None => {
            print!("{text}");
            Ok(false)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("BELLPOLY_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("BELLPOLY_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("cannot configure the thread pool")
}

fn cmd_vertices(
    model: Model,
    ma: usize,
    mb: usize,
    bits: u32,
    space: SpaceArg,
    out: &Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let sc = Scenario::binary(ma, mb)?;
    let (space, r_bits, points): (Space, u32, Vec<ReducedPoint>) = match model {
        Model::Lsr => {
            let space = Space::from(space);
            let pts = enumerate_lsr_vertices(sc)
                .iter()
                .map(|t| project(space, t))
                .collect::<bellpoly_core::Result<_>>()?;
            (space, 0, pts)
        }
        Model::FixedAb => (Space::FIXED, bits, enumerate_fixed_cc_vertices(sc, Direction::AliceToBob, bits)?),
        Model::FixedBa => (
            Space::Fixed(Direction::BobToAlice),
            bits,
            enumerate_fixed_cc_vertices(sc, Direction::BobToAlice, bits)?,
        ),
        Model::Bidir => (Space::Bidir, bits, enumerate_bidir_cc_vertices(sc, bits)?),
    };
    // enumeration order is kept: it is the hull's insertion order
    let mut seen = HashSet::new();
    let points: Vec<_> = points
        .into_iter()
        .map(|p| p.coords)
        .filter(|c| seen.insert(c.clone()))
        .collect();
    let file = VertexFile {
        space,
        scenario: sc,
        r_bits,
        points,
    };
    if emit(out, &write_vertices(&file))? {
        println!("vertices={}", file.points.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_facets(input: &Path, out: &Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let v = parse_file(input, parse_vertices)?;
    let vrep = VRep::new(v.space.dimension(&v.scenario), v.points)?;
    let dim = affine_dimension(&vrep)?;
    let h = facets_from_vertices(&vrep)?;
    let file = InequalityFile::from_hrep(v.space, v.scenario, h);
    if emit(out, &write_inequalities(&file))? {
        println!(
            "facets={} equations={} dimension={dim}",
            file.inequalities.len(),
            file.equations.len()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classes(input: &Path, out: &Option<PathBuf>, pretty: bool) -> anyhow::Result<ExitCode> {
    let f = parse_file(input, parse_inequalities)?;
    let classifier = Classifier::with_equations(f.scenario, f.space, &f.equations)?;
    let classes = classifier.partition(&f.inequalities)?;
    let trivial = classes.iter().filter(|c| c.trivial).count();
    println!(
        "nontrivial={} trivial={} total={}",
        classes.len() - trivial,
        trivial,
        classes.len()
    );
    if let Some(path) = out {
        let report = write_class_report(f.space, &f.scenario, &classes, &f.equations, true);
        fs::write(path, report).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if pretty {
        for (k, c) in classes.iter().filter(|c| !c.trivial).enumerate() {
            println!("class {} ({} members)", k + 1, c.members.len());
            print!("{}", c.representative.chart(f.space, &f.scenario));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(point: &Path, vertices: &Path) -> anyhow::Result<ExitCode> {
    let v = parse_file(vertices, parse_vertices)?;
    let text = read(point)?;
    let is_table = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("scenario"));
    let p = if is_table {
        let t = parse_table(&text).with_context(|| format!("in {}", point.display()))?;
        project(v.space, &t).with_context(|| format!("in {}", point.display()))?
    } else {
        parse_point(&text).with_context(|| format!("in {}", point.display()))?
    };
    if p.coords.len() != v.space.dimension(&v.scenario) {
        return Err(Error::DimensionMismatch {
            expected: v.space.dimension(&v.scenario),
            found: p.coords.len(),
        }
        .into());
    }
    if p.space != v.space || p.scenario != v.scenario {
        bail!(
            "point lives in {} on {} but vertices in {} on {}",
            p.space,
            p.scenario,
            v.space,
            v.scenario
        );
    }
    let vrep = VRep::new(p.coords.len(), v.points)?;
    let result = membership(&p.coords, &vrep)?;
    print!("{}", write_membership(&result));
    Ok(match result {
        MembershipResult::Inside { .. } => ExitCode::SUCCESS,
        MembershipResult::Outside { .. } => ExitCode::from(1),
    })
}

fn cmd_simulate(input: &Path, out: &Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let t = parse_file(input, parse_table)?;
    let ensemble = match bacon_toner_ensemble(&t) {
        Err(Error::Signaling(msg)) => return Err(Negative(msg).into()),
        other => other?,
    };
    let exact = ensemble.to_table() == t;
    emit(out, &write_ensemble(&ensemble))?;
    println!("bits={} exact={}", ensemble.bit_cost(), if exact { "yes" } else { "no" });
    Ok(if exact { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_hat(ma: usize, mb: usize, out: &Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let t = hat_distribution(ma, mb)?;
    emit(out, &write_table(&t))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_lowerbound(ma: usize, mb: usize, bits: u32, out: &Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let report = lower_bound_report(ma, mb, bits)?;
    let text = write_lower_bound_report(&report);
    if let Some(path) = out {
        fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    print!("{text}");
    Ok(if report.consistent() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Vertices {
            model,
            ma,
            mb,
            bits,
            space,
            out,
        } => cmd_vertices(model, ma, mb, bits, space, &out),
        Command::Facets { input, out } => cmd_facets(&input, &out),
        Command::Classes {
            input,
            out,
            pretty_chart,
        } => cmd_classes(&input, &out, pretty_chart),
        Command::Check { point, vertices } => cmd_check(&point, &vertices),
        Command::Simulate { input, out } => cmd_simulate(&input, &out),
        Command::Stirling { n, k } => {
            println!("{}", stirling_second_kind(n, k));
            Ok(ExitCode::SUCCESS)
        }
        Command::Hat { ma, mb, out } => cmd_hat(ma, mb, &out),
        Command::Lowerbound { ma, mb, bits, out } => cmd_lowerbound(ma, mb, bits, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Negative>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
