mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bowditch::bqtree::{bq_test, fibonacci_values, neighbor, root_vertex, BqVerdict, TreeVertex};
use bowditch::carrier::{find_critical_carriers, minimal_carrier, CarrierError, CarrierGraph};
use bowditch::charvar::{realize, Slot, TraceTriple};
use bowditch::fermat::{
    fermat_point_triangle, steiner_tree, GeodesicTriple, SteinerKind, Triangle,
};
use bowditch::hyp3::{Geodesic, H3Point};
use bowditch::presets::{preset_names, run_preset, PresetError};
use bowditch::scan::{run_scan, ScanMode, ScanSpec, VerdictClass};
use bowditch::{Complex64, Tolerance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_REJECT: u8 = 1;
const EXIT_FAILURE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "bowditch",
    version,
    about = "Q-condition search and minimal carrier graphs for rank-two representations"
)]
struct Cli {
    /// Residual and interval tolerance.
    #[arg(long, global = true, value_parser = parse::tolerance)]
    tol: Option<f64>,
    /// Depth cap for tree searches.
    #[arg(long, global = true, default_value_t = 30)]
    depth: usize,
    /// Emit JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Trace of X.
    #[arg(allow_hyphen_values = true, value_parser = parse::complex)]
    x: Complex64,
    /// Trace of Y.
    #[arg(allow_hyphen_values = true, value_parser = parse::complex)]
    y: Complex64,
    /// Trace of XY.
    #[arg(allow_hyphen_values = true, value_parser = parse::complex)]
    z: Complex64,
}

impl TraceArgs {
    fn triple(&self) -> TraceTriple {
        TraceTriple::new(self.x, self.y, self.z)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Diagonal,
    FixedXy,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_enum, default_value_t = Mode::Diagonal)]
    mode: Mode,
    /// Diagonal mode: range of Re t along columns.
    #[arg(long, value_parser = parse::real_range, default_value = "2.5:3.5", allow_hyphen_values = true)]
    re: (f64, f64),
    /// Diagonal mode: range of Im t along rows.
    #[arg(long, value_parser = parse::real_range, default_value = "0:0", allow_hyphen_values = true)]
    im: (f64, f64),
    /// Fixed-xy mode: the value of μ.
    #[arg(long, value_parser = parse::complex, default_value = "0", allow_hyphen_values = true)]
    mu: Complex64,
    /// Fixed-xy mode: segment swept by x along columns.
    #[arg(long, value_parser = parse::complex_range, default_value = "2:4", allow_hyphen_values = true)]
    x: (Complex64, Complex64),
    /// Fixed-xy mode: segment swept by y along rows.
    #[arg(long, value_parser = parse::complex_range, default_value = "2:4", allow_hyphen_values = true)]
    y: (Complex64, Complex64),
    #[arg(long, default_value_t = 64)]
    width: usize,
    #[arg(long, default_value_t = 1)]
    height: usize,
    /// Output greymap (PGM P5).
    #[arg(long)]
    pgm: PathBuf,
    /// Optional per-cell CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the Q-conditions for a trace triple.
    Bq(TraceArgs),
    /// Minimal (or all critical) carrier graphs of a Q-triple.
    Carrier {
        #[arg(long)]
        all_critical: bool,
        #[command(flatten)]
        traces: TraceArgs,
    },
    /// Rasterize the Q-condition test over a grid.
    Scan(ScanArgs),
    /// Run one of the example families.
    Preset {
        #[arg(value_parser = preset_name)]
        name: String,
    },
    /// Fermat point of a triangle given by three points `a,b,c`.
    FermatTriangle {
        #[arg(allow_hyphen_values = true, value_parser = parse::point)]
        p1: H3Point,
        #[arg(allow_hyphen_values = true, value_parser = parse::point)]
        p2: H3Point,
        #[arg(allow_hyphen_values = true, value_parser = parse::point)]
        p3: H3Point,
    },
    /// Steiner trees of three geodesics given as `start:end`.
    Steiner {
        #[arg(allow_hyphen_values = true, value_parser = parse::geodesic)]
        g1: Geodesic,
        #[arg(allow_hyphen_values = true, value_parser = parse::geodesic)]
        g2: Geodesic,
        #[arg(allow_hyphen_values = true, value_parser = parse::geodesic)]
        g3: Geodesic,
    },
    /// Superbasis tree as CSV, breadth first from the root.
    TreeDump {
        /// Number of levels below the root.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        traces: TraceArgs,
    },
}

fn preset_name(s: &str) -> Result<String, String> {
    let names = preset_names();
    if names.iter().any(|n| n == s) {
        Ok(s.to_string())
    } else {
        Err(format!(
            "unknown preset {s:?}; expected one of {}",
            names.join(", ")
        ))
    }
}

/// A command outcome: the exit status, or an error message with its status.
type Outcome = Result<u8, (u8, String)>;

fn failure(e: impl std::fmt::Display) -> (u8, String) {
    (EXIT_FAILURE, e.to_string())
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), (u8, String)> {
    let text = serde_json::to_string_pretty(value).map_err(failure)?;
    println!("{text}");
    Ok(())
}

fn show_address(a: &impl std::fmt::Display) -> String {
    let s = a.to_string();
    if s.is_empty() {
        "root".into()
    } else {
        s
    }
}

fn cmd_bq(cli: &Cli, t: &TraceArgs, tol: &Tolerance) -> Outcome {
    let verdict = bq_test(&t.triple(), cli.depth, tol);
    if cli.json {
        emit_json(&verdict)?;
    } else {
        match &verdict {
            BqVerdict::Accept { subtree, sinks } => {
                let sinks: Vec<_> = sinks.iter().map(show_address).collect();
                println!(
                    "Accept: {} vertices explored, sinks {}",
                    subtree.len(),
                    sinks.join(" ")
                );
            }
            BqVerdict::RejectElliptic {
                witness,
                slot,
                trace,
            } => println!(
                "RejectElliptic: trace {} in slot {slot:?} at {}",
                parse::format_complex(*trace),
                show_address(witness)
            ),
            BqVerdict::RejectReducible => println!("RejectReducible"),
            BqVerdict::Indeterminate {
                frontier,
                near_boundary,
                depth_cap,
            } => println!(
                "Indeterminate: {} open vertices at depth cap {depth_cap}, {} near the interval",
                frontier.len(),
                near_boundary.len()
            ),
        }
    }
    Ok(verdict.exit_code() as u8)
}

fn cmd_carrier(cli: &Cli, all_critical: bool, t: &TraceArgs, tol: &Tolerance) -> Outcome {
    let rejected = |msg: String| (EXIT_REJECT, msg);
    let rep = realize(&t.triple(), tol).map_err(|e| rejected(e.to_string()))?;
    let found = if all_critical {
        find_critical_carriers(&rep, cli.depth, tol)
    } else {
        minimal_carrier(&rep, cli.depth, tol)
    };
    let graphs: Vec<CarrierGraph> = found.map_err(|e| match e {
        CarrierError::NotBqAccepted(_) | CarrierError::CommonFixedPoint => rejected(e.to_string()),
        other => failure(other),
    })?;
    if cli.json {
        emit_json(&graphs)?;
    } else {
        for g in &graphs {
            println!(
                "{:?} total {:.12} at {} ({} tree)",
                g.combinatorics,
                g.total_length,
                show_address(&g.vertex_address),
                g.steiner_kind
            );
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ScanSummary {
    spec: ScanSpec,
    accept: usize,
    reject: usize,
    indeterminate: usize,
}

fn cmd_scan(cli: &Cli, a: &ScanArgs, tol: &Tolerance) -> Outcome {
    let mode = match a.mode {
        Mode::Diagonal => ScanMode::Diagonal { re: a.re, im: a.im },
        Mode::FixedXy => ScanMode::FixedXY {
            mu: a.mu,
            x_from: a.x.0,
            x_to: a.x.1,
            y_from: a.y.0,
            y_to: a.y.1,
        },
    };
    let spec = ScanSpec {
        mode,
        width: a.width,
        height: a.height,
        depth_cap: cli.depth,
        tol: *tol,
    };
    spec.validate().map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let result = run_scan(&spec).map_err(failure)?;
    let create = |p: &PathBuf| {
        File::create(p)
            .map(BufWriter::new)
            .map_err(|e| failure(format!("{}: {e}", p.display())))
    };
    let mut pgm = create(&a.pgm)?;
    result.write_pgm(&mut pgm).map_err(failure)?;
    pgm.flush().map_err(failure)?;
    if let Some(path) = &a.csv {
        result.write_csv(create(path)?).map_err(failure)?;
    }
    let count =
        |class: fn(VerdictClass) -> bool| result.cells.iter().filter(|c| class(c.verdict)).count();
    let summary = ScanSummary {
        spec,
        accept: count(|v| v == VerdictClass::Accept),
        reject: count(|v| {
            matches!(
                v,
                VerdictClass::RejectElliptic | VerdictClass::RejectReducible
            )
        }),
        indeterminate: count(|v| v == VerdictClass::Indeterminate),
    };
    if cli.json {
        emit_json(&summary)?;
    } else {
        println!(
            "{}x{} cells: {} accept, {} reject, {} indeterminate",
            a.width, a.height, summary.accept, summary.reject, summary.indeterminate
        );
    }
    Ok(0)
}

fn cmd_preset(cli: &Cli, name: &str, tol: &Tolerance) -> Outcome {
    let report = run_preset(name, cli.depth, tol).map_err(|e| match e {
        PresetError::Unknown(..) => (EXIT_USAGE, e.to_string()),
        other => failure(other),
    })?;
    if cli.json {
        emit_json(&report)?;
        return Ok(0);
    }
    let flags = |c: &bowditch::presets::AxesChecks| {
        format!(
            "orthogonal to a common plane: {}, coplanar: {}, configuration: {:?}",
            c.orthogonal_to_common_plane, c.coplanar, c.configuration
        )
    };
    println!("{} ({})", report.name, report.family);
    println!("fixture (implementation choice): {}", report.fixture_note);
    println!("root axes: {}", flags(&report.root));
    println!(
        "root axes in the reference plane: {:?}, orthogonal to it: {:?}",
        report.root.in_reference_plane, report.root.orthogonal_to_reference_plane
    );
    println!(
        "winning superbasis {}: {}",
        show_address(&report.winning.address),
        flags(&report.winning)
    );
    println!(
        "translation axes miss rotation axes: {:?}",
        report.root.delta_gamma_disjoint
    );
    println!(
        "minimal carriers: {} of {} critical",
        report.minimal_carriers.len(),
        report.critical_count
    );
    for g in &report.minimal_carriers {
        println!(
            "  {:?} total {:.12} at {}",
            g.combinatorics,
            g.total_length,
            show_address(&g.vertex_address)
        );
    }
    if report.root.orthogonal_to_common_plane {
        println!(
            "2π/3-acute superbases within depth {}: {}",
            report.acute_search_depth,
            report.acute_superbases.len()
        );
    }
    Ok(0)
}

fn cmd_fermat_triangle(cli: &Cli, p: [H3Point; 3]) -> Outcome {
    let tri = Triangle::new(p[0], p[1], p[2]).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let f = fermat_point_triangle(&tri);
    if cli.json {
        emit_json(&f)?;
    } else {
        println!(
            "Fermat point ({}, {}, {}), distance sum {:.12}, {:?}",
            f.point.a, f.point.b, f.point.c, f.value, f.class
        );
    }
    Ok(0)
}

fn cmd_steiner(cli: &Cli, g: [Geodesic; 3], tol: &Tolerance) -> Outcome {
    let triple =
        GeodesicTriple::new(g[0], g[1], g[2], tol).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let trees = steiner_tree(&triple, tol).map_err(failure)?;
    if cli.json {
        emit_json(&trees)?;
    } else {
        for t in &trees {
            let kind = match &t.kind {
                SteinerKind::FermatTripod { on_axis, .. } => match on_axis {
                    Some(k) => format!("tripod centred on geodesic {k}"),
                    None => "tripod".to_string(),
                },
                SteinerKind::AxisPath {
                    axis_index, bar, ..
                } => {
                    format!("path along geodesic {axis_index}, bar {bar:.12}")
                }
            };
            println!(
                "{kind}: Steiner length {:.12}, length {:.12}",
                t.steiner_length, t.plain_length
            );
        }
    }
    Ok(0)
}

fn cmd_tree_dump(cli: &Cli, levels: usize, t: &TraceArgs) -> Outcome {
    let mut vertices = vec![root_vertex(&t.triple())];
    let mut layer = vertices.clone();
    for _ in 0..levels {
        let next: Vec<TreeVertex> = layer
            .iter()
            .flat_map(|v| {
                Slot::ALL
                    .into_iter()
                    .filter(|&s| v.address.parent_slot() != Some(s))
                    .map(|s| neighbor(v, s))
            })
            .collect();
        vertices.extend(next.iter().cloned());
        layer = next;
    }
    if cli.json {
        emit_json(&vertices)?;
        return Ok(0);
    }
    let stdout = io::stdout();
    let mut w = csv::Writer::from_writer(stdout.lock());
    let header = [
        "address", "x", "y", "z", "abs_x", "abs_y", "abs_z", "fib_x", "fib_y", "fib_z",
    ];
    w.write_record(header).map_err(failure)?;
    for v in &vertices {
        let tr = [v.traces.x, v.traces.y, v.traces.z];
        let mut row = vec![v.address.to_string()];
        row.extend(tr.iter().map(|z| parse::format_complex(*z)));
        row.extend(tr.iter().map(|z| z.norm().to_string()));
        row.extend(fibonacci_values(&v.address).iter().map(|f| f.to_string()));
        w.write_record(&row).map_err(failure)?;
    }
    w.flush().map_err(failure)?;
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    let tol = cli.tol.map_or_else(Tolerance::default, Tolerance::with_eps);
    match &cli.command {
        Command::Bq(t) => cmd_bq(cli, t, &tol),
        Command::Carrier {
            all_critical,
            traces,
        } => cmd_carrier(cli, *all_critical, traces, &tol),
        Command::Scan(a) => cmd_scan(cli, a, &tol),
        Command::Preset { name } => cmd_preset(cli, name, &tol),
        Command::FermatTriangle { p1, p2, p3 } => cmd_fermat_triangle(cli, [*p1, *p2, *p3]),
        Command::Steiner { g1, g2, g3 } => cmd_steiner(cli, [*g1, *g2, *g3], &tol),
        Command::TreeDump { levels, traces } => cmd_tree_dump(cli, *levels, traces),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
