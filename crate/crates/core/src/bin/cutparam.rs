use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cutparam::classify::{check_conditions, classify, EdgeMode};
use cutparam::error::{Error, ParseError, Result};
use cutparam::mesh::{equilateral_grid_with_margin, write_mesh, Triangulation};
use cutparam::pipeline::{
    analyze, load_curve, load_mesh, read_file, run_pipeline, write_file, Analysis, MeshSource, OutputPaths, RunConfig,
    EXIT_FAIL, EXIT_INPUT, EXIT_PASS,
};
use cutparam::report;
use cutparam::svg::{render_svg, RenderOptions};
use cutparam::topology::{build_loops, orient_loops, parse_loops, write_loops, PositiveLoop};
use cutparam::BoundaryCurve;

#[derive(Parser)]
#[command(name = "cutparam", version, about = "Parameterize a closed curve over the positive edges of a background mesh")]
struct Cli {
    /// Log progress to stderr (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Positive,
    Negative,
}

impl From<Mode> for EdgeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Positive => EdgeMode::Positive,
            Mode::Negative => EdgeMode::Negative,
        }
    }
}

#[derive(Args)]
struct Inputs {
    /// Mesh file ("nv nt", vertices, triangles)
    #[arg(long)]
    mesh: PathBuf,
    /// Curve description file
    #[arg(long)]
    curve: PathBuf,
    /// Select edges with φ (positive) or -φ (negative)
    #[arg(long, value_enum, default_value = "positive")]
    mode: Mode,
}

#[derive(Args)]
struct Sampling {
    /// Interior samples per edge
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Loop dump to use instead of rebuilding loops
    #[arg(long)]
    loops: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Do not shade positively cut triangles
    #[arg(long)]
    no_shade: bool,
    /// Draw segments from samples to their projections
    #[arg(long)]
    whiskers: bool,
    /// Image width in pixels
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    #[arg(long, default_value_t = 0.5)]
    mesh_stroke: f64,
    #[arg(long, default_value_t = 2.0)]
    edge_stroke: f64,
    #[arg(long, default_value_t = 1.5)]
    curve_stroke: f64,
}

impl RenderArgs {
    fn options(&self) -> RenderOptions {
        RenderOptions {
            width: self.width,
            mesh_stroke: self.mesh_stroke,
            edge_stroke: self.edge_stroke,
            curve_stroke: self.curve_stroke,
            shade_cut: !self.no_shade,
            whiskers: self.whiskers,
            ..RenderOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an equilateral grid covering a bounding box
    GenMesh {
        /// x0,y0,x1,y1
        #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
        bbox: [f64; 4],
        /// Edge length
        #[arg(long)]
        h: f64,
        /// Extra rows and columns of cells around the box
        #[arg(long, default_value_t = 1)]
        margin: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Positively cut triangles and positive edges, as JSON
    Classify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-triangle condition report; exits 1 when some condition fails
    Check {
        #[command(flatten)]
        inputs: Inputs,
        /// Text table (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV rows
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Loops of positive edges, one line of vertex ids per loop
    Loops {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples of the projection on every loop, as CSV
    Parameterize {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled homeomorphism certificate; exits 1 unless everything passes
    Verify {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG of the mesh, cut triangles, positive edges and curve
    Render {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "positive")]
        mode: Mode,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        render: RenderArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Every stage in order, writing all reports into a directory
    Run {
        /// Mesh file; omit to generate a grid with --bbox and --h
        #[arg(long, conflicts_with_all = ["bbox", "h"])]
        mesh: Option<PathBuf>,
        #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true, requires = "h")]
        bbox: Option<[f64; 4]>,
        #[arg(long, requires = "bbox")]
        h: Option<f64>,
        #[arg(long, default_value_t = 1)]
        margin: usize,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, value_enum, default_value = "positive")]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
    },
}

fn parse_bbox(s: &str) -> std::result::Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    <[f64; 4]>::try_from(v).map_err(|_| "expected x0,y0,x1,y1".to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(inputs: &Inputs) -> Result<(BoundaryCurve, Triangulation)> {
    Ok((load_curve(&inputs.curve)?, load_mesh(&inputs.mesh)?))
}

fn read_loops(path: &Option<PathBuf>, curve: &BoundaryCurve, tri: &Triangulation) -> Result<Option<Vec<PositiveLoop>>> {
    let Some(p) = path else { return Ok(None) };
    let cls = classify(curve, tri)?;
    Ok(Some(parse_loops(&read_file(p)?, &cls)?))
}

fn full_analysis(inputs: &Inputs, sampling: &Sampling) -> Result<(Triangulation, Analysis)> {
    if sampling.n < 2 {
        return Err(ParseError::Invalid("--n must be at least 2".into()).into());
    }
    let (curve, tri) = load(inputs)?;
    let mode = EdgeMode::from(inputs.mode);
    let loops = read_loops(&sampling.loops, &mode.apply(&curve), &tri)?;
    let a = analyze(&curve, &tri, mode, sampling.n, loops);
    Ok((tri, a))
}

fn finish(a: Analysis) -> Result<i32> {
    match a.error {
        Some(e) => Err(e),
        None => Ok(a.exit_code()),
    }
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::GenMesh { bbox, h, margin, out } => {
            let tri = equilateral_grid_with_margin(bbox, h, margin)?;
            write_file(&out, &write_mesh(&tri))?;
            eprintln!("{} vertices, {} triangles", tri.num_vertices(), tri.num_triangles());
            Ok(EXIT_PASS)
        }
        Cmd::Classify { inputs, out } => {
            let (curve, tri) = load(&inputs)?;
            let cls = classify(&EdgeMode::from(inputs.mode).apply(&curve), &tri)?;
            for w in &cls.warnings {
                eprintln!("warning: {w}");
            }
            emit(&out, &report::classification_json(&cls))?;
            Ok(EXIT_PASS)
        }
        Cmd::Check { inputs, out, csv } => {
            let (curve, tri) = load(&inputs)?;
            let curve = EdgeMode::from(inputs.mode).apply(&curve);
            let cls = classify(&curve, &tri)?;
            let rep = check_conditions(&curve, &tri, &cls)?;
            emit(&out, &report::condition_table(&rep))?;
            if let Some(p) = csv {
                write_file(&p, &report::condition_csv(&rep))?;
            }
            Ok(if rep.all_pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Cmd::Loops { inputs, out } => {
            let (curve, tri) = load(&inputs)?;
            let curve = EdgeMode::from(inputs.mode).apply(&curve);
            let cls = classify(&curve, &tri)?;
            let loops = orient_loops(&tri, build_loops(&tri, &cls)?, &curve)?;
            emit(&out, &write_loops(&loops))?;
            Ok(EXIT_PASS)
        }
        Cmd::Parameterize { inputs, sampling, out } => {
            let (_, a) = full_analysis(&inputs, &sampling)?;
            if let Some(s) = &a.samples {
                emit(&out, &report::samples_csv(s))?;
            }
            finish(a).map(|_| EXIT_PASS)
        }
        Cmd::Verify { inputs, sampling, out } => {
            let (_, a) = full_analysis(&inputs, &sampling)?;
            if let Some(v) = &a.verification {
                emit(&out, &report::verification_text(v, a.loops()))?;
            }
            finish(a)
        }
        Cmd::Render {
            mesh,
            curve,
            mode,
            sampling,
            render,
            out,
        } => {
            let tri = load_mesh(&mesh)?;
            let svg = match curve {
                None => render_svg(&tri, None, None, &[], &[], &render.options()),
                Some(c) => {
                    let inputs = Inputs { mesh, curve: c, mode };
                    let (tri, a) = full_analysis(&inputs, &sampling)?;
                    if let Some(e) = &a.error {
                        eprintln!("warning: {e}");
                    }
                    render_svg(&tri, Some(&a.curve), a.classification.as_ref(), a.loops(), a.samples(), &render.options())
                }
            };
            write_file(&out, &svg)?;
            Ok(EXIT_PASS)
        }
        Cmd::Run {
            mesh,
            bbox,
            h,
            margin,
            curve,
            mode,
            n,
            out_dir,
            render,
        } => {
            let mesh = match (mesh, bbox, h) {
                (Some(p), _, _) => MeshSource::File(p),
                (None, Some(bbox), Some(h)) => MeshSource::Generate { bbox, h, margin },
                _ => return Err(ParseError::Invalid("give --mesh or both --bbox and --h".into()).into()),
            };
            std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
            let mut outputs = OutputPaths::in_dir(&out_dir);
            if matches!(mesh, MeshSource::File(_)) {
                outputs.mesh = None;
            }
            Ok(run_pipeline(&RunConfig {
                mesh,
                curve_path: curve,
                mode: mode.into(),
                samples_per_edge: n,
                outputs,
                render: render.options(),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    let code = match run(cli.cmd) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
    };
    ExitCode::from(code as u8)
}
