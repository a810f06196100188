//! End-to-end runs: load, classify, check, build loops, parameterize, verify.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};

use crate::classify::{check_conditions, classify, ConditionReport, CutClassification, EdgeMode};
use crate::curve::config::parse_curve_config;
use crate::curve::BoundaryCurve;
use crate::error::{Error, ParseError, Result};
use crate::mesh::{equilateral_grid_with_margin, parse_mesh, write_mesh, Triangulation};
use crate::param::{sample_loop, verify_homeomorphism, ParamSample, VerificationReport};
use crate::report;
use crate::svg::{render_svg, RenderOptions};
use crate::topology::{build_loops, orient_loops, write_loops, PositiveLoop};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads a curve description. A description that parses but does not
/// describe a valid curve is reported as invalid input.
pub fn load_curve(path: &Path) -> Result<BoundaryCurve> {
    let shapes = parse_curve_config(&read_file(path)?)?;
    BoundaryCurve::new(shapes).map_err(|e| ParseError::Invalid(format!("{}: {e}", path.display())).into())
}

pub fn load_mesh(path: &Path) -> Result<Triangulation> {
    parse_mesh(&read_file(path)?)
}

/// Every stage that completed, plus the error that stopped the run.
#[derive(Debug)]
pub struct Analysis {
    /// The curve as seen by the classifier (complemented in negative mode).
    pub curve: BoundaryCurve,
    pub samples_per_edge: usize,
    pub classification: Option<CutClassification>,
    pub conditions: Option<ConditionReport>,
    pub loops: Option<Vec<PositiveLoop>>,
    pub samples: Option<Vec<Vec<ParamSample>>>,
    pub verification: Option<VerificationReport>,
    pub error: Option<Error>,
}

impl Analysis {
    pub fn exit_code(&self) -> i32 {
        match (&self.error, &self.verification) {
            (Some(e), _) if e.is_input_error() => EXIT_INPUT,
            (Some(_), _) => EXIT_FAIL,
            (None, Some(v)) if v.global_pass => EXIT_PASS,
            _ => EXIT_FAIL,
        }
    }

    pub fn loops(&self) -> &[PositiveLoop] {
        self.loops.as_deref().unwrap_or(&[])
    }

    pub fn samples(&self) -> &[Vec<ParamSample>] {
        self.samples.as_deref().unwrap_or(&[])
    }
}

/// Runs every stage, stopping at the first error. When `loops` is given
/// it replaces loop construction.
pub fn analyze(
    curve: &BoundaryCurve,
    tri: &Triangulation,
    mode: EdgeMode,
    samples_per_edge: usize,
    loops: Option<Vec<PositiveLoop>>,
) -> Analysis {
    let mut a = Analysis {
        curve: mode.apply(curve),
        samples_per_edge,
        classification: None,
        conditions: None,
        loops: None,
        samples: None,
        verification: None,
        error: None,
    };
    if let Err(e) = run_stages(&mut a, tri, loops) {
        warn!("stopped: {e}");
        a.error = Some(e);
    }
    a
}

fn run_stages(a: &mut Analysis, tri: &Triangulation, loops: Option<Vec<PositiveLoop>>) -> Result<()> {
    let curve = a.curve.clone();
    let cls = classify(&curve, tri)?;
    info!("{} positively cut triangles, {} positive edges", cls.cut_triangles.len(), cls.positive_edges.len());
    for w in &cls.warnings {
        warn!("{w}");
    }
    let rep = check_conditions(&curve, tri, &cls)?;
    info!("conditions pass: {}", rep.all_pass);
    a.classification = Some(cls);
    a.conditions = Some(rep);
    let cls = a.classification.as_ref().unwrap();
    let rep = a.conditions.as_ref().unwrap();

    let loops = match loops {
        Some(l) => l,
        None => orient_loops(tri, build_loops(tri, cls)?, &curve)?,
    };
    info!("{} loop(s)", loops.len());
    a.loops = Some(loops);
    let loops = a.loops.as_ref().unwrap();

    let samples = loops
        .iter()
        .map(|lp| sample_loop(&curve, tri, rep, lp, a.samples_per_edge))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    a.samples = Some(samples);
    let v = verify_homeomorphism(&curve, tri, cls, rep, loops, a.samples.as_ref().unwrap(), a.samples_per_edge)?;
    info!("{}", v.verdict());
    a.verification = Some(v);
    Ok(())
}

/// Where the mesh comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    File(PathBuf),
    /// Equilateral grid over `bbox` with edge length `h` and `margin` extra rows.
    Generate { bbox: [f64; 4], h: f64, margin: usize },
}

/// Output files; `None` skips the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub mesh: Option<PathBuf>,
    pub classification: Option<PathBuf>,
    pub check_table: Option<PathBuf>,
    pub check_csv: Option<PathBuf>,
    pub loops: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub verification: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl OutputPaths {
    /// Conventional file names inside `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        OutputPaths {
            mesh: Some(dir.join("mesh.txt")),
            classification: Some(dir.join("classification.json")),
            check_table: Some(dir.join("check.txt")),
            check_csv: Some(dir.join("check.csv")),
            loops: Some(dir.join("loops.txt")),
            samples: Some(dir.join("samples.csv")),
            verification: Some(dir.join("verify.txt")),
            svg: Some(dir.join("render.svg")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mesh: MeshSource,
    pub curve_path: PathBuf,
    pub mode: EdgeMode,
    pub samples_per_edge: usize,
    pub outputs: OutputPaths,
    pub render: RenderOptions,
}

/// Runs the whole pipeline and writes every report that was produced.
/// Returns the process exit code: 0 pass, 1 verification failure, 2 bad input.
pub fn run_pipeline(cfg: &RunConfig) -> i32 {
    match run_inner(cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn run_inner(cfg: &RunConfig) -> Result<i32> {
    if cfg.samples_per_edge < 2 {
        return Err(ParseError::Invalid("samples per edge must be at least 2".into()).into());
    }
    let curve = load_curve(&cfg.curve_path)?;
    let tri = match &cfg.mesh {
        MeshSource::File(p) => load_mesh(p)?,
        MeshSource::Generate { bbox, h, margin } => equilateral_grid_with_margin(*bbox, *h, *margin)?,
    };
    let out = &cfg.outputs;
    if let Some(p) = &out.mesh {
        write_file(p, &write_mesh(&tri))?;
    }
    let a = analyze(&curve, &tri, cfg.mode, cfg.samples_per_edge, None);
    write_reports(&a, &tri, out, &cfg.render)?;
    if let Some(e) = &a.error {
        eprintln!("error: {e}");
    }
    if let Some(rep) = &a.conditions {
        for r in rep.failing_rows() {
            eprintln!(
                "triangle {} fails ({}): sigmaCh={} slack_c={}",
                r.triangle,
                r.flags(),
                r.sigma_ch,
                r.slack_c
            );
        }
        for c in rep.untouched_components() {
            eprintln!("curve component {c} has no positive edges");
        }
    }
    if let Some(v) = &a.verification {
        println!("{}", v.verdict());
    }
    Ok(a.exit_code())
}

/// Writes the reports of every completed stage.
pub fn write_reports(a: &Analysis, tri: &Triangulation, out: &OutputPaths, render: &RenderOptions) -> Result<()> {
    if let (Some(p), Some(c)) = (&out.classification, &a.classification) {
        write_file(p, &report::classification_json(c))?;
    }
    if let Some(rep) = &a.conditions {
        if let Some(p) = &out.check_table {
            write_file(p, &report::condition_table(rep))?;
        }
        if let Some(p) = &out.check_csv {
            write_file(p, &report::condition_csv(rep))?;
        }
    }
    if let (Some(p), Some(l)) = (&out.loops, &a.loops) {
        write_file(p, &write_loops(l))?;
    }
    if let (Some(p), Some(s)) = (&out.samples, &a.samples) {
        write_file(p, &report::samples_csv(s))?;
    }
    if let (Some(p), Some(v)) = (&out.verification, &a.verification) {
        write_file(p, &report::verification_text(v, a.loops()))?;
    }
    if let Some(p) = &out.svg {
        let svg = render_svg(tri, Some(&a.curve), a.classification.as_ref(), a.loops(), a.samples(), render);
        write_file(p, &svg)?;
    }
    Ok(())
}
