//! End-to-end run and the report it produces.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use certeig::error::{Error, Result};
use certeig::localize::{locate, CertifiedInterval, Disk, DiskKind, DiskVerdict, IntervalVerdict, LocateOptions};
use certeig::matrix::SquareMatrix;
use certeig::numerics::{render_decimal_exact, render_scientific, Backend, BigFloat, Precision, Rational, Scalar};
use certeig::refine::refine_all;
use serde::{Deserialize, Serialize};

use crate::input::{parse_matrix, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub mode: Mode,
    /// Float significand bits; ignored in exact mode.
    pub bits: u32,
    pub epsilon: Rational,
    pub format: OutputFormat,
    pub svg: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub column_disks: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub dimension: usize,
    pub backend: Backend,
    pub epsilon: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskReport {
    pub index: usize,
    pub kind: DiskKind,
    pub center: String,
    pub radius: String,
    pub verdict: Option<DiskVerdict>,
    pub sigma: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub lo: String,
    pub hi: String,
    pub width: String,
    pub verdict: IntervalVerdict,
    pub sigma: i64,
    pub min_root_count: usize,
    pub endpoint_roots: Vec<String>,
    pub source: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub candidate_intervals: usize,
    pub certified_intervals: usize,
    pub final_intervals: usize,
    pub average_width: Option<String>,
    pub max_width: Option<String>,
    pub wall_time_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: InputEcho,
    /// Ascending coefficients.
    pub characteristic_polynomial: Vec<String>,
    pub sigma_h1: i64,
    pub disks: Vec<DiskReport>,
    /// Every tested interval between consecutive breakpoints.
    pub initial_intervals: Vec<IntervalReport>,
    pub final_intervals: Vec<IntervalReport>,
    pub point_eigenvalues: Vec<String>,
    pub metrics: Metrics,
}

/// Terminating decimal when there is one, `p/q` otherwise. Both forms are
/// accepted back by `parse_decimal`.
pub fn format_number(r: &Rational) -> String {
    render_decimal_exact(r).unwrap_or_else(|| format!("{}/{}", r.numer(), r.denom()))
}

fn num<S: Scalar>(x: &S) -> String {
    format_number(&x.to_rational())
}

fn interval_report<S: Scalar>(iv: &CertifiedInterval<S>) -> IntervalReport {
    IntervalReport {
        lo: num(&iv.lo),
        hi: num(&iv.hi),
        width: num(&iv.width()),
        verdict: iv.verdict,
        sigma: iv.sigma,
        min_root_count: iv.min_root_count,
        endpoint_roots: iv.endpoint_roots.iter().map(num).collect(),
        source: iv.source.clone(),
    }
}

fn disk_report<S: Scalar>(d: &Disk<S>) -> DiskReport {
    DiskReport {
        index: d.index,
        kind: d.kind,
        center: num(&d.center),
        radius: num(&d.radius),
        verdict: d.verdict,
        sigma: d.sigma,
    }
}

/// Average and maximum width of `widths`, recomputed the same way tests do.
pub fn width_stats(widths: &[Rational]) -> (Option<String>, Option<String>) {
    if widths.is_empty() {
        return (None, None);
    }
    let total: Rational = widths.iter().cloned().sum();
    let avg = total / Rational::from_integer((widths.len() as i64).into());
    let max = widths.iter().max().cloned().expect("non-empty");
    (Some(format_number(&avg)), Some(format_number(&max)))
}

fn certify<S: Scalar>(a: &SquareMatrix<S>, eps: &S, column_disks: bool, backend: Backend) -> Result<Report> {
    let start = Instant::now();
    let loc = locate(a, &LocateOptions { column_disks })?;
    let fin = refine_all(&loc.context, &loc.intervals(), eps)?;
    let wall = start.elapsed().as_secs_f64();

    let final_intervals: Vec<IntervalReport> = fin.iter().map(interval_report).collect();
    let widths: Vec<Rational> = fin.iter().map(|iv| iv.width().to_rational()).collect();
    let (average_width, max_width) = width_stats(&widths);
    Ok(Report {
        input: InputEcho { dimension: a.dim(), backend, epsilon: num(eps) },
        characteristic_polynomial: loc.context.charpoly().coeffs().iter().map(num).collect(),
        sigma_h1: loc.context.sigma1(),
        disks: loc.disks.iter().map(disk_report).collect(),
        initial_intervals: loc.candidates.iter().map(interval_report).collect(),
        metrics: Metrics {
            candidate_intervals: loc.candidates.len(),
            certified_intervals: loc.candidates.iter().filter(|iv| iv.contains_real()).count(),
            final_intervals: final_intervals.len(),
            average_width,
            max_width,
            wall_time_seconds: wall,
        },
        final_intervals,
        point_eigenvalues: loc.point_eigenvalues.iter().map(num).collect(),
    })
}

/// Certifies an exact matrix in the backend `mode` selects.
pub fn certify_matrix(a: &SquareMatrix<Rational>, mode: Mode, bits: u32, epsilon: &Rational, column_disks: bool) -> Result<Report> {
    match mode {
        Mode::Exact => {
            if epsilon.sign() <= 0 {
                return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
            }
            certify(a, epsilon, column_disks, Backend::Exact)
        }
        Mode::Float => {
            Precision::new(bits, epsilon.clone())?;
            let backend = Backend::Float { bits };
            let af: SquareMatrix<BigFloat> = a.convert(backend)?;
            let eps = BigFloat::from_rational(epsilon, bits);
            certify(&af, &eps, column_disks, backend)
        }
    }
}

/// Reads the matrix named by `config` and certifies it. Thread count and
/// output are the caller's business.
pub fn run(config: &RunConfig) -> Result<Report> {
    let a = parse_matrix(&config.input, config.mode)?;
    certify_matrix(&a, config.mode, config.bits, &config.epsilon, config.column_disks)
}

fn sci(text: &str) -> String {
    certeig::numerics::parse_decimal(text).map(|r| render_scientific(&r, 12)).unwrap_or_else(|_| text.to_string())
}

pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimension {}  backend {}  epsilon {}", report.input.dimension, report.input.backend, report.input.epsilon);
    let cp: Vec<String> = report.characteristic_polynomial.iter().map(|c| sci(c)).collect();
    let _ = writeln!(s, "characteristic polynomial (ascending): [{}]", cp.join(", "));
    let _ = writeln!(s, "sigma(H_1) = {}", report.sigma_h1);
    let _ = writeln!(s, "\ndisks:");
    for d in &report.disks {
        let verdict = match d.verdict {
            Some(DiskVerdict::ContainsReal) => "contains real",
            Some(DiskVerdict::EmptyOfReal) => "no real",
            Some(DiskVerdict::PointEigenvalue) => "point eigenvalue",
            None => "uncertified",
        };
        let kind = if d.kind == DiskKind::Row { "row" } else { "col" };
        let sigma = d.sigma.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "  {kind} {:>3}  center {:>14}  radius {:>14}  sigma {sigma:>3}  {verdict}", d.index + 1, sci(&d.center), sci(&d.radius));
    }
    let _ = writeln!(s, "\ninitial intervals:");
    for iv in &report.initial_intervals {
        let yes = if iv.verdict == IntervalVerdict::ContainsReal { "yes" } else { "no" };
        let _ = writeln!(s, "  [{}, {}]  sigma {:>3}  {yes}", sci(&iv.lo), sci(&iv.hi), iv.sigma);
    }
    let _ = writeln!(s, "\nfinal intervals:");
    for iv in &report.final_intervals {
        let _ = writeln!(s, "  [{}, {}]  width {}", sci(&iv.lo), sci(&iv.hi), sci(&iv.width));
    }
    if !report.point_eigenvalues.is_empty() {
        let pts: Vec<String> = report.point_eigenvalues.iter().map(|p| sci(p)).collect();
        let _ = writeln!(s, "\npoint eigenvalues: {}", pts.join(", "));
    }
    let m = &report.metrics;
    let _ = writeln!(s, "\ncandidate intervals      {}", m.candidate_intervals);
    let _ = writeln!(s, "certified intervals      {}", m.certified_intervals);
    let _ = writeln!(s, "final intervals          {}", m.final_intervals);
    if let (Some(avg), Some(max)) = (&m.average_width, &m.max_width) {
        let _ = writeln!(s, "average final width      {}", sci(avg));
        let _ = writeln!(s, "maximum final width      {}", sci(max));
    }
    let _ = writeln!(s, "wall time                {:.3} s", m.wall_time_seconds);
    s
}
