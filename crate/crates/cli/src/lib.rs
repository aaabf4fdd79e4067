//! Experiment orchestration for the `sqw` command-line tool.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use simplicial_walk::complex::{sphere_triangulation, SimplicialComplex};
use simplicial_walk::graph::{verify_equivalence, verify_isomorphism};
use simplicial_walk::search::{run_sphere_search, SearchTrace};
use simplicial_walk::spectral::{
    eigen_check, overlaps, predicted_tf, spectral_map_check, sphere_search_graph, DENSE_ARC_LIMIT,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Walk(#[from] simplicial_walk::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for a failed verification, 2 for everything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Parses `i,j`.
pub fn parse_marked(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j but got {s:?}"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad facet index {x:?}: {e}"))
    };
    Ok((parse(a)?, parse(b)?))
}

/// Parses a comma-separated list of dimensions.
pub fn parse_n_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("bad n {x:?}: {e}")))
        .collect()
}

/// Dimensions whose sphere triangulations have n + 2 = 50, 100, …, 350.
pub const DEFAULT_N_LIST: [usize; 7] = [48, 98, 148, 198, 248, 298, 348];

/// A validated search request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub marked: (usize, usize),
    pub t_max: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n: usize, marked: (usize, usize), t_max: Option<usize>) -> Result<Self> {
        if n < 2 {
            return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
        }
        let (i, j) = marked;
        if i == j {
            return Err(CliError::Usage(format!("marked facets must differ, got {i},{j}")));
        }
        if i >= n + 2 || j >= n + 2 {
            return Err(CliError::Usage(format!(
                "marked facets must be below n + 2 = {}, got {i},{j}",
                n + 2
            )));
        }
        Ok(ExperimentConfig { n, marked, t_max })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub n: usize,
    pub face_count: usize,
    pub marked: [usize; 2],
    pub t_max: usize,
    pub t_f: usize,
    pub p_f: f64,
    pub predicted_tf: f64,
    pub loop_probabilities: Vec<f64>,
    pub max_norm_drift: f64,
}

pub struct SearchOutput {
    pub trace: SearchTrace,
    pub summary: SearchSummary,
}

impl SearchOutput {
    /// `# n=.. N=.. marked=i:j t_f=..`, then `t,p_f` rows.
    pub fn csv(&self) -> String {
        let t = &self.trace;
        let mut out = format!(
            "# n={} N={} marked={}:{} t_f={}\nt,p_f\n",
            t.n, t.face_count, t.marked.0, t.marked.1, t.t_f
        );
        for (step, p) in t.p_f.iter().enumerate() {
            writeln!(out, "{step},{p}").expect("writing to a String");
        }
        out
    }
}

pub fn cmd_search(config: &ExperimentConfig) -> Result<SearchOutput> {
    let (i, j) = config.marked;
    let trace = run_sphere_search(config.n, i, j, config.t_max)?;
    let summary = SearchSummary {
        n: trace.n,
        face_count: trace.face_count,
        marked: [i, j],
        t_max: trace.t_max(),
        t_f: trace.t_f,
        p_f: trace.p_at_tf(),
        predicted_tf: predicted_tf(config.n)?,
        loop_probabilities: trace.loops_at_tf().to_vec(),
        max_norm_drift: trace.max_norm_drift,
    };
    Ok(SearchOutput { trace, summary })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitPoint {
    pub x: f64,
    pub y: f64,
}

/// Ordinary least squares y = slope·x + intercept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points: Vec<FitPoint>,
}

pub fn least_squares(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(CliError::Usage("a fit needs at least two points".into()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(CliError::Usage("a fit needs at least two distinct x values".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Ok(FitResult {
        slope,
        intercept,
        residual_rms: (rss / k).sqrt(),
        points: points.iter().map(|&(x, y)| FitPoint { x, y }).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    /// t_f against n + 2.
    pub fit: FitResult,
    pub runs: Vec<SearchSummary>,
}

/// Runs one search per n concurrently and fits t_f against n + 2.
pub fn cmd_sweep(n_list: &[usize], marked: (usize, usize)) -> Result<SweepReport> {
    if n_list.len() < 3 {
        return Err(CliError::Usage(format!(
            "a sweep needs at least three values of n, got {}",
            n_list.len()
        )));
    }
    let configs = n_list
        .iter()
        .map(|&n| ExperimentConfig::new(n, marked, None))
        .collect::<Result<Vec<_>>>()?;
    let runs = configs
        .par_iter()
        .map(|c| cmd_search(c).map(|o| o.summary))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = runs.iter().map(|r| ((r.n + 2) as f64, r.t_f as f64)).collect();
    Ok(SweepReport {
        fit: least_squares(&points)?,
        runs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: Option<usize>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Largest n for which the dense equivalence check runs.
pub const DENSE_VERIFY_LIMIT: usize = 4;

fn structural_checks(complex: &SimplicialComplex, dense: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    match verify_isomorphism(complex) {
        Ok(iso) => checks.push(check(
            "isomorphism",
            iso.holds,
            format!("{} vertices mapped", iso.xi.len()),
        )),
        Err(e) => checks.push(check("isomorphism", false, e.to_string())),
    }
    if dense {
        let boundary = complex.boundary_faces().map(|b| b.len()).unwrap_or(0);
        if boundary == 0 {
            match verify_equivalence(complex) {
                Ok(dev) => checks.push(check("equivalence", dev < 1e-12, format!("max deviation {dev:e}"))),
                Err(e) => checks.push(check("equivalence", false, e.to_string())),
            }
        }
    }
    checks
}

/// Structural and spectral checks for the sphere of dimension n, or the
/// structural ones for a complex loaded from a file.
pub fn cmd_verify(n: Option<usize>, complex_path: Option<&Path>) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    if let Some(path) = complex_path {
        let complex = SimplicialComplex::load(path)?;
        let small = complex.facets().len() * (complex.dim() + 1) * 2 <= 2 * DENSE_ARC_LIMIT;
        checks.extend(structural_checks(&complex, small));
    }
    if let Some(n) = n {
        if n < 2 {
            return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
        }
        let sphere = sphere_triangulation(n)?;
        checks.extend(structural_checks(&sphere, n <= DENSE_VERIFY_LIMIT));
        let e = eigen_check(n)?;
        checks.push(check(
            "top_eigenpair",
            e.passes(),
            format!(
                "mu1 closed {} numeric {} alignment {}",
                e.mu1_closed, e.mu1_numeric, e.alignment
            ),
        ));
    }
    if checks.is_empty() {
        return Err(CliError::Usage("verify needs --n or --complex".into()));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { n, checks, passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    /// ‖T_* f₁ − μ₁ f₁‖ / ‖f₁‖ for the closed form.
    pub closed_form: f64,
    /// ‖T_* v − λ v‖ for the numeric top pair.
    pub numeric: f64,
    /// 1 − |cos| of the angle between f₁ and the numeric eigenvector.
    pub misalignment: f64,
    /// ‖Γ̂_* α± − e^{±iθ₁} α±‖.
    pub lift: f64,
    /// Largest distance between a lifted discriminant eigenvalue and the
    /// dense unitary spectrum; only for small n.
    pub spectral_map: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub mu1_closed: f64,
    pub mu1_numeric: f64,
    pub residuals: Residuals,
    pub predicted_tf: f64,
    pub discriminant_spectrum: Vec<f64>,
}

pub fn cmd_spectrum(n: usize) -> Result<SpectrumReport> {
    if n < 2 {
        return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
    }
    let e = eigen_check(n)?;
    let o = overlaps(n)?;
    let g = sphere_search_graph(n, 0, 1)?;
    let spectral_map = if g.arc_count() <= DENSE_ARC_LIMIT {
        Some(spectral_map_check(&g)?.max_match_error)
    } else {
        None
    };
    Ok(SpectrumReport {
        n,
        mu1_closed: e.mu1_closed,
        mu1_numeric: e.mu1_numeric,
        residuals: Residuals {
            closed_form: e.closed_residual,
            numeric: e.numeric_residual,
            misalignment: 1.0 - e.alignment,
            lift: o.lift_residual,
            spectral_map,
        },
        predicted_tf: predicted_tf(n)?,
        discriminant_spectrum: e.spectrum,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marked_parsing() {
        assert_eq!(parse_marked("5,11"), Ok((5, 11)));
        assert_eq!(parse_marked(" 0 , 1 "), Ok((0, 1)));
        assert!(parse_marked("5").is_err());
        assert!(parse_marked("a,1").is_err());
        assert_eq!(parse_n_list("2,3,4"), Ok(vec![2, 3, 4]));
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(2, (0, 1), None).is_ok());
        assert_eq!(ExperimentConfig::new(2, (0, 0), None).unwrap_err().exit_code(), 2);
        assert!(ExperimentConfig::new(2, (0, 4), None).is_err());
        assert!(ExperimentConfig::new(1, (0, 1), None).is_err());
    }

    #[test]
    fn collinear_fit_is_exact() {
        let fit = least_squares(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        assert!(fit.residual_rms < 1e-14);
        assert!(least_squares(&[(1.0, 1.0)]).is_err());
        assert!(least_squares(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn fit_of_noisy_points() {
        let fit = least_squares(&[(0.0, 0.0), (1.0, 2.0), (2.0, 2.0)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-14);
        assert!((fit.intercept - 1.0 / 3.0).abs() < 1e-14);
        assert!(fit.residual_rms > 0.0 && fit.residual_rms.is_finite());
    }

    #[test]
    fn small_search_csv() {
        let out = cmd_search(&ExperimentConfig::new(2, (0, 1), Some(10)).unwrap()).unwrap();
        let csv = out.csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# n=2 N=6 marked=0:1 t_f="));
        assert_eq!(lines[1], "t,p_f");
        assert_eq!(lines.len(), 2 + 11);
        assert_eq!(out.summary.t_max, 10);
    }

    #[test]
    fn sweep_needs_three_points() {
        assert_eq!(cmd_sweep(&[2, 3], (0, 1)).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn small_sweep() {
        let r = cmd_sweep(&[4, 6, 8, 10], (0, 1)).unwrap();
        assert_eq!(r.runs.len(), 4);
        assert_eq!(r.fit.points[0].x, 6.0);
        assert!(r.fit.slope > 0.0);
    }

    #[test]
    fn verify_small_spheres() {
        for n in [2, 3] {
            let r = cmd_verify(Some(n), None).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.checks.len(), 3);
        }
        let r = cmd_verify(Some(30), None).unwrap();
        assert!(r.passed);
        assert!(r.checks.iter().all(|c| c.name != "equivalence"));
        assert_eq!(cmd_verify(None, None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn spectrum_report() {
        let r = cmd_spectrum(2).unwrap();
        assert!((r.mu1_closed - 0.745356).abs() < 1e-6);
        assert!(r.residuals.spectral_map.unwrap() < 1e-8);
        let r = cmd_spectrum(98).unwrap();
        assert!((r.predicted_tf - 55.8).abs() < 0.05);
        assert!(r.residuals.spectral_map.is_none());
        let json: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        for key in ["n", "mu1_closed", "mu1_numeric", "residuals", "predicted_tf"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
