//! Scenario execution and file output for the command line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::analysis::{self, central_window, DEFAULT_WINDOW_PERIODS};
use crate::config::{DetectorConfig, EraserChoice, ScenarioConfig, ScenarioKind};
use crate::error::{Error, Result};
use crate::interferometer::{
    self, eraser_basis, incoherent_average, pattern_bruteforce, pattern_orthodox_with_residue,
    pattern_paper_claim, ramsey_curve, EraserBasis, ExperimentState, RNG_ALGORITHM,
};
use crate::pattern::Pattern;
use crate::scenario::{self, SlitWaves};
use crate::state::{DetectorState, Strictness};

/// Oracle deviations at or above this fail `oracle-check`.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Grid size cap for `oracle-check`.
pub const ORACLE_MAX_POINTS: usize = 256;
/// Detector dimension cap for `oracle-check`.
pub const ORACLE_MAX_DIM: usize = 16;

pub const CSV_HEADER: &str = "x_m,intensity_per_m";
pub const SWEEP_HEADER: &str =
    "value,orthodox_visibility,paper_claim_visibility,overlap,distinguishability";

/// State built from a config, with everything needed to report on it.
#[derive(Debug, Clone)]
pub struct Built {
    pub state: ExperimentState,
    pub waves: SlitWaves,
    pub warnings: Vec<String>,
    pub window: (f64, f64),
}

pub fn default_window(config: &ScenarioConfig) -> (f64, f64) {
    config.window.unwrap_or_else(|| {
        central_window(
            config.slits.midpoint(),
            config.beam.fringe_period(config.slits.separation()),
            DEFAULT_WINDOW_PERIODS,
        )
    })
}

pub fn build(config: &ScenarioConfig, strictness: Strictness) -> Result<Built> {
    let waves = SlitWaves::propagate(&config.beam, &config.slits, &config.grid)?;
    let mut warnings = Vec::new();
    let state = match &config.detector {
        DetectorConfig::Plain | DetectorConfig::Incoherent { .. } => {
            scenario::plain_scenario(&waves)?
        }
        DetectorConfig::Micromaser { cavities } | DetectorConfig::Eraser { cavities, .. } => {
            let (s, w) = scenario::micromaser_scenario(&waves, cavities, strictness)?;
            warnings.extend(w);
            s
        }
        DetectorConfig::RabiMarker { pulses } => scenario::rabi_marker_scenario(&waves, pulses)?,
        DetectorConfig::Ramsey { field, .. } => {
            let (s, w) = scenario::ramsey_scenario(&waves, field, strictness)?;
            warnings.extend(w);
            s
        }
    };
    Ok(Built {
        state,
        waves,
        warnings,
        window: default_window(config),
    })
}

fn basis_for(config: &ScenarioConfig, state: &ExperimentState) -> Result<Vec<DetectorState>> {
    match &config.detector {
        DetectorConfig::Eraser {
            basis: EraserChoice::Custom(v),
            ..
        } => Ok(v.clone()),
        DetectorConfig::Eraser {
            basis: EraserChoice::Named(kind),
            ..
        } => eraser_basis(state, *kind),
        _ => eraser_basis(state, EraserBasis::Computational),
    }
}

#[derive(Debug, Clone)]
pub struct EraserSummary {
    pub probability: f64,
    pub visibility: f64,
    pub pattern: Pattern,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub scenario: ScenarioKind,
    pub orthodox: Pattern,
    pub paper_claim: Pattern,
    pub window: (f64, f64),
    pub orthodox_visibility: f64,
    pub paper_claim_visibility: f64,
    pub overlap: Complex64,
    pub distinguishability: f64,
    pub orthodox_spacing: Option<f64>,
    pub paper_claim_spacing: Option<f64>,
    pub imag_residue: f64,
    pub rng: Option<(u64, usize)>,
    pub ramsey: Option<Vec<(f64, f64)>>,
    pub eraser: Vec<EraserSummary>,
    pub warnings: Vec<String>,
}

impl RunOutput {
    pub fn ramsey_visibility(&self) -> Option<f64> {
        self.ramsey.as_ref().map(|curve| {
            let (hi, lo) = curve
                .iter()
                .fold((f64::MIN, f64::MAX), |(h, l), &(_, p)| (h.max(p), l.min(p)));
            if hi + lo > 0.0 {
                (hi - lo) / (hi + lo)
            } else {
                0.0
            }
        })
    }
}

/// Computes both patterns and every diagnostic for a config.
pub fn execute(config: &ScenarioConfig, strictness: Strictness) -> Result<RunOutput> {
    let built = build(config, strictness)?;
    let state = &built.state;
    let window = built.window;

    let (orthodox, paper_claim, imag_residue, rng) = match config.detector {
        DetectorConfig::Incoherent { n_samples, seed } => {
            // random center-of-mass phases wash out both predictions alike
            let p = incoherent_average(state, n_samples, seed)?;
            let mut o = p.clone();
            o.label = "orthodox".into();
            let mut c = p;
            c.label = "paper_claim".into();
            (o, c, 0.0, Some((seed, n_samples)))
        }
        _ => {
            let (o, residue) = pattern_orthodox_with_residue(state)?;
            (o, pattern_paper_claim(state)?, residue, None)
        }
    };

    let overlap = state.detector_overlap()?;
    let distinguishability = analysis::distinguishability(state)?;
    let orthodox_visibility = analysis::visibility(&orthodox, window)?.visibility;
    let paper_claim_visibility = analysis::visibility(&paper_claim, window)?.visibility;
    let orthodox_spacing = analysis::fringe_spacing(&orthodox, window).ok();
    let paper_claim_spacing = analysis::fringe_spacing(&paper_claim, window).ok();

    let ramsey = match &config.detector {
        DetectorConfig::Ramsey { n_phases, .. } => {
            let br = state.branches();
            Some(ramsey_curve(&br[0].detector, &br[1].detector, *n_phases)?)
        }
        _ => None,
    };

    let eraser = match config.detector {
        DetectorConfig::Eraser { .. } => {
            let basis = basis_for(config, state)?;
            interferometer::erase(state, &basis)?
                .into_iter()
                .map(|o| {
                    let visibility = if o.probability > 0.0 {
                        analysis::visibility(&o.conditional, window)?.visibility
                    } else {
                        0.0
                    };
                    Ok(EraserSummary {
                        probability: o.probability,
                        visibility,
                        pattern: o.conditional,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => Vec::new(),
    };

    Ok(RunOutput {
        scenario: config.scenario,
        orthodox,
        paper_claim,
        window,
        orthodox_visibility,
        paper_claim_visibility,
        overlap,
        distinguishability,
        orthodox_spacing,
        paper_claim_spacing,
        imag_residue,
        rng,
        ramsey,
        eraser,
        warnings: built.warnings,
    })
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn pattern_csv(p: &Pattern) -> String {
    let mut out = String::with_capacity(48 * (p.intensity.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (x, v) in p.grid.points().zip(&p.intensity) {
        let _ = writeln!(out, "{},{}", num(x), num(*v));
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| "n/a".into())
}

pub fn report_text(r: &RunOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario = {}", r.scenario.name());
    let _ = writeln!(s, "window_m = [{}, {}]", num(r.window.0), num(r.window.1));
    let _ = writeln!(s, "orthodox_visibility = {}", num(r.orthodox_visibility));
    let _ = writeln!(
        s,
        "paper_claim_visibility = {}",
        num(r.paper_claim_visibility)
    );
    let _ = writeln!(s, "detector_overlap_abs = {}", num(r.overlap.norm()));
    let _ = writeln!(s, "detector_overlap_re = {}", num(r.overlap.re));
    let _ = writeln!(s, "detector_overlap_im = {}", num(r.overlap.im));
    let _ = writeln!(s, "distinguishability = {}", num(r.distinguishability));
    let _ = writeln!(s, "orthodox_fringe_spacing_m = {}", opt(r.orthodox_spacing));
    let _ = writeln!(
        s,
        "paper_claim_fringe_spacing_m = {}",
        opt(r.paper_claim_spacing)
    );
    let _ = writeln!(s, "orthodox_imag_residue = {}", num(r.imag_residue));
    if let Some((seed, n)) = r.rng {
        let _ = writeln!(s, "rng = {RNG_ALGORITHM}");
        let _ = writeln!(s, "seed = {seed}");
        let _ = writeln!(s, "n_samples = {n}");
    }
    if let Some(v) = r.ramsey_visibility() {
        let _ = writeln!(s, "ramsey_visibility = {}", num(v));
    }
    for (i, e) in r.eraser.iter().enumerate() {
        let _ = writeln!(s, "eraser_{i}_probability = {}", num(e.probability));
        let _ = writeln!(s, "eraser_{i}_visibility = {}", num(e.visibility));
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning = {w}");
    }
    s
}

/// Pure line plot of both patterns.
pub fn pattern_svg(orthodox: &Pattern, paper_claim: &Pattern) -> String {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const M: f64 = 40.0;
    let g = &orthodox.grid;
    let peak = orthodox
        .peak()
        .max(paper_claim.peak())
        .max(f64::MIN_POSITIVE);
    let line = |p: &Pattern| {
        p.grid
            .points()
            .zip(&p.intensity)
            .map(|(x, v)| {
                let px = M + (x - g.x_min) / (g.x_max - g.x_min) * (W - 2.0 * M);
                let py = H - M - v / peak * (H - 2.0 * M);
                format!("{px:.2},{py:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    );
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        line(orthodox)
    );
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="firebrick" stroke-width="1" stroke-dasharray="4 3" points="{}"/>"#,
        line(paper_claim)
    );
    let _ = writeln!(
        s,
        r#"<text x="{M}" y="{}" font-size="12">x from {:.3e} m to {:.3e} m; blue: orthodox, red: center-of-mass only</text>"#,
        H - 12.0,
        g.x_min,
        g.x_max
    );
    s.push_str("</svg>\n");
    s
}

/// Holds `<dir>/.wavepath.lock` for the lifetime of the guard.
struct DirLock(PathBuf);

impl DirLock {
    fn acquire(dir: &Path) -> Result<Self> {
        let path = dir.join(".wavepath.lock");
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(_) => Ok(Self(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(Error::Locked(path.display().to_string()))
            }
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

/// Writes every file to a temporary name first and renames only once all
/// of them are on disk.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let _lock = DirLock::acquire(dir)?;
    let mut staged = Vec::with_capacity(files.len());
    let result = (|| {
        for (name, contents) in files {
            let tmp = dir.join(format!(".{name}.tmp"));
            fs::write(&tmp, contents)?;
            staged.push((tmp, dir.join(name)));
        }
        for (tmp, dest) in &staged {
            fs::rename(tmp, dest)?;
        }
        Ok(())
    })();
    if result.is_err() {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
    }
    result
}

pub fn output_files(r: &RunOutput, svg: bool) -> Vec<(String, String)> {
    let mut files = vec![
        ("pattern_orthodox.csv".to_string(), pattern_csv(&r.orthodox)),
        (
            "pattern_paper_claim.csv".to_string(),
            pattern_csv(&r.paper_claim),
        ),
        ("report.txt".to_string(), report_text(r)),
    ];
    if let Some(curve) = &r.ramsey {
        let mut s = String::from("phi_rad,p_g\n");
        for (phi, p) in curve {
            let _ = writeln!(s, "{},{}", num(*phi), num(*p));
        }
        files.push(("ramsey.csv".into(), s));
    }
    for (i, e) in r.eraser.iter().enumerate() {
        files.push((format!("pattern_eraser_{i}.csv"), pattern_csv(&e.pattern)));
    }
    if svg {
        files.push((
            "pattern.svg".into(),
            pattern_svg(&r.orthodox, &r.paper_claim),
        ));
    }
    files
}

pub fn run(config_path: &Path, out: &Path, svg: bool, strictness: Strictness) -> Result<RunOutput> {
    let config = ScenarioConfig::from_path(config_path)?;
    let output = execute(&config, strictness)?;
    write_files(out, &output_files(&output, svg))?;
    Ok(output)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub orthodox_visibility: f64,
    pub paper_claim_visibility: f64,
    pub overlap: f64,
    pub distinguishability: f64,
}

/// Runs the config once per value of the numeric leaf `param`.
pub fn sweep_rows(
    table: &toml::Table,
    param: &str,
    values: &[f64],
    strictness: Strictness,
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&value| {
            let mut t = table.clone();
            crate::config::set_numeric(&mut t, param, value)?;
            let config = ScenarioConfig::from_table(t)?;
            let r = execute(&config, strictness)?;
            Ok(SweepRow {
                value,
                orthodox_visibility: r.orthodox_visibility,
                paper_claim_visibility: r.paper_claim_visibility,
                overlap: r.overlap.norm(),
                distinguishability: r.distinguishability,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(r.value),
            num(r.orthodox_visibility),
            num(r.paper_claim_visibility),
            num(r.overlap),
            num(r.distinguishability)
        );
    }
    s
}

pub fn sweep(
    config_path: &Path,
    param: &str,
    values: &[f64],
    out: &Path,
    strictness: Strictness,
) -> Result<Vec<SweepRow>> {
    let table = crate::config::read_table(config_path)?;
    let rows = sweep_rows(&table, param, values, strictness)?;
    write_files(out, &[("sweep.csv".into(), sweep_csv(&rows))])?;
    Ok(rows)
}

/// Deviations found by the oracle comparisons, each relative to the peak of
/// the orthodox pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub bruteforce_deviation: f64,
    pub eraser_deviation: f64,
    pub normalization_deviation: f64,
    pub imag_residue: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.bruteforce_deviation < ORACLE_TOLERANCE
            && self.eraser_deviation < ORACLE_TOLERANCE
            && self.normalization_deviation < ORACLE_TOLERANCE
            && self.imag_residue < ORACLE_TOLERANCE
    }
}

/// Orthodox pattern against the joint-vector marginal, eraser completeness
/// against the orthodox pattern, and the branch normalization.
pub fn oracle_report(state: &ExperimentState, basis: &[DetectorState]) -> Result<OracleReport> {
    let (orthodox, imag_residue) = pattern_orthodox_with_residue(state)?;
    let brute = pattern_bruteforce(state)?;
    let scale = orthodox.peak().max(f64::MIN_POSITIVE);
    let outcomes = interferometer::erase(state, basis)?;
    let eraser_deviation = (0..orthodox.intensity.len())
        .map(|m| {
            let sum: f64 = outcomes.iter().map(|o| o.joint.intensity[m]).sum();
            (sum - orthodox.intensity[m]).abs()
        })
        .fold(0.0, f64::max)
        / scale;
    Ok(OracleReport {
        bruteforce_deviation: orthodox.max_abs_diff(&brute) / scale,
        eraser_deviation,
        normalization_deviation: (state.normalization() - 1.0).abs(),
        imag_residue,
    })
}

pub fn oracle_check(config_path: &Path, strictness: Strictness) -> Result<OracleReport> {
    let config = ScenarioConfig::from_path(config_path)?;
    oracle_check_config(&config, strictness)
}

pub fn oracle_check_config(
    config: &ScenarioConfig,
    strictness: Strictness,
) -> Result<OracleReport> {
    if config.grid.n_points > ORACLE_MAX_POINTS {
        return Err(Error::SizeCap {
            size: config.grid.n_points,
            cap: ORACLE_MAX_POINTS,
        });
    }
    let built = build(config, strictness)?;
    let dim = built.state.detector_dim();
    if dim > ORACLE_MAX_DIM {
        return Err(Error::SizeCap {
            size: dim,
            cap: ORACLE_MAX_DIM,
        });
    }
    let basis = basis_for(config, &built.state)?;
    oracle_report(&built.state, &basis)
}
