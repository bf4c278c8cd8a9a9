//! Execution of a validated configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::diagnostics::{autocorr_overlap, compare, normalization, post_normalize};
use crate::error::{Error, Result};
use crate::fvr::{caustic_det_map, fvr_field, liouville_field, FvrField};
use crate::phase_space::{integrate_field, Field, RealField};
use crate::quantum::{autocorr_exact, evolve, marginal, momentum_probability, position_probability, wigner_of_state, Axis};
use crate::states::{fock_coefficients, wigner0, FockVector, DEFAULT_TRUNCATION_TOLERANCE};

use super::config::{Output, RunConfig, Time};
use super::grid_io;
use super::render::{render_heatmap, RenderOptions};

/// One emitted file.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub path: String,
    pub output: Output,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_label: Option<String>,
    pub diagnostics: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config: RunConfig,
    pub artifacts: Vec<Artifact>,
    /// FVR nodes that failed the `M` vs `M/2` check, over all times.
    pub unconverged_nodes: usize,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Format a float with 17 significant digits.
pub fn full_precision(v: f64) -> String {
    format!("{v:.16e}")
}

struct Writer<'a> {
    dir: &'a Path,
    artifacts: Vec<Artifact>,
}

impl Writer<'_> {
    fn record(&mut self, rel: String, output: Output, time: Option<&Time>, diagnostics: BTreeMap<String, Value>) {
        self.artifacts.push(Artifact {
            path: rel,
            output,
            time: time.map(|t| t.value),
            time_label: time.map(|t| t.label.clone()),
            diagnostics,
        });
    }

    fn field(&mut self, name: String, output: Output, time: &Time, field: &RealField, diagnostics: BTreeMap<String, Value>) -> Result<()> {
        grid_io::write_real(&self.dir.join(&name), field)?;
        self.record(name, output, Some(time), diagnostics);
        Ok(())
    }

    fn png(&mut self, name: String, output: Output, time: Option<&Time>, field: &RealField, opts: &RenderOptions) -> Result<()> {
        let path = self.dir.join(&name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        render_heatmap(field, opts).write_png(&path)?;
        self.record(name, output, time, BTreeMap::new());
        Ok(())
    }

    fn text(&mut self, name: String, output: Output, time: Option<&Time>, body: &str, diagnostics: BTreeMap<String, Value>) -> Result<()> {
        fs::write(self.dir.join(&name), body)?;
        self.record(name, output, time, diagnostics);
        Ok(())
    }
}

fn fvr_diagnostics(f: &FvrField, cfg: &RunConfig) -> BTreeMap<String, Value> {
    let norm = normalization(&f.field);
    let max_imag = f.imaginary.values().iter().fold(0.0f64, |m, v| m.max(*v));
    let mut d = BTreeMap::new();
    d.insert("normalization".into(), json!(norm));
    d.insert("normalization_deficit".into(), json!(1.0 - norm));
    d.insert("max_imaginary_residue".into(), json!(max_imag));
    d.insert("unconverged_nodes".into(), json!(f.unconverged));
    d.insert("chord_halfwidth".into(), json!(f.halfwidth));
    d.insert("chord_samples".into(), json!(cfg.quadrature.chord_samples));
    if let Some(diff) = f.max_coarse_difference {
        d.insert("max_coarse_difference".into(), json!(diff));
    }
    d
}

fn marginal_csv(field: &RealField, axis: Axis, direct: impl Fn(f64) -> f64) -> String {
    let c = marginal(field, axis);
    let name = match axis {
        Axis::Position => "q",
        Axis::Momentum => "p",
    };
    let mut s = format!("{name},marginal_wigner,probability_direct\n");
    for (x, m) in c.abscissa.iter().zip(&c.density) {
        let _ = writeln!(s, "{},{},{}", full_precision(*x), full_precision(*m), full_precision(direct(*x)));
    }
    s
}

/// Produce the requested outputs for every configured time and write the
/// manifest. The caller decides what an unconverged result means.
pub fn run(cfg: &RunConfig, outputs: &[Output], command: &str) -> Result<Manifest> {
    fs::create_dir_all(&cfg.output_dir)?;
    let mut w = Writer { dir: &cfg.output_dir, artifacts: Vec::new() };
    let has = |o: Output| outputs.contains(&o);
    let frames = has(Output::Frames);
    let needs_fock = has(Output::WignerQuantum) || has(Output::Marginals) || has(Output::Autocorr);
    let fock: Option<FockVector> =
        if needs_fock { Some(fock_coefficients(&cfg.state, cfg.truncation, DEFAULT_TRUNCATION_TOLERANCE)?) } else { None };
    let mut unconverged = 0;
    let mut autocorr_rows = Vec::new();
    let initial = if has(Output::Autocorr) { Some(RealField::from_fn_par(cfg.grid, |z| wigner0(&cfg.state, z))?) } else { None };

    for (idx, time) in cfg.times.iter().enumerate() {
        let t = time.value;
        let tag = format!("t{idx:03}");
        let evolved = fock.as_ref().map(|f| evolve(f, t));

        let quantum = match &evolved {
            Some(e) if has(Output::WignerQuantum) || has(Output::Marginals) => Some(wigner_of_state(e, cfg.grid)?),
            _ => None,
        };
        if let (Some(q), true) = (&quantum, has(Output::WignerQuantum)) {
            let mut d = BTreeMap::new();
            d.insert("normalization".into(), json!(integrate_field(q)));
            d.insert("purity".into(), json!(autocorr_overlap(q, q)?));
            w.field(format!("wigner_quantum_{tag}.wgr"), Output::WignerQuantum, time, q, d)?;
            if frames {
                w.png(format!("frames/wigner_quantum_{idx:04}.png"), Output::Frames, Some(time), q, &RenderOptions::default())?;
            }
        }
        if let (Some(q), Some(e)) = (&quantum, &evolved) {
            if has(Output::Marginals) {
                let body = marginal_csv(q, Axis::Position, |x| position_probability(e, x));
                w.text(format!("marginal_q_{tag}.csv"), Output::Marginals, Some(time), &body, BTreeMap::new())?;
                let body = marginal_csv(q, Axis::Momentum, |x| momentum_probability(e, x));
                w.text(format!("marginal_p_{tag}.csv"), Output::Marginals, Some(time), &body, BTreeMap::new())?;
            }
        }

        if has(Output::WignerClassical) {
            let c = liouville_field(cfg.grid, t, &cfg.state, cfg.dynamics)?;
            let mut d = BTreeMap::new();
            d.insert("normalization".into(), json!(integrate_field(&c)));
            w.field(format!("wigner_classical_{tag}.wgr"), Output::WignerClassical, time, &c, d)?;
            if frames {
                w.png(format!("frames/wigner_classical_{idx:04}.png"), Output::Frames, Some(time), &c, &RenderOptions::default())?;
            }
        }

        if has(Output::WignerFvr) || has(Output::Autocorr) {
            let f = fvr_field(cfg.grid, t, &cfg.state, &cfg.quadrature, cfg.dynamics)?;
            unconverged += f.unconverged;
            if has(Output::WignerFvr) {
                let mut d = fvr_diagnostics(&f, cfg);
                if let Some(q) = &quantum {
                    if let Ok(pn) = post_normalize(&f.field) {
                        d.insert("pearson_vs_quantum".into(), json!(compare(&pn, q)?.pearson));
                    }
                }
                w.field(format!("wigner_fvr_{tag}.wgr"), Output::WignerFvr, time, &f.field, d)?;
                w.field(format!("wigner_fvr_imag_{tag}.wgr"), Output::WignerFvr, time, &f.imaginary, BTreeMap::new())?;
                if frames {
                    w.png(format!("frames/wigner_fvr_{idx:04}.png"), Output::Frames, Some(time), &f.field, &RenderOptions::default())?;
                }
            }
            if let (Some(w0), Some(f0)) = (&initial, &fock) {
                let raw = autocorr_overlap(&f.field, w0)?;
                let norm = normalization(&f.field);
                let post = post_normalize(&f.field).map(|pn| autocorr_overlap(&pn, w0)).unwrap_or(Ok(f64::NAN))?;
                autocorr_rows.push([t, autocorr_exact(f0, t), post, raw, norm]);
            }
        }

        if has(Output::CausticMap) {
            let cs = cfg.caustics.expect("validated: caustic_map needs [caustics]");
            let map = caustic_det_map(cs.center, t, cs.chord_grid()?, cfg.dynamics)?;
            let mut d = BTreeMap::new();
            d.insert("x_final".into(), json!([cs.center.q, cs.center.p]));
            d.insert("negative_regions".into(), json!(crate::diagnostics::negative_regions(&map)));
            w.field(format!("caustic_map_{tag}.wgr"), Output::CausticMap, time, &map, d)?;
            let opts = RenderOptions { zero_contours: true, title: Some(format!("t={}", time.label)), ..Default::default() };
            w.png(format!("caustic_map_{tag}.png"), Output::CausticMap, Some(time), &map, &opts)?;
        }
    }

    if has(Output::Autocorr) {
        let mut body = String::from("t,A2_quantum,A2_fvr_postnorm,A2_fvr_raw,fvr_normalization\n");
        for row in &autocorr_rows {
            let cells: Vec<String> = row.iter().map(|v| full_precision(*v)).collect();
            let _ = writeln!(body, "{}", cells.join(","));
        }
        let max_dev = autocorr_rows.iter().map(|r| (r[2] - r[1]).abs()).fold(0.0f64, f64::max);
        let mut d = BTreeMap::new();
        d.insert("max_abs_postnorm_deviation".into(), json!(max_dev));
        w.text("autocorr.csv".into(), Output::Autocorr, None, &body, d)?;
    }

    let manifest = Manifest { command: command.into(), config: cfg.clone(), artifacts: w.artifacts, unconverged_nodes: unconverged };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(cfg.output_dir.join(MANIFEST_FILE), json)?;
    Ok(manifest)
}

/// Render every grid file to a PNG alongside it, or into `out_dir`.
pub fn render_files(inputs: &[PathBuf], out_dir: Option<&Path>, opts: &RenderOptions) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for input in inputs {
        let data = grid_io::read(input)?;
        let field: Field<f64> = data.real_part()?;
        let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "field".into());
        let dir = match out_dir {
            Some(d) => d.to_path_buf(),
            None => input.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        fs::create_dir_all(&dir)?;
        let path = dir.join(format!("{stem}.png"));
        render_heatmap(&field, opts).write_png(&path)?;
        written.push(path);
    }
    Ok(written)
}
