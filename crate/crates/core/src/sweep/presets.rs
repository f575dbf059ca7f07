//! Named parameter grids behind the published figures.

use rayon::prelude::*;

use super::{
    evaluate_points, with_workers, Axis, Engine, EvalContext, GridPoint, HilbertConfig, Output, ResultRow,
    SweepSpec,
};
use crate::analytic::ChshForm;
use crate::bell::{bell_fidelity, BellState};
use crate::correlations::Observables;
use crate::error::{Error, Result};
use crate::lindblad::{evolve, liouvillian, steady_state, DensityMatrix, EvolveOptions};
use crate::model::{build_hamiltonian, collapse_operators, ModelParams};

pub const PRESETS: [&str; 7] = ["fig2a", "fig2bcd", "fig3ab", "fig3c", "fig4", "fig5", "fig6"];

/// `(J, U)` of the three blockade regimes.
pub const REGIMES: [(f64, f64); 3] = [(1.5, 0.09), (1.0, 0.5), (0.75, 1.0)];

/// Hopping values of the CHSH contour panels.
pub const CHSH_PANELS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

/// Drive ratios `e1 / e2` of the fidelity runs.
pub const DRIVE_RATIOS: [f64; 4] = [5.0, 15.0, 30.0, 50.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetOptions {
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    /// Add master-equation rows on a 5x5 subgrid of each contour panel.
    pub spot_check: bool,
    pub hilbert: HilbertConfig,
    pub chsh_form: ChshForm,
    /// Points of the contour grids per axis.
    pub contour_points: usize,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            workers: 0,
            spot_check: false,
            hilbert: HilbertConfig::default(),
            chsh_form: ChshForm::PhaseAware,
            contour_points: 61,
        }
    }
}

pub fn figure_preset(name: &str) -> Result<Vec<ResultRow>> {
    figure_preset_with(name, &PresetOptions::default())
}

pub fn figure_preset_with(name: &str, opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    match name {
        "fig2a" => detuning_scan(opts, Engine::Both, &Output::CORRELATIONS),
        "fig2bcd" => phase_scan(opts),
        "fig3ab" => detuning_scan(opts, Engine::Master, &[Output::N1, Output::N2]),
        "fig3c" => delayed_g2(opts),
        "fig4" => csi_figure(opts),
        "fig5" => chsh_contours(opts),
        "fig6" => fidelity_dynamics(opts),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Drives of the steady-state figures on top of the defaults.
fn base() -> ModelParams {
    ModelParams::default().with_drives(0.1, 0.01)
}

fn regime(j: f64, u: f64) -> ModelParams {
    ModelParams { j_hop: j, ..base().with_kerr(u) }
}

fn detuning_axis() -> Axis {
    Axis::linear("delta", -2.0, 2.0, 161)
}

/// Rows `(j_hop, u, delta)` for each regime.
pub fn detuning_points() -> Result<Vec<GridPoint>> {
    let mut out = Vec::new();
    for (j, u) in REGIMES {
        let spec = SweepSpec::new(regime(j, u), vec![detuning_axis()], vec![Output::G2A1], Engine::Master);
        for mut p in spec.grid()? {
            p.coords.splice(0..0, [("j_hop".to_string(), j), ("u".to_string(), u)]);
            out.push(p);
        }
    }
    Ok(out)
}

fn ctx<'a>(opts: &PresetOptions, engine: Engine, outputs: &'a [Output]) -> EvalContext<'a> {
    EvalContext { engine, outputs, hilbert: opts.hilbert, chsh_form: opts.chsh_form }
}

fn detuning_scan(opts: &PresetOptions, engine: Engine, outputs: &[Output]) -> Result<Vec<ResultRow>> {
    evaluate_points(&detuning_points()?, &ctx(opts, engine, outputs), opts.workers)
}

/// Detuning of the smallest defined `key` among rows sharing `(j_hop, u)`.
pub fn dip_location(rows: &[ResultRow], j: f64, u: f64, key: &str) -> Option<(f64, f64)> {
    rows.iter()
        .filter(|r| r.axis("j_hop") == Some(j) && r.axis("u") == Some(u))
        .filter_map(|r| Some((r.axis("delta")?, r.value(key)?)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Drive-phase scans at each regime's master-equation `g2_a1` minimum.
fn phase_scan(opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    let scan = detuning_scan(opts, Engine::Master, &[Output::G2A1])?;
    let theta = Axis::linear("theta", 0.0, 2.0 * std::f64::consts::PI * 71.0 / 72.0, 72);
    let mut points = Vec::new();
    for (j, u) in REGIMES {
        let (delta, _) = dip_location(&scan, j, u, "g2_a1")
            .ok_or_else(|| Error::Singular(format!("no defined g2 minimum for J = {j}, U = {u}")))?;
        log::info!("phase scan for J = {j}, U = {u} at delta = {delta}");
        let spec = SweepSpec::new(regime(j, u).with_detuning(delta), vec![theta.clone()], vec![], Engine::Master);
        for mut p in spec.grid()? {
            p.coords.splice(0..0, [("j_hop".to_string(), j), ("u".to_string(), u), ("delta".to_string(), delta)]);
            points.push(p);
        }
    }
    let outputs = [Output::G2A1, Output::G2A2, Output::G2Cross];
    evaluate_points(&points, &ctx(opts, Engine::Both, &outputs), opts.workers)
}

/// `g2(tau)` of both modes at the strong-Kerr dip.
fn delayed_g2(opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    let p = regime(0.75, 1.0).with_detuning(0.97);
    let hilbert = opts.hilbert.build(&p)?;
    let l = liouvillian(&build_hamiltonian(&p, &hilbert)?, &collapse_operators(&p, &hilbert)?)?;
    let rho = steady_state(&l)?;
    let obs = Observables::new(&hilbert)?;
    let taus: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
    let ev = EvolveOptions::default();
    let g1 = obs.g2_tau(&rho, &l, 0, &taus, &ev)?;
    let g2 = obs.g2_tau(&rho, &l, 1, &taus, &ev)?;
    Ok(taus
        .iter()
        .enumerate()
        .map(|(i, &t)| ResultRow {
            axes: vec![("tau".into(), t)],
            engine: Engine::Master,
            values: [("g2_tau_a1".to_string(), Some(g1[i])), ("g2_tau_a2".to_string(), Some(g2[i]))]
                .into_iter()
                .collect(),
            valid: true,
            note: String::new(),
        })
        .collect())
}

fn contour_axes(n: usize) -> Vec<Axis> {
    vec![Axis::linear("u", 0.0, 2.0, n), Axis::linear("delta", -2.0, 2.0, n)]
}

/// Analytic `(delta, u)` grid at fixed hopping, optionally followed by
/// master-equation rows on every 15th point of each axis.
fn contour_panel(j: f64, outputs: &[Output], opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    let n = opts.contour_points;
    let spec = SweepSpec::new(ModelParams { j_hop: j, ..base() }, contour_axes(n), outputs.to_vec(), Engine::Analytic);
    let mut points = spec.grid()?;
    for p in &mut points {
        p.coords.insert(0, ("j_hop".to_string(), j));
    }
    let mut rows = evaluate_points(&points, &ctx(opts, Engine::Analytic, outputs), opts.workers)?;
    if opts.spot_check {
        let picks: Vec<usize> = (0..5).map(|k| k * (n - 1) / 4).collect();
        let sub: Vec<GridPoint> = picks
            .iter()
            .flat_map(|&a| picks.iter().map(move |&b| a * n + b))
            .map(|i| points[i].clone())
            .collect();
        rows.extend(evaluate_points(&sub, &ctx(opts, Engine::Master, outputs), opts.workers)?);
    }
    Ok(rows)
}

fn csi_figure(opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    let outputs = [Output::G2A1, Output::G2A2, Output::G2Cross, Output::Csi];
    let mut rows = evaluate_points(&detuning_points()?, &ctx(opts, Engine::Analytic, &outputs), opts.workers)?;
    for (j, _) in REGIMES {
        rows.extend(contour_panel(j, &outputs, opts)?);
    }
    Ok(rows)
}

fn chsh_contours(opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for j in CHSH_PANELS {
        rows.extend(contour_panel(j, &[Output::Csi, Output::Chsh], opts)?);
    }
    Ok(rows)
}

/// Evolution from the vacuum at `delta = u = 1` for each drive ratio and
/// both hopping values `J = 1` and `J = 1/2`.
fn fidelity_dynamics(opts: &PresetOptions) -> Result<Vec<ResultRow>> {
    let times: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
    let runs: Vec<(f64, f64)> =
        [1.0, 0.5].iter().flat_map(|&j| DRIVE_RATIOS.iter().map(move |&r| (j, r))).collect();
    let hilbert_cfg = opts.hilbert;
    let per_run = with_workers(opts.workers, || {
        runs.par_iter()
            .map(|&(j, ratio)| fidelity_run(j, ratio, &times, hilbert_cfg))
            .collect::<Vec<_>>()
    })?;
    let mut rows = Vec::new();
    for r in per_run {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn fidelity_params(j: f64, ratio: f64) -> ModelParams {
    ModelParams { j_hop: j, ..ModelParams::symmetric(1.0, 1.0, j).with_drives(0.1, 0.1 / ratio) }
}

fn fidelity_run(j: f64, ratio: f64, times: &[f64], cfg: HilbertConfig) -> Result<Vec<ResultRow>> {
    let p = fidelity_params(j, ratio);
    let hilbert = cfg.build(&p)?;
    let l = liouvillian(&build_hamiltonian(&p, &hilbert)?, &collapse_operators(&p, &hilbert)?)?;
    let vac = DensityMatrix::fock(&hilbert, &vec![0; hilbert.num_modes()])?;
    let traj = evolve(&vac, &l, times, &EvolveOptions::default())?;
    traj.iter()
        .zip(times)
        .map(|(rho, &t)| {
            let mut values = std::collections::BTreeMap::new();
            for (o, b) in Output::FIDELITIES.iter().zip(BellState::ALL) {
                values.insert(o.name().to_string(), Some(bell_fidelity(rho, &hilbert, b)?));
            }
            Ok(ResultRow {
                axes: vec![("j_hop".into(), j), ("e_ratio".into(), ratio), ("t".into(), t)],
                engine: Engine::Master,
                values,
                valid: true,
                note: String::new(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_preset() {
        assert!(matches!(figure_preset("fig9"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn detuning_grid_shape() {
        let pts = detuning_points().unwrap();
        assert_eq!(pts.len(), 3 * 161);
        assert_eq!(pts[0].coords[0], ("j_hop".to_string(), 1.5));
        assert_eq!(pts[0].params.e2, 0.01);
        assert!((pts[160].params.delta2 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn small_contour_with_spot_check() {
        let opts = PresetOptions { contour_points: 9, spot_check: true, hilbert: HilbertConfig { cutoff: 3, phonon_cutoff: 3 }, ..Default::default() };
        let rows = contour_panel(0.5, &[Output::Chsh], &opts).unwrap();
        assert_eq!(rows.len(), 81 + 25);
        assert_eq!(rows.iter().filter(|r| r.engine == Engine::Master).count(), 25);
    }
}
