//! Parameter sweeps, figure presets and tabular output.
//!
//! A sweep evaluates every point of a one- or two-axis grid with the
//! master-equation engine, the perturbative engine, or both side by side.
//! Points are independent and distributed over a rayon pool; the result
//! order is row-major over the axes regardless of the worker count.

mod checks;
mod config;
mod presets;
mod table;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::{self_checks, Check};
pub use config::{load_config, parse_config, HilbertConfig};
pub use presets::{
    detuning_points, dip_location, fidelity_params, figure_preset, figure_preset_with, PresetOptions, CHSH_PANELS,
    DRIVE_RATIOS, PRESETS, REGIMES,
};
pub use table::{read_csv, rows_to_json, write_csv, write_json, NA};

use crate::analytic::{amplitudes, ChshForm};
use crate::bell::{bell_fidelity, BellState, ChshObservables};
use crate::correlations::Observables;
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpec;
use crate::lindblad::{liouvillian, steady_state, DensityMatrix};
use crate::model::{build_hamiltonian, collapse_operators, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Master,
    Analytic,
    Both,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Master => "master",
            Engine::Analytic => "analytic",
            Engine::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "master" => Some(Engine::Master),
            "analytic" => Some(Engine::Analytic),
            "both" => Some(Engine::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// One swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(name: &str, min: f64, max: f64, points: usize) -> Self {
        Self { name: name.into(), min, max, points, spacing: Spacing::Linear }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::Config(format!("axis `{}`: {reason}", self.name));
        if !AXIS_NAMES.contains(&self.name.as_str()) {
            return Err(bad(format!("unknown parameter; expected one of {}", AXIS_NAMES.join(", "))));
        }
        if self.points < 2 {
            return Err(bad(format!("needs at least 2 points, got {}", self.points)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(bad(format!("needs finite min < max, got {} .. {}", self.min, self.max)));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(bad("log spacing needs min > 0".into()));
        }
        Ok(())
    }

    /// Grid values including both end points.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Parameters an axis may sweep: every real field of [`ModelParams`] plus
/// shorthands acting on both cavities (`delta`, `u`, `kappa`), the relative
/// drive phase `theta` and the drive ratio `e_ratio = e1 / e2`.
pub const AXIS_NAMES: &[&str] = &[
    "delta", "u", "kappa", "theta", "e_ratio", "delta1", "delta2", "u1", "u2", "j_hop", "e1", "e2",
    "theta1", "theta2", "kappa1", "kappa2", "gamma", "n_th", "omega_m", "g_om",
];

/// Set the named parameter, see [`AXIS_NAMES`].
pub fn apply_axis(p: &mut ModelParams, name: &str, v: f64) -> Result<()> {
    match name {
        "delta" => {
            p.delta1 = v;
            p.delta2 = v;
        }
        "u" => {
            p.u1 = v;
            p.u2 = v;
        }
        "kappa" => {
            p.kappa1 = v;
            p.kappa2 = v;
        }
        "theta" => {
            p.theta1 = v;
            p.theta2 = 0.0;
        }
        "e_ratio" => p.e2 = p.e1 / v,
        "delta1" => p.delta1 = v,
        "delta2" => p.delta2 = v,
        "u1" => p.u1 = v,
        "u2" => p.u2 = v,
        "j_hop" => p.j_hop = v,
        "e1" => p.e1 = v,
        "e2" => p.e2 = v,
        "theta1" => p.theta1 = v,
        "theta2" => p.theta2 = v,
        "kappa1" => p.kappa1 = v,
        "kappa2" => p.kappa2 = v,
        "gamma" => p.gamma = v,
        "n_th" => p.n_th = v,
        "omega_m" => p.omega_m = v,
        "g_om" => p.g_om = v,
        other => return Err(Error::Config(format!("unknown axis parameter `{other}`"))),
    }
    Ok(())
}

/// Quantities a sweep can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    N1,
    N2,
    G2A1,
    G2A2,
    G2Cross,
    Csi,
    Chsh,
    FidelityPhiPlus,
    FidelityPhiMinus,
    FidelityPsiPlus,
    FidelityPsiMinus,
}

impl Output {
    pub const CORRELATIONS: [Output; 6] =
        [Output::N1, Output::N2, Output::G2A1, Output::G2A2, Output::G2Cross, Output::Csi];
    pub const FIDELITIES: [Output; 4] = [
        Output::FidelityPhiPlus,
        Output::FidelityPhiMinus,
        Output::FidelityPsiPlus,
        Output::FidelityPsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::N1 => "n1",
            Output::N2 => "n2",
            Output::G2A1 => "g2_a1",
            Output::G2A2 => "g2_a2",
            Output::G2Cross => "g2_cross",
            Output::Csi => "csi",
            Output::Chsh => "chsh",
            Output::FidelityPhiPlus => "fidelity_phi_plus",
            Output::FidelityPhiMinus => "fidelity_phi_minus",
            Output::FidelityPsiPlus => "fidelity_psi_plus",
            Output::FidelityPsiMinus => "fidelity_psi_minus",
        }
    }

    fn bell_state(self) -> Option<BellState> {
        match self {
            Output::FidelityPhiPlus => Some(BellState::PhiPlus),
            Output::FidelityPhiMinus => Some(BellState::PhiMinus),
            Output::FidelityPsiPlus => Some(BellState::PsiPlus),
            Output::FidelityPsiMinus => Some(BellState::PsiMinus),
            _ => None,
        }
    }
}

/// Complete description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    /// Values of every parameter not on an axis.
    pub fixed: ModelParams,
    pub outputs: Vec<Output>,
    pub engine: Engine,
    pub hilbert: HilbertConfig,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    pub chsh_form: ChshForm,
}

impl SweepSpec {
    pub fn new(fixed: ModelParams, axes: Vec<Axis>, outputs: Vec<Output>, engine: Engine) -> Self {
        Self {
            axes,
            fixed,
            outputs,
            engine,
            hilbert: HilbertConfig::default(),
            workers: 0,
            chsh_form: ChshForm::PhaseAware,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fixed.validate()?;
        for a in &self.axes {
            a.validate()?;
        }
        for (i, a) in self.axes.iter().enumerate() {
            if self.axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Config(format!("axis `{}` appears twice", a.name)));
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("no outputs requested".into()));
        }
        if self.hilbert.cutoff < 3 {
            return Err(Error::Config(format!(
                "optical cutoff {} cannot hold two photons per mode",
                self.hilbert.cutoff
            )));
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    /// Grid points in row-major order: the last axis varies fastest.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        let values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let mut out = Vec::with_capacity(self.grid_len());
        let mut idx = vec![0usize; self.axes.len()];
        loop {
            let mut params = self.fixed;
            let mut coords = Vec::with_capacity(self.axes.len());
            for (k, a) in self.axes.iter().enumerate() {
                let v = values[k][idx[k]];
                apply_axis(&mut params, &a.name, v)?;
                coords.push((a.name.clone(), v));
            }
            out.push(GridPoint { coords, params });
            let mut k = self.axes.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < values[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Coordinates of one grid point and the parameters they produce.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub coords: Vec<(String, f64)>,
    pub params: ModelParams,
}

/// One output record. `None` values are undefined quantities, written as
/// [`NA`]; `valid` is false if a solver failed, with the reason in `note`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub axes: Vec<(String, f64)>,
    pub engine: Engine,
    pub values: BTreeMap<String, Option<f64>>,
    pub valid: bool,
    pub note: String,
}

impl ResultRow {
    pub fn axis(&self, name: &str) -> Option<f64> {
        self.axes.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Value of an output column; `None` if absent or undefined.
    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied().flatten()
    }
}

/// Options shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalContext<'a> {
    pub engine: Engine,
    pub outputs: &'a [Output],
    pub hilbert: HilbertConfig,
    pub chsh_form: ChshForm,
}

type Values = BTreeMap<Output, Option<f64>>;

fn undefined_as_none(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedCorrelation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Steady state of the master equation at one parameter point.
pub fn master_steady_state(p: &ModelParams, hilbert: &HilbertSpec) -> Result<DensityMatrix> {
    p.validate()?;
    let h = build_hamiltonian(p, hilbert)?;
    let l = liouvillian(&h, &collapse_operators(p, hilbert)?)?;
    steady_state(&l)
}

/// Requested outputs of a density matrix.
pub fn state_outputs(
    rho: &DensityMatrix,
    hilbert: &HilbertSpec,
    outputs: &[Output],
) -> Result<BTreeMap<Output, Option<f64>>> {
    let obs = Observables::new(hilbert)?;
    let mut out = Values::new();
    for &o in outputs {
        let v = match o {
            Output::N1 => Some(obs.mean_photon(rho, 0)?),
            Output::N2 => Some(obs.mean_photon(rho, 1)?),
            Output::G2A1 => undefined_as_none(obs.g2_auto(rho, 0))?,
            Output::G2A2 => undefined_as_none(obs.g2_auto(rho, 1))?,
            Output::G2Cross => undefined_as_none(obs.g2_cross(rho, 0, 1))?,
            Output::Csi => undefined_as_none(obs.csi_witness(rho))?,
            Output::Chsh => {
                let t = ChshObservables::new(hilbert)?.tensor(rho)?;
                undefined_as_none(t.chsh(&Default::default()))?
            }
            f => Some(bell_fidelity(rho, hilbert, f.bell_state().expect("fidelity output"))?),
        };
        out.insert(o, v);
    }
    Ok(out)
}

fn master_values(p: &ModelParams, ctx: &EvalContext) -> Result<Values> {
    let hilbert = ctx.hilbert.build(p)?;
    let rho = master_steady_state(p, &hilbert)?;
    state_outputs(&rho, &hilbert, ctx.outputs)
}

/// Perturbative values. Photon numbers are the leading-order
/// `|c10|^2`, `|c01|^2`; Bell fidelities have no perturbative counterpart.
fn analytic_values(p: &ModelParams, ctx: &EvalContext) -> Result<Values> {
    p.validate()?;
    let a = amplitudes(p)?;
    let g = a.g2();
    let mut out = Values::new();
    for &o in ctx.outputs {
        let v = match o {
            Output::N1 => Some(a.c10.norm_sqr()),
            Output::N2 => Some(a.c01.norm_sqr()),
            Output::G2A1 => g.g2_a1,
            Output::G2A2 => g.g2_a2,
            Output::G2Cross => g.g2_cross,
            Output::Csi => undefined_as_none(a.csi())?,
            Output::Chsh => undefined_as_none(a.chsh(ctx.chsh_form))?,
            _ => None,
        };
        out.insert(o, v);
    }
    Ok(out)
}

/// Evaluate one grid point; failures become an invalid row, never an error.
pub fn evaluate_point(point: &GridPoint, ctx: &EvalContext) -> ResultRow {
    let mut values = BTreeMap::new();
    let mut notes = Vec::new();
    let mut run = |tag: &str, suffix: bool, r: Result<Values>| match r {
        Ok(v) => {
            for (o, x) in v {
                let key = if suffix { format!("{}_{tag}", o.name()) } else { o.name().to_string() };
                values.insert(key, x);
            }
        }
        Err(e) => {
            for o in ctx.outputs {
                let key = if suffix { format!("{}_{tag}", o.name()) } else { o.name().to_string() };
                values.insert(key, None);
            }
            notes.push(format!("{tag}: {e}"));
        }
    };
    match ctx.engine {
        Engine::Master => run("master", false, master_values(&point.params, ctx)),
        Engine::Analytic => run("analytic", false, analytic_values(&point.params, ctx)),
        Engine::Both => {
            run("analytic", true, analytic_values(&point.params, ctx));
            run("master", true, master_values(&point.params, ctx));
        }
    }
    ResultRow {
        axes: point.coords.clone(),
        engine: ctx.engine,
        values,
        valid: notes.is_empty(),
        note: notes.join("; "),
    }
}

/// Run `f` on a pool of `workers` threads (0: rayon's default).
pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn evaluate_points(points: &[GridPoint], ctx: &EvalContext, workers: usize) -> Result<Vec<ResultRow>> {
    with_workers(workers, || points.par_iter().map(|p| evaluate_point(p, ctx)).collect())
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    if spec.axes.is_empty() || spec.axes.len() > 2 {
        return Err(Error::Config(format!("a sweep needs 1 or 2 axes, got {}", spec.axes.len())));
    }
    let points = spec.grid()?;
    let ctx = EvalContext {
        engine: spec.engine,
        outputs: &spec.outputs,
        hilbert: spec.hilbert,
        chsh_form: spec.chsh_form,
    };
    log::info!("sweep over {} points, engine {}", points.len(), spec.engine.label());
    evaluate_points(&points, &ctx, spec.workers)
}
