//! TOML run configuration.
//!
//! ```toml
//! [model]
//! e1 = 0.1
//! j_hop = 0.75
//!
//! [hilbert]
//! cutoff = 5
//!
//! [sweep]
//! engine = "both"
//! outputs = ["g2_a1", "csi"]
//!
//! [[sweep.axes]]
//! name = "delta"
//! min = -2.0
//! max = 2.0
//! points = 161
//! ```
//!
//! Every table rejects unknown keys.

use std::path::Path;

use serde::Deserialize;

use super::{Axis, Engine, Output, SweepSpec};
use crate::analytic::ChshForm;
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpec;
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HilbertConfig {
    /// Fock levels per optical mode.
    pub cutoff: usize,
    /// Fock levels per mechanical mode, used when mechanics is included.
    pub phonon_cutoff: usize,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        Self { cutoff: 5, phonon_cutoff: 3 }
    }
}

impl HilbertConfig {
    pub fn build(&self, params: &ModelParams) -> Result<HilbertSpec> {
        if params.include_mechanics {
            HilbertSpec::optomechanical(self.cutoff, self.phonon_cutoff)
        } else {
            HilbertSpec::two_mode(self.cutoff)
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SweepSection {
    engine: Engine,
    outputs: Vec<Output>,
    axes: Vec<Axis>,
    workers: usize,
    chsh_form: ChshForm,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            engine: Engine::Master,
            outputs: Output::CORRELATIONS.to_vec(),
            axes: Vec::new(),
            workers: 0,
            chsh_form: ChshForm::PhaseAware,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    model: ModelParams,
    hilbert: HilbertConfig,
    sweep: SweepSection,
}

/// Parse and validate a configuration held in memory.
pub fn parse_config(text: &str) -> Result<(ModelParams, HilbertSpec, SweepSpec)> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let spec = SweepSpec {
        axes: file.sweep.axes,
        fixed: file.model,
        outputs: file.sweep.outputs,
        engine: file.sweep.engine,
        hilbert: file.hilbert,
        workers: file.sweep.workers,
        chsh_form: file.sweep.chsh_form,
    };
    spec.validate()?;
    let hilbert = spec.hilbert.build(&spec.fixed)?;
    Ok((spec.fixed, hilbert, spec))
}

pub fn load_config(path: impl AsRef<Path>) -> Result<(ModelParams, HilbertSpec, SweepSpec)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
