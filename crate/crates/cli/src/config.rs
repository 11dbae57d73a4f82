//! JSON run configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sdym::grid::GridSpec;
use sdym::polyfield::{PolyField, PolyTerm, R4Point};
use sdym::riemann_hilbert::PipelineConfig;
use sdym::twistor::{ContourSpec, TwistorRep, TwistorTerm};

use crate::CliError;

/// Everything a subcommand may read. Unset fields fall back to defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Harmonic function a, for `reducible` and `finite-type`.
    pub harmonic: Option<Vec<PolyTerm>>,
    /// Twistor representative f, for `penrose`, `patch`, `split` and `flow`.
    pub twistor: Option<Vec<TwistorTerm>>,
    pub grid: GridSpec,
    pub contour: ContourSpec,
    /// Circle samples per grid point.
    pub samples: usize,
    /// Truncation order M of the Birkhoff split.
    pub truncation: usize,
    pub flow_times: Vec<f64>,
    /// Evaluation points; random points are drawn from the seed when absent.
    pub points: Option<Vec<[f64; 4]>>,
    /// Group elements as [[re, im]; 4] in row-major order, for `orbit`.
    pub matrices: Vec<[[f64; 2]; 4]>,
    pub d_max: usize,
    pub seed: u64,
    /// Size of randomized sweeps.
    pub sweep: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let pipeline = PipelineConfig::default();
        RunConfig {
            harmonic: None,
            twistor: None,
            grid: pipeline.grid,
            contour: ContourSpec::default(),
            samples: pipeline.samples,
            truncation: pipeline.truncation,
            flow_times: vec![0.0, 0.5, 1.0],
            points: None,
            matrices: vec![[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]],
            d_max: 8,
            seed: 0,
            sweep: 100,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grid
            .validate()
            .map_err(|e| CliError::Config(format!("grid: {e}")))?;
        if self.samples < 4 {
            return Err(CliError::Config(format!("samples must be at least 4, got {}", self.samples)));
        }
        if 2 * self.truncation + 1 > self.samples {
            return Err(CliError::Config(format!(
                "truncation {} needs at least {} samples",
                self.truncation,
                2 * self.truncation + 1
            )));
        }
        if !(self.contour.radius.is_finite() && self.contour.radius > 0.0) {
            return Err(CliError::Config("contour radius must be positive".into()));
        }
        if self.flow_times.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Config("flow times must be finite".into()));
        }
        Ok(())
    }

    /// The configured harmonic function, or |u|² − |v|².
    pub fn harmonic_fn(&self) -> PolyField {
        match &self.harmonic {
            Some(terms) => PolyField::from_json_terms(terms),
            None => PolyField::null_quadric(),
        }
    }

    /// The configured representative, or p₁p₂/w².
    pub fn twistor_rep(&self) -> TwistorRep {
        match &self.twistor {
            Some(terms) => TwistorRep::from_json_terms(terms),
            None => TwistorRep::null_quadric(),
        }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            grid: self.grid,
            samples: self.samples,
            truncation: self.truncation,
        }
    }

    pub fn explicit_points(&self) -> Option<Vec<R4Point>> {
        self.points
            .as_ref()
            .map(|p| p.iter().map(|a| R4Point::from_array(*a)).collect())
    }
}
