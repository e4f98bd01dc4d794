//! Scan configuration. The file format is the `config` object of a
//! certificate.

use std::path::Path;

use biorth_core::conformal::{
    FlatCheckConfig, NegativeSearchConfig, PotentialSupport, SStarOptions, SampleConfig,
};
use biorth_core::grassmann::GridConfig;
use biorth_core::wilking::FlatScanConfig;
use biorth_core::wu::{InfeasibilityConfig, WuBiorthConfig};
use serde::{Deserialize, Serialize};

use crate::ScanError;

/// Version of the config and certificate layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Wilking,
    Wu,
    Deformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WuGrids {
    /// Points per side of the Euler-angle grid of the trace check.
    pub trace_resolution: usize,
    pub infeasibility: InfeasibilityConfig,
    pub biorth: WuBiorthConfig,
    /// Plane search for the plain sectional minimum.
    pub sec_min: GridConfig,
    pub crossval_points: usize,
    pub crossval_planes: usize,
}

impl Default for WuGrids {
    fn default() -> Self {
        WuGrids {
            trace_resolution: 32,
            infeasibility: InfeasibilityConfig::default(),
            biorth: WuBiorthConfig::default(),
            sec_min: GridConfig::default(),
            crossval_points: 8,
            crossval_planes: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilkingGrids {
    /// Quasi-random points and planes per point of the curvature floor.
    pub floor_points: usize,
    pub floor_planes: usize,
    pub flat: FlatScanConfig,
    /// Random planes of the algebraic vs finite-difference comparison.
    pub crossval_planes: usize,
}

impl Default for WilkingGrids {
    fn default() -> Self {
        WilkingGrids {
            floor_points: 160,
            floor_planes: 64,
            flat: FlatScanConfig::default(),
            crossval_planes: 128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformedGrids {
    pub sample: SampleConfig,
    pub negative: NegativeSearchConfig,
    pub s_search: SStarOptions,
    pub flat_checks: FlatCheckConfig,
    pub r0: f64,
    pub r1: f64,
    pub support: PotentialSupport,
}

impl Default for DeformedGrids {
    fn default() -> Self {
        DeformedGrids {
            sample: SampleConfig::default(),
            negative: NegativeSearchConfig::default(),
            s_search: SStarOptions::default(),
            flat_checks: FlatCheckConfig::default(),
            r0: 0.1,
            r1: 0.25,
            support: PotentialSupport::SpheresAndRp3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Grids {
    pub wu: WuGrids,
    pub wilking: WilkingGrids,
    pub deformed: DeformedGrids,
}

/// Pass/fail thresholds. None of them changes a computed number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanTolerances {
    pub trace: f64,
    pub spot_value: f64,
    pub sec_zero: f64,
    pub orbit_distance: f64,
    pub crossval: f64,
    pub sphere: f64,
    pub sec_floor: f64,
    pub first_variation: f64,
    pub hessian_identity: f64,
    pub expected_clusters: usize,
}

impl Default for ScanTolerances {
    fn default() -> Self {
        ScanTolerances {
            trace: 1e-12,
            spot_value: 1e-12,
            sec_zero: 1e-10,
            orbit_distance: 1e-6,
            crossval: 2e-4,
            sphere: 1e-6,
            sec_floor: -5e-5,
            first_variation: 2e-3,
            hessian_identity: 5e-2,
            expected_clusters: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub schema_version: u32,
    pub space: Space,
    pub grids: Grids,
    pub theta: f64,
    /// Deformation scale to verify; searched for when absent.
    pub s: Option<f64>,
    pub tolerances: ScanTolerances,
    /// Seeds the random planes of the engine comparison.
    pub seed: u64,
    /// Certificate path; stdout when absent.
    pub output: Option<String>,
    /// Flat-locus atlas written by `wilking-scan` and read by
    /// `deform-verify` (which runs the scan itself when absent).
    pub atlas: Option<String>,
}

impl ScanConfig {
    pub fn new(space: Space) -> Self {
        ScanConfig {
            schema_version: SCHEMA_VERSION,
            space,
            grids: Grids::default(),
            theta: 0.1,
            s: None,
            tolerances: ScanTolerances::default(),
            seed: 0,
            output: None,
            atlas: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ScanError> {
        let cfg: ScanConfig = serde_json::from_str(text).map_err(|e| ScanError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ScanError::Schema {
                expected: SCHEMA_VERSION,
                got: cfg.schema_version,
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ScanError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScanError::Io(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Sets the main resolution of the configured space: the infeasibility
    /// box grid for `wu`, the slice grid of the flat-locus scan for
    /// `wilking`, and the slice grid of the `K_theta` sample for `deformed`.
    pub fn set_grid(&mut self, n: usize) {
        match self.space {
            Space::Wu => self.grids.wu.infeasibility.resolution = n,
            Space::Wilking => self.grids.wilking.flat.slice_resolution = n,
            Space::Deformed => self.grids.deformed.sample.slice_resolution = n,
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        let bad = |what: &str, n: usize| -> Result<(), ScanError> {
            if n < 2 {
                return Err(ScanError::Config(format!("{what} must be at least 2, got {n}")));
            }
            Ok(())
        };
        let g = &self.grids;
        bad("wu.trace_resolution", g.wu.trace_resolution)?;
        bad("wu.infeasibility.resolution", g.wu.infeasibility.resolution)?;
        bad("wu.biorth.planes", g.wu.biorth.planes)?;
        bad("wu.biorth.complements", g.wu.biorth.complements)?;
        bad("wu.sec_min.planes", g.wu.sec_min.planes)?;
        bad("wu.crossval_planes", g.wu.crossval_planes)?;
        bad("wilking.floor_points", g.wilking.floor_points)?;
        bad("wilking.floor_planes", g.wilking.floor_planes)?;
        bad("wilking.flat.slice_resolution", g.wilking.flat.slice_resolution)?;
        bad("wilking.flat.grid.planes", g.wilking.flat.grid.planes)?;
        bad("wilking.crossval_planes", g.wilking.crossval_planes)?;
        bad("deformed.sample.slice_resolution", g.deformed.sample.slice_resolution)?;
        bad("deformed.sample.grid.planes", g.deformed.sample.grid.planes)?;
        bad("deformed.negative.points_per_line", g.deformed.negative.points_per_line)?;
        if g.wu.crossval_points < 1 || g.deformed.flat_checks.points_per_orbit < 1 || g.deformed.sample.tube_radii < 1 {
            return Err(ScanError::Config("point counts must be positive".into()));
        }
        if !(g.wu.infeasibility.target > 0.0) {
            return Err(ScanError::Config("wu.infeasibility.target must be positive".into()));
        }
        if self.space == Space::Deformed && !(self.theta > 0.0) {
            return Err(ScanError::Config(format!("theta must be positive, got {}", self.theta)));
        }
        if !(g.deformed.r0 > 0.0 && g.deformed.r0 < g.deformed.r1) {
            return Err(ScanError::Config("need 0 < r0 < r1".into()));
        }
        if let Some(s) = self.s {
            if !(s >= 0.0) {
                return Err(ScanError::Config(format!("s must be nonnegative, got {s}")));
            }
        }
        Ok(())
    }
}
