use std::path::{Path, PathBuf};

use pentamotion::design::DesignParams;
use pentamotion::kinematics::Direction;
use pentamotion::selfmotion::h_from_p5;
use pentamotion::trace::{trace_motion, trace_motion_special_v0, SelfMotion};
use pentamotion::verify::ReportTolerances;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub a_r: f64,
    pub a_c: f64,
    pub a4: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    /// Poses (or generators) along the motion.
    pub count: usize,
    pub gamma_range: [f64; 2],
    /// Points per generator in surface meshes.
    pub grid: usize,
    /// Pose whose generator is used for the Krames reflection.
    pub pose_index: usize,
    /// Line parameters `t` for sphere-center samples.
    pub t_samples: Vec<f64>,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            count: 200,
            gamma_range: [-10.0, 10.0],
            grid: 20,
            pose_index: 0,
            t_samples: vec![-3.0, -1.0, 0.0, 0.5, 1.0, 3.45, 5.0, 6.1, 9.0, 15.0],
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub global: Option<f64>,
    pub residual: Option<f64>,
    pub drift: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub design: DesignConfig,
    #[serde(default)]
    pub h: Option<[f64; 3]>,
    #[serde(default)]
    pub p5: Option<f64>,
    #[serde(default, rename = "R1")]
    pub r1: Option<f64>,
    /// Polar coordinates `(h0, r)` used to pick `h` when only `p5` is given.
    #[serde(default)]
    pub rho: Option<[f64; 2]>,
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub leg_range: Option<[f64; 2]>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub tolerance: ToleranceConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("invalid config: {e}")))
    }

    pub fn design(&self) -> Result<DesignParams<f64>, CliError> {
        let d = self.design;
        Ok(DesignParams::classify(d.a, d.c, d.a_r, d.a_c, d.a4)?)
    }

    pub fn direction(&self) -> Result<Option<Direction<f64>>, CliError> {
        self.h.map(|[h0, h1, h2]| Direction::new(h0, h1, h2)).transpose().map_err(Into::into)
    }

    pub fn require_t(&self) -> Result<f64, CliError> {
        self.t.ok_or_else(|| CliError::Validation("config needs `t`".into()))
    }

    /// `p5` from either `p5` or `R1`, if one of them is set.
    pub fn p5(&self, design: &DesignParams<f64>) -> Result<Option<f64>, CliError> {
        match (self.p5, self.r1) {
            (Some(_), Some(_)) => Err(CliError::Validation("give only one of `p5` and `R1`".into())),
            (Some(p5), None) => Ok(Some(p5)),
            (None, Some(r1)) => Ok(Some(design.p5_from_r1_sq(r1 * r1)?)),
            (None, None) => Ok(None),
        }
    }

    pub fn report_tolerances(&self, global: f64) -> ReportTolerances {
        ReportTolerances {
            residual: self.tolerance.residual.unwrap_or(global),
            drift: self.tolerance.drift.unwrap_or(ReportTolerances::default().drift),
        }
    }
}

/// The motion fixed by a config, with the derived parameters.
pub struct ResolvedMotion {
    pub design: DesignParams<f64>,
    pub h: Direction<f64>,
    pub p5: f64,
    pub r1_sq: f64,
    pub motion: SelfMotion<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub h: [f64; 3],
    pub p5: f64,
    #[serde(rename = "R1_sq")]
    pub r1_sq: f64,
    pub special_v0: bool,
}

impl ResolvedMotion {
    pub fn summary(&self) -> Resolved {
        Resolved { h: self.h.h, p5: self.p5, r1_sq: self.r1_sq, special_v0: self.design.v == 0.0 }
    }
}

/// Traces the motion named by the config. Exactly one of `h` and `p5`
/// (or `R1`) fixes it; for `v = 0` designs `h` and `R1` are both needed.
pub fn resolve_motion(cfg: &RunConfig, count: usize) -> Result<ResolvedMotion, CliError> {
    let design = cfg.design()?;
    let h = cfg.direction()?;
    if design.v == 0.0 {
        let h = h.ok_or_else(|| CliError::Validation("v = 0 designs need `h`".into()))?;
        let r1 = cfg.r1.ok_or_else(|| CliError::Validation("v = 0 designs need `R1`".into()))?;
        let p5 = cfg.p5.unwrap_or(design.a4);
        let motion = trace_motion_special_v0(&design, &h, p5, r1 * r1, count)?;
        return Ok(ResolvedMotion { design, h, p5, r1_sq: r1 * r1, motion });
    }
    let p5_given = cfg.p5(&design)?;
    let h = match (h, p5_given) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("give exactly one of `h` and `p5`/`R1`".into()));
        }
        (None, None) => return Err(CliError::Validation("config needs `h` or `p5`/`R1`".into())),
        (Some(h), None) => h,
        (None, Some(p5)) => {
            let rho = cfg.rho.unwrap_or([1.0, 1.0]);
            let candidates = h_from_p5(&design, p5, rho)?;
            *candidates
                .first()
                .ok_or_else(|| CliError::Validation(format!("no real direction with p5 = {p5} and rho = {rho:?}")))?
        }
    };
    let motion = trace_motion(&design, &h, count)?;
    let p5 = motion.pentapod.legs.p5;
    let r1_sq = motion.pentapod.legs.r1_sq;
    Ok(ResolvedMotion { design, h, p5, r1_sq, motion })
}
