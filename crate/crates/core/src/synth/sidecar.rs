use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optics::{ArtificialLightSpec, OpticalScene, WaterType};

/// Per-record metadata written next to each synthesized sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSidecar {
    pub water_type: WaterType,
    #[serde(rename = "D_m")]
    pub depth_m: f64,
    #[serde(rename = "E_S")]
    pub surface_light: [f64; 3],
    #[serde(rename = "E_art")]
    pub artificial_peak: [f64; 3],
    pub light_center_xy: [f64; 2],
    pub sigma: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    pub kappa: f64,
    pub seed: u64,
    pub record_index: u64,
}

impl SceneSidecar {
    pub fn from_scene(scene: &OpticalScene, seed: u64, record_index: u64) -> Self {
        let light = scene.artificial();
        Self {
            water_type: scene.water(),
            depth_m: scene.depth_m(),
            surface_light: scene.surface_light(),
            artificial_peak: light.peak(),
            light_center_xy: light.center(),
            sigma: light.sigma(),
            omega_a: scene.omega_a(),
            omega_b: scene.omega_b(),
            kappa: scene.kappa(),
            seed,
            record_index,
        }
    }

    /// Rebuilds the scene, re-checking every range invariant.
    pub fn to_scene(&self) -> Result<OpticalScene> {
        let light =
            ArtificialLightSpec::new(self.light_center_xy, self.artificial_peak, self.sigma)?;
        OpticalScene::with_weights(
            self.water_type,
            self.depth_m,
            self.surface_light,
            light,
            self.omega_a,
            self.omega_b,
            self.kappa,
        )
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("sidecar serialises");
        out.push(b'\n');
        out
    }

    /// Parses and validates a sidecar.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let sidecar: SceneSidecar = serde_json::from_slice(bytes)?;
        sidecar.to_scene()?;
        Ok(sidecar)
    }
}
