use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_range, Error, Result};
use crate::optics::{
    ArtificialLightSpec, OpticalScene, WaterType, ARTIFICIAL_PEAK_RANGE, DEPTH_RANGE_M,
    KAPPA_RANGE, OMEGA_RANGE, SIGMA_RANGE, SURFACE_LIGHT_RANGE,
};

/// Fixed values that replace sampled ones. Every override must still lie
/// in the admissible physical range.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SceneOverrides {
    pub water: Option<WaterType>,
    pub depth_m: Option<f64>,
    pub surface_light: Option<[f64; 3]>,
    pub artificial_peak: Option<[f64; 3]>,
    /// `[x, y]` in pixels.
    pub light_center: Option<[f64; 2]>,
    pub sigma: Option<f64>,
    pub omega_a: Option<f64>,
    pub kappa: Option<f64>,
}

impl SceneOverrides {
    /// Applies one `KEY=VALUE` assignment. Keys: `water`, `D`, `E_S`,
    /// `E_art`, `center`, `sigma`, `omega_a`, `kappa`. Triplets may be given
    /// as a single value or as `a,b,c`.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {assignment:?} is not KEY=VALUE")))?;
        let key = key.trim();
        let value = value.trim();
        let scalar = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("override {key}: bad number {v:?}")))
        };
        let list = |v: &str| -> Result<Vec<f64>> { v.split(',').map(scalar).collect() };
        let triple = |v: &str| -> Result<[f64; 3]> {
            match list(v)?.as_slice() {
                [a] => Ok([*a; 3]),
                [a, b, c] => Ok([*a, *b, *c]),
                _ => Err(Error::Config(format!(
                    "override {key}: expected 1 or 3 values"
                ))),
            }
        };
        match key {
            "water" | "water_type" => self.water = Some(value.parse()?),
            "D" | "D_m" => self.depth_m = Some(scalar(value)?),
            "E_S" => self.surface_light = Some(triple(value)?),
            "E_art" => self.artificial_peak = Some(triple(value)?),
            "center" | "light_center_xy" => match list(value)?.as_slice() {
                [x, y] => self.light_center = Some([*x, *y]),
                _ => return Err(Error::Config("override center: expected x,y".into())),
            },
            "sigma" => self.sigma = Some(scalar(value)?),
            "omega_a" => self.omega_a = Some(scalar(value)?),
            "kappa" => self.kappa = Some(scalar(value)?),
            other => return Err(Error::Config(format!("unknown override key {other:?}"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if let Some(d) = self.depth_m {
            check_range("D_m", d, DEPTH_RANGE_M.0, DEPTH_RANGE_M.1)?;
        }
        for e in self.surface_light.iter().flatten() {
            check_range("E_S", *e, SURFACE_LIGHT_RANGE.0, SURFACE_LIGHT_RANGE.1)?;
        }
        for e in self.artificial_peak.iter().flatten() {
            check_range(
                "E_art",
                *e,
                ARTIFICIAL_PEAK_RANGE.0,
                ARTIFICIAL_PEAK_RANGE.1,
            )?;
        }
        if let Some(s) = self.sigma {
            check_range("sigma", s, SIGMA_RANGE.0, SIGMA_RANGE.1)?;
        }
        if let Some(w) = self.omega_a {
            check_range("omega_a", w, OMEGA_RANGE.0, OMEGA_RANGE.1)?;
        }
        if let Some(k) = self.kappa {
            check_range("kappa", k, KAPPA_RANGE.0, KAPPA_RANGE.1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub water_types: Vec<WaterType>,
    /// Sampling interval for the water depth `D`, inside `[5, 20]` m.
    pub depth_range: (f64, f64),
    pub overrides: SceneOverrides,
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            water_types: WaterType::ALL.to_vec(),
            depth_range: DEPTH_RANGE_M,
            overrides: SceneOverrides::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.water_types.is_empty() {
            return Err(Error::Config("at least one water type is required".into()));
        }
        let (lo, hi) = self.depth_range;
        check_range("depth_range.min", lo, DEPTH_RANGE_M.0, DEPTH_RANGE_M.1)?;
        check_range("depth_range.max", hi, DEPTH_RANGE_M.0, DEPTH_RANGE_M.1)?;
        if lo > hi {
            return Err(Error::Config(format!("depth range [{lo}, {hi}] is empty")));
        }
        self.overrides.validate()
    }
}

/// Independent random stream for one record: the seed selects the ChaCha
/// key and the record index selects the stream, so records can be drawn in
/// any order or in parallel.
pub fn record_rng(seed: u64, record_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(record_index);
    rng
}

/// Draws every scene parameter uniformly from its range, then applies
/// overrides. All draws happen regardless of overrides so the remaining
/// parameters do not shift when a value is pinned.
pub fn sample_scene(
    config: &SamplerConfig,
    record_index: u64,
    height: usize,
    width: usize,
) -> Result<OpticalScene> {
    config.validate()?;
    if height == 0 || width == 0 {
        return Err(Error::Shape(format!("empty image {height}x{width}")));
    }
    let mut rng = record_rng(config.seed, record_index);
    let mut uniform = |(lo, hi): (f64, f64)| -> f64 { rng.random_range(lo..=hi) };

    let water_u = uniform((0.0, 1.0));
    let depth_m = uniform(config.depth_range);
    let surface_light: [f64; 3] = std::array::from_fn(|_| uniform(SURFACE_LIGHT_RANGE));
    let peak: [f64; 3] = std::array::from_fn(|_| uniform(ARTIFICIAL_PEAK_RANGE));
    let cx = uniform((0.0, 1.0));
    let cy = uniform((0.0, 1.0));
    let sigma = uniform(SIGMA_RANGE);
    let omega_a = uniform(OMEGA_RANGE);
    let kappa = uniform(KAPPA_RANGE);

    let pick = |u: f64, n: usize| ((u * n as f64) as usize).min(n - 1);
    let water = config.water_types[pick(water_u, config.water_types.len())];
    let center = [pick(cx, width) as f64, pick(cy, height) as f64];

    let o = &config.overrides;
    let light = ArtificialLightSpec::new(
        o.light_center.unwrap_or(center),
        o.artificial_peak.unwrap_or(peak),
        o.sigma.unwrap_or(sigma),
    )?;
    light.validate_for(height, width)?;
    OpticalScene::new(
        o.water.unwrap_or(water),
        o.depth_m.unwrap_or(depth_m),
        o.surface_light.unwrap_or(surface_light),
        light,
        o.omega_a.unwrap_or(omega_a),
        o.kappa.unwrap_or(kappa),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_index_same_scene() {
        let cfg = SamplerConfig::new(42);
        assert_eq!(
            sample_scene(&cfg, 7, 32, 48).unwrap(),
            sample_scene(&cfg, 7, 32, 48).unwrap()
        );
        assert_ne!(
            sample_scene(&cfg, 7, 32, 48).unwrap(),
            sample_scene(&cfg, 8, 32, 48).unwrap()
        );
        let other = SamplerConfig::new(43);
        assert_ne!(
            sample_scene(&cfg, 7, 32, 48).unwrap(),
            sample_scene(&other, 7, 32, 48).unwrap()
        );
    }

    #[test]
    fn overrides_pin_values_without_shifting_others() {
        let mut cfg = SamplerConfig::new(1);
        let free = sample_scene(&cfg, 3, 16, 16).unwrap();
        cfg.overrides.set("D=10").unwrap();
        cfg.overrides.set("water=C3").unwrap();
        let pinned = sample_scene(&cfg, 3, 16, 16).unwrap();
        assert_eq!(pinned.depth_m(), 10.0);
        assert_eq!(pinned.water(), WaterType::C3);
        assert_eq!(pinned.kappa(), free.kappa());
        assert_eq!(pinned.surface_light(), free.surface_light());
    }

    #[test]
    fn override_parsing_errors() {
        let mut o = SceneOverrides::default();
        assert!(o.set("D").is_err());
        assert!(o.set("depth=3").is_err());
        assert!(o.set("E_S=0.8,0.9").is_err());
        assert!(o.set("kappa=abc").is_err());
        o.set("E_S=0.8,0.9,1").unwrap();
        assert_eq!(o.surface_light, Some([0.8, 0.9, 1.0]));
        o.set("center=3,4").unwrap();
        assert_eq!(o.light_center, Some([3.0, 4.0]));
    }

    #[test]
    fn out_of_range_override_is_config_error() {
        let mut cfg = SamplerConfig::new(0);
        cfg.overrides.set("D=30").unwrap();
        assert!(cfg.validate().is_err());
        let mut cfg = SamplerConfig::new(0);
        cfg.depth_range = (4.0, 10.0);
        assert!(cfg.validate().is_err());
        cfg.water_types.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn center_lies_on_a_pixel() {
        let cfg = SamplerConfig::new(5);
        for i in 0..200 {
            let s = sample_scene(&cfg, i, 3, 7).unwrap();
            let [x, y] = s.artificial().center();
            assert_eq!(x.fract(), 0.0);
            assert!(x < 7.0 && y < 3.0);
        }
    }
}
