use crate::error::{check_range, Error, Result};

use super::WaterType;

pub const DEPTH_RANGE_M: (f64, f64) = (5.0, 20.0);
pub const SURFACE_LIGHT_RANGE: (f64, f64) = (0.7, 1.0);
pub const ARTIFICIAL_PEAK_RANGE: (f64, f64) = (0.7, 1.0);
pub const SIGMA_RANGE: (f64, f64) = (0.2, 1.1);
pub const OMEGA_RANGE: (f64, f64) = (0.0, 1.0);
pub const KAPPA_RANGE: (f64, f64) = (0.7, 1.1);

/// Gaussian beam of an artificial light source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArtificialLightSpec {
    center: [f64; 2],
    peak: [f64; 3],
    sigma: f64,
}

impl ArtificialLightSpec {
    /// `center` is `[x, y]` in pixels; `peak` is per channel R, G, B;
    /// `sigma` is the beam standard deviation as a fraction of the image
    /// diagonal.
    pub fn new(center: [f64; 2], peak: [f64; 3], sigma: f64) -> Result<Self> {
        for v in center {
            if !v.is_finite() {
                return Err(Error::Domain(format!("light center {center:?} not finite")));
            }
        }
        for p in peak {
            check_range("E_art", p, ARTIFICIAL_PEAK_RANGE.0, ARTIFICIAL_PEAK_RANGE.1)?;
        }
        check_range("sigma", sigma, SIGMA_RANGE.0, SIGMA_RANGE.1)?;
        Ok(Self {
            center,
            peak,
            sigma,
        })
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn peak(&self) -> [f64; 3] {
        self.peak
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Checks that the center lies inside a `height × width` pixel grid.
    pub fn validate_for(&self, height: usize, width: usize) -> Result<()> {
        let [x, y] = self.center;
        if x < 0.0 || y < 0.0 || x > (width - 1) as f64 || y > (height - 1) as f64 {
            return Err(Error::Domain(format!(
                "light center ({x}, {y}) outside {height}x{width} image"
            )));
        }
        Ok(())
    }
}

/// Every physical parameter needed to degrade one clean image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalScene {
    water: WaterType,
    depth_m: f64,
    surface_light: [f64; 3],
    artificial: ArtificialLightSpec,
    omega_a: f64,
    omega_b: f64,
    kappa: f64,
}

impl OpticalScene {
    /// Builds a scene; `omega_b` is derived as `1 − omega_a`.
    pub fn new(
        water: WaterType,
        depth_m: f64,
        surface_light: [f64; 3],
        artificial: ArtificialLightSpec,
        omega_a: f64,
        kappa: f64,
    ) -> Result<Self> {
        check_range("omega_a", omega_a, OMEGA_RANGE.0, OMEGA_RANGE.1)?;
        Self::with_weights(
            water,
            depth_m,
            surface_light,
            artificial,
            omega_a,
            1.0 - omega_a,
            kappa,
        )
    }

    /// Builds a scene from explicit weights, as read back from metadata.
    /// The weights must sum to exactly one.
    pub fn with_weights(
        water: WaterType,
        depth_m: f64,
        surface_light: [f64; 3],
        artificial: ArtificialLightSpec,
        omega_a: f64,
        omega_b: f64,
        kappa: f64,
    ) -> Result<Self> {
        check_range("D_m", depth_m, DEPTH_RANGE_M.0, DEPTH_RANGE_M.1)?;
        for e in surface_light {
            check_range("E_S", e, SURFACE_LIGHT_RANGE.0, SURFACE_LIGHT_RANGE.1)?;
        }
        check_range("omega_a", omega_a, OMEGA_RANGE.0, OMEGA_RANGE.1)?;
        check_range("omega_b", omega_b, OMEGA_RANGE.0, OMEGA_RANGE.1)?;
        if omega_a + omega_b != 1.0 {
            return Err(Error::Domain(format!(
                "omega_a + omega_b = {} must equal 1",
                omega_a + omega_b
            )));
        }
        check_range("kappa", kappa, KAPPA_RANGE.0, KAPPA_RANGE.1)?;
        // Re-validate in case the light spec was built elsewhere.
        let artificial =
            ArtificialLightSpec::new(artificial.center, artificial.peak, artificial.sigma)?;
        Ok(Self {
            water,
            depth_m,
            surface_light,
            artificial,
            omega_a,
            omega_b,
            kappa,
        })
    }

    pub fn water(&self) -> WaterType {
        self.water
    }

    pub fn depth_m(&self) -> f64 {
        self.depth_m
    }

    pub fn surface_light(&self) -> [f64; 3] {
        self.surface_light
    }

    pub fn artificial(&self) -> &ArtificialLightSpec {
        &self.artificial
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}
