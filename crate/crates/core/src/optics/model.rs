use crate::error::{Error, Result};

use super::{ArtificialLightSpec, OpticalScene, PlanarImage, WaterType};

/// Scene distance in meters, one channel, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap(PlanarImage);

impl DepthMap {
    pub fn new(image: PlanarImage) -> Result<Self> {
        if image.channels() != 1 {
            return Err(Error::Shape(format!(
                "depth map must have 1 channel, got {}",
                image.channels()
            )));
        }
        for y in 0..image.height() {
            for x in 0..image.width() {
                let d = image.get(y, x, 0);
                if d <= 0.0 {
                    return Err(Error::Domain(format!(
                        "non-positive depth {d} at pixel (y={y}, x={x})"
                    )));
                }
            }
        }
        Ok(Self(image))
    }

    pub fn constant(height: usize, width: usize, meters: f64) -> Result<Self> {
        Self::new(PlanarImage::filled(height, width, 1, meters)?)
    }

    pub fn image(&self) -> &PlanarImage {
        &self.0
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.0.get(y, x, 0)
    }
}

/// Per-channel fraction of scene radiance reaching the camera, in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionMap(PlanarImage);

impl TransmissionMap {
    pub fn new(image: PlanarImage) -> Result<Self> {
        if image.channels() != 3 {
            return Err(Error::Shape(format!(
                "transmission map must have 3 channels, got {}",
                image.channels()
            )));
        }
        if let Some(v) = image.data().iter().find(|&&v| !(v > 0.0 && v <= 1.0)) {
            return Err(Error::Domain(format!(
                "transmission value {v} outside (0, 1]"
            )));
        }
        Ok(Self(image))
    }

    /// Clamps arbitrary estimates into `[floor, 1]` before wrapping them.
    pub fn from_estimate(image: &PlanarImage, floor: f64) -> Result<Self> {
        let floor = floor.max(f64::MIN_POSITIVE);
        Self::new(image.map(|v| v.clamp(floor, 1.0))?)
    }

    pub fn image(&self) -> &PlanarImage {
        &self.0
    }

    pub fn into_image(self) -> PlanarImage {
        self.0
    }
}

/// Forward imaging model for one element: `t·J + (1 − t)·B`.
///
/// Shared by composition and the physical-consistency loss so both
/// evaluate the same floating-point expression.
#[inline]
pub fn forward_model(j: f64, b: f64, t: f64) -> f64 {
    t * j + (1.0 - t) * b
}

/// `t_λ(x) = (e^{−c_λ})^{d(x)}` per channel.
pub fn transmission_map(depth: &DepthMap, water: WaterType) -> TransmissionMap {
    let per_meter = water.per_meter_transmittance();
    let (h, w) = (depth.height(), depth.width());
    let mut data = Vec::with_capacity(h * w * 3);
    for y in 0..h {
        for x in 0..w {
            let d = depth.at(y, x);
            // Very deep pixels underflow; keep the (0, 1] invariant.
            data.extend(per_meter.iter().map(|t| t.powf(d).max(f64::MIN_POSITIVE)));
        }
    }
    TransmissionMap(PlanarImage::from_parts_unchecked(h, w, 3, data))
}

/// Unnormalised 2-D Gaussian beam whose value at the center equals the
/// per-channel peak. The spread is `sigma` times the image diagonal.
pub fn artificial_light_field(
    spec: &ArtificialLightSpec,
    height: usize,
    width: usize,
) -> Result<PlanarImage> {
    spec.validate_for(height, width)?;
    let diag = ((height * height + width * width) as f64).sqrt();
    let s = spec.sigma() * diag;
    let denom = 2.0 * s * s;
    let [cx, cy] = spec.center();
    let peak = spec.peak();
    PlanarImage::from_fn(height, width, 3, |y, x, c| {
        let dx = x as f64 - cx;
        let dy = y as f64 - cy;
        peak[c] * (-(dx * dx + dy * dy) / denom).exp()
    })
}

/// Underwater illumination from surface light attenuated over the water
/// depth plus the artificial beam attenuated over the scene distance.
pub fn illumination_field(scene: &OpticalScene, depth: &DepthMap) -> Result<PlanarImage> {
    let artificial = artificial_light_field(scene.artificial(), depth.height(), depth.width())?;
    illumination_with_artificial(scene, &artificial, depth)
}

/// Same as [`illumination_field`] with a precomputed artificial light map.
pub fn illumination_with_artificial(
    scene: &OpticalScene,
    artificial: &PlanarImage,
    depth: &DepthMap,
) -> Result<PlanarImage> {
    if artificial.channels() != 3 || !artificial.same_extent(depth.image()) {
        return Err(Error::Shape(format!(
            "artificial light {} vs depth {}",
            artificial.shape_string(),
            depth.image().shape_string()
        )));
    }
    let per_meter = scene.water().per_meter_transmittance();
    let surface = scene.surface_light();
    let ambient: [f64; 3] =
        std::array::from_fn(|c| scene.omega_a() * surface[c] * per_meter[c].powf(scene.depth_m()));
    let omega_b = scene.omega_b();
    PlanarImage::from_fn(depth.height(), depth.width(), 3, |y, x, c| {
        ambient[c] + omega_b * artificial.get(y, x, c) * per_meter[c].powf(depth.at(y, x))
    })
}

/// `B_λ(x) = κ·E_λ(x) / c_λ`. Not clamped; may exceed one.
pub fn background_light_field(
    scene: &OpticalScene,
    illumination: &PlanarImage,
) -> Result<PlanarImage> {
    if illumination.channels() != 3 {
        return Err(Error::Shape("illumination must have 3 channels".into()));
    }
    let atten = scene.water().attenuation();
    let kappa = scene.kappa();
    let mut out = illumination.clone();
    for (i, v) in out.data_mut().iter_mut().enumerate() {
        *v = kappa * *v / atten[i % 3];
    }
    PlanarImage::new(out.height(), out.width(), 3, out.into_data())
}

/// Every map produced while degrading one clean image.
#[derive(Debug, Clone, PartialEq)]
pub struct Composite {
    /// Degraded underwater image `I`.
    pub underwater: PlanarImage,
    /// Clean image relit by the underwater illumination, `J = J^gt·E/E^S`.
    pub relit: PlanarImage,
    pub background: PlanarImage,
    pub transmission: TransmissionMap,
    pub illumination: PlanarImage,
}

/// Degrades an in-air image `clean` (values in `[0, 1]`) into an
/// underwater observation and returns all intermediate ground truth.
pub fn compose_underwater(
    clean: &PlanarImage,
    scene: &OpticalScene,
    depth: &DepthMap,
) -> Result<Composite> {
    if clean.channels() != 3 {
        return Err(Error::Shape(format!(
            "clean image must have 3 channels, got {}",
            clean.channels()
        )));
    }
    if !clean.same_extent(depth.image()) {
        return Err(Error::Shape(format!(
            "clean {} vs depth {}",
            clean.shape_string(),
            depth.image().shape_string()
        )));
    }
    if let Some(v) = clean.data().iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::Domain(format!(
            "clean image value {v} outside [0, 1]"
        )));
    }

    let transmission = transmission_map(depth, scene.water());
    let illumination = illumination_field(scene, depth)?;
    let background = background_light_field(scene, &illumination)?;
    let surface = scene.surface_light();

    let n = clean.len();
    let mut relit = Vec::with_capacity(n);
    let mut underwater = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % 3;
        let j = clean.data()[i] * illumination.data()[i] / surface[c];
        relit.push(j);
        underwater.push(forward_model(
            j,
            background.data()[i],
            transmission.image().data()[i],
        ));
    }
    let (h, w) = (clean.height(), clean.width());
    Ok(Composite {
        underwater: PlanarImage::new(h, w, 3, underwater)?,
        relit: PlanarImage::new(h, w, 3, relit)?,
        background,
        transmission,
        illumination,
    })
}

/// Inverts the imaging model: `J = (I − B·(1 − t')) / t'` with
/// `t' = max(t, t_floor)`. The output is not clamped.
pub fn invert_to_clean(
    observed: &PlanarImage,
    background: &PlanarImage,
    transmission: &TransmissionMap,
    t_floor: f64,
) -> Result<PlanarImage> {
    if !(t_floor > 0.0 && t_floor <= 1.0) {
        return Err(Error::Domain(format!("t_floor {t_floor} outside (0, 1]")));
    }
    observed.ensure_same_shape(background, "observed vs background")?;
    observed.ensure_same_shape(transmission.image(), "observed vs transmission")?;
    let data = observed
        .data()
        .iter()
        .zip(background.data())
        .zip(transmission.image().data())
        .map(|((&i, &b), &t)| {
            let t = t.max(t_floor);
            (i - b * (1.0 - t)) / t
        })
        .collect();
    PlanarImage::new(
        observed.height(),
        observed.width(),
        observed.channels(),
        data,
    )
}
