use crate::error::{Error, Result};

/// Dense `height × width × channels` image of finite reals, stored
/// interleaved in row-major order (`[y][x][c]`).
///
/// Values are linear intensities with nominal range `[0, 1]`. Values above
/// one (and negative values, for gradients and differences) are permitted;
/// clamping only happens at export.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarImage {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl PlanarImage {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::Shape(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if height == 0 || width == 0 {
            return Err(Error::Shape(format!("empty image {height}x{width}")));
        }
        let expected = height
            .checked_mul(width)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| Error::Shape("image dimensions overflow".into()))?;
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "{height}x{width}x{channels} needs {expected} values, got {}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            let (y, x, c) = unravel(i, width, channels);
            return Err(Error::Domain(format!(
                "non-finite value {} at (y={y}, x={x}, c={c})",
                data[i]
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(
            height,
            width,
            channels,
            vec![value; height * width * channels],
        )
    }

    pub fn zeros_like(other: &PlanarImage) -> Self {
        Self {
            height: other.height,
            width: other.width,
            channels: other.channels,
            data: vec![0.0; other.data.len()],
        }
    }

    /// Builds an image by evaluating `f(y, x, c)` at every element.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(y, x, c));
                }
            }
        }
        Self::new(height, width, channels, data)
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn index(&self, y: usize, x: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[self.index(y, x, c)]
    }

    /// Writes one element. Non-finite values are rejected so the type
    /// invariant cannot be broken through mutation.
    pub fn set(&mut self, y: usize, x: usize, c: usize, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite value {value} at (y={y}, x={x}, c={c})"
            )));
        }
        let i = self.index(y, x, c);
        self.data[i] = value;
        Ok(())
    }

    pub fn same_shape(&self, other: &PlanarImage) -> bool {
        self.height == other.height && self.width == other.width && self.channels == other.channels
    }

    pub fn same_extent(&self, other: &PlanarImage) -> bool {
        self.height == other.height && self.width == other.width
    }

    pub fn ensure_same_shape(&self, other: &PlanarImage, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what}: {} vs {}",
                self.shape_string(),
                other.shape_string()
            )))
        }
    }

    pub fn shape_string(&self) -> String {
        format!("{}x{}x{}", self.height, self.width, self.channels)
    }

    /// Elementwise map; fails if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.height,
            self.width,
            self.channels,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Elementwise combination of two same-shaped images.
    pub fn zip_map(&self, other: &PlanarImage, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_same_shape(other, "zip_map")?;
        Self::new(
            self.height,
            self.width,
            self.channels,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Extracts channel `c` as a single-channel image.
    pub fn channel(&self, c: usize) -> Self {
        assert!(c < self.channels, "channel {c} out of range");
        Self {
            height: self.height,
            width: self.width,
            channels: 1,
            data: self
                .data
                .iter()
                .skip(c)
                .step_by(self.channels)
                .copied()
                .collect(),
        }
    }

    /// Copy with every value clamped to `[0, 1]`, as done at export.
    pub fn clamped_unit(&self) -> Self {
        Self {
            data: self.data.iter().map(|v| v.clamp(0.0, 1.0)).collect(),
            ..self.clone()
        }
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn flip_horizontal(&self) -> Self {
        Self::from_fn(self.height, self.width, self.channels, |y, x, c| {
            self.get(y, self.width - 1 - x, c)
        })
        .expect("flip preserves invariants")
    }

    pub fn flip_vertical(&self) -> Self {
        Self::from_fn(self.height, self.width, self.channels, |y, x, c| {
            self.get(self.height - 1 - y, x, c)
        })
        .expect("flip preserves invariants")
    }

    /// Rotates by 90° counter-clockwise; the result is `width × height`.
    pub fn rotate90(&self) -> Self {
        Self::from_fn(self.width, self.height, self.channels, |y, x, c| {
            self.get(x, self.width - 1 - y, c)
        })
        .expect("rotation preserves invariants")
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Builds an image from data the caller has already produced under the
    /// same shape. Used on hot paths where finiteness is guaranteed by
    /// construction; debug builds still verify it.
    pub(crate) fn from_parts_unchecked(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(data.len(), height * width * channels);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self {
            height,
            width,
            channels,
            data,
        }
    }
}

fn unravel(i: usize, width: usize, channels: usize) -> (usize, usize, usize) {
    let c = i % channels;
    let p = i / channels;
    (p / width, p % width, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_channels_and_length() {
        assert!(PlanarImage::new(2, 2, 2, vec![0.0; 8]).is_err());
        assert!(PlanarImage::new(2, 2, 3, vec![0.0; 11]).is_err());
        assert!(PlanarImage::new(0, 2, 1, vec![]).is_err());
    }

    #[test]
    fn rejects_non_finite_and_names_pixel() {
        let mut data = vec![0.0; 12];
        data[7] = f64::NAN;
        let err = PlanarImage::new(2, 2, 3, data).unwrap_err().to_string();
        assert!(err.contains("y=1, x=0, c=1"), "{err}");
    }

    #[test]
    fn set_rejects_infinity() {
        let mut img = PlanarImage::filled(2, 2, 1, 0.5).unwrap();
        assert!(img.set(0, 0, 0, f64::INFINITY).is_err());
        assert_eq!(img.get(0, 0, 0), 0.5);
    }

    #[test]
    fn channel_extraction_and_layout() {
        let img = PlanarImage::from_fn(2, 3, 3, |y, x, c| (y * 100 + x * 10 + c) as f64).unwrap();
        assert_eq!(img.get(1, 2, 1), 121.0);
        let g = img.channel(1);
        assert_eq!(g.channels(), 1);
        assert_eq!(g.get(1, 2, 0), 121.0);
    }

    #[test]
    fn geometric_transforms_compose_to_identity() {
        let img = PlanarImage::from_fn(3, 5, 1, |y, x, _| (y * 5 + x) as f64).unwrap();
        assert_eq!(img.flip_horizontal().flip_horizontal(), img);
        assert_eq!(img.flip_vertical().flip_vertical(), img);
        let r = img.rotate90();
        assert_eq!((r.height(), r.width()), (5, 3));
        assert_eq!(r.rotate90().rotate90().rotate90(), img);
    }
}
