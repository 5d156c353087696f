//! Multi-channel floating point image used for textures, masks and
//! Laplacian levels alike.

use crate::error::{Error, Result};

/// How texel reads outside the image are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Addressing {
    /// Periodic addressing, the natural choice for tileable textures.
    #[default]
    Wrap,
    /// Clamp-to-edge, for masks that do not tile.
    Clamp,
}

impl Addressing {
    #[inline]
    pub fn resolve(self, i: i64, len: usize) -> usize {
        let n = len as i64;
        match self {
            Addressing::Wrap => i.rem_euclid(n) as usize,
            Addressing::Clamp => i.clamp(0, n - 1) as usize,
        }
    }
}

/// Row-major, interleaved `f32` image with 1 to 4 channels.
///
/// Samples are nominally in `[0, 1]` but nothing clamps them: Laplacian
/// levels are signed. All samples are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f32>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        check_shape(width, height, channels)?;
        if data.len() != width * height * channels {
            return Err(Error::invalid(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {pos}")));
        }
        Ok(Image { width, height, channels, data })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f32) -> Result<Self> {
        check_shape(width, height, channels)?;
        if !value.is_finite() {
            return Err(Error::invalid("fill value must be finite"));
        }
        Ok(Image { width, height, channels, data: vec![value; width * height * channels] })
    }

    /// Builds an image from a per-sample function of `(x, y, channel)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f32,
    ) -> Result<Self> {
        check_shape(width, height, channels)?;
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Image::new(width, height, channels, data)
    }

    /// Internal constructor for results of finite arithmetic on valid images.
    pub(crate) fn from_raw(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), width * height * channels);
        Image { width, height, channels, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn texel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f32] {
        let start = (y * self.width + x) * self.channels;
        &self.data[start..start + self.channels]
    }

    /// Reads a sample with out-of-range coordinates resolved by `addressing`.
    #[inline]
    pub fn get_addressed(&self, x: i64, y: i64, c: usize, addressing: Addressing) -> f32 {
        let xi = addressing.resolve(x, self.width);
        let yi = addressing.resolve(y, self.height);
        self.get(xi, yi, c)
    }

    /// Bilinear sample at normalized texture coordinates, texel centers at
    /// `(i + 0.5) / width`.
    pub fn sample_bilinear(&self, u: f32, v: f32, addressing: Addressing, out: &mut [f32]) {
        let px = u * self.width as f32 - 0.5;
        let py = v * self.height as f32 - 0.5;
        let x0 = px.floor();
        let y0 = py.floor();
        let tx = px - x0;
        let ty = py - y0;
        let (x0, y0) = (x0 as i64, y0 as i64);
        for (c, o) in out.iter_mut().enumerate().take(self.channels) {
            let a = self.get_addressed(x0, y0, c, addressing);
            let b = self.get_addressed(x0 + 1, y0, c, addressing);
            let d = self.get_addressed(x0, y0 + 1, c, addressing);
            let e = self.get_addressed(x0 + 1, y0 + 1, c, addressing);
            let top = a + tx * (b - a);
            let bottom = d + tx * (e - d);
            *o = top + ty * (bottom - top);
        }
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub(crate) fn ensure_same_shape(&self, other: &Image, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{what}: shape {}x{}x{} does not match {}x{}x{}",
                other.width, other.height, other.channels, self.width, self.height, self.channels
            )))
        }
    }

    pub fn map(&self, mut f: impl FnMut(f32) -> f32) -> Image {
        let data = self.data.iter().map(|&v| f(v)).collect();
        Image::from_raw(self.width, self.height, self.channels, data)
    }

    /// Element-wise combination of two images of identical shape.
    pub fn zip_map(&self, other: &Image, mut f: impl FnMut(f32, f32) -> f32) -> Result<Image> {
        self.ensure_same_shape(other, "zip_map")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Image::from_raw(self.width, self.height, self.channels, data))
    }

    pub fn add(&self, other: &Image) -> Result<Image> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Image) -> Result<Image> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, k: f32) -> Image {
        self.map(|v| v * k)
    }

    /// Largest absolute sample difference between two images of equal shape.
    pub fn max_abs_diff(&self, other: &Image) -> Result<f32> {
        self.ensure_same_shape(other, "max_abs_diff")?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f32::max))
    }

    /// Copies a single channel into a new one-channel image.
    pub fn channel(&self, c: usize) -> Result<Image> {
        if c >= self.channels {
            return Err(Error::invalid(format!("channel {c} out of range")));
        }
        let data = self.data.iter().skip(c).step_by(self.channels).copied().collect();
        Ok(Image::from_raw(self.width, self.height, 1, data))
    }

    pub fn clamp01(&self) -> Image {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn min_max(&self) -> (f32, f32) {
        self.data
            .iter()
            .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

fn check_shape(width: usize, height: usize, channels: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid(format!("image must be at least 1x1, got {width}x{height}")));
    }
    if !(1..=4).contains(&channels) {
        return Err(Error::invalid(format!("channel count must be 1..=4, got {channels}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_samples() {
        assert!(Image::new(0, 4, 1, vec![]).is_err());
        assert!(Image::new(2, 2, 5, vec![0.0; 20]).is_err());
        assert!(Image::new(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(Image::new(1, 1, 1, vec![f32::NAN]).is_err());
        assert!(Image::filled(1, 1, 1, f32::INFINITY).is_err());
    }

    #[test]
    fn addressing_modes() {
        assert_eq!(Addressing::Wrap.resolve(-1, 4), 3);
        assert_eq!(Addressing::Wrap.resolve(5, 4), 1);
        assert_eq!(Addressing::Clamp.resolve(-3, 4), 0);
        assert_eq!(Addressing::Clamp.resolve(9, 4), 3);
    }

    #[test]
    fn bilinear_sample_at_centers_and_midpoints() {
        let img = Image::new(2, 1, 1, vec![0.0, 1.0]).unwrap();
        let mut out = [0.0];
        img.sample_bilinear(0.25, 0.5, Addressing::Wrap, &mut out);
        assert_eq!(out[0], 0.0);
        img.sample_bilinear(0.5, 0.5, Addressing::Wrap, &mut out);
        assert_eq!(out[0], 0.5);
        // halfway across the wrap seam
        img.sample_bilinear(0.0, 0.5, Addressing::Wrap, &mut out);
        assert_eq!(out[0], 0.5);
        img.sample_bilinear(0.0, 0.5, Addressing::Clamp, &mut out);
        assert_eq!(out[0], 0.0);
    }

    #[test]
    fn channel_extraction() {
        let img = Image::from_fn(2, 2, 3, |x, y, c| (x + 2 * y) as f32 + 10.0 * c as f32).unwrap();
        let g = img.channel(1).unwrap();
        assert_eq!(g.data(), &[10.0, 11.0, 12.0, 13.0]);
        assert!(img.channel(3).is_err());
    }
}
