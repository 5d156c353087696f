//! PNG (8/16-bit) and OpenEXR (32-bit float, linear) image files.
//!
//! PNG samples map to `[0, 1]` by dividing by the format maximum. EXR holds
//! RGB or RGBA only: one-channel images are written as gray RGB and
//! two-channel images as gray RGB plus alpha.

use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageBuffer, ImageError, ImageFormat, Luma, LumaA, Rgb, Rgba};

use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SaveOptions {
    /// Clamp samples into `[0, 1]` before writing. Without it, PNG output
    /// rejects out-of-range samples and EXR output stores them as-is.
    pub clamp: bool,
    /// Encode color channels with the sRGB transfer curve (alpha stays linear).
    pub srgb: bool,
}

impl SaveOptions {
    pub fn clamped() -> Self {
        SaveOptions { clamp: true, srgb: false }
    }
}

/// sRGB electro-optical transfer: encoded value to linear.
pub fn srgb_to_linear(v: f32) -> f32 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

pub fn linear_to_srgb(v: f32) -> f32 {
    if v <= 0.003_130_8 {
        v * 12.92
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("png") => Ok(ImageFormat::Png),
        Some("exr") => Ok(ImageFormat::OpenExr),
        other => Err(Error::UnsupportedFormat(format!(
            "{} (extension {:?}; expected .png or .exr)",
            path.display(),
            other.unwrap_or("")
        ))),
    }
}

/// Loads an image as linear floats. With `srgb_decode`, color channels are
/// converted from sRGB to linear.
pub fn load_image(path: impl AsRef<Path>, srgb_decode: bool) -> Result<Image> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::NotFound(path.to_path_buf()));
    }
    let format = format_for(path)?;
    let bytes = std::fs::read(path).map_err(|e| map_image_error(path, ImageError::IoError(e)))?;
    let decoded = image::load_from_memory_with_format(&bytes, format)
        .map_err(|e| map_image_error(path, e))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let (channels, data): (usize, Vec<f32>) = match decoded {
        DynamicImage::ImageLuma8(b) => (1, scale_u8(b.into_raw())),
        DynamicImage::ImageLumaA8(b) => (2, scale_u8(b.into_raw())),
        DynamicImage::ImageRgb8(b) => (3, scale_u8(b.into_raw())),
        DynamicImage::ImageRgba8(b) => (4, scale_u8(b.into_raw())),
        DynamicImage::ImageLuma16(b) => (1, scale_u16(b.into_raw())),
        DynamicImage::ImageLumaA16(b) => (2, scale_u16(b.into_raw())),
        DynamicImage::ImageRgb16(b) => (3, scale_u16(b.into_raw())),
        DynamicImage::ImageRgba16(b) => (4, scale_u16(b.into_raw())),
        DynamicImage::ImageRgb32F(b) => (3, b.into_raw()),
        DynamicImage::ImageRgba32F(b) => (4, b.into_raw()),
        other => (4, other.to_rgba32f().into_raw()),
    };
    let img = Image::new(w, h, channels, data).map_err(|e| Error::Corrupt {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(if srgb_decode { apply_to_color(&img, srgb_to_linear) } else { img })
}

fn scale_u8(raw: Vec<u8>) -> Vec<f32> {
    raw.into_iter().map(|v| v as f32 / 255.0).collect()
}

fn scale_u16(raw: Vec<u16>) -> Vec<f32> {
    raw.into_iter().map(|v| v as f32 / 65535.0).collect()
}

fn has_alpha(channels: usize) -> bool {
    channels == 2 || channels == 4
}

fn apply_to_color(img: &Image, f: impl Fn(f32) -> f32) -> Image {
    let ch = img.channels();
    let alpha = has_alpha(ch);
    let data = img
        .data()
        .iter()
        .enumerate()
        .map(|(i, &v)| if alpha && i % ch == ch - 1 { v } else { f(v) })
        .collect();
    Image::from_raw(img.width(), img.height(), ch, data)
}

fn map_image_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Error::NotFound(path.to_path_buf())
        }
        ImageError::Unsupported(e) => Error::UnsupportedFormat(format!("{}: {e}", path.display())),
        other => Error::Corrupt { path: path.to_path_buf(), message: other.to_string() },
    }
}

pub fn save_image(img: &Image, path: impl AsRef<Path>, opts: SaveOptions) -> Result<()> {
    let path = path.as_ref();
    let format = format_for(path)?;
    let mut img = if opts.clamp { img.clamp01() } else { img.clone() };
    if opts.srgb {
        img = apply_to_color(&img, |v| linear_to_srgb(v.max(0.0)));
    }
    let write_err = |e: ImageError| Error::Write { path: PathBuf::from(path), message: e.to_string() };
    let (w, h) = (img.width() as u32, img.height() as u32);
    match format {
        ImageFormat::Png => {
            let (lo, hi) = img.min_max();
            if lo < 0.0 || hi > 1.0 {
                return Err(Error::invalid(format!(
                    "PNG output needs samples in [0, 1], found [{lo}, {hi}]; enable clamping"
                )));
            }
            let bytes: Vec<u8> = img.data().iter().map(|&v| (v * 255.0).round() as u8).collect();
            let dynamic = match img.channels() {
                1 => DynamicImage::ImageLuma8(ImageBuffer::<Luma<u8>, _>::from_raw(w, h, bytes).unwrap()),
                2 => DynamicImage::ImageLumaA8(ImageBuffer::<LumaA<u8>, _>::from_raw(w, h, bytes).unwrap()),
                3 => DynamicImage::ImageRgb8(ImageBuffer::<Rgb<u8>, _>::from_raw(w, h, bytes).unwrap()),
                _ => DynamicImage::ImageRgba8(ImageBuffer::<Rgba<u8>, _>::from_raw(w, h, bytes).unwrap()),
            };
            dynamic.save_with_format(path, ImageFormat::Png).map_err(write_err)
        }
        _ => {
            let ch = img.channels();
            let dynamic = if has_alpha(ch) {
                let data: Vec<f32> = img
                    .data()
                    .chunks(ch)
                    .flat_map(|p| if ch == 2 { [p[0], p[0], p[0], p[1]] } else { [p[0], p[1], p[2], p[3]] })
                    .collect();
                DynamicImage::ImageRgba32F(ImageBuffer::<Rgba<f32>, _>::from_raw(w, h, data).unwrap())
            } else {
                let data: Vec<f32> = img
                    .data()
                    .chunks(ch)
                    .flat_map(|p| if ch == 1 { [p[0]; 3] } else { [p[0], p[1], p[2]] })
                    .collect();
                DynamicImage::ImageRgb32F(ImageBuffer::<Rgb<f32>, _>::from_raw(w, h, data).unwrap())
            };
            dynamic.save_with_format(path, ImageFormat::OpenExr).map_err(write_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn srgb_curve_matches_closed_form() {
        let v = srgb_to_linear(188.0 / 255.0);
        assert!((v - 0.5029).abs() < 1e-4, "{v}");
        for i in 0..=255 {
            let e = i as f32 / 255.0;
            assert!((linear_to_srgb(srgb_to_linear(e)) - e).abs() < 1e-5);
        }
    }

    #[test]
    fn unknown_extension_is_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bmp");
        std::fs::write(&p, b"BM").unwrap();
        assert!(matches!(load_image(&p, false), Err(Error::UnsupportedFormat(_))));
        let img = Image::filled(2, 2, 1, 0.5).unwrap();
        assert!(matches!(save_image(&img, &p, SaveOptions::clamped()), Err(Error::UnsupportedFormat(_))));
    }
}
