//! Mask Gaussian levels, either read from a mask mip chain or derived on
//! the fly from one smooth mask.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::pyramid::MipChain;

/// A smooth single-channel field (alpha ramp, distance field) turned into
/// per-level masks by clamped remapping around a threshold.
///
/// `scale` is the source-value span of the level-0 transition. For a field
/// stored in `[0, 1]` whose value changes by one step per texel, `1 / width`
/// gives a one-texel transition at level 0; level `n` is `2^n` times wider.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicMask {
    source: Image,
    threshold: f32,
    scale: f32,
}

impl DynamicMask {
    pub fn new(source: Image, threshold: f32, scale: f32) -> Result<Self> {
        if source.channels() != 1 {
            return Err(Error::invalid(format!(
                "dynamic mask source must be single-channel, got {} channels",
                source.channels()
            )));
        }
        check_scale(scale)?;
        if !threshold.is_finite() {
            return Err(Error::invalid("dynamic mask threshold must be finite"));
        }
        Ok(DynamicMask { source, threshold, scale })
    }

    pub fn source(&self) -> &Image {
        &self.source
    }

    pub fn threshold(&self) -> f32 {
        self.threshold
    }

    pub fn scale(&self) -> f32 {
        self.scale
    }
}

fn check_scale(scale: f32) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("dynamic mask scale must be > 0, got {scale}")))
    }
}

/// `clamp((v - t) / (s 2^n) + 0.5, 0, 1)` for a single value.
#[inline]
pub fn remap(value: f32, threshold: f32, scale: f32, level: usize) -> f32 {
    let width = scale * (level as f32).exp2();
    ((value - threshold) / width + 0.5).clamp(0.0, 1.0)
}

/// Approximate mask Gaussian level `n`, evaluated at source resolution.
pub fn dynamic_mask_level(dm: &DynamicMask, n: usize) -> Result<Image> {
    remap_field(&dm.source, dm.threshold, dm.scale, n)
}

/// The same remap applied to an arbitrary single-channel field.
pub fn remap_field(field: &Image, threshold: f32, scale: f32, n: usize) -> Result<Image> {
    check_scale(scale)?;
    Ok(field.map(|v| remap(v, threshold, scale, n)))
}

/// Mask Gaussian level `level` brought back to level-0 resolution.
pub fn mask_levels_from_chain(chain: &MipChain, level: usize) -> Result<Image> {
    chain.level_at(level, 0)
}
