//! Per-band texture blending.
//!
//! Every texture contributes its band-pass levels, read from pairs of mip
//! levels, each weighted by the mask Gaussian level of the same index; the
//! coarsest fetched Gaussian level is blended with the coarsest mask level.
//!
//! Mask convention: with a single mask `m` over two textures, texture 0 is
//! weighted by `1 - m` and texture 1 by `m` at every level.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{Addressing, Image};
use crate::mask::{remap, DynamicMask};
use crate::pyramid::{build_mip_chain, downsample_with, FilterKind, MipChain};

/// Tolerance on the per-texel sum of multi-texture mask weights. Sums
/// within it are renormalized, anything further off is rejected.
pub const PARTITION_TOLERANCE: f32 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlendParams {
    /// Number of blended Laplacian levels; 0 is a pointwise linear blend.
    pub num_levels: usize,
    /// Filter used when chains are built from plain images.
    pub filter: FilterKind,
    /// Build bands from mip levels two apart (requires even `num_levels`).
    pub skip_levels: bool,
    /// Clamp the result to `[0, 1]`.
    pub clamp_output: bool,
    /// Minification level; the output is produced at mip level `floor(lod)`.
    pub lod: f32,
    /// Read mask levels `k..=n + k` instead of `0..=n`. Blends more
    /// aggressively with fewer levels but can ghost.
    pub mask_level_bias: usize,
}

impl Default for BlendParams {
    fn default() -> Self {
        BlendParams {
            num_levels: 4,
            filter: FilterKind::Box,
            skip_levels: false,
            clamp_output: true,
            lod: 0.0,
            mask_level_bias: 0,
        }
    }
}

impl BlendParams {
    pub fn with_levels(num_levels: usize) -> Self {
        BlendParams { num_levels, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MaskSource {
    Chain(MipChain),
    Dynamic(DynamicMask),
}

impl MaskSource {
    fn dimensions(&self) -> (usize, usize) {
        match self {
            MaskSource::Chain(c) => c.base().dimensions(),
            MaskSource::Dynamic(d) => d.source().dimensions(),
        }
    }

    fn channels(&self) -> usize {
        match self {
            MaskSource::Chain(c) => c.base().channels(),
            MaskSource::Dynamic(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// One mask over exactly two textures.
    Pair(MaskSource),
    /// One mask per texture.
    PerTexture(Vec<MaskSource>),
}

/// Textures and their weight fields, dimensionally checked.
#[derive(Clone, Debug, PartialEq)]
pub struct BlendInput {
    textures: Vec<MipChain>,
    weights: Weights,
}

impl BlendInput {
    pub fn new(textures: Vec<MipChain>, weights: Weights) -> Result<Self> {
        if textures.len() < 2 {
            return Err(Error::invalid("blending needs at least two textures"));
        }
        let first = textures[0].base();
        for (i, t) in textures.iter().enumerate().skip(1) {
            if !t.base().same_shape(first) {
                return Err(Error::invalid(format!("texture {i} does not match texture 0 in shape")));
            }
        }
        let masks: Vec<&MaskSource> = match &weights {
            Weights::Pair(m) => {
                if textures.len() != 2 {
                    return Err(Error::invalid(format!(
                        "a single mask blends two textures, got {}",
                        textures.len()
                    )));
                }
                vec![m]
            }
            Weights::PerTexture(ms) => {
                if ms.len() != textures.len() {
                    return Err(Error::invalid(format!(
                        "{} textures need {} masks, got {}",
                        textures.len(),
                        textures.len(),
                        ms.len()
                    )));
                }
                ms.iter().collect()
            }
        };
        for (i, m) in masks.iter().enumerate() {
            if m.dimensions() != first.dimensions() {
                return Err(Error::invalid(format!("mask {i} does not match the texture size")));
            }
            if m.channels() != 1 && m.channels() != first.channels() {
                return Err(Error::invalid(format!(
                    "mask {i} must have 1 or {} channels, has {}",
                    first.channels(),
                    m.channels()
                )));
            }
        }
        Ok(BlendInput { textures, weights })
    }

    /// Two textures and one mask chain.
    pub fn pair(a: MipChain, b: MipChain, mask: MipChain) -> Result<Self> {
        BlendInput::new(vec![a, b], Weights::Pair(MaskSource::Chain(mask)))
    }

    /// Two textures and one dynamic mask.
    pub fn pair_dynamic(a: MipChain, b: MipChain, mask: DynamicMask) -> Result<Self> {
        BlendInput::new(vec![a, b], Weights::Pair(MaskSource::Dynamic(mask)))
    }

    /// Builds full mip chains with `filter` for two textures and a mask image.
    pub fn from_images(a: &Image, b: &Image, mask: &Image, filter: FilterKind) -> Result<Self> {
        let chain = |img: &Image| build_mip_chain(img, filter, usize::MAX);
        BlendInput::pair(chain(a)?, chain(b)?, chain(mask)?)
    }

    pub fn textures(&self) -> &[MipChain] {
        &self.textures
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }
}

/// Pointwise `a (1 - m) + b m`. `m` has one channel or as many as `a`.
pub fn linear_blend(a: &Image, b: &Image, m: &Image) -> Result<Image> {
    a.ensure_same_shape(b, "linear_blend")?;
    if m.dimensions() != a.dimensions() || (m.channels() != 1 && m.channels() != a.channels()) {
        return Err(Error::invalid("linear_blend: mask shape does not match the textures"));
    }
    let ch = a.channels();
    let mch = m.channels();
    let mut out = vec![0.0f32; a.data().len()];
    for (p, px) in out.chunks_mut(ch).enumerate() {
        for (c, o) in px.iter_mut().enumerate() {
            let i = p * ch + c;
            let w = m.data()[p * mch + if mch == 1 { 0 } else { c }];
            *o = a.data()[i] * (1.0 - w) + b.data()[i] * w;
        }
    }
    Ok(Image::from_raw(a.width(), a.height(), ch, out))
}

/// Which mip levels get fetched and at what resolution the result lives.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelPlan {
    /// Mip level whose resolution the output has.
    pub output_level: usize,
    /// Absolute mip levels fetched per texture, finest first.
    pub fetch: Vec<usize>,
    /// Weight of the finest band (below 1 only for fractional LOD).
    pub finest_scale: f32,
}

impl LevelPlan {
    pub fn new(params: &BlendParams) -> Result<Self> {
        let n = params.num_levels;
        if !params.lod.is_finite() || params.lod < 0.0 {
            return Err(Error::invalid(format!("lod must be >= 0, got {}", params.lod)));
        }
        if params.skip_levels {
            if !n.is_multiple_of(2) {
                return Err(Error::invalid(format!("level skipping needs an even level count, got {n}")));
            }
            if params.lod != 0.0 {
                return Err(Error::invalid("level skipping is only defined without minification"));
            }
            return Ok(LevelPlan { output_level: 0, fetch: (0..=n).step_by(2).collect(), finest_scale: 1.0 });
        }
        let j = params.lod.floor() as usize;
        let frac = params.lod - j as f32;
        if j >= n {
            Ok(LevelPlan { output_level: j, fetch: vec![j], finest_scale: 1.0 })
        } else {
            Ok(LevelPlan { output_level: j, fetch: (j..=n).collect(), finest_scale: 1.0 - frac })
        }
    }

    fn deepest(&self) -> usize {
        *self.fetch.last().unwrap()
    }
}

/// Mip fetches per texture for these parameters: `n + 1` for the full
/// method, `n / 2 + 1` with level skipping, `max(n - floor(lod), 0) + 1`
/// when minified.
pub fn sample_count(params: &BlendParams) -> usize {
    let n = params.num_levels;
    if params.skip_levels {
        n / 2 + 1
    } else {
        let j = params.lod.max(0.0).floor() as usize;
        n.saturating_sub(j) + 1
    }
}

/// Blends with the full method, or the minified / skipping variants when
/// `lod` or `skip_levels` ask for them.
pub fn laplacian_blend(input: &BlendInput, params: &BlendParams) -> Result<Image> {
    let bands = blend_bands(input, params)?;
    let mut iter = bands.into_iter();
    let first = iter.next().expect("a plan always fetches one level");
    let sum = iter.try_fold(first, |acc, band| acc.add(&band))?;
    Ok(if params.clamp_output { sum.clamp01() } else { sum })
}

/// Minified blend at mip level `floor(params.lod)`.
pub fn laplacian_blend_minified(input: &BlendInput, params: &BlendParams) -> Result<Image> {
    if params.skip_levels {
        return Err(Error::invalid("minified blending does not combine with level skipping"));
    }
    laplacian_blend(input, params)
}

/// Blend with bands built from every other mip level.
pub fn laplacian_blend_skip(input: &BlendInput, params: &BlendParams) -> Result<Image> {
    laplacian_blend(input, &BlendParams { skip_levels: true, ..*params })
}

/// The blended bands, finest first, with the blended Gaussian last. Their
/// sum is the unclamped blend result.
pub fn blend_bands(input: &BlendInput, params: &BlendParams) -> Result<Vec<Image>> {
    let plan = LevelPlan::new(params)?;
    let deepest = plan.deepest();
    let available = input.textures.iter().map(MipChain::len).min().unwrap();
    if params.num_levels + 1 > available {
        return Err(Error::invalid(format!(
            "{} levels need {} mip levels, textures have {available}",
            params.num_levels,
            params.num_levels + 1
        )));
    }
    if deepest >= available {
        return Err(Error::invalid(format!(
            "mip level {deepest} requested, textures have {available}"
        )));
    }
    let j = plan.output_level;

    let tex_levels: Vec<Vec<Image>> = input
        .textures
        .iter()
        .map(|chain| plan.fetch.iter().map(|&k| chain.level_at(k, j)).collect())
        .collect::<Result<_>>()?;
    let weights: Vec<Vec<Image>> = plan
        .fetch
        .iter()
        .map(|&k| level_weights(input, params, k + params.mask_level_bias, j))
        .collect::<Result<_>>()?;

    let last = plan.fetch.len() - 1;
    let mut bands = Vec::with_capacity(plan.fetch.len());
    for q in 0..last {
        let scale = if q == 0 { plan.finest_scale } else { 1.0 };
        let terms: Vec<(&Image, Option<&Image>, &Image)> = tex_levels
            .iter()
            .zip(&weights[q])
            .map(|(levels, w)| (&levels[q], Some(&levels[q + 1]), w))
            .collect();
        let band = weighted_sum(&terms)?;
        bands.push(if scale == 1.0 { band } else { band.scale(scale) });
    }
    let terms: Vec<(&Image, Option<&Image>, &Image)> = tex_levels
        .iter()
        .zip(&weights[last])
        .map(|(levels, w)| (&levels[last], None, w))
        .collect();
    bands.push(weighted_sum(&terms)?);
    Ok(bands)
}

/// `sum_t (fine_t - coarse_t) * w_t`, or `sum_t fine_t * w_t` without a
/// coarse level.
fn weighted_sum(terms: &[(&Image, Option<&Image>, &Image)]) -> Result<Image> {
    let proto = terms[0].0;
    let ch = proto.channels();
    let width = proto.width();
    let mut out = vec![0.0f32; proto.data().len()];
    out.par_chunks_mut(width * ch).enumerate().for_each(|(y, row)| {
        for x in 0..width {
            let p = y * width + x;
            for c in 0..ch {
                let i = p * ch + c;
                let mut acc = 0.0f32;
                for &(fine, coarse, w) in terms {
                    let wch = w.channels();
                    let wv = w.data()[p * wch + if wch == 1 { 0 } else { c }];
                    let v = match coarse {
                        Some(coarse) => fine.data()[i] - coarse.data()[i],
                        None => fine.data()[i],
                    };
                    acc += v * wv;
                }
                row[x * ch + c] = acc;
            }
        }
    });
    Ok(Image::from_raw(width, proto.height(), ch, out))
}

/// Per-texture weight images for mask level `level`, read at the
/// resolution of mip level `target`.
fn level_weights(
    input: &BlendInput,
    params: &BlendParams,
    level: usize,
    target: usize,
) -> Result<Vec<Image>> {
    match &input.weights {
        Weights::Pair(mask) => {
            let m = mask_level(mask, params.filter, level, target)?;
            Ok(vec![m.map(|v| 1.0 - v), m])
        }
        Weights::PerTexture(masks) => {
            let ms: Vec<Image> = masks
                .iter()
                .map(|m| mask_level(m, params.filter, level, target))
                .collect::<Result<_>>()?;
            normalize_partition(ms, level)
        }
    }
}

fn mask_level(mask: &MaskSource, filter: FilterKind, level: usize, target: usize) -> Result<Image> {
    match mask {
        MaskSource::Chain(chain) => {
            if level >= chain.len() {
                return Err(Error::invalid(format!(
                    "mask level {level} requested, mask chain has {}",
                    chain.len()
                )));
            }
            chain.level_at(level, target)
        }
        MaskSource::Dynamic(dm) => {
            let mut field = dm.source().clone();
            for _ in 0..target {
                field = downsample_with(&field, filter, Addressing::Wrap)?;
            }
            Ok(field.map(|v| remap(v, dm.threshold(), dm.scale(), level)))
        }
    }
}

fn normalize_partition(mut masks: Vec<Image>, level: usize) -> Result<Vec<Image>> {
    let channels = masks.iter().map(Image::channels).max().unwrap();
    let (w, h) = masks[0].dimensions();
    let mut sums = vec![0.0f32; w * h * channels];
    for m in &masks {
        let mch = m.channels();
        for (i, s) in sums.iter_mut().enumerate() {
            let (p, c) = (i / channels, i % channels);
            *s += m.data()[p * mch + if mch == 1 { 0 } else { c }];
        }
    }
    if let Some((i, s)) =
        sums.iter().enumerate().find(|(_, s)| (**s - 1.0).abs() > PARTITION_TOLERANCE)
    {
        return Err(Error::invalid(format!(
            "mask weights sum to {s} at texel {} of level {level}, expected 1",
            i / channels
        )));
    }
    for m in masks.iter_mut() {
        let mch = m.channels();
        let data: Vec<f32> = (0..w * h * channels)
            .map(|i| {
                let (p, c) = (i / channels, i % channels);
                m.data()[p * mch + if mch == 1 { 0 } else { c }] / sums[i]
            })
            .collect();
        *m = Image::from_raw(w, h, channels, data);
    }
    Ok(masks)
}
