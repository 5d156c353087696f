//! Mip chains and Laplacian decompositions.
//!
//! Conventions, shared with every other module:
//! - downsampled texel `k` covers source texels `2k` and `2k + 1`;
//! - bilinear upsampling by `f` reads output texel `j` at source coordinate
//!   `(j + 0.5) / f - 0.5`, the half-texel convention of GPU samplers;
//! - pyramids are only built over power-of-two sized images;
//! - reads past the border wrap unless a chain asks for clamping.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{Addressing, Image};

/// Downsampling filter used to build mip levels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FilterKind {
    /// 2x2 average.
    #[default]
    Box,
    /// 4x4 separable `sinc(t) sinc(t / 2)` kernel, `|t| < 2` in source texels.
    Lanczos2,
}

impl FilterKind {
    /// Per-axis taps relative to source texel `2k`, with their weights.
    /// Weights sum to one.
    pub fn taps(self) -> &'static [(i64, f32)] {
        match self {
            FilterKind::Box => &[(0, 0.5), (1, 0.5)],
            FilterKind::Lanczos2 => lanczos2_taps(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Box => "box",
            FilterKind::Lanczos2 => "lanczos2",
        }
    }
}

impl std::str::FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "box" => Ok(FilterKind::Box),
            "lanczos2" | "lanczos" => Ok(FilterKind::Lanczos2),
            other => Err(Error::invalid(format!("unknown filter '{other}'"))),
        }
    }
}

fn lanczos2_kernel(t: f64) -> f64 {
    fn sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            let px = std::f64::consts::PI * x;
            px.sin() / px
        }
    }
    if t.abs() >= 2.0 {
        0.0
    } else {
        sinc(t) * sinc(t / 2.0)
    }
}

fn lanczos2_taps() -> &'static [(i64, f32)] {
    static TAPS: std::sync::OnceLock<[(i64, f32); 4]> = std::sync::OnceLock::new();
    TAPS.get_or_init(|| {
        // Output texel center sits at source coordinate 2k + 0.5.
        let raw: Vec<f64> = (-1..=2).map(|o: i64| lanczos2_kernel(o as f64 - 0.5)).collect();
        let sum: f64 = raw.iter().sum();
        let outer = (raw[0] / sum) as f32;
        let inner = 0.5 - outer;
        [(-1, outer), (0, inner), (1, inner), (2, outer)]
    })
}

/// Halves both dimensions: filter, then keep every other texel.
pub fn downsample(img: &Image, filter: FilterKind) -> Result<Image> {
    downsample_with(img, filter, Addressing::Wrap)
}

pub fn downsample_with(img: &Image, filter: FilterKind, addressing: Addressing) -> Result<Image> {
    let (w, h) = img.dimensions();
    if w % 2 != 0 || h % 2 != 0 {
        return Err(Error::invalid(format!("downsample needs even dimensions, got {w}x{h}")));
    }
    let ch = img.channels();
    let (ow, oh) = (w / 2, h / 2);
    let taps = filter.taps();

    // horizontal: w x h -> ow x h
    let mut tmp = vec![0.0f32; ow * h * ch];
    tmp.par_chunks_mut(ow * ch).enumerate().for_each(|(y, row)| {
        for x in 0..ow {
            for c in 0..ch {
                let mut acc = 0.0f32;
                for &(off, wgt) in taps {
                    acc += wgt * img.get_addressed(2 * x as i64 + off, y as i64, c, addressing);
                }
                row[x * ch + c] = acc;
            }
        }
    });
    let tmp = Image::from_raw(ow, h, ch, tmp);

    // vertical: ow x h -> ow x oh
    let mut out = vec![0.0f32; ow * oh * ch];
    out.par_chunks_mut(ow * ch).enumerate().for_each(|(y, row)| {
        for x in 0..ow {
            for c in 0..ch {
                let mut acc = 0.0f32;
                for &(off, wgt) in taps {
                    acc += wgt * tmp.get_addressed(x as i64, 2 * y as i64 + off, c, addressing);
                }
                row[x * ch + c] = acc;
            }
        }
    });
    Ok(Image::from_raw(ow, oh, ch, out))
}

struct LerpTap {
    i0: usize,
    i1: usize,
    t: f32,
}

fn lerp_taps(len: usize, factor: usize, addressing: Addressing) -> Vec<LerpTap> {
    (0..len * factor)
        .map(|j| {
            let u = (j as f64 + 0.5) / factor as f64 - 0.5;
            let base = u.floor();
            LerpTap {
                i0: addressing.resolve(base as i64, len),
                i1: addressing.resolve(base as i64 + 1, len),
                t: (u - base) as f32,
            }
        })
        .collect()
}

/// Bilinear magnification by a power-of-two factor with wrap addressing.
pub fn upsample_bilinear(img: &Image, factor: usize) -> Result<Image> {
    upsample_bilinear_with(img, factor, Addressing::Wrap)
}

pub fn upsample_bilinear_with(img: &Image, factor: usize, addressing: Addressing) -> Result<Image> {
    if factor == 0 || !factor.is_power_of_two() {
        return Err(Error::invalid(format!("upsample factor must be a power of two, got {factor}")));
    }
    if factor == 1 {
        return Ok(img.clone());
    }
    let (w, h) = img.dimensions();
    let ch = img.channels();
    let (ow, oh) = (w * factor, h * factor);
    let xs = lerp_taps(w, factor, addressing);
    let ys = lerp_taps(h, factor, addressing);
    let src = img.data();

    let mut tmp = vec![0.0f32; ow * h * ch];
    tmp.par_chunks_mut(ow * ch).enumerate().for_each(|(y, row)| {
        let src_row = &src[y * w * ch..(y + 1) * w * ch];
        for (x, tap) in xs.iter().enumerate() {
            for c in 0..ch {
                let a = src_row[tap.i0 * ch + c];
                let b = src_row[tap.i1 * ch + c];
                row[x * ch + c] = a + tap.t * (b - a);
            }
        }
    });

    let mut out = vec![0.0f32; ow * oh * ch];
    out.par_chunks_mut(ow * ch).enumerate().for_each(|(y, row)| {
        let tap = &ys[y];
        let r0 = &tmp[tap.i0 * ow * ch..(tap.i0 + 1) * ow * ch];
        let r1 = &tmp[tap.i1 * ow * ch..(tap.i1 + 1) * ow * ch];
        for ((o, &a), &b) in row.iter_mut().zip(r0).zip(r1) {
            *o = a + tap.t * (b - a);
        }
    });
    Ok(Image::from_raw(ow, oh, ch, out))
}

/// Upsamples by `2^steps` as a cascade of 2x bilinear steps.
///
/// Not the same operator as a single `2^steps` bilinear upsample; the exact
/// decomposition needs the cascade so that its levels telescope.
pub fn upsample_cascade(img: &Image, steps: usize, addressing: Addressing) -> Result<Image> {
    let mut cur = img.clone();
    for _ in 0..steps {
        cur = upsample_bilinear_with(&cur, 2, addressing)?;
    }
    Ok(cur)
}

/// Gaussian levels `G_0 .. G_n` of a texture, i.e. its mipmaps.
#[derive(Clone, Debug, PartialEq)]
pub struct MipChain {
    levels: Vec<Image>,
    filter: FilterKind,
    addressing: Addressing,
}

impl MipChain {
    /// Wraps pre-built levels, checking the halving invariant.
    pub fn from_levels(
        levels: Vec<Image>,
        filter: FilterKind,
        addressing: Addressing,
    ) -> Result<Self> {
        let first = levels.first().ok_or_else(|| Error::invalid("mip chain needs a level"))?;
        check_pow2(first)?;
        for pair in levels.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if b.width() * 2 != a.width()
                || b.height() * 2 != a.height()
                || b.channels() != a.channels()
            {
                return Err(Error::invalid(format!(
                    "mip level {}x{} does not halve {}x{}",
                    b.width(),
                    b.height(),
                    a.width(),
                    a.height()
                )));
            }
        }
        Ok(MipChain { levels, filter, addressing })
    }

    pub fn levels(&self) -> &[Image] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> Result<&Image> {
        self.levels.get(k).ok_or_else(|| {
            Error::invalid(format!("mip level {k} out of range (chain has {})", self.levels.len()))
        })
    }

    pub fn base(&self) -> &Image {
        &self.levels[0]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn filter(&self) -> FilterKind {
        self.filter
    }

    pub fn addressing(&self) -> Addressing {
        self.addressing
    }

    pub fn total_texels(&self) -> usize {
        self.levels.iter().map(Image::texel_count).sum()
    }

    /// Level `k` bilinearly upsampled to the resolution of level `target`.
    pub fn level_at(&self, k: usize, target: usize) -> Result<Image> {
        if target > k {
            return Err(Error::invalid(format!("cannot read level {k} at finer level {target}")));
        }
        upsample_bilinear_with(self.level(k)?, 1 << (k - target), self.addressing)
    }

    /// The same chain with its first `k` levels dropped.
    pub fn starting_at(&self, k: usize) -> Result<MipChain> {
        self.level(k)?;
        Ok(MipChain {
            levels: self.levels[k..].to_vec(),
            filter: self.filter,
            addressing: self.addressing,
        })
    }
}

fn check_pow2(img: &Image) -> Result<()> {
    let (w, h) = img.dimensions();
    if !w.is_power_of_two() || !h.is_power_of_two() {
        return Err(Error::invalid(format!("pyramids need power-of-two dimensions, got {w}x{h}")));
    }
    Ok(())
}

/// Number of levels in a full chain over an image of this size.
pub fn full_chain_len(width: usize, height: usize) -> usize {
    let mut n = 1;
    let (mut w, mut h) = (width, height);
    while w > 1 && h > 1 && w % 2 == 0 && h % 2 == 0 {
        w /= 2;
        h /= 2;
        n += 1;
    }
    n
}

/// Builds up to `max_levels` mip levels (level 0 included), stopping early
/// once a dimension reaches 1.
pub fn build_mip_chain(img: &Image, filter: FilterKind, max_levels: usize) -> Result<MipChain> {
    build_mip_chain_with(img, filter, max_levels, Addressing::Wrap)
}

pub fn build_mip_chain_with(
    img: &Image,
    filter: FilterKind,
    max_levels: usize,
    addressing: Addressing,
) -> Result<MipChain> {
    check_pow2(img)?;
    if max_levels == 0 {
        return Err(Error::invalid("a mip chain has at least one level"));
    }
    let count = max_levels.min(full_chain_len(img.width(), img.height()));
    let mut levels = Vec::with_capacity(count);
    levels.push(img.clone());
    while levels.len() < count {
        let next = downsample_with(levels.last().unwrap(), filter, addressing)?;
        levels.push(next);
    }
    Ok(MipChain { levels, filter, addressing })
}

/// `G_k - up(down(G_k))` at the resolution of `g_k`.
pub fn exact_laplacian_level(g_k: &Image, filter: FilterKind) -> Result<Image> {
    exact_laplacian_level_with(g_k, filter, Addressing::Wrap)
}

pub fn exact_laplacian_level_with(
    g_k: &Image,
    filter: FilterKind,
    addressing: Addressing,
) -> Result<Image> {
    let down = downsample_with(g_k, filter, addressing)?;
    let up = upsample_bilinear_with(&down, 2, addressing)?;
    g_k.sub(&up)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StackMode {
    /// Each band is taken at its own level and brought to full resolution
    /// with a cascade of 2x bilinear steps.
    Exact,
    /// Each band is the difference of two mip levels, each bilinearly
    /// magnified straight to full resolution, as a shader would fetch them.
    #[default]
    MipApprox,
}

impl std::str::FromStr for StackMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(StackMode::Exact),
            "approx" | "mip-approx" | "mipapprox" => Ok(StackMode::MipApprox),
            other => Err(Error::invalid(format!("unknown stack mode '{other}'"))),
        }
    }
}

/// Full-resolution band-pass levels plus the magnified coarsest Gaussian.
/// Their sum is the source image.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianStack {
    pub laplacians: Vec<Image>,
    pub base: Image,
    pub mode: StackMode,
}

impl LaplacianStack {
    /// Laplacians followed by the base.
    pub fn images(&self) -> impl Iterator<Item = &Image> {
        self.laplacians.iter().chain(std::iter::once(&self.base))
    }
}

pub fn build_laplacian_stack(chain: &MipChain, n: usize, mode: StackMode) -> Result<LaplacianStack> {
    if n + 1 > chain.len() {
        return Err(Error::invalid(format!(
            "{n} Laplacian levels need {} mip levels, chain has {}",
            n + 1,
            chain.len()
        )));
    }
    let addressing = chain.addressing();
    match mode {
        StackMode::MipApprox => {
            let gauss: Vec<Image> = (0..=n).map(|k| chain.level_at(k, 0)).collect::<Result<_>>()?;
            let laplacians =
                gauss.windows(2).map(|pair| pair[0].sub(&pair[1])).collect::<Result<_>>()?;
            let base = gauss.into_iter().next_back().unwrap();
            Ok(LaplacianStack { laplacians, base, mode })
        }
        StackMode::Exact => {
            let mut laplacians = Vec::with_capacity(n);
            for k in 0..n {
                let g_k = chain.level(k)?;
                let up = upsample_bilinear_with(chain.level(k + 1)?, 2, addressing)?;
                let band = g_k.sub(&up)?;
                laplacians.push(upsample_cascade(&band, k, addressing)?);
            }
            let base = upsample_cascade(chain.level(n)?, n, addressing)?;
            Ok(LaplacianStack { laplacians, base, mode })
        }
    }
}

/// Sums the stack back into an image, coarsest level first.
pub fn reconstruct(stack: &LaplacianStack) -> Result<Image> {
    let mut acc = stack.base.clone();
    for (i, lap) in stack.laplacians.iter().enumerate().rev() {
        if !lap.same_shape(&acc) {
            return Err(Error::invalid(format!("Laplacian level {i} does not match the base shape")));
        }
        acc = acc.add(lap)?;
    }
    Ok(acc)
}
