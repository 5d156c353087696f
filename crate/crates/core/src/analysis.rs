//! Variance statistics of blends and Laplacian stacks.
//!
//! Variance is the population variance over all texels considered (whole
//! textures are analyzed, not samples of them). Multi-channel figures are
//! the mean of the per-channel values; covariances center each channel on
//! its own mean.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::pyramid::{reconstruct, LaplacianStack};

/// Default number of mask values sampled over `[0, 1]`.
pub const PROFILE_STEPS: usize = 65;

/// Variances at or below this count as a flat image.
const FLAT_VARIANCE: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Region {
    pub fn full(img: &Image) -> Self {
        Region { x: 0, y: 0, width: img.width(), height: img.height() }
    }
}

/// Per-channel population variance over `region` (whole image if `None`).
pub fn variance(img: &Image, region: Option<Region>) -> Result<Vec<f64>> {
    let r = region.unwrap_or_else(|| Region::full(img));
    if r.width == 0 || r.height == 0 {
        return Err(Error::invalid("variance over an empty region"));
    }
    if r.x + r.width > img.width() || r.y + r.height > img.height() {
        return Err(Error::invalid("variance region exceeds the image"));
    }
    let n = (r.width * r.height) as f64;
    let texels = || (r.y..r.y + r.height).flat_map(move |y| (r.x..r.x + r.width).map(move |x| (x, y)));
    let var = (0..img.channels())
        .map(|c| {
            let mean = texels().map(|(x, y)| img.get(x, y, c) as f64).sum::<f64>() / n;
            texels().map(|(x, y)| (img.get(x, y, c) as f64 - mean).powi(2)).sum::<f64>() / n
        })
        .collect();
    Ok(var)
}

/// Channel-averaged variance over the whole image.
pub fn mean_variance(img: &Image) -> f64 {
    let v = variance(img, None).expect("full region is never empty");
    v.iter().sum::<f64>() / v.len() as f64
}

fn channel_means(img: &Image) -> Vec<f64> {
    let ch = img.channels();
    let mut sums = vec![0.0f64; ch];
    for px in img.data().chunks(ch) {
        for (s, &v) in sums.iter_mut().zip(px) {
            *s += v as f64;
        }
    }
    sums.iter().map(|s| s / img.texel_count() as f64).collect()
}

/// Channel-averaged population covariance of two images of equal shape.
pub fn covariance(a: &Image, b: &Image) -> Result<f64> {
    a.ensure_same_shape(b, "covariance")?;
    let ch = a.channels();
    let (ma, mb) = (channel_means(a), channel_means(b));
    let mut acc = 0.0f64;
    for (pa, pb) in a.data().chunks(ch).zip(b.data().chunks(ch)) {
        for c in 0..ch {
            acc += (pa[c] as f64 - ma[c]) * (pb[c] as f64 - mb[c]);
        }
    }
    Ok(acc / (a.texel_count() * ch) as f64)
}

/// Pearson correlation, `None` when either side has zero variance.
pub fn correlation(a: &Image, b: &Image) -> Result<Option<f64>> {
    let cov = covariance(a, b)?;
    let (va, vb) = (covariance(a, a)?, covariance(b, b)?);
    if va <= FLAT_VARIANCE || vb <= FLAT_VARIANCE {
        return Ok(None);
    }
    Ok(Some((cov / (va * vb).sqrt()).clamp(-1.0, 1.0)))
}

/// One sample of the variance of a constant-weight blend.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    /// Mask value, the weight of the second image.
    pub a: f64,
    /// Measured variance of `(1 - a) x + a y`.
    pub measured: f64,
    /// `(1 - a)^2 Var(x) + a^2 Var(y) + 2 a (1 - a) Cov(x, y)`.
    pub predicted: f64,
}

/// Variance of the constant-mask blend `(1 - a) x + a y` for `steps` evenly
/// spaced `a` in `[0, 1]`, next to its prediction from the measured moments
/// of `x` and `y`.
pub fn blend_variance_profile(x: &Image, y: &Image, steps: usize) -> Result<Vec<ProfilePoint>> {
    x.ensure_same_shape(y, "blend_variance_profile")?;
    if steps < 2 {
        return Err(Error::invalid("a variance profile needs at least two steps"));
    }
    let var_x = covariance(x, x)?;
    let var_y = covariance(y, y)?;
    let cov = covariance(x, y)?;
    (0..steps)
        .map(|i| {
            let a = i as f64 / (steps - 1) as f64;
            let af = a as f32;
            let blended = x.zip_map(y, |xv, yv| xv * (1.0 - af) + yv * af)?;
            let predicted = (1.0 - a).powi(2) * var_x + a * a * var_y + 2.0 * a * (1.0 - a) * cov;
            Ok(ProfilePoint { a, measured: covariance(&blended, &blended)?, predicted })
        })
        .collect()
}

/// Trapezoid-rule integral of the measured profile over `a`.
pub fn integrate_profile(profile: &[ProfilePoint]) -> f64 {
    profile.windows(2).map(|w| 0.5 * (w[1].a - w[0].a) * (w[0].measured + w[1].measured)).sum()
}

/// Mean variance over a transition sweeping the blend weight from 0 to 1.
pub fn mean_transition_variance(x: &Image, y: &Image) -> Result<f64> {
    Ok(integrate_profile(&blend_variance_profile(x, y, PROFILE_STEPS)?))
}

/// Pairwise statistics of the images of a Laplacian stack.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCorrelation {
    /// Laplacian levels first, base last.
    pub per_level_variance: Vec<f64>,
    /// Symmetric Pearson matrix; `None` where a level has no variance.
    pub matrix: Vec<Vec<Option<f64>>>,
    /// `|Var(x) - sum of level variances| / Var(x)`; `None` for flat input.
    pub variance_residual: Option<f64>,
}

impl LevelCorrelation {
    pub fn max_off_diagonal(&self) -> Option<f64> {
        let n = self.matrix.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .filter_map(|(i, j)| self.matrix[i][j].map(f64::abs))
            .reduce(f64::max)
    }
}

pub fn level_correlation(stack: &LaplacianStack) -> Result<LevelCorrelation> {
    if stack.laplacians.is_empty() {
        return Err(Error::invalid("level correlation needs at least one Laplacian level"));
    }
    let images: Vec<&Image> = stack.images().collect();
    let per_level_variance =
        images.iter().map(|img| covariance(img, img)).collect::<Result<Vec<_>>>()?;
    let n = images.len();
    let mut matrix = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i..n {
            let r = if i == j {
                (per_level_variance[i] > FLAT_VARIANCE).then_some(1.0)
            } else {
                correlation(images[i], images[j])?
            };
            matrix[i][j] = r;
            matrix[j][i] = r;
        }
    }
    let source = reconstruct(stack)?;
    let var_x = covariance(&source, &source)?;
    let variance_residual = (var_x > FLAT_VARIANCE)
        .then(|| (var_x - per_level_variance.iter().sum::<f64>()).abs() / var_x);
    Ok(LevelCorrelation { per_level_variance, matrix, variance_residual })
}

/// Everything the `analyze` command reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub source_variance: f64,
    pub per_level_variance: Vec<f64>,
    pub cross_level_correlation: Vec<Vec<Option<f64>>>,
    pub variance_residual: Option<f64>,
    pub transition_profile: Vec<ProfilePoint>,
    pub mean_transition_variance: f64,
    /// `mean_transition_variance / source_variance`.
    pub mean_transition_ratio: f64,
    /// Variance at the middle of the profile over `source_variance`.
    pub midpoint_ratio: f64,
}

impl StatsReport {
    /// Statistics of blending `x` with `y`, plus level statistics of `stack`
    /// (normally the stack of `x`).
    pub fn compute(x: &Image, y: &Image, stack: &LaplacianStack, steps: usize) -> Result<Self> {
        let levels = level_correlation(stack)?;
        let profile = blend_variance_profile(x, y, steps)?;
        let source_variance = covariance(x, x)?;
        let mean = integrate_profile(&profile);
        let mid = profile[(steps - 1) / 2].measured;
        let ratio = |v: f64| if source_variance > 0.0 { v / source_variance } else { f64::NAN };
        Ok(StatsReport {
            source_variance,
            per_level_variance: levels.per_level_variance,
            cross_level_correlation: levels.matrix,
            variance_residual: levels.variance_residual,
            transition_profile: profile,
            mean_transition_variance: mean,
            mean_transition_ratio: ratio(mean),
            midpoint_ratio: ratio(mid),
        })
    }

    /// Pretty-printed JSON document.
    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::white_noise;
    use crate::pyramid::{build_mip_chain, build_laplacian_stack, FilterKind, StackMode};

    #[test]
    fn variance_basics() {
        let c = Image::filled(8, 8, 2, 0.3).unwrap();
        assert_eq!(variance(&c, None).unwrap(), vec![0.0, 0.0]);
        let half = Image::from_fn(8, 8, 1, |x, _, _| if x < 4 { 0.0 } else { 1.0 }).unwrap();
        assert!((variance(&half, None).unwrap()[0] - 0.25).abs() < 1e-12);
        let r = Region { x: 0, y: 0, width: 4, height: 8 };
        assert_eq!(variance(&half, Some(r)).unwrap()[0], 0.0);
        assert!(variance(&half, Some(Region { width: 0, ..r })).is_err());
        assert!(variance(&half, Some(Region { x: 6, ..r })).is_err());
    }

    #[test]
    fn uniform_noise_variance_near_one_twelfth() {
        let v = variance(&white_noise(64, 64, 1, 3), None).unwrap()[0];
        assert!((v - 1.0 / 12.0).abs() < 0.1 / 12.0, "{v}");
    }

    #[test]
    fn profile_endpoints_and_identical_inputs() {
        let x = white_noise(32, 32, 1, 1);
        let y = white_noise(32, 32, 1, 2);
        let p = blend_variance_profile(&x, &y, 5).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].measured, covariance(&x, &x).unwrap());
        assert_eq!(p[4].measured, covariance(&y, &y).unwrap());

        let var = covariance(&x, &x).unwrap();
        let mean = mean_transition_variance(&x, &x).unwrap();
        assert!((mean - var).abs() < 1e-6 * var);
        assert!(blend_variance_profile(&x, &y, 1).is_err());
    }

    #[test]
    fn trapezoid_integrates_quadratic() {
        let profile: Vec<ProfilePoint> = (0..65)
            .map(|i| {
                let a = i as f64 / 64.0;
                ProfilePoint { a, measured: a * a + (1.0 - a).powi(2), predicted: 0.0 }
            })
            .collect();
        assert!((integrate_profile(&profile) - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn constant_stack_is_undefined() {
        let img = Image::filled(16, 16, 1, 0.5).unwrap();
        let chain = build_mip_chain(&img, FilterKind::Box, 5).unwrap();
        let stack = build_laplacian_stack(&chain, 3, StackMode::MipApprox).unwrap();
        let lc = level_correlation(&stack).unwrap();
        assert!(lc.matrix.iter().flatten().all(Option::is_none));
        assert_eq!(lc.variance_residual, None);

        let empty = build_laplacian_stack(&chain, 0, StackMode::MipApprox).unwrap();
        assert!(level_correlation(&empty).is_err());
    }

    #[test]
    fn correlation_matrix_is_symmetric_with_unit_diagonal() {
        let img = white_noise(64, 64, 3, 8);
        let chain = build_mip_chain(&img, FilterKind::Lanczos2, 6).unwrap();
        let stack = build_laplacian_stack(&chain, 4, StackMode::MipApprox).unwrap();
        let lc = level_correlation(&stack).unwrap();
        for i in 0..5 {
            assert!((lc.matrix[i][i].unwrap() - 1.0).abs() < 1e-6);
            for j in 0..5 {
                assert_eq!(lc.matrix[i][j], lc.matrix[j][i]);
                assert!(lc.matrix[i][j].unwrap().abs() <= 1.0);
            }
        }
        assert!(lc.per_level_variance.iter().all(|&v| v >= 0.0));
    }
}
