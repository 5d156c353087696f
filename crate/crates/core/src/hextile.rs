//! Hexagonal macro-tiling with per-band blend weights.
//!
//! Lattice convention (normative for tests): a point `st = uv * tile_scale`
//! is skewed by `(s, t) -> (s - t / sqrt(3), 2 t / sqrt(3))`. Integer points
//! of the skewed grid are hexagon centers; lattice vertex `(i, j)` sits at
//! `st = (i + j / 2, j * sqrt(3) / 2)`, so neighbouring centers are one unit
//! apart. Each skewed unit cell splits along `fx + fy = 1` into two
//! equilateral triangles, and the barycentric coordinates of `st` in its
//! triangle are the three raw tile weights. A hexagon is the region where
//! its center has the largest weight.
//!
//! Per band level `k`, a tile's weight is sharpened from its edge distance
//! `d = w - max(other weights)` (zero on hexagon edges, one at the center)
//! with the dynamic-mask remap `clamp(d / width + 0.5, 0, 1)`, where
//! `width = min(transition * 2^k, 1)`, then renormalized. Widths are capped
//! at 1 so a tile's weight reaches zero before its triangle is left, which
//! keeps the weights continuous.
//!
//! Each tile fetches the texture at `R(60 deg * r) uv + offset`, with the
//! offset in `[0, 1)^2` and `r` in `0..6` (0 without rotation jitter) drawn
//! from a hash of the tile's lattice coordinates and the seed.

use rayon::prelude::*;

use crate::blend::{BlendParams, LevelPlan};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::mask::remap;
use crate::noise::hash_coords;
use crate::pyramid::MipChain;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexTileParams {
    /// Hexagon centers per texture repeat (UV unit).
    pub tile_scale: f32,
    pub rotation_jitter: bool,
    pub seed: u64,
    /// Level-0 transition width in edge-distance units.
    pub transition: f32,
    pub blend: BlendParams,
}

impl Default for HexTileParams {
    fn default() -> Self {
        HexTileParams {
            tile_scale: 4.0,
            rotation_jitter: true,
            seed: 0,
            transition: 0.05,
            blend: BlendParams::default(),
        }
    }
}

impl HexTileParams {
    fn validate(&self) -> Result<()> {
        if !(self.tile_scale > 0.0 && self.tile_scale.is_finite()) {
            return Err(Error::invalid(format!("tile_scale must be > 0, got {}", self.tile_scale)));
        }
        if !(self.transition > 0.0 && self.transition.is_finite()) {
            return Err(Error::invalid(format!("transition must be > 0, got {}", self.transition)));
        }
        Ok(())
    }
}

/// A hexagon of the lattice and its random tile transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TileId {
    pub cell: (i64, i64),
    pub hash: u64,
}

impl TileId {
    fn new(cell: (i64, i64), seed: u64) -> Self {
        TileId { cell, hash: hash_coords(seed, cell.0, cell.1) }
    }

    pub fn offset(&self) -> (f32, f32) {
        let u = (self.hash & 0xffff) as f32 / 65536.0;
        let v = ((self.hash >> 16) & 0xffff) as f32 / 65536.0;
        (u, v)
    }

    /// Rotation in sixths of a turn.
    pub fn rotation_steps(&self, jitter: bool) -> u32 {
        if jitter {
            ((self.hash >> 32) % 6) as u32
        } else {
            0
        }
    }

    /// Texture coordinate this tile reads for output coordinate `uv`.
    pub fn transform(&self, uv: (f32, f32), jitter: bool) -> (f32, f32) {
        let angle = self.rotation_steps(jitter) as f64 * std::f64::consts::FRAC_PI_3;
        let (s, c) = angle.sin_cos();
        let (u, v) = (uv.0 as f64, uv.1 as f64);
        let (du, dv) = self.offset();
        ((c * u - s * v) as f32 + du, (s * u + c * v) as f32 + dv)
    }
}

/// Lattice vertices of the triangle containing `st`, with barycentric weights.
pub fn triangle_weights(st: (f64, f64)) -> [((i64, i64), f64); 3] {
    let sx = st.0 - st.1 / SQRT3;
    let sy = 2.0 * st.1 / SQRT3;
    let (bx, by) = (sx.floor(), sy.floor());
    let (fx, fy) = (sx - bx, sy - by);
    let (bx, by) = (bx as i64, by as i64);
    let z = 1.0 - fx - fy;
    if z > 0.0 {
        [((bx, by), z), ((bx, by + 1), fy), ((bx + 1, by), fx)]
    } else {
        [((bx + 1, by + 1), -z), ((bx + 1, by), 1.0 - fy), ((bx, by + 1), 1.0 - fx)]
    }
}

/// Position of lattice vertex `cell` in `st` space.
pub fn cell_center(cell: (i64, i64)) -> (f64, f64) {
    (cell.0 as f64 + cell.1 as f64 / 2.0, cell.1 as f64 * SQRT3 / 2.0)
}

/// Raw barycentric tile weights at `uv`.
pub fn hex_weights(uv: (f32, f32), params: &HexTileParams) -> [(TileId, f32); 3] {
    let st = (uv.0 as f64 * params.tile_scale as f64, uv.1 as f64 * params.tile_scale as f64);
    triangle_weights(st).map(|(cell, w)| (TileId::new(cell, params.seed), w as f32))
}

/// Tile weights for band level `level`.
pub fn hex_level_weights(uv: (f32, f32), params: &HexTileParams, level: usize) -> [(TileId, f32); 3] {
    let raw = hex_weights(uv, params);
    sharpen(raw, params.transition, level)
}

fn sharpen(raw: [(TileId, f32); 3], transition: f32, level: usize) -> [(TileId, f32); 3] {
    let width = (transition * (level as f32).exp2()).min(1.0);
    let w = raw.map(|(_, w)| w);
    let r: [f32; 3] = std::array::from_fn(|i| {
        let other = w[(i + 1) % 3].max(w[(i + 2) % 3]);
        remap(w[i] - other, 0.0, width, 0)
    });
    // the largest raw weight always keeps r >= 0.5
    let sum = r[0] + r[1] + r[2];
    std::array::from_fn(|i| (raw[i].0, r[i] / sum))
}

/// Renders `out_width x out_height` texels of the hex-tiled texture; the
/// texture repeats every `texture.base().width()` output texels.
pub fn hextile_render(
    texture: &MipChain,
    out_width: usize,
    out_height: usize,
    params: &HexTileParams,
) -> Result<Image> {
    params.validate()?;
    let blend = &params.blend;
    if blend.lod != 0.0 {
        return Err(Error::invalid("hex tiling renders at full resolution (lod must be 0)"));
    }
    let plan = LevelPlan::new(blend)?;
    if blend.num_levels + 1 > texture.len() {
        return Err(Error::invalid(format!(
            "{} levels need {} mip levels, texture has {}",
            blend.num_levels,
            blend.num_levels + 1,
            texture.len()
        )));
    }
    let base = texture.base();
    let ch = base.channels();
    let (tw, th) = (base.width() as f32, base.height() as f32);
    let addressing = texture.addressing();
    let fetch = &plan.fetch;
    let last = fetch.len() - 1;

    let mut out = Image::filled(out_width, out_height, ch, 0.0)?.into_data();
    out.par_chunks_mut(out_width * ch).enumerate().for_each(|(y, row)| {
        // samples[tile][level][channel]
        let mut samples = vec![[[0.0f32; 4]; 3]; fetch.len()];
        for x in 0..out_width {
            let uv = ((x as f32 + 0.5) / tw, (y as f32 + 0.5) / th);
            let raw = hex_weights(uv, params);
            for (v, (tile, _)) in raw.iter().enumerate() {
                let (u2, v2) = tile.transform(uv, params.rotation_jitter);
                for (q, &k) in fetch.iter().enumerate() {
                    texture.levels()[k].sample_bilinear(u2, v2, addressing, &mut samples[q][v]);
                }
            }
            let weights: Vec<[(TileId, f32); 3]> = fetch
                .iter()
                .map(|&k| sharpen(raw, params.transition, k + blend.mask_level_bias))
                .collect();
            for c in 0..ch {
                let mut acc = 0.0f32;
                for q in 0..last {
                    let scale = if q == 0 { plan.finest_scale } else { 1.0 };
                    let mut band = 0.0f32;
                    for v in 0..3 {
                        band += (samples[q][v][c] - samples[q + 1][v][c]) * weights[q][v].1;
                    }
                    acc += band * scale;
                }
                let mut band = 0.0f32;
                for v in 0..3 {
                    band += samples[last][v][c] * weights[last][v].1;
                }
                acc += band;
                row[x * ch + c] = if blend.clamp_output { acc.clamp(0.0, 1.0) } else { acc };
            }
        }
    });
    Ok(Image::from_raw(out_width, out_height, ch, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> HexTileParams {
        HexTileParams { tile_scale: 1.0, ..Default::default() }
    }

    #[test]
    fn weights_at_center_and_corner() {
        let p = params();
        for cell in [(0, 0), (2, 1), (-3, 4)] {
            let (x, y) = cell_center(cell);
            let w = hex_weights((x as f32, y as f32), &p);
            let top = w.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            assert_eq!(top.0.cell, cell);
            assert!((top.1 - 1.0).abs() < 1e-6);
            let lw = hex_level_weights((x as f32, y as f32), &p, 2);
            let top = lw.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            assert!((top.1 - 1.0).abs() < 1e-6);
        }
        // centroid of the triangle (0,0), (1,0), (0,1)
        let c = [(0, 0), (1, 0), (0, 1)].map(cell_center);
        let g = ((c[0].0 + c[1].0 + c[2].0) / 3.0, (c[0].1 + c[1].1 + c[2].1) / 3.0);
        for level in 0..4 {
            let w = hex_level_weights((g.0 as f32, g.1 as f32), &p, level);
            for (_, v) in w {
                assert!((v - 1.0 / 3.0).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn neighbouring_centers_are_unit_distance() {
        for n in [(1, 0), (0, 1), (-1, 1), (1, -1)] {
            let (x, y) = cell_center(n);
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tile_ids_depend_on_seed() {
        let a = hex_weights((0.3, 0.7), &params());
        let b = hex_weights((0.3, 0.7), &HexTileParams { seed: 9, ..params() });
        assert_eq!(a[0].0.cell, b[0].0.cell);
        assert_ne!(a[0].0.hash, b[0].0.hash);
        assert_eq!(a, hex_weights((0.3, 0.7), &params()));
    }

    #[test]
    fn rotation_disabled_without_jitter() {
        let t = TileId::new((3, -2), 17);
        assert_eq!(t.rotation_steps(false), 0);
        let (du, dv) = t.offset();
        assert_eq!(t.transform((0.25, 0.5), false), (0.25 + du, 0.5 + dv));
    }

    #[test]
    fn rejects_bad_params() {
        let chain = crate::pyramid::build_mip_chain(&Image::filled(8, 8, 1, 0.5).unwrap(), Default::default(), 4).unwrap();
        let bad = HexTileParams { tile_scale: 0.0, ..params() };
        assert!(hextile_render(&chain, 8, 8, &bad).is_err());
        let deep = HexTileParams { blend: BlendParams::with_levels(5), ..params() };
        assert!(hextile_render(&chain, 8, 8, &deep).is_err());
        let minified = HexTileParams { blend: BlendParams { lod: 1.0, ..BlendParams::with_levels(2) }, ..params() };
        assert!(hextile_render(&chain, 8, 8, &minified).is_err());
    }
}
