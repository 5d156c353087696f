//! The `mipblend` command line.
//!
//! Every subcommand runs on files when given `--tex-a/--tex-b` (or repeated
//! `--tex`), and on seeded synthetic noise otherwise, so each figure-style
//! experiment can be regenerated from a seed alone.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{StatsReport, PROFILE_STEPS};
use crate::blend::{blend_bands, laplacian_blend, linear_blend, BlendInput, BlendParams, MaskSource, Weights};
use crate::error::{Error, Result};
use crate::hextile::{hextile_render, HexTileParams};
use crate::image::Image;
use crate::io::{load_image, save_image, SaveOptions};
use crate::mask::DynamicMask;
use crate::noise::{value_noise, white_noise};
use crate::pyramid::{build_laplacian_stack, build_mip_chain, FilterKind, MipChain, StackMode};

#[derive(Debug, Parser)]
#[command(name = "mipblend", version, about = "Band-pass texture blending built on mip chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Blend two or more textures.
    Blend(BlendCmd),
    /// Write mip and Laplacian level visualizations.
    Pyramid(PyramidCmd),
    /// Write variance statistics of a blend as a JSON report.
    Analyze(AnalyzeCmd),
    /// Render a hex-tiled texture.
    Hextile(HextileCmd),
    /// Side-by-side baseline vs method with an amplified difference panel.
    Compare(CompareCmd),
    /// Noise-octave by blend-radius grid.
    Noisegrid(NoisegridCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    Box,
    Lanczos2,
}

impl From<FilterArg> for FilterKind {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::Box => FilterKind::Box,
            FilterArg::Lanczos2 => FilterKind::Lanczos2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approx,
}

impl From<ModeArg> for StackMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => StackMode::Exact,
            ModeArg::Approx => StackMode::MipApprox,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct BlendOpts {
    /// Number of Laplacian levels (0 = pointwise linear blend).
    #[arg(long = "levels", default_value_t = 4)]
    pub levels: usize,
    #[arg(long, value_enum, default_value_t = FilterArg::Box)]
    pub filter: FilterArg,
    /// Build bands from every other mip level.
    #[arg(long)]
    pub skip: bool,
    /// Minification level; output is written at mip level floor(K).
    #[arg(long = "lod", value_name = "K", default_value_t = 0.0)]
    pub lod: f32,
    /// Read mask levels K..=n+K.
    #[arg(long = "mask-bias", value_name = "K", default_value_t = 0)]
    pub mask_bias: usize,
    /// Keep out-of-range results instead of clamping to [0, 1].
    #[arg(long = "no-clamp")]
    pub no_clamp: bool,
}

impl BlendOpts {
    pub fn params(&self) -> BlendParams {
        BlendParams {
            num_levels: self.levels,
            filter: self.filter.into(),
            skip_levels: self.skip,
            clamp_output: !self.no_clamp,
            lod: self.lod,
            mask_level_bias: self.mask_bias,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct InputOpts {
    #[arg(long = "tex-a", value_name = "PATH")]
    pub tex_a: Option<PathBuf>,
    #[arg(long = "tex-b", value_name = "PATH")]
    pub tex_b: Option<PathBuf>,
    /// Texture path; repeat for more than two textures.
    #[arg(long = "tex", value_name = "PATH")]
    pub tex: Vec<PathBuf>,
    /// Mask path. One mask for two textures (weight of the second), or one
    /// per texture.
    #[arg(long = "mask", value_name = "PATH")]
    pub mask: Vec<PathBuf>,
    /// Treat the mask as a smooth field remapped per level around threshold
    /// t with level-0 width s.
    #[arg(long = "mask-dynamic", value_name = "t,s", value_parser = parse_pair)]
    pub mask_dynamic: Option<(f32, f32)>,
    /// Decode texture inputs from sRGB and encode color outputs back.
    #[arg(long)]
    pub srgb: bool,
    /// Seed for synthetic inputs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size of synthetic inputs, `N` or `WxH` (default 256, 512 for analyze).
    #[arg(long = "size", value_parser = parse_size)]
    pub size: Option<(usize, usize)>,
}

#[derive(Debug, Args)]
pub struct BlendCmd {
    #[command(flatten)]
    pub input: InputOpts,
    #[command(flatten)]
    pub blend: BlendOpts,
    /// Plain pointwise blend with the level-0 mask.
    #[arg(long)]
    pub linear: bool,
    /// Renormalize the result as a tangent-space normal map.
    #[arg(long = "renormalize-normals")]
    pub renormalize_normals: bool,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Contact sheet of the blended bands (shown as 0.5 + value).
    #[arg(long = "debug-levels", value_name = "PATH")]
    pub debug_levels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PyramidCmd {
    #[command(flatten)]
    pub input: InputOpts,
    #[arg(long = "levels", default_value_t = 4)]
    pub levels: usize,
    #[arg(long, value_enum, default_value_t = FilterArg::Box)]
    pub filter: FilterArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Approx)]
    pub mode: ModeArg,
    /// Laplacian levels (0.5 + value) and base, side by side.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Mip levels packed side by side at their own resolution.
    #[arg(long = "mips-out", value_name = "PATH")]
    pub mips_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeCmd {
    #[command(flatten)]
    pub input: InputOpts,
    #[arg(long = "levels", default_value_t = 4)]
    pub levels: usize,
    #[arg(long, value_enum, default_value_t = FilterArg::Box)]
    pub filter: FilterArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Approx)]
    pub mode: ModeArg,
    /// Mask values sampled over [0, 1].
    #[arg(long, default_value_t = PROFILE_STEPS)]
    pub steps: usize,
    /// Use 1 - A as the second texture.
    #[arg(long = "anti-correlated")]
    pub anti_correlated: bool,
    /// Report path; printed to stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HextileCmd {
    #[command(flatten)]
    pub input: InputOpts,
    #[command(flatten)]
    pub blend: BlendOpts,
    /// Output size, `N` or `WxH`.
    #[arg(long = "out-size", value_parser = parse_size, default_value = "512")]
    pub out_size: (usize, usize),
    /// Hexagons per texture repeat.
    #[arg(long = "tile-scale", default_value_t = 4.0)]
    pub tile_scale: f32,
    /// Level-0 transition width in edge-distance units.
    #[arg(long, default_value_t = 0.05)]
    pub transition: f32,
    /// Rotate tiles by random multiples of 60 degrees.
    #[arg(long)]
    pub rotate: bool,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareCmd {
    #[command(flatten)]
    pub input: InputOpts,
    #[command(flatten)]
    pub blend: BlendOpts,
    /// Difference amplification.
    #[arg(long, default_value_t = 5.0)]
    pub amplify: f32,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// JSON summary of the difference.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoisegridCmd {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tile size of each grid cell (power of two).
    #[arg(long = "size", default_value_t = 128)]
    pub size: usize,
    /// Laplacian levels of the last column.
    #[arg(long = "levels", default_value_t = 4)]
    pub levels: usize,
    #[arg(long, value_enum, default_value_t = FilterArg::Box)]
    pub filter: FilterArg,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

fn parse_pair(s: &str) -> std::result::Result<(f32, f32), String> {
    let (a, b) = s.split_once(',').ok_or("expected t,s")?;
    let t = a.trim().parse::<f32>().map_err(|e| e.to_string())?;
    let s = b.trim().parse::<f32>().map_err(|e| e.to_string())?;
    Ok((t, s))
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| e.to_string());
    match s.split_once(['x', 'X']) {
        Some((w, h)) => Ok((parse(w)?, parse(h)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Blend(cmd) => run_blend(cmd),
        Command::Pyramid(cmd) => run_pyramid(cmd),
        Command::Analyze(cmd) => run_analyze(cmd),
        Command::Hextile(cmd) => run_hextile(cmd),
        Command::Compare(cmd) => run_compare(cmd),
        Command::Noisegrid(cmd) => run_noisegrid(cmd),
    }
}

impl InputOpts {
    fn texture_paths(&self) -> Vec<&Path> {
        let mut paths: Vec<&Path> = Vec::new();
        paths.extend(self.tex_a.as_deref());
        paths.extend(self.tex_b.as_deref());
        paths.extend(self.tex.iter().map(PathBuf::as_path));
        paths
    }

    /// Loaded textures, or `count` seeded value-noise textures of
    /// decreasing feature size when no path is given.
    fn textures(&self, count: usize) -> Result<Vec<Image>> {
        let paths = self.texture_paths();
        if paths.is_empty() {
            let (w, h) = self.size.unwrap_or((256, 256));
            check_synthetic_size(w, h)?;
            return Ok((0..count)
                .map(|i| {
                    let cell = (w.min(h) >> (2 + 2 * i)).max(1);
                    value_noise(w, h, 3, cell, self.seed.wrapping_add(i as u64))
                })
                .collect());
        }
        paths.into_iter().map(|p| load_image(p, self.srgb)).collect()
    }

    fn masks(&self, width: usize, height: usize, channels: usize) -> Result<Vec<Image>> {
        if self.mask.is_empty() {
            return Ok(vec![ramp_mask(width, height, width / 2)?]);
        }
        self.mask
            .iter()
            .map(|p| {
                let m = load_image(p, false)?;
                if m.channels() == 1 || m.channels() == channels {
                    Ok(m)
                } else {
                    m.channel(0)
                }
            })
            .collect()
    }

    fn blend_input(&self, textures: &[Image], filter: FilterKind) -> Result<BlendInput> {
        let first = &textures[0];
        let (w, h) = first.dimensions();
        let masks = self.masks(w, h, first.channels())?;
        let chains: Vec<MipChain> =
            textures.iter().map(|t| build_mip_chain(t, filter, usize::MAX)).collect::<Result<_>>()?;
        let weights = if let Some((t, s)) = self.mask_dynamic {
            if textures.len() != 2 || masks.len() != 1 {
                return Err(Error::invalid("--mask-dynamic blends exactly two textures with one mask"));
            }
            let source = if self.mask.is_empty() { horizontal_ramp(w, h)? } else { masks[0].channel(0)? };
            Weights::Pair(MaskSource::Dynamic(DynamicMask::new(source, t, s)?))
        } else if textures.len() == 2 && masks.len() == 1 {
            Weights::Pair(MaskSource::Chain(build_mip_chain(&masks[0], filter, usize::MAX)?))
        } else {
            let chains = masks
                .iter()
                .map(|m| build_mip_chain(m, filter, usize::MAX).map(MaskSource::Chain))
                .collect::<Result<_>>()?;
            Weights::PerTexture(chains)
        };
        BlendInput::new(chains, weights)
    }

    /// PNG output is always clamped; EXR keeps the range unless `clamp`.
    fn save_color(&self, img: &Image, path: &Path, clamp: bool) -> Result<()> {
        let png = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
        save_image(img, path, SaveOptions { clamp: clamp || png, srgb: self.srgb })
    }
}

fn check_synthetic_size(w: usize, h: usize) -> Result<()> {
    if !w.is_power_of_two() || !h.is_power_of_two() || w < 4 || h < 4 {
        return Err(Error::invalid(format!("synthetic size must be a power of two >= 4, got {w}x{h}")));
    }
    Ok(())
}

/// Mask rising linearly from 0 to 1 over `ramp` texels centered horizontally.
pub fn ramp_mask(width: usize, height: usize, ramp: usize) -> Result<Image> {
    let center = width as f32 / 2.0;
    let ramp = ramp.max(1) as f32;
    Image::from_fn(width, height, 1, |x, _, _| ((x as f32 + 0.5 - center) / ramp + 0.5).clamp(0.0, 1.0))
}

fn horizontal_ramp(width: usize, height: usize) -> Result<Image> {
    Image::from_fn(width, height, 1, |x, _, _| (x as f32 + 0.5) / width as f32)
}

fn show_signed(img: &Image) -> Image {
    img.map(|v| v + 0.5)
}

/// Places images side by side, top-aligned, padding with zeros.
pub fn hconcat(images: &[Image]) -> Result<Image> {
    let ch = images.iter().map(Image::channels).max().ok_or_else(|| Error::invalid("nothing to concatenate"))?;
    let width: usize = images.iter().map(Image::width).sum();
    let height = images.iter().map(Image::height).max().unwrap();
    let mut data = vec![0.0f32; width * height * ch];
    let mut x0 = 0;
    for img in images {
        for y in 0..img.height() {
            for x in 0..img.width() {
                for c in 0..ch {
                    let v = img.get(x, y, c.min(img.channels() - 1));
                    data[(y * width + x0 + x) * ch + c] = v;
                }
            }
        }
        x0 += img.width();
    }
    Image::new(width, height, ch, data)
}

pub fn vconcat(images: &[Image]) -> Result<Image> {
    let ch = images.iter().map(Image::channels).max().ok_or_else(|| Error::invalid("nothing to concatenate"))?;
    let width = images.iter().map(Image::width).max().unwrap();
    let height: usize = images.iter().map(Image::height).sum();
    let mut data = vec![0.0f32; width * height * ch];
    let mut y0 = 0;
    for img in images {
        for y in 0..img.height() {
            for x in 0..img.width() {
                for c in 0..ch {
                    data[((y0 + y) * width + x) * ch + c] = img.get(x, y, c.min(img.channels() - 1));
                }
            }
        }
        y0 += img.height();
    }
    Image::new(width, height, ch, data)
}

fn renormalize_normals(img: &Image) -> Result<Image> {
    if img.channels() < 3 {
        return Err(Error::invalid("normal renormalization needs at least three channels"));
    }
    let ch = img.channels();
    let mut data = img.data().to_vec();
    for px in data.chunks_mut(ch) {
        let n = [px[0] * 2.0 - 1.0, px[1] * 2.0 - 1.0, px[2] * 2.0 - 1.0];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if len > 1e-8 {
            for c in 0..3 {
                px[c] = (n[c] / len + 1.0) * 0.5;
            }
        }
    }
    Image::new(img.width(), img.height(), ch, data)
}

fn run_blend(cmd: &BlendCmd) -> Result<()> {
    let textures = cmd.input.textures(2)?;
    let params = cmd.blend.params();
    let input = cmd.input.blend_input(&textures, params.filter)?;
    let mut out = if cmd.linear {
        let (w, h) = textures[0].dimensions();
        let masks = cmd.input.masks(w, h, textures[0].channels())?;
        if textures.len() != 2 || masks.len() != 1 || cmd.input.mask_dynamic.is_some() {
            return Err(Error::invalid("--linear blends two textures with one mask image"));
        }
        let out = linear_blend(&textures[0], &textures[1], &masks[0])?;
        if params.clamp_output { out.clamp01() } else { out }
    } else {
        laplacian_blend(&input, &params)?
    };
    if cmd.renormalize_normals {
        out = renormalize_normals(&out)?;
    }
    cmd.input.save_color(&out, &cmd.out, params.clamp_output)?;
    if let Some(path) = &cmd.debug_levels {
        let bands: Vec<Image> = blend_bands(&input, &params)?.iter().map(show_signed).collect();
        save_image(&hconcat(&bands)?, path, SaveOptions::clamped())?;
    }
    Ok(())
}

fn run_pyramid(cmd: &PyramidCmd) -> Result<()> {
    let img = cmd.input.textures(1)?.swap_remove(0);
    let chain = build_mip_chain(&img, cmd.filter.into(), usize::MAX)?;
    let stack = build_laplacian_stack(&chain, cmd.levels, cmd.mode.into())?;
    let mut panels: Vec<Image> = stack.laplacians.iter().map(show_signed).collect();
    panels.push(stack.base.clone());
    save_image(&hconcat(&panels)?, &cmd.out, SaveOptions::clamped())?;
    if let Some(path) = &cmd.mips_out {
        save_image(&hconcat(chain.levels())?, path, SaveOptions::clamped())?;
    }
    Ok(())
}

fn run_analyze(cmd: &AnalyzeCmd) -> Result<()> {
    let input = &cmd.input;
    let (x, y) = if input.texture_paths().is_empty() {
        let (w, h) = input.size.unwrap_or((512, 512));
        check_synthetic_size(w, h)?;
        let x = white_noise(w, h, 1, input.seed);
        let y = if cmd.anti_correlated {
            x.map(|v| 1.0 - v)
        } else {
            white_noise(w, h, 1, input.seed.wrapping_add(1))
        };
        (x, y)
    } else {
        let mut t = input.textures(2)?;
        let x = t.remove(0);
        let y = if cmd.anti_correlated || t.is_empty() { x.map(|v| 1.0 - v) } else { t.remove(0) };
        (x, y)
    };
    let chain = build_mip_chain(&x, cmd.filter.into(), usize::MAX)?;
    let stack = build_laplacian_stack(&chain, cmd.levels, cmd.mode.into())?;
    let report = StatsReport::compute(&x, &y, &stack, cmd.steps)?;
    write_text(cmd.report.as_deref(), &report.to_text())
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Write { path: p.to_path_buf(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_hextile(cmd: &HextileCmd) -> Result<()> {
    let tex = if cmd.input.texture_paths().is_empty() {
        let (w, h) = cmd.input.size.unwrap_or((256, 256));
        check_synthetic_size(w, h)?;
        let a = value_noise(w, h, 3, (w / 16).max(1), cmd.input.seed);
        let b = white_noise(w, h, 3, cmd.input.seed.wrapping_add(1));
        linear_blend(&a, &b, &Image::filled(w, h, 1, 0.35)?)?
    } else {
        cmd.input.textures(1)?.swap_remove(0)
    };
    let params = HexTileParams {
        tile_scale: cmd.tile_scale,
        rotation_jitter: cmd.rotate,
        seed: cmd.input.seed,
        transition: cmd.transition,
        blend: cmd.blend.params(),
    };
    let chain = build_mip_chain(&tex, params.blend.filter, usize::MAX)?;
    let (w, h) = cmd.out_size;
    let out = hextile_render(&chain, w, h, &params)?;
    cmd.input.save_color(&out, &cmd.out, params.blend.clamp_output)
}

#[derive(Serialize)]
struct CompareSummary {
    baseline: &'static str,
    method: &'static str,
    mean_abs_diff: f64,
    max_abs_diff: f32,
}

fn run_compare(cmd: &CompareCmd) -> Result<()> {
    let textures = cmd.input.textures(2)?;
    let params = cmd.blend.params();
    let input = cmd.input.blend_input(&textures, params.filter)?;
    let method = laplacian_blend(&input, &params)?;
    let (baseline, names) = if params.skip_levels {
        let full = BlendParams { skip_levels: false, ..params };
        (laplacian_blend(&input, &full)?, ("laplacian", "laplacian-skip"))
    } else {
        let linear = BlendParams { num_levels: 0, ..params };
        (laplacian_blend(&input, &linear)?, ("linear", "laplacian"))
    };
    let diff = baseline.zip_map(&method, |a, b| (a - b).abs())?;
    let amplified = diff.map(|v| v * cmd.amplify);
    let sheet = hconcat(&[baseline.clone(), method.clone(), amplified])?;
    cmd.input.save_color(&sheet, &cmd.out, params.clamp_output)?;
    if let Some(path) = &cmd.report {
        let n = diff.data().len() as f64;
        let summary = CompareSummary {
            baseline: names.0,
            method: names.1,
            mean_abs_diff: diff.data().iter().map(|&v| v as f64).sum::<f64>() / n,
            max_abs_diff: diff.min_max().1,
        };
        let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
        write_text(Some(path), &text)?;
    }
    Ok(())
}

/// Rows go from low- to high-frequency noise; columns from a sharp to a
/// wide linear blend, with a Laplacian blend last.
fn run_noisegrid(cmd: &NoisegridCmd) -> Result<()> {
    let n = cmd.size;
    check_synthetic_size(n, n)?;
    let filter: FilterKind = cmd.filter.into();
    let radii: Vec<usize> = [1, 8, 32, 96].into_iter().filter(|&r| r <= n).collect();
    let mut rows = Vec::new();
    let mut cell = n / 4;
    let mut row_index = 0u64;
    while cell >= 1 {
        let seed = cmd.seed.wrapping_add(2 * row_index);
        let a = value_noise(n, n, 1, cell, seed);
        let b = value_noise(n, n, 1, cell, seed + 1);
        let mut panels = Vec::new();
        for &r in &radii {
            panels.push(linear_blend(&a, &b, &ramp_mask(n, n, r)?)?);
        }
        let input = BlendInput::from_images(&a, &b, &ramp_mask(n, n, 1)?, filter)?;
        panels.push(laplacian_blend(&input, &BlendParams { filter, ..BlendParams::with_levels(cmd.levels) })?);
        rows.push(hconcat(&panels)?);
        cell /= 4;
        row_index += 1;
    }
    save_image(&vconcat(&rows)?, &cmd.out, SaveOptions::clamped())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sizes_and_pairs() {
        assert_eq!(parse_size("64").unwrap(), (64, 64));
        assert_eq!(parse_size("128x32").unwrap(), (128, 32));
        assert!(parse_size("axb").is_err());
        assert_eq!(parse_pair("0.5, 0.01").unwrap(), (0.5, 0.01));
        assert!(parse_pair("0.5").is_err());
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "mipblend", "blend", "--tex-a", "a.png", "--tex-b", "b.png", "--mask", "m.png",
            "--levels", "3", "--filter", "lanczos2", "--skip", "--lod", "1.5", "--mask-bias", "1",
            "--no-clamp", "--srgb", "--seed", "9", "--out", "o.png",
        ])
        .unwrap();
        let Command::Blend(cmd) = cli.command else { panic!("wrong subcommand") };
        let p = cmd.blend.params();
        assert_eq!(p.num_levels, 3);
        assert_eq!(p.filter, FilterKind::Lanczos2);
        assert!(p.skip_levels && !p.clamp_output);
        assert_eq!(p.lod, 1.5);
        assert_eq!(p.mask_level_bias, 1);
        assert!(cmd.input.srgb);
        assert_eq!(cmd.input.seed, 9);
    }

    #[test]
    fn concat_shapes() {
        let a = Image::filled(2, 3, 1, 1.0).unwrap();
        let b = Image::filled(4, 1, 3, 0.5).unwrap();
        let h = hconcat(&[a.clone(), b.clone()]).unwrap();
        assert_eq!((h.width(), h.height(), h.channels()), (6, 3, 3));
        assert_eq!(h.get(0, 2, 2), 1.0);
        assert_eq!(h.get(3, 2, 0), 0.0);
        let v = vconcat(&[a, b]).unwrap();
        assert_eq!((v.width(), v.height()), (4, 4));
    }

    #[test]
    fn ramp_mask_is_centered() {
        let m = ramp_mask(16, 1, 4).unwrap();
        assert_eq!(m.get(0, 0, 0), 0.0);
        assert_eq!(m.get(15, 0, 0), 1.0);
        assert!((m.get(7, 0, 0) + m.get(8, 0, 0) - 1.0).abs() < 1e-6);
    }
}
