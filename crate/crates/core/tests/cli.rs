use std::path::Path;
use std::process::{Command, Output};

use mipblend_core::blend::{laplacian_blend, laplacian_blend_skip, BlendInput, BlendParams};
use mipblend_core::io::{load_image, save_image, SaveOptions};
use mipblend_core::noise::white_noise;
use mipblend_core::pyramid::FilterKind;
use mipblend_core::{Error, Image};

fn mipblend(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mipblend")).args(args).current_dir(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = mipblend(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zero_levels_matches_linear_flag() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["blend", "--seed", "11", "--size", "64", "--levels", "0", "--out", "lap.png"]);
    ok(d, &["blend", "--seed", "11", "--size", "64", "--linear", "--out", "lin.png"]);
    assert_eq!(std::fs::read(d.join("lap.png")).unwrap(), std::fs::read(d.join("lin.png")).unwrap());
}

#[test]
fn blend_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = white_noise(32, 32, 3, 1);
    let b = white_noise(32, 32, 3, 2);
    let m = Image::from_fn(32, 32, 1, |x, _, _| if x < 16 { 0.0 } else { 1.0 }).unwrap();
    save_image(&a, d.join("a.exr"), SaveOptions::default()).unwrap();
    save_image(&b, d.join("b.exr"), SaveOptions::default()).unwrap();
    save_image(&m, d.join("m.png"), SaveOptions::default()).unwrap();
    ok(d, &["blend", "--tex-a", "a.exr", "--tex-b", "b.exr", "--mask", "m.png", "--levels", "3", "--no-clamp", "--out", "o.exr"]);
    let got = load_image(d.join("o.exr"), false).unwrap();
    let input = BlendInput::from_images(&a, &b, &m, FilterKind::Box).unwrap();
    let want = laplacian_blend(&input, &BlendParams { clamp_output: false, ..BlendParams::with_levels(3) }).unwrap();
    assert!(got.max_abs_diff(&want).unwrap() <= 1e-6);

    // three textures with one mask each
    save_image(&m.map(|v| 1.0 - v), d.join("m0.png"), SaveOptions::default()).unwrap();
    save_image(&Image::filled(32, 32, 1, 0.0).unwrap(), d.join("m2.png"), SaveOptions::default()).unwrap();
    ok(d, &["blend", "--tex", "a.exr", "--tex", "b.exr", "--tex", "a.exr", "--mask", "m0.png", "--mask", "m.png",
        "--mask", "m2.png", "--levels", "3", "--no-clamp", "--out", "multi.exr"]);
    let multi = load_image(d.join("multi.exr"), false).unwrap();
    assert!(multi.max_abs_diff(&want).unwrap() <= 1e-5);
}

#[test]
fn analyze_report_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["analyze", "--seed", "1", "--report", "r.json"]);
    let r = json(&d.join("r.json"));
    let mean = r["mean_transition_ratio"].as_f64().unwrap();
    let mid = r["midpoint_ratio"].as_f64().unwrap();
    assert!((0.63..=0.70).contains(&mean), "{mean}");
    assert!((0.45..=0.55).contains(&mid), "{mid}");
    assert_eq!(r["transition_profile"].as_array().unwrap().len(), 65);
    assert_eq!(r["per_level_variance"].as_array().unwrap().len(), 5);

    let out = ok(d, &["analyze", "--seed", "1", "--size", "64", "--anti-correlated"]);
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["midpoint_ratio"].as_f64().unwrap() <= 0.02);
}

#[test]
fn compare_skip_shows_difference() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["compare", "--seed", "2", "--size", "64", "--skip", "--amplify", "5", "--out", "c.png", "--report", "c.json"]);
    let sheet = load_image(d.join("c.png"), false).unwrap();
    assert_eq!(sheet.dimensions(), (192, 64));
    let diff_panel = (0..64).flat_map(|y| (128..192).map(move |x| (x, y))).map(|(x, y)| sheet.get(x, y, 0));
    assert!(diff_panel.fold(0.0, f32::max) > 0.0);
    let r = json(&d.join("c.json"));
    assert_eq!(r["baseline"], "laplacian");
    assert!(r["mean_abs_diff"].as_f64().unwrap() > 0.0);
}

#[test]
fn skip_levels_stay_close_to_full_blend() {
    let n = 256;
    let mask = Image::from_fn(n, n, 1, |x, _, _| ((x as f32 + 0.5 - n as f32 / 2.0) / 4.0 + 0.5).clamp(0.0, 1.0)).unwrap();
    let input = BlendInput::from_images(&white_noise(n, n, 1, 0), &white_noise(n, n, 1, 1), &mask, FilterKind::Box).unwrap();
    let p = BlendParams { clamp_output: false, ..BlendParams::with_levels(4) };
    let full = laplacian_blend(&input, &p).unwrap();
    let skip = laplacian_blend_skip(&input, &BlendParams { skip_levels: true, ..p }).unwrap();
    let mad = full.data().iter().zip(skip.data()).map(|(a, b)| (a - b).abs() as f64).sum::<f64>() / full.data().len() as f64;
    assert!((mad - 3.71788e-4).abs() <= 1e-3 * 3.71788e-4, "{mad}");
}

#[test]
fn pyramid_and_hextile_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["pyramid", "--size", "64", "--levels", "3", "--out", "p.png", "--mips-out", "m.png"]);
    assert_eq!(load_image(d.join("p.png"), false).unwrap().dimensions(), (256, 64));
    ok(d, &["hextile", "--size", "32", "--out-size", "48x40", "--levels", "2", "--out", "h.png"]);
    assert_eq!(load_image(d.join("h.png"), false).unwrap().dimensions(), (48, 40));
    ok(d, &["noisegrid", "--size", "16", "--out", "g.png"]);
}

#[test]
fn failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.png"), b"not a png").unwrap();
    std::fs::write(d.join("t.tga"), b"xx").unwrap();
    let code = |args: &[&str]| mipblend(d, args).status.code().unwrap();
    assert_eq!(code(&["blend", "--tex-a", "missing.png", "--tex-b", "missing.png", "--out", "o.png"]), 3);
    assert_eq!(code(&["blend", "--tex-a", "t.tga", "--tex-b", "t.tga", "--out", "o.png"]), 4);
    assert_eq!(code(&["blend", "--tex-a", "bad.png", "--tex-b", "bad.png", "--out", "o.png"]), 5);
    assert_eq!(code(&["blend", "--size", "48", "--out", "o.png"]), 1);
    assert_eq!(code(&["blend", "--skip", "--levels", "3", "--size", "32", "--out", "o.png"]), 1);
    assert_eq!(code(&["blend", "--bogus"]), 2);
    assert_eq!(code(&["blend", "--size", "32", "--out", "nodir/o.png"]), 6);
}

#[test]
fn exr_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    for ch in [3, 4] {
        let img = white_noise(16, 8, ch, ch as u64).map(|v| 4.0 * v - 1.5);
        let p = dir.path().join(format!("x{ch}.exr"));
        save_image(&img, &p, SaveOptions::default()).unwrap();
        assert_eq!(load_image(&p, false).unwrap(), img);
    }
    let gray = white_noise(8, 8, 1, 9);
    let p = dir.path().join("g.exr");
    save_image(&gray, &p, SaveOptions::default()).unwrap();
    let back = load_image(&p, false).unwrap();
    assert_eq!(back.channels(), 3);
    assert_eq!(back.channel(1).unwrap(), gray);
}

#[test]
fn png_round_trip_and_clamping() {
    let dir = tempfile::tempdir().unwrap();
    let img = white_noise(16, 16, 4, 5);
    let p = dir.path().join("x.png");
    save_image(&img, &p, SaveOptions::default()).unwrap();
    assert!(load_image(&p, false).unwrap().max_abs_diff(&img).unwrap() <= 0.5 / 255.0 + 1e-6);

    let wild = Image::new(2, 1, 1, vec![1.5, -0.2]).unwrap();
    assert!(matches!(save_image(&wild, &p, SaveOptions::default()), Err(Error::InvalidInput(_))));
    save_image(&wild, &p, SaveOptions::clamped()).unwrap();
    assert_eq!(load_image(&p, false).unwrap().data(), &[1.0, 0.0]);

    let srgb = Image::new(1, 1, 1, vec![0.5029]).unwrap();
    save_image(&srgb, &p, SaveOptions { clamp: true, srgb: true }).unwrap();
    assert!((load_image(&p, false).unwrap().get(0, 0, 0) - 188.0 / 255.0).abs() < 1e-6);
    assert!((load_image(&p, true).unwrap().get(0, 0, 0) - 0.5029).abs() < 1e-4);
}

#[test]
fn sixteen_bit_png_loads() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.png");
    let buf = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(3, 1, vec![0u16, 32768, 65535]).unwrap();
    buf.save(&p).unwrap();
    let img = load_image(&p, false).unwrap();
    assert_eq!(img.channels(), 1);
    assert_eq!(img.data(), &[0.0, 32768.0 / 65535.0, 1.0]);
}
