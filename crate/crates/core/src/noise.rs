//! Seeded noise textures.
//!
//! All generators draw from ChaCha8 seeded with `seed_from_u64`, so a seed
//! gives the same texture on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::{Addressing, Image};
use crate::pyramid::upsample_bilinear_with;

/// Independent uniform `[0, 1)` samples, row-major, channels interleaved.
pub fn white_noise(width: usize, height: usize, channels: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..width * height * channels).map(|_| rng.random::<f32>()).collect();
    Image::new(width, height, channels, data).expect("noise dimensions must be valid")
}

/// Tileable value noise: white noise on a grid of `cell`-sized cells,
/// bilinearly magnified. `cell` is a power of two dividing both sizes.
pub fn value_noise(width: usize, height: usize, channels: usize, cell: usize, seed: u64) -> Image {
    assert!(cell.is_power_of_two() && width.is_multiple_of(cell) && height.is_multiple_of(cell));
    let coarse = white_noise(width / cell, height / cell, channels, seed);
    upsample_bilinear_with(&coarse, cell, Addressing::Wrap).expect("power-of-two cell")
}

/// Mixes a seed with integer coordinates into a well-distributed 64-bit
/// value (SplitMix64 finalizer).
pub fn hash_coords(seed: u64, x: i64, y: i64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let h = mix(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let h = mix(h ^ (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    mix(h ^ (y as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f))
}
