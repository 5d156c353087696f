//! Band-by-band texture blending evaluated directly from mip chains.
//!
//! Textures are decomposed into band-pass (Laplacian) levels built in place
//! from their mip levels, and each band is blended with a mask whose
//! smoothness matches the band's feature size. Fine detail gets a sharp
//! transition, coarse color a wide one, which keeps contrast in the
//! transition region without visible seams.
//!
//! Modules:
//! - [`pyramid`]: mip chains, Box/Lanczos2 downsampling, bilinear upsampling,
//!   exact and mip-approximated Laplacian stacks.
//! - [`blend`]: the blend operator and its minified, level-skipping and
//!   multi-texture variants.
//! - [`mask`]: mask Gaussian levels from a mask chain or from a single smooth
//!   mask by clamped remapping.
//! - [`analysis`]: variance statistics used to check contrast preservation.
//! - [`hextile`]: hexagonal macro-tiling driven by the blend operator.
//! - [`io`] and [`cli`]: image files and the `mipblend` command line.

pub mod analysis;
pub mod blend;
pub mod cli;
pub mod error;
pub mod hextile;
pub mod image;
pub mod io;
pub mod mask;
pub mod noise;
pub mod pyramid;

pub use crate::analysis::{LevelCorrelation, ProfilePoint, Region, StatsReport};
pub use crate::blend::{BlendInput, BlendParams, MaskSource, Weights};
pub use crate::error::{Error, Result};
pub use crate::hextile::{HexTileParams, TileId};
pub use crate::image::{Addressing, Image};
pub use crate::mask::DynamicMask;
pub use crate::pyramid::{FilterKind, LaplacianStack, MipChain, StackMode};
