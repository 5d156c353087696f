//! Python module `mipblend`.

use pyo3::exceptions::{PyFileNotFoundError, PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use mipblend_core::analysis;
use mipblend_core::blend::{self, BlendInput, BlendParams};
use mipblend_core::hextile::{hextile_render, HexTileParams};
use mipblend_core::io::{self, SaveOptions};
use mipblend_core::{noise, pyramid, DynamicMask, Error, FilterKind, StackMode};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::InvalidInput(_) => PyValueError::new_err(err.to_string()),
        Error::NotFound(_) => PyFileNotFoundError::new_err(err.to_string()),
        Error::UnsupportedFormat(_) | Error::Corrupt { .. } | Error::Write { .. } => PyIOError::new_err(err.to_string()),
    }
}

fn filter(name: &str) -> PyResult<FilterKind> {
    name.parse().map_err(to_py)
}

/// Row-major float image with interleaved channels.
#[pyclass(name = "Image", module = "mipblend", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyImage(mipblend_core::Image);

#[pymethods]
impl PyImage {
    #[new]
    fn new(width: usize, height: usize, channels: usize, data: Vec<f32>) -> PyResult<Self> {
        mipblend_core::Image::new(width, height, channels, data).map(PyImage).map_err(to_py)
    }

    #[staticmethod]
    fn filled(width: usize, height: usize, channels: usize, value: f32) -> PyResult<Self> {
        mipblend_core::Image::filled(width, height, channels, value).map(PyImage).map_err(to_py)
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.0.channels()
    }

    /// Flat copy of the samples.
    fn data(&self) -> Vec<f32> {
        self.0.data().to_vec()
    }

    fn get(&self, x: usize, y: usize, c: usize) -> PyResult<f32> {
        if x >= self.0.width() || y >= self.0.height() || c >= self.0.channels() {
            return Err(PyIndexError::new_err(format!("({x}, {y}, {c}) out of bounds")));
        }
        Ok(self.0.get(x, y, c))
    }

    fn max_abs_diff(&self, other: &PyImage) -> PyResult<f32> {
        self.0.max_abs_diff(&other.0).map_err(to_py)
    }

    fn __eq__(&self, other: &PyImage) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Image({}x{}x{})", self.0.width(), self.0.height(), self.0.channels())
    }
}

#[pyclass(name = "MipChain", module = "mipblend", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMipChain(mipblend_core::MipChain);

#[pymethods]
impl PyMipChain {
    #[new]
    #[pyo3(signature = (image, filter = "box", max_levels = None))]
    fn new(image: &PyImage, filter: &str, max_levels: Option<usize>) -> PyResult<Self> {
        let f = self::filter(filter)?;
        pyramid::build_mip_chain(&image.0, f, max_levels.unwrap_or(usize::MAX)).map(PyMipChain).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn level(&self, k: usize) -> PyResult<PyImage> {
        self.0.level(k).cloned().map(PyImage).map_err(to_py)
    }

    fn total_texels(&self) -> usize {
        self.0.total_texels()
    }

    #[getter]
    fn filter(&self) -> &'static str {
        self.0.filter().name()
    }
}

/// Laplacian levels at full resolution plus a base image.
#[pyclass(name = "LaplacianStack", module = "mipblend", frozen)]
struct PyLaplacianStack(pyramid::LaplacianStack);

#[pymethods]
impl PyLaplacianStack {
    #[new]
    #[pyo3(signature = (chain, levels, mode = "approx"))]
    fn new(chain: &PyMipChain, levels: usize, mode: &str) -> PyResult<Self> {
        let mode: StackMode = mode.parse().map_err(to_py)?;
        pyramid::build_laplacian_stack(&chain.0, levels, mode).map(PyLaplacianStack).map_err(to_py)
    }

    #[getter]
    fn laplacians(&self) -> Vec<PyImage> {
        self.0.laplacians.iter().cloned().map(PyImage).collect()
    }

    #[getter]
    fn base(&self) -> PyImage {
        PyImage(self.0.base.clone())
    }

    fn reconstruct(&self) -> PyResult<PyImage> {
        pyramid::reconstruct(&self.0).map(PyImage).map_err(to_py)
    }

    /// Per-level variances, Pearson matrix and variance residual as a dict.
    fn level_correlation<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let lc = analysis::level_correlation(&self.0).map_err(to_py)?;
        let dict = pyo3::types::PyDict::new(py);
        dict.set_item("per_level_variance", lc.per_level_variance.clone())?;
        dict.set_item("matrix", lc.matrix.clone())?;
        dict.set_item("variance_residual", lc.variance_residual)?;
        dict.set_item("max_off_diagonal", lc.max_off_diagonal())?;
        Ok(dict.into_any())
    }
}

fn params(levels: usize, filter: &str, skip: bool, lod: f32, mask_bias: usize, clamp: bool) -> PyResult<BlendParams> {
    Ok(BlendParams {
        num_levels: levels,
        filter: self::filter(filter)?,
        skip_levels: skip,
        clamp_output: clamp,
        lod,
        mask_level_bias: mask_bias,
    })
}

#[pyfunction]
#[pyo3(signature = (width, height, channels = 1, seed = 0))]
fn white_noise(width: usize, height: usize, channels: usize, seed: u64) -> PyImage {
    PyImage(noise::white_noise(width, height, channels, seed))
}

#[pyfunction]
#[pyo3(signature = (width, height, channels = 1, cell = 8, seed = 0))]
fn value_noise(width: usize, height: usize, channels: usize, cell: usize, seed: u64) -> PyResult<PyImage> {
    if !(cell.is_power_of_two() && width.is_multiple_of(cell) && height.is_multiple_of(cell)) {
        return Err(PyValueError::new_err("cell must be a power of two dividing both sizes"));
    }
    Ok(PyImage(noise::value_noise(width, height, channels, cell, seed)))
}

#[pyfunction]
#[pyo3(signature = (path, srgb = false))]
fn load_image(path: std::path::PathBuf, srgb: bool) -> PyResult<PyImage> {
    io::load_image(path, srgb).map(PyImage).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (image, path, clamp = true, srgb = false))]
fn save_image(image: &PyImage, path: std::path::PathBuf, clamp: bool, srgb: bool) -> PyResult<()> {
    io::save_image(&image.0, path, SaveOptions { clamp, srgb }).map_err(to_py)
}

#[pyfunction]
fn linear_blend(a: &PyImage, b: &PyImage, mask: &PyImage) -> PyResult<PyImage> {
    blend::linear_blend(&a.0, &b.0, &mask.0).map(PyImage).map_err(to_py)
}

/// Blends `a` (mask 0) and `b` (mask 1). With `lod > 0` the result is
/// produced at mip level `floor(lod)`.
#[pyfunction]
#[pyo3(signature = (a, b, mask, levels = 4, filter = "box", skip = false, lod = 0.0, mask_bias = 0, clamp = true))]
#[allow(clippy::too_many_arguments)]
fn laplacian_blend(
    a: &PyImage,
    b: &PyImage,
    mask: &PyImage,
    levels: usize,
    filter: &str,
    skip: bool,
    lod: f32,
    mask_bias: usize,
    clamp: bool,
) -> PyResult<PyImage> {
    let p = params(levels, filter, skip, lod, mask_bias, clamp)?;
    let input = BlendInput::from_images(&a.0, &b.0, &mask.0, p.filter).map_err(to_py)?;
    blend::laplacian_blend(&input, &p).map(PyImage).map_err(to_py)
}

/// Blend driven by a single-channel field remapped per level around
/// `threshold` with width `scale * 2^k`.
#[pyfunction]
#[pyo3(signature = (a, b, field, threshold, scale, levels = 4, filter = "box", clamp = true))]
#[allow(clippy::too_many_arguments)]
fn laplacian_blend_dynamic(
    a: &PyImage,
    b: &PyImage,
    field: &PyImage,
    threshold: f32,
    scale: f32,
    levels: usize,
    filter: &str,
    clamp: bool,
) -> PyResult<PyImage> {
    let p = params(levels, filter, false, 0.0, 0, clamp)?;
    let chain = |img: &PyImage| pyramid::build_mip_chain(&img.0, p.filter, usize::MAX).map_err(to_py);
    let dm = DynamicMask::new(field.0.clone(), threshold, scale).map_err(to_py)?;
    let input = BlendInput::pair_dynamic(chain(a)?, chain(b)?, dm).map_err(to_py)?;
    blend::laplacian_blend(&input, &p).map(PyImage).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (levels, skip = false, lod = 0.0))]
fn sample_count(levels: usize, skip: bool, lod: f32) -> usize {
    blend::sample_count(&BlendParams { skip_levels: skip, lod, ..BlendParams::with_levels(levels) })
}

#[pyfunction]
#[pyo3(signature = (texture, width, height, tile_scale = 4.0, transition = 0.05, rotate = true, seed = 0, levels = 4, filter = "box"))]
#[allow(clippy::too_many_arguments)]
fn hextile(
    texture: &PyImage,
    width: usize,
    height: usize,
    tile_scale: f32,
    transition: f32,
    rotate: bool,
    seed: u64,
    levels: usize,
    filter: &str,
) -> PyResult<PyImage> {
    let blend = params(levels, filter, false, 0.0, 0, true)?;
    let chain = pyramid::build_mip_chain(&texture.0, blend.filter, usize::MAX).map_err(to_py)?;
    let p = HexTileParams { tile_scale, rotation_jitter: rotate, seed, transition, blend };
    hextile_render(&chain, width, height, &p).map(PyImage).map_err(to_py)
}

/// Blend-variance statistics of `x` against `y` as a dict.
#[pyfunction]
#[pyo3(signature = (x, y, levels = 4, filter = "box", mode = "approx", steps = analysis::PROFILE_STEPS))]
fn analyze<'py>(
    py: Python<'py>,
    x: &PyImage,
    y: &PyImage,
    levels: usize,
    filter: &str,
    mode: &str,
    steps: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let chain = pyramid::build_mip_chain(&x.0, self::filter(filter)?, usize::MAX).map_err(to_py)?;
    let stack = pyramid::build_laplacian_stack(&chain, levels, mode.parse().map_err(to_py)?).map_err(to_py)?;
    let report = analysis::StatsReport::compute(&x.0, &y.0, &stack, steps).map_err(to_py)?;
    py.import("json")?.call_method1("loads", (report.to_text(),))
}

#[pymodule]
fn mipblend(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyImage>()?;
    m.add_class::<PyMipChain>()?;
    m.add_class::<PyLaplacianStack>()?;
    m.add_function(wrap_pyfunction!(white_noise, m)?)?;
    m.add_function(wrap_pyfunction!(value_noise, m)?)?;
    m.add_function(wrap_pyfunction!(load_image, m)?)?;
    m.add_function(wrap_pyfunction!(save_image, m)?)?;
    m.add_function(wrap_pyfunction!(linear_blend, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian_blend, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian_blend_dynamic, m)?)?;
    m.add_function(wrap_pyfunction!(sample_count, m)?)?;
    m.add_function(wrap_pyfunction!(hextile, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    Ok(())
}
