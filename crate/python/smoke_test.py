"""Smoke test for the mipblend extension module.

Build and install first:  pip install ./crates/python
"""

import os
import tempfile

import mipblend


def main():
    a = mipblend.white_noise(64, 64, 3, seed=1)
    b = mipblend.white_noise(64, 64, 3, seed=2)
    ramp = mipblend.Image(64, 64, 1, [min(max((x - 28) / 8, 0.0), 1.0) for _ in range(64) for x in range(64)])

    chain = mipblend.MipChain(a, filter="lanczos2")
    assert len(chain) == 7
    assert 3 * chain.total_texels() < 4 * 64 * 64

    stack = mipblend.LaplacianStack(chain, 4, mode="exact")
    assert len(stack.laplacians) == 4
    assert stack.reconstruct().max_abs_diff(a) <= 1e-5

    out = mipblend.laplacian_blend(a, b, ramp, levels=4)
    assert (out.width, out.height, out.channels) == (64, 64, 3)
    flat = mipblend.laplacian_blend(a, b, ramp, levels=0, clamp=False)
    assert flat.max_abs_diff(mipblend.linear_blend(a, b, ramp)) <= 1e-6
    same = mipblend.laplacian_blend(a, a, ramp, levels=4, clamp=False)
    assert same.max_abs_diff(a) <= 1e-5
    small = mipblend.laplacian_blend(a, b, ramp, levels=4, lod=2.0)
    assert small.width == 16
    field = mipblend.value_noise(64, 64, 1, cell=16, seed=3)
    mipblend.laplacian_blend_dynamic(a, b, field, threshold=0.5, scale=0.05)

    assert mipblend.sample_count(4) == 5
    assert mipblend.sample_count(4, skip=True) == 3

    tiled = mipblend.hextile(a, 96, 80, tile_scale=3.0, seed=7)
    assert (tiled.width, tiled.height) == (96, 80)

    x = mipblend.white_noise(256, 256, 1, seed=10)
    y = mipblend.white_noise(256, 256, 1, seed=11)
    report = mipblend.analyze(x, y)
    assert 0.63 <= report["mean_transition_ratio"] <= 0.70, report["mean_transition_ratio"]

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "out.exr")
        mipblend.save_image(out, path)
        assert mipblend.load_image(path) == out
        try:
            mipblend.load_image(os.path.join(d, "missing.png"))
        except FileNotFoundError:
            pass
        else:
            raise AssertionError("missing file should raise")

    try:
        mipblend.laplacian_blend(a, b, ramp, levels=3, skip=True)
    except ValueError:
        pass
    else:
        raise AssertionError("odd level count with skip should raise")

    print("smoke test passed")


if __name__ == "__main__":
    main()
