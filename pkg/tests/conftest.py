import numpy as np
import pytest

from meanshiftseg import GrayImage, write_pgm


def _luma(rgb):
    r = rgb[:, :, 0].astype(np.float64)
    g = rgb[:, :, 1].astype(np.float64)
    b = rgb[:, :, 2].astype(np.float64)
    return np.clip(np.round(0.299 * r + 0.587 * g + 0.114 * b), 0, 255).astype(np.int32)


def make_step_image(size=64, low=40, high=200):
    pixels = np.full((size, size), low, dtype=np.int32)
    pixels[:, size // 2 :] = high
    return GrayImage(pixels)


def make_noise_blob_image(size=64, seed=11, sigma=6.0):
    rng = np.random.default_rng(seed)
    pixels = np.full((size, size), 60.0)
    rows, cols = np.mgrid[0:size, 0:size]
    blob = (rows - 40.0) ** 2 + (cols - 24.0) ** 2 <= 14.0**2
    pixels[blob] = 170.0
    pixels += rng.normal(0.0, sigma, size=(size, size))
    return GrayImage(np.clip(np.round(pixels), 0, 255).astype(np.int32))


@pytest.fixture(scope="session")
def suite_images():
    """Standard 64x64 test scenes: two natural crops, two synthetic.

    The natural crops are pinned regions of the scikit-image sample photos,
    decimated 2x, chosen so that the iterative filter reaches its exact
    fixed point comfortably inside the acceptance iteration budget.
    """
    from skimage import data

    cameraman = GrayImage(data.camera()[16:144:2, 352:480:2].astype(np.int32))
    portrait = GrayImage(_luma(data.astronaut())[320:448:2, 320:448:2])
    return {
        "cameraman": cameraman,
        "portrait": portrait,
        "step": make_step_image(),
        "noiseblob": make_noise_blob_image(),
    }


@pytest.fixture(scope="session")
def suite_pgm_dir(tmp_path_factory, suite_images):
    directory = tmp_path_factory.mktemp("suite")
    paths = {}
    for name, image in suite_images.items():
        path = directory / f"{name}.pgm"
        write_pgm(image, path)
        paths[name] = path
    return paths
