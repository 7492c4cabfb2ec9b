import numpy as np
import pytest

from binshape import kernels
from binshape.grid import BinaryImage


def img(*rows):
    """Build an image from ascii rows ('#' = 1)."""
    return BinaryImage([[1 if ch == "#" else 0 for ch in row] for row in rows])


def all_images(width, height):
    for code in range(1 << (width * height)):
        yield BinaryImage.from_code(code, width, height)


@pytest.fixture
def donut():
    return img("###", "#.#", "###")


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    if request.param == "numba":
        if not kernels.NUMBA_AVAILABLE:
            pytest.skip("numba not installed")
        return kernels.numba_backend()
    return kernels.numpy_backend()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
