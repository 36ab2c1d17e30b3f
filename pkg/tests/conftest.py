import numpy as np
import pytest


class StubRng:
    """Scripted stand-in for numpy's Generator.

    Each method pops its next scripted value; array-valued draws must be
    provided with the shape the caller requests. Call arguments are
    recorded for assertions on pool sizes and bounds.
    """

    def __init__(self, randoms=(), integers=(), choices=(), normals=()):
        self._randoms = list(randoms)
        self._integers = list(integers)
        self._choices = list(choices)
        self._normals = list(normals)
        self.calls = []

    def random(self, size=None):
        self.calls.append(("random", size))
        value = self._randoms.pop(0)
        if size is None:
            return float(value)
        value = np.asarray(value, dtype=float)
        expected = (size,) if np.isscalar(size) else tuple(size)
        assert value.shape == expected, f"scripted draw {value.shape} != {expected}"
        return value.copy()

    def integers(self, low, high=None, size=None):
        self.calls.append(("integers", low, high, size))
        value = self._integers.pop(0)
        if size is None:
            return int(value)
        return np.asarray(value, dtype=np.int64)

    def choice(self, n, size=None, replace=True, p=None):
        self.calls.append(("choice", n, size))
        value = self._choices.pop(0)
        return np.asarray(value)

    def normal(self, loc=0.0, scale=1.0, size=None):
        self.calls.append(("normal", loc, scale, size))
        value = self._normals.pop(0)
        if size is None:
            return float(value)
        return np.asarray(value, dtype=float)

    def exhausted(self):
        return not (self._randoms or self._integers or self._choices
                    or self._normals)


@pytest.fixture
def stub():
    return StubRng


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
