import numpy as np
import pytest

from cspair import _kernels_py, kernels
from cspair.rng import SplitMix64, substream

try:
    from cspair import _kernels as compiled
except ImportError:  # pragma: no cover - extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def test_splitmix64_reference_vector():
    # published SplitMix64 outputs for seed 0
    expected = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    doubles = _kernels_py.splitmix64_doubles(0, 3)[1]
    np.testing.assert_array_equal(doubles, [(z >> 11) * 2.0**-53 for z in expected])


def test_stream_is_reproducible():
    a = SplitMix64(42).uniform(-1, 1, 10)
    b = SplitMix64(42).uniform(-1, 1, 10)
    assert np.array_equal(a, b)
    assert np.all((a >= -1) & (a < 1))


def test_substreams_differ_and_leave_parent_untouched():
    s = SplitMix64(3)
    state = s.state
    x = s.substream(0).random(4)
    y = s.substream(1).random(4)
    assert s.state == state
    assert not np.array_equal(x, y)
    assert np.array_equal(x, substream(state, 0).random(4))


def _random_case(d, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((d, d))
    diag = np.exp(rng.uniform(-2, 2, d))
    outer = [rng.uniform(-1, 1, d) for _ in range(4)]
    inner = [rng.uniform(-1, 1, d) for _ in range(4)]
    return m, diag, outer, inner


@needs_compiled
@pytest.mark.parametrize("d", [1, 2, 5, 16, 33])
def test_backends_bit_identical(d):
    m, diag, outer, inner = _random_case(d, d)
    for name in ("form_transform",):
        assert np.array_equal(
            getattr(compiled, name)(diag, outer, inner), getattr(_kernels_py, name)(diag, outer, inner)
        )
    assert np.array_equal(
        compiled.conjugate(m, diag, outer, inner), _kernels_py.conjugate(m, diag, outer, inner)
    )
    assert np.array_equal(compiled.reflect_left(m, outer[0]), _kernels_py.reflect_left(m, outer[0]))
    assert np.array_equal(compiled.reflect_right(m, inner[0]), _kernels_py.reflect_right(m, inner[0]))
    assert compiled.splitmix64_doubles(d, 50)[0] == _kernels_py.splitmix64_doubles(d, 50)[0]
    assert np.array_equal(compiled.splitmix64_doubles(d, 50)[1], _kernels_py.splitmix64_doubles(d, 50)[1])


@pytest.mark.parametrize("impl", [_kernels_py, kernels])
def test_conjugate_matches_dense_algebra(impl):
    m, diag, outer, inner = _random_case(7, 1)
    S = impl.form_transform(diag, outer, inner)
    np.testing.assert_allclose(impl.conjugate(m, diag, outer, inner), S @ m @ np.linalg.inv(S), atol=1e-10)


def test_reflector_is_an_involution():
    m, _, outer, _ = _random_case(6, 2)
    back = _kernels_py.reflect_left(_kernels_py.reflect_left(m, outer[0]), outer[0])
    np.testing.assert_allclose(back, m, atol=1e-13)


def test_benchmark_runs(monkeypatch, capsys):
    import runpy
    import sys
    from pathlib import Path

    script = Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"
    monkeypatch.setattr(sys, "argv", [str(script), "--dims", "4", "--repeat", "1"])
    runpy.run_path(str(script), run_name="__main__")
    assert "conjugate" in capsys.readouterr().out
