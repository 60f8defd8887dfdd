import os
import subprocess
import sys

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cfrkit import _kernels


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20), st.integers(1, 30), st.integers(0, 5), st.data())
def test_numba_matches_numpy(k, c, a, data):
    lx = data.draw(arrays(np.int64, (k, a), elements=st.integers(-3, 3)))
    lp = data.draw(arrays(np.int64, (c, a), elements=st.integers(-3, 3)))
    rel = data.draw(arrays(np.int64, (a,), elements=st.integers(0, 2)))
    ref = _kernels.satisfied_mask_numpy(lx, lp, rel) if a else np.ones((k, c), bool)
    assert np.array_equal(_kernels.satisfied_mask(lx, lp, rel), ref)
    if _kernels._mask_numba is not None and a:
        assert np.array_equal(_kernels._mask_numba(lx, lp, rel), ref)


def test_env_flag_selects_fallback():
    code = "from cfrkit import _kernels; print(_kernels.USE_NUMBA)"
    env = dict(os.environ, CFRKIT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == "False"


def test_benchmark_runs():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    out = subprocess.run([sys.executable, os.path.join(root, "benchmarks", "bench_kernels.py"),
                          "--states", "50", "--cands", "27", "--reps", "1"],
                         capture_output=True, text=True, check=True)
    assert "numpy" in out.stdout
