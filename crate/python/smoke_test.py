"""Smoke test for the qwalk_py extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml --release`.
"""

import math

import qwalk_py as qw


def close(a, b, tol=1e-9):
    return abs(a - b) < tol


def main():
    spec = qw.WalkSpec(3, steps=3, flavor="rotations")
    assert spec.positions == 8 and spec.qubits == 4, spec
    probs = qw.run_exact(spec)
    assert len(probs) == 8
    assert max(range(8), key=probs.__getitem__) == 7
    assert close(probs[7], 0.625) and all(close(probs[k], 0.125) for k in (1, 3, 5))

    inv = qw.run_exact(qw.WalkSpec(3, steps=3, flavor="inverters"))
    assert qw.total_variation(probs, inv) < 1e-9
    assert close(qw.variance(probs), 2.75)

    freqs, half = qw.run_shots(spec, 20000, batches=2, seed=5)
    assert close(sum(freqs), 1.0)
    assert all(abs(f - p) <= 3 * h + 1e-12 for f, p, h in zip(freqs, probs, half) if p > 0)
    assert qw.run_shots(spec, 2000, p_gate=0.01, seed=1) == qw.run_shots(spec, 2000, p_gate=0.01, seed=1)

    assert qw.gate_count_formula(8, "inverters") == 21
    assert qw.gate_count_formula(16, "rotations") == 65
    assert qw.qubit_count(8, "inverters") == 6 and qw.qubit_count(8, "rotations") == 4
    assert close(qw.quantum_volume(6, 0.031), 28.905, 0.01)
    assert sum(qw.step_gate_counts(3, "inverters").values()) > 0

    sim, theory = qw.variance_sweep(8, 40)
    assert len(sim) == 41 and sim[0] == 0.0
    ratio = sum(sim[t] / t**2 for t in range(20, 41)) / 21
    assert 0.177 <= ratio <= 0.237, ratio
    assert close(theory[10], 10**2 * (math.sqrt(2) - 1) / 2)

    try:
        qw.WalkSpec(3, flavor="sideways")
    except ValueError:
        pass
    else:
        raise AssertionError("bad flavor accepted")

    print("qwalk_py smoke test passed")


if __name__ == "__main__":
    main()
