"""Smoke test for the entbound extension module.

Build and run from the repository root:

    cargo build --release -p entbound-py
    cp target/release/libentbound_py.so python/entbound.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import entbound as eb


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol


def main():
    ghz = eb.ghz_xstate(4)
    assert close(eb.entanglement(ghz), 0.5)
    assert close(eb.concurrence(ghz), 1.0)

    noisy = ghz.apply_noise("depolarizing", 0.2)
    e = eb.entanglement(noisy)
    sigma = eb.closest_biseparable(noisy)
    d = eb.trace_distance(noisy.to_dense(), sigma.to_dense())
    assert close(d, e), (d, e)
    assert close(eb.entanglement(noisy.to_dense()), e)

    rec = noisy.record()
    b = eb.four_measurement_bounds(rec, 4)
    assert b["lower"] <= e <= b["upper"], (b, e)
    opt = eb.four_measurement_bounds(rec, 4, theta_opt=True)
    assert opt["lower"] >= b["lower"] and opt["theta_star"] is not None

    rho = eb.ghz_state(3).apply_noise("dephasing", 0.3)
    sampled = eb.sample_record(rho, 20000, 7)
    assert sampled.shots == 20000
    eb.four_measurement_bounds(sampled, 3)

    assert eb.commutation_census("XXYZ") == (4, 4)
    assert eb.commutation_census("ZZII") == (8, 0)

    chi_a = eb.chi_kraus(rho).to_list()
    chi_b = eb.chi_zero(rho).to_list()
    assert max(abs(x - y) for ra, rb in zip(chi_a, chi_b) for x, y in zip(ra, rb)) < 1e-12

    rows = eb.table1()
    assert [r["n_ions"] for r in rows] == [2, 3, 4, 5, 6]
    assert rows[-1]["flag"] is not None

    try:
        eb.MeasurementRecord(0.5, 0.5, 0.8, 0.0).check()
    except ValueError:
        pass
    else:
        raise AssertionError("inconsistent record accepted")

    for r in rows:
        print(f"N={r['n_ions']}: lower={r['lower']:.4f} flag={r['flag']}")
    print("smoke test passed")


if __name__ == "__main__":
    main()
