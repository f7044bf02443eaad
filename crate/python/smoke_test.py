# SPDX-License-Identifier: MIT OR Apache-2.0
"""Smoke test for the pysegdetect extension module."""

import json
import math

import pysegdetect as sd


def main():
    g = sd.Segment(0.2, 0.6)
    assert abs(g.measure - 0.4) < 1e-12
    assert sd.Segment.empty().is_empty
    assert abs(g.sym_diff(sd.Segment(0.4, 0.8)) - 0.4) < 1e-12

    x = sd.generate_design("dd", 20)
    assert x[0] == 0.05 and x[-1] == 1.0
    clean = sd.simulate(x, sd.Segment(0.2, 0.8), family="none", sigma=0.0)
    est = sd.estimate_with_min_length(clean, 0.5)
    assert (est.segment.a, est.segment.b) == (0.25, 0.75), est
    assert sd.lse_segment(clean).segment == sd.Segment(0.2, 0.8)

    planted = sd.Sample([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8], [0, 0, 1, 1, 1, 1, 0, 0])
    assert sd.scan_statistic(planted, 0.25) == (2.0, 3, 7)
    assert sd.test_scan(planted, 0.25).reject
    assert sd.scan_statistic(planted, 0.9) is None

    rho = sd.hellinger_affinity(sd.Segment.empty(), sd.Segment(0.0, 0.1), "dd", 100, 1.0)
    assert f"{rho:.5f}" == "0.28650"
    assert abs(sd.hellinger_affinity(sd.Segment.empty(), g, "rd", 1, 1.0)
               - (1 - (1 - math.exp(-1 / 8)) * 0.4)) < 1e-12

    noisy = sd.simulate(sd.generate_design("rd", 500, seed=3), g, sigma=0.5, seed=4)
    assert len(noisy) == 500
    assert sd.lse_segment(noisy).segment.sym_diff(g) < 0.1

    cfg = {
        "design": "dd", "n_grid": [50, 100], "noise": {"family": "gaussian", "sigma": 0.5},
        "estimator": {"kind": "lse_changepoint"}, "class": {"kind": "S0"},
        "truth_grid": [{"kind": "fixed", "a": 0.0, "b": 0.5}], "replications": 50,
    }
    report = json.loads(sd.monte_carlo_risk(json.dumps(cfg)))
    assert len(report["records"]) == 2
    try:
        sd.monte_carlo_risk(json.dumps({**cfg, "class": {"kind": "S"}}))
    except ValueError:
        pass
    else:
        raise AssertionError("class mismatch accepted")
    print("pysegdetect smoke test passed")


if __name__ == "__main__":
    main()
