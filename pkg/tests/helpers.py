"""Shared helpers for the test suite."""

import numpy as np

from mplangc.graphs import FeatureMap, disjoint_union, random_instances


def batch_instances(p, box, trials, seed, max_nodes=8):
    """One union graph + feature map covering `trials` random instances."""
    instances = list(random_instances(p, box, trials, seed, max_nodes))
    union, offsets = disjoint_union(g for g, _ in instances)
    fm = FeatureMap(np.concatenate([f.values for _, f in instances]))
    return union, fm


def assert_close(actual, expected, rtol=1e-9, floor=1e-12, context=""):
    """Per-element |actual - expected| <= max(floor, rtol*|expected|)."""
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    dev = np.abs(actual - expected)
    tol = np.maximum(floor, rtol * np.abs(expected))
    if not (dev <= tol).all():
        worst = float((dev - tol).max())
        raise AssertionError(
            f"deviation exceeds tolerance by {worst:g} "
            f"(max dev {dev.max():g}) {context}"
        )
