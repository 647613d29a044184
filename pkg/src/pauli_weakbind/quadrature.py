"""Composite Gauss-Legendre integration on fixed panels, with cumulative lookup."""
from __future__ import annotations

import numpy as np

_NODES = {}


def gauss_nodes(n):
    if n not in _NODES:
        _NODES[n] = np.polynomial.legendre.leggauss(n)
    return _NODES[n]


def panel_edges(breakpoints, per_piece=16, grade_origin=True):
    """Panel edges refining every interval between consecutive breakpoints.

    A piece starting at 0 is graded geometrically towards the origin, where
    integrands behave like powers of r.
    """
    edges = [float(breakpoints[0])]
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if a == 0.0 and grade_origin:
            inner = b * 2.0 ** -np.arange(per_piece, 0, -1, dtype=float)
            edges.extend(inner.tolist())
            edges.extend(np.linspace(b / 2.0, b, per_piece + 1)[1:].tolist())
        else:
            edges.extend(np.linspace(a, b, per_piece + 1)[1:].tolist())
    return np.unique(np.asarray(edges))


def integrate(f, a, b, order=20):
    """Gauss-Legendre rule on [a, b] for vectorised f; a, b may be arrays."""
    x, w = gauss_nodes(order)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[..., None] + half[..., None] * x
    return half * np.sum(w * f(pts), axis=-1)


def integrate_panels(f, edges, order=20):
    return float(np.sum(integrate(f, edges[:-1], edges[1:], order)))


class CumulativeIntegral:
    """``F(r) = int_{edges[0]}^r f`` for r inside the panel range."""

    def __init__(self, f, edges, order=20):
        self.f = f
        self.edges = np.asarray(edges, dtype=float)
        self.order = order
        pieces = integrate(f, self.edges[:-1], self.edges[1:], order)
        self.cum = np.concatenate(([0.0], np.cumsum(pieces)))
        # summed from the top: no cancellation when f is large near edges[0]
        self.rcum = np.concatenate((np.cumsum(pieces[::-1])[::-1], [0.0]))

    @property
    def total(self):
        return float(self.cum[-1])

    def __call__(self, r):
        r, k = self._panel(r)
        start = self.edges[k]
        partial = integrate(self.f, start, r, self.order)
        return self.cum[k] + partial

    def _panel(self, r):
        r = np.asarray(r, dtype=float)
        return r, np.clip(np.searchsorted(self.edges, r, side="right") - 1, 0,
                          len(self.edges) - 2)

    def upper(self, r):
        """``int_r^{edges[-1]} f``."""
        r, k = self._panel(r)
        return integrate(self.f, r, self.edges[k + 1], self.order) + self.rcum[k + 1]
