"""Slow, obviously-correct reference implementations used as test oracles."""

from __future__ import annotations


def median_sorted(values: list[float]) -> float:
    s = sorted(values)
    n = len(s)
    h = (n - 1) * 0.5
    lo = int(h)
    return s[lo] + (h - lo) * (s[min(lo + 1, n - 1)] - s[lo])


def normalize_bruteforce(y: list[float], ale_y0: list[float]) -> list[float]:
    """Quadratic sort-and-count ECDF normalisation onto the -50..50 scale."""
    m = median_sorted(y)
    centred = [v - m for v in y]
    neg = [-c for c in centred if c < 0]
    pos = [c for c in centred if c >= 0]
    below = [c for c in centred if c < 0]
    above = [c for c in centred if c > 0]
    zero_low = max(below) if below else float("-inf")
    zero_high = min(above) if above else float("inf")
    out = []
    for v in ale_y0:
        if v == 0 or zero_low < v < zero_high:
            out.append(0.0)
        elif v > 0:
            count = sum(1 for p in pos if p <= v)
            out.append(50.0 * count / len(pos))
        else:
            count = sum(1 for q in neg if q <= -v)
            out.append(-(50.0 * count / len(neg)))
    return out


def runs_bruteforce(statuses: list[str]) -> list[tuple[int, int, str]]:
    out: list[tuple[int, int, str]] = []
    for i, s in enumerate(statuses):
        if out and out[-1][2] == s:
            out[-1] = (out[-1][0], i, s)
        else:
            out.append((i, i, s))
    return out
