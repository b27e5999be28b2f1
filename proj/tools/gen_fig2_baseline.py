#!/usr/bin/env python3
# Copyright 2026 The REAP Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates tests/data/fig2_baseline.csv at 50-digit precision.

Independent of the C++ solvers: the complete-information menu is evaluated
directly, and the incomplete-information menu by exhaustive search over
pooling partitions, all with mpmath.
"""

import argparse
import sys

import mpmath

mpmath.mp.dps = 50


def complete_eps(thetas, lambdas, budget):
    s = sum(l * t ** (mpmath.mpf(2) / 3) for t, l in zip(thetas, lambdas))
    return [budget * t ** (-mpmath.mpf(1) / 3) / s for t in thetas]


def budget_weights(thetas, lambdas):
    h = []
    below = mpmath.mpf(0)
    for i, (t, l) in enumerate(zip(thetas, lambdas)):
        step = t - thetas[i - 1] if i else mpmath.mpf(0)
        h.append(l * t + step * below)
        below += l
    return h


def partitions(k):
    """Every split of range(k) into consecutive non-empty runs."""
    for mask in range(1 << max(k - 1, 0)):
        runs, start = [], 0
        for cut in range(1, k):
            if mask & (1 << (cut - 1)):
                runs.append(range(start, cut))
                start = cut
        runs.append(range(start, k))
        yield runs


def incomplete_eps(thetas, lambdas, budget):
    # Best monotone menu: solve each partition with one epsilon per run and
    # keep the cheapest candidate that is non-increasing.
    h = budget_weights(thetas, lambdas)
    best, best_spread = None, None
    for runs in partitions(len(thetas)):
        lam = [sum(lambdas[i] for i in r) for r in runs]
        wt = [sum(h[i] for i in r) for r in runs]
        g = budget / sum(w ** (mpmath.mpf(2) / 3) * l ** (mpmath.mpf(1) / 3)
                         for w, l in zip(wt, lam))
        eps = [None] * len(thetas)
        for r, l, w in zip(runs, lam, wt):
            for i in r:
                eps[i] = g * (l / w) ** (mpmath.mpf(1) / 3)
        if any(eps[i + 1] > eps[i] * (1 + mpmath.mpf(10) ** -40)
               for i in range(len(eps) - 1)):
            continue
        value = spread(eps, lambdas)
        if best is None or value < best_spread:
            best, best_spread = eps, value
    return best


def spread(eps, lambdas):
    return mpmath.sqrt(sum(l / e ** 2 for e, l in zip(eps, lambdas)))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--lambda-step", type=int, default=10)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    n, budget = 300, mpmath.mpf(1000)
    thetas_all = [mpmath.mpf(1), mpmath.mpf(2), mpmath.mpf(3)]
    lines = ["lambda1,lambda2,lambda3,ratio"]
    for l1 in range(0, 251, 50):
        for l2 in range(0, n - l1 + 1, args.lambda_step):
            lam_all = [l1, l2, n - l1 - l2]
            kept = [(t, mpmath.mpf(l)) for t, l in zip(thetas_all, lam_all) if l]
            thetas = [t for t, _ in kept]
            lambdas = [l for _, l in kept]
            # Shared prefactors of the accuracy cancel in the ratio.
            ratio = (spread(incomplete_eps(thetas, lambdas, budget), lambdas) /
                     spread(complete_eps(thetas, lambdas, budget), lambdas))
            lines.append("%d,%d,%d,%s" % (l1, l2, lam_all[2],
                                          mpmath.nstr(ratio, 20)))
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)


if __name__ == "__main__":
    main()
