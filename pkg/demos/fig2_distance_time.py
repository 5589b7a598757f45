"""Average separation d(t) of the two bosons for several input states.

At phi = 0 more coherence means the pair spreads apart faster. At phi = pi the
ordering flips. At phi = pi/2 the coherent term drops out entirely.
"""
import math

import numpy as np

from _plotting import plt, save
from twobosonwalk import CoherenceFamilyParams, distance_series

L, ORIGIN = 61, 30
TIMES = np.linspace(0.0, 4.0, 41)
CURVES = [(eta, phi) for phi in (0.0, math.pi / 2, math.pi) for eta in (0.0, 0.5, 1.0)]


def main():
    series = {}
    for eta, phi in CURVES:
        s = distance_series(CoherenceFamilyParams(0.5, eta, phi), 1.0, TIMES, L, ORIGIN)
        series[(eta, phi)] = s.values
        print(f"eta={eta:.1f} phi={phi:.3f}: d(t=4) = {s.values[-1]:.4f}")
    if plt is None:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    for (eta, phi), d in series.items():
        style = {0.0: "-", math.pi / 2: ":", math.pi: "--"}[phi]
        ax.plot(TIMES, d, style, label=f"eta={eta}, phi={phi:.2f}")
    ax.set_xlabel("Ct")
    ax.set_ylabel("d")
    ax.legend(fontsize=7)
    save(fig, "fig2_distance_time.png")


if __name__ == "__main__":
    main()
