"""Separation at tau = 8 as a function of eta (fixed phi) and of phi (fixed eta).

d is affine in gamma cos(phi), so each eta sweep is monotone and each phi sweep
traces a cosine. With eta = 0 there is nothing for the phase to act on.
"""
import numpy as np

from _plotting import plt, save
from twobosonwalk import CoherenceFamilyParams, avg_distance, gamma_bessel

L, ORIGIN, T = 61, 30, 4.0


def d(eta, phi):
    return avg_distance(gamma_bessel(CoherenceFamilyParams(0.5, eta, phi), 1.0, T, L, ORIGIN))


def main():
    etas = np.linspace(0, 1, 21)
    phis = np.linspace(-np.pi, np.pi, 41)
    by_eta = {phi: [d(e, phi) for e in etas] for phi in (0.0, np.pi / 2, np.pi)}
    by_phi = {eta: [d(eta, p) for p in phis] for eta in (0.0, 0.5, 1.0)}
    for phi, ds in by_eta.items():
        print(f"phi={phi:.3f}: d(eta=0) = {ds[0]:.4f}, d(eta=1) = {ds[-1]:.4f}")
    for eta, ds in by_phi.items():
        print(f"eta={eta:.1f}: d ranges over [{min(ds):.4f}, {max(ds):.4f}]")
    if plt is None:
        return
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    for phi, ds in by_eta.items():
        left.plot(etas, ds, label=f"phi={phi:.2f}")
    left.set_xlabel("eta")
    left.set_ylabel("d")
    left.legend()
    for eta, ds in by_phi.items():
        right.plot(phis, ds, label=f"eta={eta}")
    right.set_xlabel("phi")
    right.legend()
    save(fig, "fig3_distance_sweeps.png")


if __name__ == "__main__":
    main()
