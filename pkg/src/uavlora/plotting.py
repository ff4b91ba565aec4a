"""Static figures written next to the CSV outputs.

matplotlib is an optional dependency (``pip install uavlora[plot]``); it is
imported only when a figure is requested.
"""

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update({
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "savefig.dpi": 150,
        "svg.hashsalt": "uavlora",
    })
    return plt


def _save(fig, path):
    # fixed metadata keeps reruns byte-identical
    fig.savefig(path, bbox_inches="tight", metadata={"Software": None})
    fig.clf()
    import matplotlib.pyplot as plt

    plt.close(fig)


def coverage(grid, path, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    mesh = ax.pcolormesh(grid.r_axis, grid.h_axis, grid.values, shading="nearest",
                         cmap="viridis", vmin=max(grid.values.min(), grid.sensitivity - 20))
    ax.contour(grid.r_axis, grid.h_axis, grid.values, levels=[grid.sensitivity],
               colors="w", linewidths=0.8)
    fig.colorbar(mesh, ax=ax, label="$P_R$ (dBm)")
    ax.set_xlabel("ground distance R (m)")
    ax.set_ylabel("UAV altitude H (m)")
    ax.set_title(title)
    _save(fig, path)


def range_curves(rows, path, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for sf in sorted({sf for _, sf, _ in rows}, reverse=True):
        pts = [(H, res.last_crossing) for H, s, res in rows if s == sf and res.last_crossing]
        if pts:
            h, r = zip(*pts)
            ax.plot(np.array(h), np.array(r) / 1e3, marker=".", label=f"SF{sf}")
    ax.set_xlabel("UAV altitude H (m)")
    ax.set_ylabel("maximum range (km)")
    if ax.lines:
        ax.legend(fontsize=7)
    ax.set_title(title)
    _save(fig, path)


def profile(x, p_r, path, xlabel, sensitivity=None, single_ray=None, logx=True, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3))
    if single_ray is not None:
        ax.plot(x, single_ray, color="0.6", lw=0.8, label="single ray")
    ax.plot(x, p_r, lw=0.8, label="two ray" if single_ray is not None else "$P_R$")
    if sensitivity is not None:
        ax.axhline(sensitivity, color="r", ls="--", lw=0.8, label="sensitivity")
    if logx and np.all(np.asarray(x) > 0):
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("$P_R$ (dBm)")
    ax.set_ylim(bottom=max(np.min(p_r), -180))
    ax.legend(fontsize=7)
    ax.set_title(title)
    _save(fig, path)


def fresnel(phi_deg, curves, path):
    plt = _pyplot()
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(7, 3))
    for label, rho in curves.items():
        a1.plot(phi_deg, np.abs(rho), label=label)
        a2.plot(phi_deg, np.degrees(np.angle(rho)), label=label)
    a1.set_xlabel("incidence angle (deg)")
    a1.set_ylabel("|coefficient|")
    a2.set_xlabel("incidence angle (deg)")
    a2.set_ylabel("phase (deg)")
    a1.legend(fontsize=7)
    _save(fig, path)


def rx_pattern(theta_deg, gain_dbi, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4, 4), subplot_kw={"projection": "polar"})
    ax.plot(np.radians(theta_deg), np.maximum(gain_dbi, -30))
    ax.set_thetamin(0)
    ax.set_thetamax(180)
    _save(fig, path)


def ccdf(thresholds, pct, path, equivalent=None, quantile=75.0):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4.5, 3))
    ax.step(thresholds, pct, where="post")
    if equivalent is not None:
        ax.axhline(quantile, color="0.5", ls=":")
        ax.axvline(equivalent, color="r", ls="--", lw=0.8)
    ax.set_xlabel("$G_0$ (dBi)")
    ax.set_ylabel("CCDF (%)")
    _save(fig, path)


def comparison(x, model, measured, path, xlabel):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.plot(x, measured, ".", ms=2, label="measured")
    ax.plot(x, model, lw=0.8, label="model")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("$P_R$ (dBm)")
    ax.legend(fontsize=7)
    _save(fig, path)
