#!/usr/bin/env python3
"""Classical circular orbit against quantum expectation values.

A coherent-ish superposition centred on mode m0 should track the classical
orbit of p_phi = m0 hbar: <r>, <p_r>, <p_phi> frozen at the reduced values,
and <x + i y> rotating at the per-mode phase differences. Prints a small
table of both evolutions.
"""

import argparse

import numpy as np

from diracmech.circle import (CircleState, SpectrumTable, expect_cartesian,
                              expect_phi, expect_reduced)
from diracmech.models import KlauderModel, RadialPotential


def gaussian_packet(m_max, centre, width, hbar=1.0):
    m = np.arange(-m_max, m_max + 1)
    coeffs = np.exp(-((m - centre) ** 2) / (2.0 * width ** 2)).astype(complex)
    return CircleState(coeffs, hbar).normalized()


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--centre", type=int, default=3)
    parser.add_argument("--width", type=float, default=1.5)
    parser.add_argument("--m-max", type=int, default=16)
    parser.add_argument("--t-max", type=float, default=10.0)
    args = parser.parse_args()

    model = KlauderModel(alpha=args.alpha, k=args.k,
                         potential=RadialPotential.harmonic())
    table = SpectrumTable.build(model, args.m_max)
    state = gaussian_packet(args.m_max, args.centre, args.width, model.hbar)

    p_phi_classical = args.centre * model.hbar
    r_star, p_r_star = model.reduced_point(p_phi_classical)
    rate = model.phi_rate(p_phi_classical)
    print(f"classical orbit at p_phi = {p_phi_classical}: r* = {r_star:.6f}, "
          f"p_r* = {p_r_star:.6f}, phi_dot = {rate:+.6f}")

    reduced = expect_reduced(state, table)
    print(f"quantum packet:            <r> = {reduced.r_mean:.6f}, "
          f"<p_r> = {reduced.pr_mean:.6f}, <p_phi> = {reduced.pphi_mean:.6f}\n")

    print(f"{'t':>6} {'phi_classical':>14} {'<phi>':>10} {'|<x+iy>|':>10} {'arg<x+iy>':>10}")
    for t in np.linspace(0.0, args.t_max, 11):
        phi_c = (model.circular_orbit(np.pi, p_phi_classical, t)) % (2 * np.pi)
        phi_q = expect_phi(state, table, t).value
        xy = expect_cartesian(state, table, t).xy
        print(f"{t:6.2f} {phi_c:14.6f} {phi_q:10.6f} {abs(xy):10.6f} "
              f"{np.angle(xy):+10.6f}")


if __name__ == "__main__":
    main()
