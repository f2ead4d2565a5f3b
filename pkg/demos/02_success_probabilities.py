#!/usr/bin/env python3
"""Stochastic-geometry success probabilities of the decoupled scheme.

Evaluates the UL and DL analytic success probabilities at the standard
parameter set, shows the quadrature error estimates, and sweeps the
traffic asymmetry ratio to expose the UL/DL interference trade-off.
"""

from dataclasses import replace

import numpy as np

from dudasim import (
    InterfererDensities,
    SystemParams,
    dl_success_probability,
    laplace_ul_from_dl_bs,
    laplace_ul_from_ul_ue,
    ul_success_probability,
)

params = SystemParams()
dens = InterfererDensities.from_params(params)
print("=== Standard parameters ===")
print(f"BS density            {params.lambda_b} per m^2")
print(f"DL traffic ratio      {params.delta}")
print(f"interfering DL-BS density  {dens.lambda_psi:.6f} per m^2")
print(f"interfering UL-UE density  {dens.lambda_phi:.6f} per m^2")

ru = ul_success_probability(params)
rd = dl_success_probability(params)
print(f"\nUL success probability rho_u = {ru.value:.6f}  (quadrature err {ru.quadrature_error:.1e})")
print(f"DL success probability rho_d = {rd.value:.6f}  (quadrature err {rd.quadrature_error:.1e})")

print("\n=== Laplace functionals along the link distance ===")
print(f"{'r [m]':>6} {'from DL-BSs':>12} {'from UL-UEs':>12}")
for r in (2.0, 5.0, 7.07, 10.0, 15.0):
    psi = laplace_ul_from_dl_bs(r, params)
    phi = laplace_ul_from_ul_ue(r, params)
    print(f"{r:6.2f} {psi:12.4f} {phi:12.4f}")
print("(the 100x BS/UE power ratio makes DL-BS interference dominate)")

print("\n=== Traffic asymmetry sweep ===")
print(f"{'delta':>6} {'rho_u':>8} {'rho_d':>8}")
for delta in np.linspace(0.1, 0.9, 9):
    p = replace(params, delta=float(delta))
    print(f"{delta:6.1f} {ul_success_probability(p).value:8.4f} "
          f"{dl_success_probability(p).value:8.4f}")
print("(more DL traffic -> more high-power interferers -> UL suffers, and "
      "vice versa)")
