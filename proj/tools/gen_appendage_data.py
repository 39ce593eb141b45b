#!/usr/bin/env python3
# Copyright (c) 2026 The SPCM Authors
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
"""Writes the appendage modal data files under data/.

Uniform cantilever idealizations. Appendage axes: span along +y from the
attachment point, panel normal along +z. Modal participations are computed by
quadrature of mass-normalized clamped-free mode shapes; the frequencies are
chosen (they set the implied EI and GJ, which are printed for reference).
"""

import argparse
import math
import pathlib

import numpy as np

BETA1 = 1.8751040687119611  # first clamped-free root of cos(b)cosh(b) = -1
SAMPLES = 20001


def skew(v):
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def rigid_mass(mass, com, inertia_com):
    m = np.zeros((6, 6))
    m[:3, :3] = mass * np.eye(3)
    m[:3, 3:] = -mass * skew(com)
    m[3:, :3] = mass * skew(com)
    m[3:, 3:] = inertia_com - mass * skew(com) @ skew(com)
    return m


def bending_shape(y, length):
    b = BETA1 / length
    sigma = (math.cosh(BETA1) + math.cos(BETA1)) / (math.sinh(BETA1) + math.sin(BETA1))
    return np.cosh(b * y) - np.cos(b * y) - sigma * (np.sinh(b * y) - np.sin(b * y))


def beam(mass, length, width):
    """Participation vectors of a uniform cantilever panel: out-of-plane
    bending, torsion, in-plane bending (in that order)."""
    y = np.linspace(0.0, length, SAMPLES)
    rho = mass / length
    phi = bending_shape(y, length)
    phi /= math.sqrt(np.trapezoid(rho * phi * phi, y))
    lt = np.trapezoid(rho * phi, y)
    lr = np.trapezoid(rho * y * phi, y)

    polar = mass * width**2 / 12.0  # about the span axis
    j = polar / length
    psi = np.sin(math.pi * y / (2.0 * length))
    psi /= math.sqrt(np.trapezoid(j * psi * psi, y))
    lq = np.trapezoid(j * psi, y)

    out_of_plane = np.array([0.0, 0.0, lt, lr, 0.0, 0.0])
    torsion = np.array([0.0, 0.0, 0.0, 0.0, lq, 0.0])
    in_plane = np.array([lt, 0.0, 0.0, 0.0, 0.0, -lr])
    com = np.array([0.0, length / 2.0, 0.0])
    inertia = np.diag([mass * length**2 / 12.0, polar, mass * (length**2 + width**2) / 12.0])
    return rigid_mass(mass, com, inertia), [out_of_plane, torsion, in_plane]


def implied_stiffness(mass, length, width, f_bend, f_tors):
    rho = mass / length
    w_b = 2.0 * math.pi * f_bend
    ei = w_b**2 * rho * length**4 / BETA1**4
    j = mass * width**2 / 12.0 / length
    w_t = 2.0 * math.pi * f_tors
    gj = w_t**2 * j * (2.0 * length / math.pi) ** 2
    return ei, gj


def fmt(x):
    return repr(float(0.0 if abs(x) < 1e-15 else x))


def write(path, name, description, mass_matrix, freqs_hz, damping, modes):
    residual = mass_matrix - sum(np.outer(l, l) for l in modes) if modes else mass_matrix
    eig = np.linalg.eigvalsh(residual)
    assert eig.min() > -1e-9 * abs(mass_matrix).max(), f"{name}: residual mass not PSD"
    lines = [
        "# Generated by tools/gen_appendage_data.py. Do not edit by hand.",
        f"# {description}",
        "schema: spcm-appendage/1",
        f"name: {name}",
        "units: {length: m, mass: kg, frequency: Hz}",
        "mass_matrix:",
    ]
    for row in mass_matrix:
        lines.append("  - [" + ", ".join(fmt(v) for v in row) + "]")
    if modes:
        lines.append("modes:")
        for f, z, l in zip(freqs_hz, damping, modes):
            lines.append(f"  - frequency: {fmt(f)}")
            lines.append(f"    damping: {fmt(z)}")
            lines.append("    participation: [" + ", ".join(fmt(v) for v in l) + "]")
    else:
        lines.append("modes: []")
    path.write_text("\n".join(lines) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    # Solar array wing: 60 kg, 6 m span, 2 m chord.
    m, length, width = 60.0, 6.0, 2.0
    mm, modes = beam(m, length, width)
    freqs = [0.6, 1.8, 4.1]
    ei, gj = implied_stiffness(m, length, width, freqs[0], freqs[1])
    write(out / "solar_array.yaml", "solar_array",
          f"Solar array wing, 60 kg, 6 m x 2 m, EI={ei:.4g} N m^2, GJ={gj:.4g} N m^2",
          mm, freqs, [0.005, 0.005, 0.005], modes)

    # High-gain antenna boom: 15 kg, 2.5 m.
    m, length, width = 15.0, 2.5, 0.6
    mm, modes = beam(m, length, width)
    freqs = [2.5, 8.0, 2.7]
    ei, gj = implied_stiffness(m, length, width, freqs[0], freqs[1])
    write(out / "hga_boom.yaml", "hga_boom",
          f"Antenna boom, 15 kg, 2.5 m, EI={ei:.4g} N m^2, GJ={gj:.4g} N m^2",
          mm, freqs, [0.01, 0.01, 0.01], modes)

    # Telescope payload, lumped: node at the isolator, CoM 0.8 m above it.
    m = 250.0
    mm = rigid_mass(m, np.array([0.0, 0.0, 0.8]), np.diag([120.0, 120.0, 60.0]))
    write(out / "payload.yaml", "payload", "Telescope payload, lumped rigid body", mm, [], [], [])


if __name__ == "__main__":
    main()
