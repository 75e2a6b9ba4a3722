#!/usr/bin/env python3
"""Writes data/sp4.json: the principal block of Sp4 graded by the
cocharacter with L_0 = gl2 and L_2 = Sym^2, built from C2 root data.

Basis elements are the W-cosets modulo the swap of coordinates, each
represented by a regular vector phi with |phi1| > |phi2|.  For a pair of
cosets the pairing orbits are the two elements y of the target coset, and
tau counts degree-2 roots separating x and y, minus twice the degree-0
root when it separates them.
"""
import json
import os
import sys

DEG2 = [(2, 0), (0, 2), (1, 1)]  # 2e1, 2e2, e1+e2
DEG0 = (1, -1)                   # e1-e2

REPS = {"(-,-)": (-2, -1), "(-,+)": (-2, 1), "(+,-)": (2, -1), "(+,+)": (2, 1)}
NAMES = list(REPS)


def ev(root, phi):
    return root[0] * phi[0] + root[1] * phi[1]


def separates(root, x, y):
    return (ev(root, x) > 0) != (ev(root, y) > 0)


def tau(x, y):
    t = sum(separates(r, x, y) for r in DEG2)
    return t - 2 * separates(DEG0, x, y)


def pairing(reps):
    out = []
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            for y in (b, (b[1], b[0])):
                out.append({"s": i, "s_prime": j, "tau": tau(a, y)})
    return out


def neg(phi):
    return (-phi[0], -phi[1])


def index_of(phi):
    for i, p in enumerate(REPS.values()):
        if p in (phi, (phi[1], phi[0])):
            return i
    raise ValueError(phi)


def main():
    reps = list(REPS.values())
    sigma = [index_of(neg(p)) for p in reps]
    torus = {
        "name": "sp4/torus", "delta": [2, -2],
        "basis": [{"index": 0, "label": "t"}],
        "primitive_classes": [{"id": 0, "dual": 0, "c_F": 0, "members": [0], "theta_ratio": "1"}],
        "pairing": [{"s": 0, "s_prime": 0, "tau": 0}],
        "sigma": [0],
        "orbits": {"2": [{"name": "0", "dim": 0}], "-2": [{"name": "0", "dim": 0}]},
        "leaf": {"rigid": True, "cprime": [{"s_F": 0, "r_F": "1", "kappa_label": "triv"}]},
    }
    # Levi GL2 of the Siegel parabolic: nothing in degree 2, one coset
    gl2c = {
        "name": "sp4/gl2", "delta": [2, -2],
        "basis": [{"index": 0, "label": "w"}],
        "primitive_classes": [{"id": 0, "dual": 0, "c_F": -2, "members": [0], "theta_ratio": "1+v^2"}],
        "pairing": [{"s": 0, "s_prime": 0, "tau": 0}, {"s": 0, "s_prime": 0, "tau": -2}],
        "sigma": [0],
        "orbits": {"2": [{"name": "0", "dim": 0}], "-2": [{"name": "0", "dim": 0}]},
        "leaf": {"rigid": True, "cprime": [{"s_F": 0, "r_F": "v^-1+v", "kappa_label": "triv"}]},
    }
    # Levi GL1 x Sp2 with the long root 2e1 in degree 2
    m_rep, p_rep = -1, 1
    sp2 = {
        "name": "sp4/gl1xsp2", "delta": [2, -2],
        "basis": [{"index": 0, "label": "m"}, {"index": 1, "label": "p"}],
        "primitive_classes": [{"id": 0, "dual": 0, "c_F": 1, "members": [0, 1], "theta_ratio": "1"}],
        "pairing": [{"s": i, "s_prime": j, "tau": int((a > 0) != (b > 0))}
                    for i, a in enumerate((m_rep, p_rep)) for j, b in enumerate((m_rep, p_rep))],
        "sigma": [1, 0],
        "orbits": {"2": [{"name": "0", "dim": 0}, {"name": "reg", "dim": 1}],
                   "-2": [{"name": "0", "dim": 0}, {"name": "reg", "dim": 1}]},
        "closure": {"2": [["0", "reg"]], "-2": [["0", "reg"]]},
        "etas": {"2": [{"d": 0, "orbit": "0", "child": "torus", "induction": [[0, 0]]}],
                 "-2": [{"d": 0, "orbit": "0", "child": "torus", "induction": [[0, 1]]}]},
        "leaf": {"rigid": True, "cprime": []},
    }
    A, B, C, D = range(4)
    datum = {
        "name": "sp4", "delta": [2, -2],
        "basis": [{"index": i, "label": nm} for i, nm in enumerate(NAMES)],
        "primitive_classes": [{"id": 0, "dual": 0, "c_F": 1, "members": [0, 1, 2, 3], "theta_ratio": "1+v^2"}],
        "pairing": pairing(reps),
        "sigma": sigma,
        "orbits": {"2": [{"name": "O0", "dim": 0}, {"name": "O2", "dim": 2}, {"name": "O3", "dim": 3}],
                   "-2": [{"name": "O0", "dim": 0}, {"name": "O2", "dim": 2}, {"name": "O3", "dim": 3}]},
        "closure": {"2": [["O0", "O2"], ["O2", "O3"]], "-2": [["O0", "O2"], ["O2", "O3"]]},
        "etas": {
            "2": [{"d": 0, "orbit": "O0", "child": "gl2", "induction": [[0, A]]},
                  {"d": 2, "orbit": "O2", "child": "gl1xsp2", "induction": [[0, A], [1, B]]}],
            "-2": [{"d": 0, "orbit": "O0", "child": "gl2", "induction": [[0, D]]},
                   {"d": 2, "orbit": "O2", "child": "gl1xsp2", "induction": [[0, C], [1, D]]}],
        },
        "leaf": {"rigid": True, "cprime": []},
        "open_labels": [{"partner_orbit": "O0", "partner_ls": "triv", "label": "triv"},
                        {"partner_orbit": "O2", "partner_ls": "triv", "label": "sgn"}],
        "theta_G": "1-v^2-v^4+v^6",
        "definitions": {"torus": torus, "gl2": gl2c, "gl1xsp2": sp2},
    }
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(root, "data", "sp4.json")
    with open(path, "w") as f:
        json.dump(datum, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
