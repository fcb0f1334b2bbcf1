"""Writes the bundled dataset from the outputs of h2plus_curves.py and h2_curve.py.

usage: make_dataset.py H2PLUS_TABLE H2_TABLE OUTDIR

The H2 curve is shifted so that it meets the dispersion tail -1 - C6/R^6 at
R = 10 (removes the atomic basis-set error) and continued analytically to 30 bohr.
"""
import sys

C6 = 6.499

h2p = [list(map(float, l.split())) for l in open(sys.argv[1]) if l.strip()]
h2 = [list(map(float, l.split())) for l in open(sys.argv[2]) if l.strip()]
out = sys.argv[3]

e10 = next(e for r, e in h2 if abs(r - 10.0) < 1e-9)
shift = (-1.0 - C6 / 10.0**6) - e10
h2 = [(r, e + shift) for r, e in h2]
h2 += [(r, -1.0 - C6 / r**6) for r in [13.0, 14.0, 16.0, 18.0, 20.0, 24.0, 30.0]]


def write(name, comment, rows):
    with open(f"{out}/{name}", "w") as f:
        for line in comment:
            f.write(f"# {line}\n")
        f.write("# R_bohr value_au\n")
        for r, v in rows:
            f.write(f"{r:.4f} {v:.12f}\n")


write("v_h2.dat", ["H2 X1Sg+ potential, aug-cc-pVQZ full CI",
                   f"shifted by {shift:.4e} hartree; R > 12 from -1 - {C6}/R^6"], h2)
write("v_g.dat", ["H2+ 1s-sigma-g potential incl. 1/R, exact variational"],
      [(r[0], r[1]) for r in h2p])
write("v_u.dat", ["H2+ 2p-sigma-u potential incl. 1/R, exact variational"],
      [(r[0], r[2]) for r in h2p])
write("mu_ug.dat", ["H2+ g-u transition dipole |<g|z|u>|, exact variational"],
      [(r[0], r[3]) for r in h2p])
