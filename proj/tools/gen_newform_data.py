#!/usr/bin/env python3
"""Regenerate the bundled weight-2 newform records and the LMFDB-style test fixture.

Requires cypari2. Eigenvalues are written in the power basis of theta = c_3,
the first Hecke eigenvalue that generates the coefficient field at every
bundled level. Labels follow the classical table ordering used by the
theorem pipelines; the fixture keeps LMFDB-style labels and PARI's own basis.

    python3 tools/gen_newform_data.py data/newforms tests/data
"""
import json
import os
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(10**9)

PRIMES = [p for p in range(2, 51) if all(p % d for d in range(2, p))]

# PARI eigenbasis index -> table label.
LABELS = {
    45: {1: "45.1"},
    98: {1: "98.1", 2: "98.2"},
    338: {2: "338.1", 4: "338.2", 1: "338.3", 6: "338.4", 3: "338.5", 5: "338.6",
          7: "338.7", 8: "338.8"},
}
CURVES = {
    45: [("45a1", "45.1", [1, -1, 0, 0, -5])],
    98: [("98a1", "98.1", [1, 1, 0, -25, -111])],
}


def coeffs(pol, var, deg):
    pol = pari(pol)
    return [int(pari.polcoef(pol, i, var)) for i in range(deg + 1)]


def main(data_dir, fixture_dir):
    for level, labels in LABELS.items():
        mf = pari.mfinit([level, 2], 0)
        basis = pari.mfeigenbasis(mf)
        fields = pari.mffields(mf)
        out = os.path.join(data_dir, str(level))
        os.makedirs(out, exist_ok=True)
        fixture = {"mf_newforms": [], "mf_hecke_nf": [], "ec_curvedata": []}
        for name, form, ainvs in CURVES.get(level, []):
            fixture["ec_curvedata"].append({
                "Clabel": name, "lmfdb_label": "%d.a1" % level, "lmfdb_iso": "%d.a" % level,
                "lmfdb_number": 1, "conductor": level, "ainvs": ainvs})
        for idx, form in enumerate(basis, start=1):
            co = pari.mfcoefs(form, 50)
            ypol = fields[idx - 1]
            dim = int(pari.poldegree(ypol))
            lmfdb_label = "%d.2.a.%s" % (level, "abcdefgh"[idx - 1])
            if dim == 1:
                theta_poly = [0, 1]
                eig = {p: [int(co[p])] for p in PRIMES}
                fixture["mf_newforms"].append({
                    "label": lmfdb_label, "level": level, "weight": 2, "char_order": 1,
                    "dim": 1, "field_poly": [0, 1],
                    "traces": [int(co[n]) for n in range(1, 51)]})
            else:
                c3 = pari("Mod(%s, %s)" % (pari.lift(co[3]), ypol))
                minpoly = pari.minpoly(c3, "x")
                theta_poly = coeffs(minpoly, "x", dim)
                # y as a polynomial in t = theta
                y_in_theta = pari.subst(pari.lift(pari.modreverse(c3)), "y", pari("t"))
                tpoly = pari.subst(minpoly, "x", pari("t"))
                eig = {}
                for p in PRIMES:
                    cy = pari.lift(pari("Mod(%s, %s)" % (pari.lift(co[p]), ypol)))
                    ct = pari("lift(Mod(subst(%s, y, %s), %s))" % (cy, y_in_theta, tpoly))
                    eig[p] = coeffs(ct, "t", dim - 1)
                # Fixture: PARI's y basis, with a non-power Hecke ring basis for cubic fields.
                ycoeffs = coeffs(ypol, "y", dim)
                if dim == 3:
                    nums = [[1, 0, 0], [0, 1, 0], [0, 1, 1]]
                    dens = [1, 1, 2]
                else:
                    nums = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
                    dens = [1] * dim
                ap = []
                for p in PRIMES:
                    c = coeffs(pari.lift(pari("Mod(%s, %s)" % (pari.lift(co[p]), ypol))), "y", dim - 1)
                    if dim == 3:
                        u2 = 2 * c[2]
                        ap.append([c[0], c[1] - c[2], u2])
                    else:
                        ap.append(c)
                fixture["mf_newforms"].append({
                    "label": lmfdb_label, "level": level, "weight": 2, "char_order": 1,
                    "dim": dim, "field_poly": ycoeffs})
                fixture["mf_hecke_nf"].append({
                    "label": lmfdb_label, "field_poly": ycoeffs,
                    "hecke_ring_power_basis": dim != 3,
                    "hecke_ring_numerators": nums, "hecke_ring_denominators": dens,
                    "maxp": PRIMES[-1], "ap": ap})
            label = labels[idx]
            with open(os.path.join(out, label + ".form"), "w") as fh:
                fh.write("label: %s\nlevel: %d\nweight: 2\n" % (label, level))
                fh.write("field_poly: %s\n" % ",".join(map(str, theta_poly)))
                for p in PRIMES:
                    fh.write("%d: %s\n" % (p, ",".join(map(str, eig[p]))))
        for name, form, ainvs in CURVES.get(level, []):
            with open(os.path.join(out, name + ".curve"), "w") as fh:
                fh.write("label: %s\nform: %s\nainvs: %s\n" % (name, form, ",".join(map(str, ainvs))))
        with open(os.path.join(fixture_dir, "lmfdb_%d.json" % level), "w") as fh:
            json.dump(fixture, fh, sort_keys=True)
            fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
