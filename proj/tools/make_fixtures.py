#!/usr/bin/env python3
"""Generate the synthetic descriptor-table fixtures under data/.

Both tables are random but seeded, so regeneration is reproducible. The
carcinogenicity-style table has 55 compounds x 23 descriptors and an
activity_score endpoint whose mean is exactly 29 (values are multiples of
0.25, so the mean is exact in binary floating point): 27 rows sit strictly
above the mean, one row sits exactly on it, 27 sit below. The HEPT-style
table has 80 compounds x 10 descriptors and a pIC50 endpoint with exactly
one row at the 6.0 activity cutoff.
"""

import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "data"

CARC_DESCRIPTORS = [
    # name, is_integer, low, high, decimals, positive-class shift
    ("Weight", False, 120.0, 480.0, 1, 40.0),
    ("HDon", True, 0, 5, 0, 0),
    ("HAcc", True, 0, 10, 0, 1),
    ("XlogP", False, -2.5, 6.5, 2, 1.2),
    ("TPSA", False, 8.0, 145.0, 1, -18.0),
    ("Polariz", False, 8.0, 48.0, 1, 4.0),
    ("Dipole", False, 0.2, 11.5, 2, 0.8),
    ("LogS", False, -7.5, 0.5, 2, -0.9),
    ("NRotBond", True, 0, 12, 0, 1),
    ("NVRO5", True, 0, 3, 0, 0),
    ("NVERO5", True, 0, 4, 0, 0),
    ("NAtoms", True, 8, 60, 0, 4),
    ("NStereo", True, 0, 6, 0, 0),
    ("Complexity", False, 60.0, 880.0, 1, 90.0),
    ("RComplexity", False, 0.05, 0.95, 3, 0.08),
    ("Diameter", False, 2.5, 19.5, 1, 1.5),
    ("InertiaX", False, 40.0, 3900.0, 1, 300.0),
    ("InertiaY", False, 25.0, 2600.0, 1, 200.0),
    ("InertiaZ", False, 10.0, 1400.0, 1, 100.0),
    ("Span", False, 2.0, 24.0, 1, 1.8),
    ("RGyr", False, 1.2, 9.8, 2, 0.9),
    ("Eccentric", False, 0.1, 0.99, 3, 0.05),
    ("Aspheric", False, 0.02, 0.9, 3, 0.04),
]

HEPT_DESCRIPTORS = [
    ("MolWeight", False, 200.0, 420.0, 1, 25.0),
    ("LogP", False, 0.5, 5.5, 2, 0.9),
    ("TPSA", False, 40.0, 120.0, 1, -10.0),
    ("HDonors", True, 0, 4, 0, 0),
    ("HAcceptors", True, 2, 8, 0, 1),
    ("RotBonds", True, 1, 9, 0, 1),
    ("Rings", True, 1, 4, 0, 0),
    ("PiSystems", True, 1, 5, 0, 1),
    ("Volume", False, 180.0, 420.0, 1, 30.0),
    ("Refractivity", False, 50.0, 120.0, 1, 8.0),
]


def draw_value(rng, spec, positive):
    name, is_int, low, high, decimals, shift = spec
    if is_int:
        value = rng.randint(low, high)
        if positive and shift and rng.random() < 0.6:
            value = min(high, value + shift)
        return str(value)
    center = rng.uniform(low, high)
    if positive:
        center += shift * rng.uniform(0.6, 1.4)
    center = max(low, min(high * 1.15, center))
    return f"{center:.{decimals}f}"


def write_csv(path, header, rows):
    text = ",".join(header) + "\n" + "\n".join(",".join(r) for r in rows) + "\n"
    path.write_text(text)
    print(f"wrote {path} ({len(rows)} rows)")


def make_carcinogenicity(rng):
    # 27 mirrored pairs around 29 plus one row exactly at 29: the endpoint
    # mean is exactly 29 and the strict > rule yields a 27/28 split.
    deltas = sorted(rng.sample([0.25 * j for j in range(1, 40)], 27))
    endpoints = [29.0 + d for d in deltas] + [29.0 - d for d in deltas] + [29.0]
    rng.shuffle(endpoints)
    assert abs(sum(endpoints) / 55 - 29.0) == 0.0

    header = ["id"] + [s[0] for s in CARC_DESCRIPTORS] + ["activity_score"]
    rows = []
    for i, endpoint in enumerate(endpoints, start=1):
        positive = endpoint > 29.0
        row = [f"c{i:02d}"]
        row += [draw_value(rng, spec, positive) for spec in CARC_DESCRIPTORS]
        row.append(f"{endpoint:.2f}")
        rows.append(row)
    write_csv(OUT_DIR / "carcinogenicity_synthetic.csv", header, rows)


def make_hept(rng):
    actives = [round(rng.uniform(6.05, 8.90), 2) for _ in range(38)]
    inactives = [round(rng.uniform(4.00, 5.95), 2) for _ in range(41)] + [6.00]
    endpoints = actives + inactives
    rng.shuffle(endpoints)
    assert endpoints.count(6.00) == 1
    assert sum(1 for v in endpoints if v > 6.0) == 38

    header = ["id"] + [s[0] for s in HEPT_DESCRIPTORS] + ["pIC50"]
    rows = []
    for i, endpoint in enumerate(endpoints, start=1):
        positive = endpoint > 6.0
        row = [f"h{i:02d}"]
        row += [draw_value(rng, spec, positive) for spec in HEPT_DESCRIPTORS]
        row.append(f"{endpoint:.2f}")
        rows.append(row)
    write_csv(OUT_DIR / "hept_synthetic.csv", header, rows)


def main():
    OUT_DIR.mkdir(exist_ok=True)
    make_carcinogenicity(random.Random(20260816))
    make_hept(random.Random(8161819))


if __name__ == "__main__":
    main()
