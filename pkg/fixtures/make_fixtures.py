"""Regenerate the tabular fixture CSVs (seeded, so the output is byte-stable).

The files copy the column structure of three public tabular datasets with
synthetic rows: a housing table with eight numeric features and a binary
"above median value" label, a stroke table with categorical columns and
"N/A" cells in bmi, and a water-potability table with empty cells.

    python fixtures/make_fixtures.py
"""
import csv
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent


def _write(name, header, rows):
    with open(HERE / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _f(x, nd=4):
    return f"{x:.{nd}f}"


def california(rng, n=240):
    inc = rng.gamma(4.0, 1.0, n)
    age = rng.integers(1, 53, n)
    rooms = rng.normal(5.4, 1.2, n).clip(1.5)
    beds = (rooms * rng.normal(0.2, 0.02, n)).clip(0.5)
    pop = rng.gamma(2.0, 700.0, n).round()
    occ = rng.normal(3.0, 0.6, n).clip(1.0)
    lat = rng.uniform(32.5, 42.0, n)
    lon = rng.uniform(-124.3, -114.3, n)
    value = 0.45 * inc + 0.01 * age - 0.25 * (lat - 36) + rng.normal(0, 0.6, n)
    label = (value > np.median(value)).astype(int)
    rows = [
        [_f(a), int(b), _f(c), _f(d), int(e), _f(f), _f(g), _f(h), int(y)]
        for a, b, c, d, e, f, g, h, y in zip(inc, age, rooms, beds, pop, occ, lat, lon, label)
    ]
    _write("california.csv", ["MedInc", "HouseAge", "AveRooms", "AveBedrms", "Population",
                              "AveOccup", "Latitude", "Longitude", "above_median"], rows)


def stroke(rng, n=240):
    gender = rng.choice(["Male", "Female", "Other"], n, p=[0.45, 0.54, 0.01])
    age = rng.uniform(1, 82, n).round()
    hyper = (rng.random(n) < 0.1).astype(int)
    heart = (rng.random(n) < 0.06).astype(int)
    married = np.where(age > 25, rng.choice(["Yes", "No"], n, p=[0.8, 0.2]), "No")
    work = rng.choice(["Private", "Self-employed", "Govt_job", "children", "Never_worked"], n,
                      p=[0.55, 0.17, 0.14, 0.12, 0.02])
    res = rng.choice(["Urban", "Rural"], n)
    glucose = rng.gamma(8.0, 13.0, n)
    bmi = rng.normal(28.5, 6.5, n).clip(12)
    smoke = rng.choice(["formerly smoked", "never smoked", "smokes", "Unknown"], n)
    risk = 0.05 * (age - 60) + 1.2 * hyper + 1.0 * heart + 0.01 * (glucose - 110)
    stroke = (risk + rng.normal(0, 1.0, n) > 1.3).astype(int)
    missing = rng.random(n) < 0.05
    rows = []
    for i in range(n):
        rows.append([
            10000 + i, gender[i], int(age[i]), hyper[i], heart[i], married[i], work[i], res[i],
            _f(glucose[i], 2), "N/A" if missing[i] else _f(bmi[i], 1), smoke[i], stroke[i],
        ])
    _write("stroke.csv", ["id", "gender", "age", "hypertension", "heart_disease", "ever_married",
                          "work_type", "Residence_type", "avg_glucose_level", "bmi",
                          "smoking_status", "stroke"], rows)


def water(rng, n=240):
    cols = {
        "ph": (7.0, 1.5), "Hardness": (196.0, 33.0), "Solids": (22000.0, 8700.0),
        "Chloramines": (7.1, 1.6), "Sulfate": (333.0, 41.0), "Conductivity": (426.0, 81.0),
        "Organic_carbon": (14.3, 3.3), "Trihalomethanes": (66.4, 16.2), "Turbidity": (3.97, 0.78),
    }
    data = {k: rng.normal(m, s, n) for k, (m, s) in cols.items()}
    score = -abs(data["ph"] - 7.2) + 0.01 * (data["Sulfate"] - 333) + rng.normal(0, 1.0, n)
    label = (score > np.quantile(score, 0.6)).astype(int)
    holes = {"ph": 0.08, "Sulfate": 0.1, "Trihalomethanes": 0.04}
    rows = []
    for i in range(n):
        row = []
        for k in cols:
            row.append("" if k in holes and rng.random() < holes[k] else _f(data[k][i], 3))
        rows.append(row + [label[i]])
    _write("water.csv", list(cols) + ["Potability"], rows)


def main():
    california(np.random.Generator(np.random.PCG64(101)))
    stroke(np.random.Generator(np.random.PCG64(202)))
    water(np.random.Generator(np.random.PCG64(303)))


if __name__ == "__main__":
    main()
