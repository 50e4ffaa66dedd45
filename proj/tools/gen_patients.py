#!/usr/bin/env python3
"""Regenerates the synthetic 100-patient fixture and the CQ suite over it.

Expected answer sets are computed here, straight from the generated rows,
so the suite does not depend on the C++ reasoner it tests.

    python3 tools/gen_patients.py            # writes data/patients-100.csv, cq/patients-100.cq
    cssdh ingest --records data/patients-100.csv --manifest data/cssdh.manifest --out data/patients-100.ttl
"""
import csv
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
SEED = 1307
SDH = [
    "Lay-off-from-job",
    "Crowding_at_home",
    "Lives-in-low-income-area",
    "Food-insecurity",
    "Social-isolation",
    "Medical-services-not-available-at-home",
]
FORENAMES = ["Ana", "Ben", "Cara", "Dev", "Eli", "Fay", "Gus", "Hana", "Ivo", "Jo", "Kai", "Lea", "Max", "Nia",
             "Omar", "Pia", "Quin", "Rosa", "Sam", "Tess"]
SURNAMES = ["Byrne", "Murphy", "Kelly", "Walsh", "Ryan", "Doyle", "Garcia", "Lopez", "Das", "Hussey", "Smith", "Reid"]


def cell(rng):
    r = rng.random()
    if r < 0.35:
        return "true"
    if r < 0.80:
        return "false"
    return ""


def main():
    rng = random.Random(SEED)
    rows = []
    for i in range(1, 101):
        pid = f"p{i:03d}"
        surname = "" if rng.random() < 0.1 else rng.choice(SURNAMES)
        rows.append([pid, rng.choice(FORENAMES), surname] + [cell(rng) for _ in SDH])

    with open(ROOT / "data" / "patients-100.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "forename", "surname"] + SDH)
        w.writerows(rows)

    col = {name: 3 + i for i, name in enumerate(SDH)}
    cq1 = [r[0] for r in rows if r[col["Lives-in-low-income-area"]] == "true"]
    cq2 = [r[0] for r in rows if r[col["Lay-off-from-job"]] == "true" and r[col["Crowding_at_home"]] == "true"]
    # Laid off, and crowding either false or not recorded.
    cq2_neg = [r[0] for r in rows if r[col["Lay-off-from-job"]] == "true" and r[col["Crowding_at_home"]] != "true"]

    out = [
        "# Generated by tools/gen_patients.py; expected sets come from the CSV rows.",
        "prefix: pt: <http://purl.org/net/for-coc#patient/>",
        "",
        "case: CQ1",
        "kind: dl",
        "description: Which patients live in a low-income area?",
        "query: SubjectOfCare and Lives-in-low-income-area value true",
        "dataset: ../data/patients-100.ttl",
    ]
    out += [f"expect: pt:{p}" for p in cq1]
    out += [
        "",
        "case: CQ2",
        "kind: dl",
        "description: Which patients were laid off from their job and live in crowded housing?",
        "query: SubjectOfCare and Lay-off-from-job value true and Crowding_at_home value true",
        "dataset: ../data/patients-100.ttl",
    ]
    out += [f"expect: pt:{p}" for p in cq2]
    out += [
        "",
        "case: CQ2-sparql",
        "kind: sparql",
        "description: CQ2 as a FILTER over the normalized query.",
        "query-file: ../queries/cq2-filter.rq",
        "dataset: ../data/patients-100.ttl",
        "columns: ?subjectOfcare",
    ]
    out += [f"row: pt:{p}" for p in cq2]
    out += [
        "",
        "case: CQ2-complement",
        "kind: dl",
        "description: Laid-off patients without a recorded crowding=true.",
        "query: SubjectOfCare and Lay-off-from-job value true and not (Crowding_at_home value true)",
        "dataset: ../data/patients-100.ttl",
    ]
    out += [f"expect: pt:{p}" for p in cq2_neg]
    (ROOT / "cq" / "patients-100.cq").write_text("\n".join(out) + "\n")
    print(f"CQ1={len(cq1)} CQ2={len(cq2)} CQ2-complement={len(cq2_neg)}")


if __name__ == "__main__":
    main()
