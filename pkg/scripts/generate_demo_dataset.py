#!/usr/bin/env python3
"""Write the bundled demo dataset: a raw-export-style CSV, its mapping and
policy, and the canonical clean CSV produced by running the pipeline on it.

The demo rows embed the reference construction subset, so every walkthrough
in the README (mining, ranking, construction, the HTTP service and the UI)
works against this data out of the box.
"""

import csv
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hybridmethods.dataset import (  # noqa: E402
    SKIPPED,
    CleaningPolicy,
    MappingDescriptor,
    clean,
    ingest_raw,
    write_clean_csv,
)
from hybridmethods.synthetic import reference_construction_table  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "example_data"


def encode_raw_cell(cell):
    if cell is None:
        return ""
    if cell is SKIPPED:
        return "-9"
    if cell is True:
        return "1"
    if cell is False:
        return "0"
    return str(cell)


def main() -> None:
    OUT.mkdir(exist_ok=True)
    table = reference_construction_table()

    raw_path = OUT / "raw_survey.csv"
    with open(raw_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["CASE", *table.variables])
        for row in table.rows:
            writer.writerow([row.respondent_id,
                             *(encode_raw_cell(c) for c in row.values)])

    mapping = {
        "respondent_id": "CASE",
        "variables": (
            [{"id": "PU04", "type": "yesno"},
             {"id": "D001", "type": "category"}]
            + [{"id": v, "type": "yesno", "label": table.labels.get(v, "")}
               for v in table.variables if v.startswith("D005")]
            + [{"id": v, "type": "yesno"}
               for v in table.variables if v.startswith("PU09")]
            + [{"id": v, "type": "likert"}
               for v in table.variables if v.startswith("PU10")]
        ),
    }
    (OUT / "mapping.json").write_text(json.dumps(mapping, indent=2) + "\n",
                                      encoding="utf-8")

    policy_doc = {
        "default_skipped_rule": "to_na",
        "skipped_rules": {},
        "use_levels": None,
        "recodes": {"D001": {"Micro": "MicroAndSmall", "Small": "MicroAndSmall"}},
    }
    (OUT / "policy.json").write_text(json.dumps(policy_doc, indent=2) + "\n",
                                     encoding="utf-8")

    policy = CleaningPolicy.from_json(OUT / "policy.json")
    ingested = ingest_raw(raw_path, MappingDescriptor.from_json(OUT / "mapping.json"))
    cleaned = clean(ingested, policy)
    write_clean_csv(cleaned, OUT / "demo_clean.csv", policy)
    print(f"wrote {raw_path.name}, mapping.json, policy.json and demo_clean.csv "
          f"({cleaned.n_rows} rows) to {OUT}")


if __name__ == "__main__":
    main()
