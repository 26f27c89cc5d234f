#!/usr/bin/env python3
"""Capture golden HTTP bodies from the live service over the demo dataset.

The browser client's tests replay these fixtures; regenerating them after an
engine change keeps the two components' contracts in sync.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from hybridmethods.service import ServiceConfig, create_app  # noqa: E402
from hybridmethods.synthetic import (  # noqa: E402
    REFERENCE_EXTENSION,
    REFERENCE_FRAME,
    REFERENCE_QUADRUPLE,
)

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "example_data" / "demo_clean.csv"
OUT = ROOT / "frontend" / "tests" / "fixtures"


def dump(name: str, body) -> None:
    (OUT / name).write_text(json.dumps(body, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {name}")


def main() -> None:
    if not DATA.exists():
        raise SystemExit("run scripts/generate_demo_dataset.py first")
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(ServiceConfig(data_path=DATA)))

    dump("catalog.json", client.get("/catalog").json())
    dump("frames.json", client.get("/frames", params={"filter": "PU04=yes"}).json())
    dump("cores.json", client.get("/cores", params={"filter": "PU04=yes"}).json())
    frame_ids = ",".join(REFERENCE_FRAME)
    dump("ranking.json", client.get(f"/frames/{frame_ids}/ranking",
                                    params={"filter": "PU04=yes"}).json())

    created = client.post("/sessions", json={
        "frame": list(REFERENCE_FRAME), "filter": "PU04=yes", "set_size": 4})
    body = created.json()
    sid = body["id"]
    dump("session_created.json", body)

    for step, practice in enumerate((*REFERENCE_QUADRUPLE, REFERENCE_EXTENSION),
                                    start=1):
        body = client.post(f"/sessions/{sid}/practices",
                           json={"item_id": practice}).json()
        dump(f"session_step_{step}.json", body)

    dump("session_export.json", client.get(f"/sessions/{sid}/export").json())

    error = client.post(f"/sessions/{sid}/practices",
                        json={"item_id": "PU10_26"})
    dump("error_ineligible.json", error.json())

    with_core = client.post("/sessions", json={
        "frame": list(REFERENCE_FRAME), "filter": "PU04=yes",
        "core": ["PU10_07", "PU10_08"]})
    dump("session_with_core.json", with_core.json())


if __name__ == "__main__":
    main()
