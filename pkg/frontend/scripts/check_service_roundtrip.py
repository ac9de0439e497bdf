"""Feed the scripted-session golden documents to the pipeline service.

The UI's acceptance bar: the graph and layout JSON produced by the
scripted edit session must be accepted by the service unmodified. This
script posts the golden files through the real HTTP surface (in-process)
and checks that the service echoes them back byte for byte in the
session records.

Run from the repository root:

    python3 frontend/scripts/check_service_roundtrip.py
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from landscaper import Studio, load_config
from landscaper.service import create_app

REPO_ROOT = Path(__file__).resolve().parents[2]
GOLDEN_DIR = REPO_ROOT / "frontend" / "tests" / "golden"
FIXTURE_PATH = REPO_ROOT / "fixtures" / "dogwood_daisy.jsonl"


def check(condition: bool, label: str) -> None:
    print(f"{'ok' if condition else 'FAIL'}: {label}")
    if not condition:
        sys.exit(1)


def main() -> None:
    graph_doc = json.loads((GOLDEN_DIR / "scripted_graph.json").read_text())
    layout_doc = json.loads((GOLDEN_DIR / "scripted_layout.json").read_text())

    with tempfile.TemporaryDirectory() as tmp:
        config_path = Path(tmp) / "app.json"
        config_path.write_text(
            json.dumps(
                {
                    "app": {"data_dir": str(Path(tmp) / "state")},
                    "endpoint": {
                        "mode": "replay",
                        "fixture_path": str(FIXTURE_PATH),
                    },
                }
            )
        )
        studio = Studio(config=load_config(config_path))
        client = TestClient(create_app(studio=studio))

        response = client.post(
            "/sessions", json={"description": "scripted ui session"}
        )
        check(response.status_code == 201, "session created")
        session_id = response.json()["session_id"]

        response = client.post(
            f"/sessions/{session_id}/concretize", json={"graph": graph_doc}
        )
        check(response.status_code == 200, "graph accepted")
        record = response.json()
        check(record["graph"] == graph_doc, "graph echoed unmodified")

        response = client.post(
            f"/sessions/{session_id}/render",
            json={"layout": layout_doc, "seed": 1},
        )
        check(response.status_code == 200, "layout accepted")
        record = response.json()
        check(record["layout"] == layout_doc, "layout echoed unmodified")
        check(bool(record["image_ref"]), "render produced an image")

        image = client.get(f"/images/{record['image_ref']}")
        check(
            image.status_code == 200 and image.content[:4] == b"\x89PNG",
            "image is a PNG",
        )

        replay = client.get(f"/sessions/{session_id}/replay").json()
        check(replay["ok"] is True, "session replays cleanly")

    print("service round trip OK")


if __name__ == "__main__":
    main()
