"""Capture real service responses as frontend test fixtures.

Drives the engine's HTTP API through the whole secondary-acceptance
flow and dumps each response verbatim, so the UI tests check
field-for-field parity against genuine payloads.

    python frontend/scripts/make_fixtures.py
"""
import base64
import io
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient
from scipy.io import wavfile

from adfit.project_io import project_to_dict
from adfit.service import create_app
from conftest import fixture_project, synthesize_source

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    import tempfile

    with tempfile.TemporaryDirectory() as store:
        client = TestClient(create_app(store))
        project = fixture_project(source_audio="")
        clip = synthesize_source(project, 8000)
        buf = io.BytesIO()
        wavfile.write(buf, 8000, clip.samples)

        create = client.post(
            "/projects",
            json={
                "project": project_to_dict(project),
                "source_audio_base64": base64.b64encode(buf.getvalue()).decode(),
            },
        )
        create.raise_for_status()
        pid = create.json()["id"]
        dump("create", create.json())

        get0 = client.get(f"/projects/{pid}")
        dump("get_initial", get0.json())

        render1 = client.post(f"/projects/{pid}/render", params={"mode": "inline", "seed": 3})
        render1.raise_for_status()
        dump("render_inline", render1.json())

        rev = render1.json()["revision"]
        toggle = client.post(
            f"/projects/{pid}/descriptions/d2/toggle-word",
            json={"base_revision": rev, "word_index": 1},
        )
        toggle.raise_for_status()
        dump("toggle_d2_word1", toggle.json())

        rev = toggle.json()["revision"]
        protected = client.post(
            f"/projects/{pid}/descriptions/d5/toggle-word",
            json={"base_revision": rev, "word_index": 2},
        )
        assert protected.status_code == 422, protected.text
        dump("toggle_d5_protected", {"status": 422, "body": protected.json()})

        select = client.post(
            f"/projects/{pid}/descriptions/d2/select-candidate",
            json={"base_revision": rev, "index": 0},
        )
        select.raise_for_status()
        dump("select_d2_shortest", select.json())

        rev = select.json()["revision"]
        edit = client.put(
            f"/projects/{pid}/descriptions/d2",
            json={"base_revision": rev},
        )
        edit.raise_for_status()
        dump("candidates_d2", edit.json())

        render2 = client.post(f"/projects/{pid}/render", params={"mode": "inline", "seed": 3})
        render2.raise_for_status()
        dump("render_inline_again", render2.json())

        get1 = client.get(f"/projects/{pid}")
        dump("get_after_render", get1.json())
    print(f"fixtures written to {OUT}")


def dump(name: str, payload) -> None:
    (OUT / f"{name}.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8"
    )


if __name__ == "__main__":
    main()
