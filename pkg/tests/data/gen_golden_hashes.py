"""Refreeze golden_hashes.json after an intentional output-format change.

Runs the full pipeline on fixture_novel.txt with seed 0 and records a
SHA-256 per artifact (report.txt excluded: it contains wall-clock timings).

Run from the repository root:  python tests/data/gen_golden_hashes.py
"""

import hashlib
import json
import tempfile
from pathlib import Path

from vadarc.cli import main

HERE = Path(__file__).parent


def artifact_hashes(out_dir: Path) -> dict[str, str]:
    hashes = {}
    for path in sorted(out_dir.rglob("*")):
        if not path.is_file() or path.name == "report.txt":
            continue
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        hashes[str(path.relative_to(out_dir))] = digest
    return hashes


def run_pipeline(out_dir: Path) -> None:
    argv = [
        "all",
        "--input", str(HERE / "fixture_novel.txt"),
        "--out", str(out_dir),
        "--lexicon", str(HERE / "e2e_lexicon.tsv"),
        "--seed", "0",
    ]
    status = main(argv)
    if status != 0:
        raise SystemExit(f"pipeline failed with status {status}")


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "golden"
        run_pipeline(out)
        hashes = artifact_hashes(out)
    (HERE / "golden_hashes.json").write_text(
        json.dumps(hashes, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"froze {len(hashes)} artifact hashes")
