#!/usr/bin/env python3
"""End-to-end check of the atch command line against a scratch store."""

import contextlib
import io
import json
import tempfile
from pathlib import Path

from src.cli.app import main as atch_main


def atch(store, *args):
    """Run one atch command; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = atch_main(["--store", str(store), *args], out=out)
    return code, out.getvalue(), err.getvalue()


def test_incident_session():
    """Ingest, trace and query the IT incident."""
    print("🧪 Testing incident session...")
    with tempfile.TemporaryDirectory() as tmp:
        store = Path(tmp) / "store.log"

        code, _, err = atch(store, "ingest", "--fixture", "it_incident", "--fixture", "malpractice")
        assert code == 0, err
        print("✅ Fixtures ingested")

        code, out, err = atch(store, "trace", "malpractice_finding", "--confidence")
        assert code == 0, err
        assert "Chain confidence: 0.51" in out
        print(f"✅ Trace: {out.splitlines()[0]}")

        _, out, _ = atch(store, "--format", "canonical", "status", "AccountingTeam", "2024-03-18T09:00:00Z")
        assert json.loads(out) == ["print_failure_e3"]
        print("✅ Status lookup")


def test_contradiction_session():
    """Detect, split and audit contradictions."""
    print("\n🔎 Testing contradiction session...")
    with tempfile.TemporaryDirectory() as tmp:
        store = Path(tmp) / "store.log"
        assert atch(store, "ingest", "--fixture", "windows_tickets", "--fixture", "server_audit")[0] == 0

        code, out, err = atch(store, "discover", "kb5034763_printing_works", "--split")
        assert code == 0, err
        assert "driver_version" in out
        print("✅ Hidden context: driver_version")

        _, out, _ = atch(store, "audit", "server_down_belief", "server_up_belief")
        assert "recommendation: server_up_belief" in out
        print("✅ Audit recommends server_up_belief")

        code, _, err = atch(store, "resolve", "server_down_belief", "ghost")
        assert code == 2
        assert "error: UnknownEdge:" in err
        print("✅ Unknown edges exit with 2")


def test_benchmark():
    """All seven reference queries pass."""
    print("\n📊 Running benchmark...")
    with tempfile.TemporaryDirectory() as tmp:
        code, out, err = atch(Path(tmp) / "store.log", "bench")
        assert code == 0, out + err
        print(out)


def main():
    """Run all tests."""
    print("🚀 Starting atch end-to-end tests")
    print("=" * 50)

    test_incident_session()
    test_contradiction_session()
    test_benchmark()

    print("\n" + "=" * 50)
    print("🎉 Testing Complete!")


if __name__ == "__main__":
    main()
