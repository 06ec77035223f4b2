"""Download benchmark files into a data directory with a checksum manifest.

The OR-Library ``mknapcb`` files and the ``mkcbres.txt`` results table come
from a fixed base URL.  The MK_GK set has no stable public location, so its
source (an archive URL, an archive path or a directory of files) must be
given explicitly; its problems are rewritten to ``mk_gkNN.txt`` in the
``n m best`` layout that :func:`fepss.instance.parse_mkgk` reads.

Rerunning is cheap: a file already listed in the manifest is not fetched
again.  A file whose bytes no longer match the manifest is reported but kept.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import re
import sys
import tarfile
import urllib.request
import zipfile
from pathlib import Path

from .instance import ParseError, parse_mkgk, parse_orlib, serialize_mkgk

log = logging.getLogger("fepss.data")

ORLIB_BASE = "http://people.brunel.ac.uk/~mastjjb/jeb/orlib/files/"
ORLIB_SETS = range(1, 10)
ORLIB_PROBLEMS = 30
MKGK_COUNT = 11
MANIFEST = "manifest.json"


class FetchError(RuntimeError):
    pass


def fetch_bytes(url: str, timeout: float = 60.0) -> bytes:
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()
    except (OSError, ValueError) as exc:
        raise FetchError(f"download of {url} failed: {exc}") from None


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Store:
    """A data directory plus its manifest of ``path -> {bytes, sha256, source}``."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        mf = self.root / MANIFEST
        self.files: dict[str, dict] = json.loads(mf.read_text())["files"] if mf.exists() else {}

    def save(self) -> None:
        body = {"files": dict(sorted(self.files.items()))}
        (self.root / MANIFEST).write_text(json.dumps(body, indent=2) + "\n")

    def has(self, rel: str) -> bool:
        """Manifest hit for a file still on disk; warns on checksum drift."""
        entry = self.files.get(rel)
        path = self.root / rel
        if entry is None or not path.exists():
            return False
        data = path.read_bytes()
        if len(data) != entry["bytes"] or sha256(data) != entry["sha256"]:
            log.warning("%s differs from its manifest entry (checksum drift); keeping the local copy", rel)
        return True

    def put(self, rel: str, data: bytes, source: str) -> None:
        (self.root / rel).write_bytes(data)
        self.files[rel] = {"bytes": len(data), "sha256": sha256(data), "source": source}


def check_orlib(data: bytes, name: str, expected: int = ORLIB_PROBLEMS) -> None:
    try:
        probs = parse_orlib(data.decode(), name)
    except (ParseError, UnicodeDecodeError) as exc:
        raise FetchError(f"{name}: {exc}") from None
    if len(probs) != expected:
        raise FetchError(f"{name}: {len(probs)} problems, expected {expected}")


def fetch_orlib(store: Store, sets=ORLIB_SETS, base: str = ORLIB_BASE, fetch=fetch_bytes) -> list[str]:
    """Fetch ``mknapcbK.txt`` for each K in ``sets`` plus ``mkcbres.txt``."""
    got = []
    names = [f"mknapcb{k}.txt" for k in sets] + ["mkcbres.txt"]
    for rel in names:
        if store.has(rel):
            log.info("%s: manifest hit", rel)
            continue
        url = base + rel
        data = fetch(url)
        if rel.startswith("mknapcb"):
            check_orlib(data, rel)
        store.put(rel, data, url)
        got.append(rel)
    return got


_GK_NAME = re.compile(r"mk_?gk0*(\d+)", re.IGNORECASE)


def _archive_members(blob: bytes) -> dict[str, bytes]:
    if zipfile.is_zipfile(io.BytesIO(blob)):
        with zipfile.ZipFile(io.BytesIO(blob)) as zf:
            return {i.filename: zf.read(i) for i in zf.infolist() if not i.is_dir()}
    try:
        with tarfile.open(fileobj=io.BytesIO(blob)) as tf:
            return {m.name: tf.extractfile(m).read() for m in tf.getmembers() if m.isfile()}
    except tarfile.TarError:
        raise FetchError("MK_GK source is neither a zip nor a tar archive") from None


def _mkgk_sources(source: str, fetch=fetch_bytes) -> dict[str, bytes]:
    path = Path(source)
    if path.is_dir():
        return {p.name: p.read_bytes() for p in sorted(path.iterdir()) if p.is_file()}
    blob = path.read_bytes() if path.is_file() else fetch(source)
    return _archive_members(blob)


def fetch_mkgk(store: Store, source: str, fetch=fetch_bytes, expected: int = MKGK_COUNT) -> list[str]:
    """Convert every ``mk_gkNN`` problem found in ``source`` to the canonical layout."""
    wanted = [f"mk_gk{k:02d}.txt" for k in range(1, expected + 1)]
    if all(store.has(rel) for rel in wanted):
        log.info("MK_GK: manifest hit")
        return []
    found = {}
    for member, data in _mkgk_sources(source, fetch).items():
        mt = _GK_NAME.search(Path(member).name)
        if not mt:
            continue
        rel = f"mk_gk{int(mt.group(1)):02d}.txt"
        try:
            inst = parse_mkgk(data.decode(), rel[:-4])
        except (ParseError, UnicodeDecodeError) as exc:
            raise FetchError(f"{member}: {exc}") from None
        found[rel] = serialize_mkgk(inst, with_best_known=inst.best_known is not None).encode()
    if len(found) != expected:
        raise FetchError(f"MK_GK source yielded {len(found)} problems, expected {expected}")
    got = []
    for rel in wanted:
        if not store.has(rel):
            store.put(rel, found[rel], source)
            got.append(rel)
    return got


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="fepss-fetch", description="Download knapsack benchmark files.")
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--sets", default="1..9", metavar="A..B", help="OR-Library mknapcb files to fetch")
    ap.add_argument("--base-url", default=ORLIB_BASE)
    ap.add_argument("--skip-orlib", action="store_true")
    ap.add_argument("--mkgk", metavar="SOURCE",
                    help="MK_GK archive URL, archive file or directory of problem files")
    ap.add_argument("--verbose", action="store_true")
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    mt = re.fullmatch(r"(\d+)\.\.(\d+)", args.sets)
    if not mt or not 1 <= int(mt.group(1)) <= int(mt.group(2)) <= 9:
        print(f"fepss-fetch: error: bad --sets {args.sets!r}", file=sys.stderr)
        return 2
    store = Store(args.data_dir)
    try:
        got = []
        if not args.skip_orlib:
            got += fetch_orlib(store, range(int(mt.group(1)), int(mt.group(2)) + 1), args.base_url)
        if args.mkgk:
            got += fetch_mkgk(store, args.mkgk)
        elif not (store.root / "mk_gk01.txt").exists():
            log.warning("no --mkgk source given; MK_GK problems not fetched")
    except (FetchError, OSError) as exc:
        print(f"fepss-fetch: error: {exc}", file=sys.stderr)
        store.save()
        return 1
    store.save()
    print(f"{len(got)} file(s) stored under {store.root}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
