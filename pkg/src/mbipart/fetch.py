"""Download test matrices and check their shapes.

Files already present in the destination directory are used as they are,
so everything works offline once the matrices are in place.
"""

from __future__ import annotations

import gzip
import io
import os
import tarfile
import urllib.request
from typing import NamedTuple

from .pattern import parse_matrix_market

DEFAULT_URL_TEMPLATE = "https://sparse.tamu.edu/MM/{group}/{name}.tar.gz"


class ManifestEntry(NamedTuple):
    group: str
    m: int
    n: int
    nnz: int


MANIFEST = {
    "cage6": ManifestEntry("vanHeukelum", 93, 93, 785),
    "iiasa": ManifestEntry("Meszaros", 669, 3639, 7317),
    "orbitRaising_4": ManifestEntry("VDOL", 915, 915, 7790),
    "mhd4800b": ManifestEntry("Bai", 4800, 4800, 27520),
    "lp_grow22": ManifestEntry("LPnetlib", 440, 946, 8252),
}


class FetchError(RuntimeError):
    pass


def local_path(name: str, dest) -> str:
    return os.path.join(str(dest), f"{name}.mtx")


def find_local(name: str, dirs) -> str | None:
    """First ``<name>.mtx`` or ``<name>.mtx.gz`` found in ``dirs``."""
    for d in dirs:
        for suffix in (".mtx", ".mtx.gz"):
            path = os.path.join(str(d), name + suffix)
            if os.path.isfile(path):
                return path
    return None


def check_shape(name: str, text: str, entry: ManifestEntry | None) -> None:
    p = parse_matrix_market(text)
    if entry is None:
        return
    got = (p.m, p.n, p.nnz)
    want = (entry.m, entry.n, entry.nnz)
    if got != want:
        raise FetchError(
            f"{name}: expected {want[0]}x{want[1]} with {want[2]} nonzeros, "
            f"got {got[0]}x{got[1]} with {got[2]} nonzeros"
        )


def _extract(name: str, payload: bytes) -> str:
    """Matrix Market text from a tarball, a gzip file or a plain file."""
    buf = io.BytesIO(payload)
    if tarfile.is_tarfile(buf):
        buf.seek(0)
        with tarfile.open(fileobj=buf, mode="r:*") as tar:
            for member in tar.getmembers():
                if member.isfile() and os.path.basename(member.name) == f"{name}.mtx":
                    return tar.extractfile(member).read().decode()
        raise FetchError(f"{name}: archive has no {name}.mtx")
    if payload[:2] == b"\x1f\x8b":
        payload = gzip.decompress(payload)
    return payload.decode()


def fetch(name: str, dest, template: str = DEFAULT_URL_TEMPLATE, group: str | None = None,
          timeout: float = 60.0) -> str:
    """Make ``<dest>/<name>.mtx`` available and return its path."""
    entry = MANIFEST.get(name)
    path = local_path(name, dest)
    if os.path.isfile(path):
        with open(path) as fh:
            check_shape(name, fh.read(), entry)
        return path
    if group is None:
        if entry is None:
            raise FetchError(f"{name}: not in the manifest; give its group")
        group = entry.group
    url = template.format(group=group, name=name)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = resp.read()
    except (OSError, ValueError) as exc:
        raise FetchError(f"{name}: download from {url} failed: {exc}") from exc
    text = _extract(name, payload)
    check_shape(name, text, entry)
    os.makedirs(str(dest), exist_ok=True)
    tmp = path + ".part"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return path
