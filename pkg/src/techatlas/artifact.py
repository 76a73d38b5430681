"""Build, persist, and reload the self-contained index artifact.

An artifact is one directory: the parsed corpus, both proximity
matrices, both map exports, both field term-profile sets, and a
manifest. The manifest records a content hash over everything
persisted (build timestamp excluded), so identical inputs and config
always reproduce the identical manifest hash, and any content change
is detectable. The directory is written atomically: a failed build
leaves nothing behind.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from . import atlas, proximity, terms
from .corpus import (
    CorpusIndex,
    build_corpus_index,
    canonical_json,
    load_corpus,
    parse_record,
    record_payload,
)
from .corpus import LEVELS

FORMAT_VERSION = 1

MANIFEST_FILE = "manifest.json"
CORPUS_FILE = "corpus.json"


def _matrix_file(level: int) -> str:
    return f"matrix_l{level}.txt"


def _map_file(level: int) -> str:
    return f"map_l{level}.json"


def _terms_file(level: int) -> str:
    return f"terms_l{level}.json"


class ArtifactError(Exception):
    pass


@dataclass(frozen=True)
class BuildConfig:
    seed: int = atlas.DEFAULT_SEED
    backbone_k: int = atlas.DEFAULT_BACKBONE_K
    layout_iterations: int = atlas.DEFAULT_ITERATIONS


@dataclass
class IndexArtifact:
    """Everything the query service needs, loaded in memory."""

    manifest: dict
    index: CorpusIndex
    matrices: Mapping[int, proximity.ProximityMatrix]
    graphs: Mapping[int, atlas.TechSpaceGraph]
    layouts: Mapping[int, atlas.LayoutCoordinates]
    registries: Mapping[int, terms.FieldTermRegistry] = field(default_factory=dict)

    @property
    def manifest_hash(self) -> str:
        return self.manifest["manifest_hash"]


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: Path) -> str:
    return _sha256_bytes(path.read_bytes())


def manifest_hash_of(manifest: dict) -> str:
    """Hash of the manifest minus its volatile fields (timestamp, itself)."""
    stable = {k: v for k, v in manifest.items() if k not in ("built_at", "manifest_hash")}
    return _sha256_bytes(canonical_json(stable).encode("utf-8"))


def _registry_payload(registry: terms.FieldTermRegistry) -> dict:
    return {
        "level": registry.level,
        "fields": {
            fld: dict(sorted(profile.counts.items()))
            for fld, profile in sorted(registry.profiles.items())
        },
    }


def _registry_from_payload(payload: dict) -> terms.FieldTermRegistry:
    level = int(payload["level"])
    profiles = {
        fld: terms.TermProfile(scope=fld, counts=dict(counts))
        for fld, counts in payload["fields"].items()
    }
    docfreq: dict[str, int] = {}
    for profile in profiles.values():
        for term in profile.counts:
            docfreq[term] = docfreq.get(term, 0) + 1
    return terms.FieldTermRegistry(level=level, profiles=profiles, docfreq=docfreq)


def build_in_memory(index: CorpusIndex, config: BuildConfig) -> IndexArtifact:
    """All derived build products for an already-parsed corpus.

    The manifest is completed by :func:`save_artifact` (file hashes) or
    :func:`build_artifact` (corpus hash); here it carries config only.
    """
    per_patent = terms.extract_per_patent(index)
    matrices = {}
    graphs = {}
    layouts = {}
    registries = {}
    for level in LEVELS:
        profile = proximity.citation_profile(index, level)
        matrices[level] = proximity.build_proximity_matrix(profile)
        graphs[level] = atlas.build_graph(index, matrices[level], k=config.backbone_k)
        layouts[level] = atlas.compute_layout(
            graphs[level], seed=config.seed, iterations=config.layout_iterations
        )
        registries[level] = terms.build_field_registry(index, level, per_patent=per_patent)
    manifest = {
        "format_version": FORMAT_VERSION,
        "corpus_sha256": "",
        "stopwords_sha256": terms.stopwords_sha256(),
        "layout_seed": config.seed,
        "layout_iterations": config.layout_iterations,
        "layout_generator": atlas.LAYOUT_GENERATOR,
        "backbone_k": config.backbone_k,
        "built_at": "",
    }
    return IndexArtifact(
        manifest=manifest,
        index=index,
        matrices=matrices,
        graphs=graphs,
        layouts=layouts,
        registries=registries,
    )


def _artifact_files(artifact: IndexArtifact) -> dict[str, str]:
    """File name -> exact text content for everything except the manifest."""
    files = {
        CORPUS_FILE: canonical_json(
            {"records": [record_payload(r) for _, r in sorted(artifact.index.records.items())]}
        )
        + "\n"
    }
    for level in LEVELS:
        files[_matrix_file(level)] = proximity.export_matrix(artifact.matrices[level])
        files[_map_file(level)] = atlas.export_map(artifact.graphs[level], artifact.layouts[level])
        files[_terms_file(level)] = (
            canonical_json(_registry_payload(artifact.registries[level])) + "\n"
        )
    return files


def save_artifact(artifact: IndexArtifact, out_dir: str | Path) -> Path:
    """Write the artifact directory atomically (temp dir + rename)."""
    out = Path(out_dir)
    if out.exists():
        raise ArtifactError(f"output directory {out} already exists")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=out.name + ".tmp-", dir=out.parent))
    try:
        files = _artifact_files(artifact)
        hashes = {}
        for name, content in files.items():
            data = content.encode("utf-8")
            (tmp / name).write_bytes(data)
            hashes[name] = _sha256_bytes(data)
        manifest = dict(artifact.manifest)
        manifest["files"] = dict(sorted(hashes.items()))
        manifest["manifest_hash"] = manifest_hash_of(manifest)
        (tmp / MANIFEST_FILE).write_text(
            canonical_json(manifest) + "\n", encoding="utf-8"
        )
        artifact.manifest = manifest
        tmp.rename(out)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return out


def build_artifact(
    corpus_path: str | Path, out_dir: str | Path, config: BuildConfig | None = None
) -> IndexArtifact:
    """Parse a corpus file and persist the full artifact under *out_dir*."""
    config = config or BuildConfig()
    corpus_path = Path(corpus_path)
    index = load_corpus(corpus_path)  # aborts with a line-numbered report
    artifact = build_in_memory(index, config)
    artifact.manifest["corpus_sha256"] = _sha256_file(corpus_path)
    artifact.manifest["built_at"] = datetime.now(timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )
    save_artifact(artifact, out_dir)
    return artifact


def load_artifact(artifact_dir: str | Path, verify: bool = True) -> IndexArtifact:
    """Load an artifact directory, validating it against its manifest.

    Refuses to load on format-version mismatch, stopword-list mismatch
    with the installed package, or any file hash mismatch.
    """
    root = Path(artifact_dir)
    manifest_path = root / MANIFEST_FILE
    if not manifest_path.is_file():
        raise ArtifactError(f"{root} is not an artifact directory (no {MANIFEST_FILE})")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    if manifest.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(
            f"artifact format version {manifest.get('format_version')!r} is not"
            f" supported (expected {FORMAT_VERSION})"
        )
    if verify:
        if manifest.get("stopwords_sha256") != terms.stopwords_sha256():
            raise ArtifactError(
                "artifact was built with a different stopword list; rebuild required"
            )
        if manifest_hash_of(manifest) != manifest.get("manifest_hash"):
            raise ArtifactError("manifest hash does not match manifest content")
        for name, expected in manifest.get("files", {}).items():
            actual = _sha256_file(root / name)
            if actual != expected:
                raise ArtifactError(f"artifact file {name} does not match its manifest hash")

    corpus_payload = json.loads((root / CORPUS_FILE).read_text(encoding="utf-8"))
    # corpus.json stores records in the corpus line schema, so the line
    # parser doubles as the loader (derived index structures are rebuilt)
    records = [parse_record(canonical_json(raw)) for raw in corpus_payload["records"]]
    index = build_corpus_index(records)

    matrices = {}
    graphs = {}
    layouts = {}
    registries = {}
    for level in LEVELS:
        matrices[level] = proximity.parse_matrix_export(
            (root / _matrix_file(level)).read_text(encoding="utf-8"), level
        )
        map_payload = json.loads((root / _map_file(level)).read_text(encoding="utf-8"))
        graphs[level], layouts[level] = atlas.parse_map_export(map_payload)
        registries[level] = _registry_from_payload(
            json.loads((root / _terms_file(level)).read_text(encoding="utf-8"))
        )

    return IndexArtifact(
        manifest=manifest,
        index=index,
        matrices=matrices,
        graphs=graphs,
        layouts=layouts,
        registries=registries,
    )
