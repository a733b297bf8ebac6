from .entries import corpus_list, corpus_manifest
from .manifest import Manifest, build_manifest, load_manifest
from .runner import Report, run

__all__ = ["Manifest", "Report", "build_manifest", "corpus_list", "corpus_manifest", "load_manifest", "run"]
