import logging
from pathlib import Path

from pycegir.corpus import loadSidecar, mergeOptions, SIDECAR_SUFFIX
from pycegir.lang import parseProgram
from pycegir.models.options import InferenceOptions
from pycegir.models.program import Program

logging.basicConfig(level=logging.WARNING)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def loadCorpusProgram(name: str) -> Program:
    return parseProgram((CORPUS / f"{name}.mpl").read_text(), name=name)


def corpusOptions(name: str, **overrides) -> InferenceOptions:
    """Options of a corpus entry, sidecar overrides applied."""
    options = InferenceOptions(**overrides)
    sidecar = CORPUS / f"{name}{SIDECAR_SUFFIX}"
    if sidecar.exists():
        options = mergeOptions(options, loadSidecar(sidecar).options)
    return options
