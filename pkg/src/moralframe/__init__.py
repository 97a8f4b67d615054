"""moralframe: retrieve, filter, and compose morally framed arguments."""

from .foundations import (
    BINDING,
    FOUNDATIONS,
    INDIVIDUALIZING,
    AspectMoralMap,
    Framing,
    LexiconError,
    MoralFoundation,
    MoralLexicon,
    MoralProfile,
    PipelineConfig,
    framing_to_morals,
    load_aspect_map,
    load_moral_lexicon,
)

__all__ = [
    "AspectMoralMap",
    "BINDING",
    "FOUNDATIONS",
    "Framing",
    "INDIVIDUALIZING",
    "LexiconError",
    "MoralFoundation",
    "MoralLexicon",
    "MoralProfile",
    "PipelineConfig",
    "framing_to_morals",
    "load_aspect_map",
    "load_moral_lexicon",
]

__version__ = "0.1.0"
