"""Prompt sets, generation backends and report assembly."""
from .assemble import GenerationConfig, IntelligenceReport, assemble_report, generate_report, keyword_coverage
from .backends import BackendSpec, RemoteBackend, StubBackend, generate_section, make_backend
from .prompts import (
    CLASS_ORDER, INSTRUCTIONS, PROMPT_TEMPLATE_VERSION, SECTIONS, NarrativePromptSet, build_prompt_set,
    linearize, split_prompt,
)

__all__ = [
    "BackendSpec", "CLASS_ORDER", "GenerationConfig", "INSTRUCTIONS", "IntelligenceReport",
    "NarrativePromptSet", "PROMPT_TEMPLATE_VERSION", "RemoteBackend", "SECTIONS", "StubBackend",
    "assemble_report", "build_prompt_set", "generate_report", "generate_section", "keyword_coverage",
    "linearize", "make_backend", "split_prompt",
]
