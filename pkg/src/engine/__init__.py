"""CASM/CSSM state machines, prediction and the engine orchestrator."""

from .tensor import Path, TransitionTensor, transition_count
from .casm import CASM, casm_for, grow_dimension, record_event
from .cssm import (
    CSSM,
    DomainView,
    ReplayView,
    SituationPart,
    SituationRegistry,
    SituationState,
    extract_situation,
    record_situation_event,
)
from .prediction import (
    ReasoningFunction,
    choose,
    laplace_distribution,
    laplace_reasoning,
    next_state_distribution,
    predict,
)
from .csm_engine import CSMEngine
from .pipeline import BuildPipeline, run_build
