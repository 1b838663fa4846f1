"""aldiag: diagnostic reasoning over action-language system descriptions.

The pipeline: an action description and a recorded history are compiled
into a ground logic program whose stable models are the possible pasts of
the device; discrepancies between predictions and observations become
symptoms, and candidate diagnoses are read off the stable models of a
diagnostic program.  A simulated world supports the test-and-repair loop.
"""

from .action import (
    ActionDescription,
    DomainSignature,
    FLit,
    Law,
    RecordedHistory,
    Trajectory,
    ab,
    dynamic_law,
    flit,
    history,
    impossibility,
    signature,
    static_law,
)
from .diagnose import (
    CandidateDiagnosis,
    Configuration,
    ObservationSet,
    all_candidate_diags,
    candidate_diag,
    configuration,
    diagnose,
    find_diag,
    is_symptom,
    relevance_index,
)
from .scenario import Scenario, parse_scenario
from .semantics import closure, entails, models_of_history, successors
from .world import WorldOracle

__version__ = "0.1.0"

__all__ = [
    "ActionDescription",
    "CandidateDiagnosis",
    "Configuration",
    "DomainSignature",
    "FLit",
    "Law",
    "ObservationSet",
    "RecordedHistory",
    "Scenario",
    "Trajectory",
    "WorldOracle",
    "ab",
    "all_candidate_diags",
    "candidate_diag",
    "closure",
    "configuration",
    "diagnose",
    "dynamic_law",
    "entails",
    "find_diag",
    "flit",
    "history",
    "impossibility",
    "is_symptom",
    "models_of_history",
    "parse_scenario",
    "relevance_index",
    "signature",
    "static_law",
    "successors",
]
