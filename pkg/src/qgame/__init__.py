"""Two-action extensive games in quantum-game form (MW and EWL schemes)."""

from .extensive import (
    ExtensiveGame,
    GameError,
    NormalForm,
    PureStrategy,
    behavioral_weights,
    enumerate_pure_strategies,
    mixed_expected_utility,
    normal_representation,
    outcome,
    random_game,
    selten_horse,
    two_stage,
    validate_game,
)
from .protocol import (
    EWL,
    MW,
    Family,
    QuantumGameSpec,
    final_state,
    induced_strategic_game,
    payoff,
    quantize,
    verify_isomorphism,
)
from .equilibrium import (
    GridSpec,
    best_response_set,
    grid_nash,
    nash_condition_region,
    perturbation_refinement,
    pure_nash,
)

__version__ = "0.1.0"
