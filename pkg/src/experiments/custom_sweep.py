"""Closed-form IRS, ideal and DF columns over a user-chosen N or power grid"""

from typing import Any, Dict, List

from ..analysis.closed_form import avg_rate_hwi, rate_ideal, utility_hwi
from ..analysis.df_relay import DfParams, df_rate_upper_bound, df_utility
from ..models.enums import ExperimentId, SweepAxis
from ..models.state import ExperimentState
from ..physics.scenario import dbm_to_watts, link_budget
from .base import BaseExperiment

class CustomSweepExperiment(BaseExperiment):
    value_columns = ("rate_hwi", "rate_ideal", "rate_df", "utility_hwi", "utility_df")

    def __init__(self):
        super().__init__(ExperimentId.CUSTOM_SWEEP)

    def execute(self, state: ExperimentState) -> ExperimentState:
        state = super().execute(state)
        state["columns"] = [state["spec"].axis.value, *self.value_columns]
        return state

    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        spec = state["spec"]
        rows = []
        for point in spec.grid:
            if spec.axis is SweepAxis.N:
                N, params = int(point), state["params"]
                key = N
            else:
                N = spec.elements or state["settings"].experiments.relay_elements
                params = state["params"].with_changes(P=dbm_to_watts(point))
                key = point
            budget = link_budget(params)
            df = DfParams.from_scenario(params, budget)
            rows.append(
                {
                    spec.axis.value: key,
                    "rate_hwi": avg_rate_hwi(N, params, budget),
                    "rate_ideal": rate_ideal(N, params, budget),
                    "rate_df": df_rate_upper_bound(N, df, params),
                    "utility_hwi": utility_hwi(N, params, budget),
                    "utility_df": df_utility(N, df, params).value,
                }
            )
        return rows
