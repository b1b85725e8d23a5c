"""IRS against the DF relay, swept over N and over transmit power"""

from typing import Any, Dict, List

import numpy as np

from ..analysis.closed_form import avg_rate_hwi, hwi_curve, utility_hwi
from ..analysis.df_relay import (
    DfParams,
    asymptotics,
    df_curve,
    df_rate_upper_bound,
    df_utility,
)
from ..models.enums import ExperimentId
from ..models.scenario import ScenarioParams
from ..models.state import ExperimentState
from ..physics.scenario import dbm_to_watts, link_budget
from .base import BaseExperiment


def with_kappa(params: ScenarioParams, kappa_side: float) -> ScenarioParams:
    return params.with_changes(kappa_t=kappa_side, kappa_r=kappa_side)


class RelayElementSweep(BaseExperiment):
    columns = (
        "N",
        "kappa_t",
        "kappa_r",
        "rate_irs",
        "rate_df",
        "utility_irs",
        "utility_df",
        "df_branch",
        "rate_limit_irs",
        "rate_limit_df",
    )

    def __init__(self):
        super().__init__(ExperimentId.FIG6A)

    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        spec = state["spec"]
        grid = [int(N) for N in spec.grid]
        N = np.asarray(grid, dtype=np.float64)
        rows = []
        for kappa_side in state["settings"].experiments.relay_kappas:
            params = with_kappa(state["params"], kappa_side)
            budget = link_budget(params)
            df = DfParams.from_scenario(params, budget)
            limits = asymptotics(params, df)
            irs = hwi_curve(N, params, budget)
            relay_curve = df_curve(N, df, params)
            for i, n in enumerate(grid):
                rows.append(
                    {
                        "N": n,
                        "kappa_t": params.kappa_t,
                        "kappa_r": params.kappa_r,
                        "rate_irs": irs.rate[i],
                        "rate_df": relay_curve.rate[i],
                        "utility_irs": irs.utility[i],
                        "utility_df": relay_curve.utility[i],
                        "df_branch": df_utility(n, df, params).branch.value,
                        "rate_limit_irs": limits.irs_rate_limit,
                        "rate_limit_df": limits.df_rate_limit_elements,
                    }
                )
            self.log_event(
                state,
                f"kappa {kappa_side:g} per side done",
                rate_limit_irs=limits.irs_rate_limit,
                rate_limit_df=limits.df_rate_limit_elements,
            )
        return rows


class RelayPowerSweep(BaseExperiment):
    columns = ("P_dbm", "kappa_t", "kappa_r", "rate_irs", "rate_df", "utility_irs", "utility_df")

    def __init__(self):
        super().__init__(ExperimentId.FIG6B)

    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        spec = state["spec"]
        N = spec.elements or state["settings"].experiments.relay_elements
        rows = []
        for kappa_side in state["settings"].experiments.relay_kappas:
            base = with_kappa(state["params"], kappa_side)
            for p_dbm in spec.grid:
                params = base.with_changes(P=dbm_to_watts(p_dbm))
                budget = link_budget(params)
                df = DfParams.from_scenario(params, budget)
                rows.append(
                    {
                        "P_dbm": p_dbm,
                        "kappa_t": params.kappa_t,
                        "kappa_r": params.kappa_r,
                        "rate_irs": avg_rate_hwi(N, params, budget),
                        "rate_df": df_rate_upper_bound(N, df, params),
                        "utility_irs": utility_hwi(N, params, budget),
                        "utility_df": df_utility(N, df, params).value,
                    }
                )
        self.log_event(state, f"power sweep at N={N} done", N=N)
        return rows
