"""Off-grid battery sizing for a single location."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroProduction


@dataclass(frozen=True)
class StorageEstimate:
    location: str
    daily_consumption_mwh: float
    required_storage_mwh: float
    local_area_m2: float

    @property
    def daily_consumption_gwh(self) -> float:
        return self.daily_consumption_mwh / 1000.0

    @property
    def required_storage_gwh(self) -> float:
        return self.required_storage_mwh / 1000.0


def cyclic_max_drawdown(net) -> float:
    """Largest peak-to-trough fall of the running sum of a periodic series.

    ``net`` is one period of a series whose period sum is (close to) zero.
    Running two periods back to back covers every start phase.
    """
    net = np.asarray(net, dtype=float)
    level = np.concatenate([[0.0], np.cumsum(np.concatenate([net, net]))])
    peak = np.maximum.accumulate(level)
    return float(np.max(peak - level))


def estimate_storage(cons, prod_unit) -> tuple[float, float]:
    """Size a location to be energy-neutral over the day and return (area, storage).

    ``cons`` is hourly consumption (MWh), ``prod_unit`` hourly production per
    m2 of panel (MWh/m2).  Storage is the smallest battery (MWh, lossless)
    that carries the repeated day without running empty.
    """
    cons = np.asarray(cons, dtype=float)
    prod_unit = np.asarray(prod_unit, dtype=float)
    total_prod = prod_unit.sum()
    total_cons = cons.sum()
    if total_prod <= 0:
        raise ZeroProduction("no solar production in the simulated day")
    if total_cons <= 0:
        return 0.0, 0.0
    area = total_cons / total_prod
    net = prod_unit * area - cons
    # Remove the rounding residue so the cyclic sum closes exactly.
    net -= net.sum() / net.size
    storage = cyclic_max_drawdown(net)
    return float(area), storage


def storage_report(names, consumption, production) -> list[StorageEstimate]:
    """Per-location estimates from 24 x n consumption/production matrices."""
    consumption = np.asarray(consumption, dtype=float)
    production = np.asarray(production, dtype=float)
    out = []
    for i, name in enumerate(names):
        try:
            area, storage = estimate_storage(consumption[:, i], production[:, i])
        except ZeroProduction:
            raise ZeroProduction(f"{name}: no solar production in the simulated day") from None
        out.append(StorageEstimate(name, float(consumption[:, i].sum()), storage, area))
    return out
