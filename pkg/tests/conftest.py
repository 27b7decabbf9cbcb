from dataclasses import dataclass

import pytest

from multispec.carnot import catalog, polynomial_derham
from multispec.filtration import classical_pages
from multispec.hodge import build_hodge_kit
from multispec.multicomplex import random_conjugated_multicomplex, total_complex
from multispec.rumin import build_rumin
from multispec.spectral import SpectralWorkspace
from multispec.star import build_star


@dataclass
class Stack:
    model: object
    kit: object
    rum: object
    ws: SpectralWorkspace
    star: object

    @property
    def mc(self):
        return self.model.mc


def build_catalog_stack(name: str, D: int) -> Stack:
    model = polynomial_derham(catalog(name, D))
    kit = build_hodge_kit(model.mc)
    rum = build_rumin(model.mc, kit)
    return Stack(model, kit, rum, SpectralWorkspace(rum), build_star(model))


@pytest.fixture(scope="session")
def engel3():
    return build_catalog_stack("engel", 3)


@pytest.fixture(scope="session")
def engel4():
    return build_catalog_stack("engel", 4)


@pytest.fixture(scope="session")
def heisenberg3():
    return build_catalog_stack("heisenberg1", 3)


@pytest.fixture(scope="session")
def random_batch():
    """100 conjugated instances with known cohomology, plus their stacks and
    classical pages; shared by the oracle and identity acceptance criteria."""
    batch = []
    for seed in range(100):
        mc, known = random_conjugated_multicomplex(
            seed, max_weight=min(6, 2 + seed % 5), max_degree=4,
            max_dim=2, total_cap=24)
        kit = build_hodge_kit(mc)
        rum = build_rumin(mc, kit)
        ws = SpectralWorkspace(rum)
        page = classical_pages(rum.tc, mc.Q + 2)
        batch.append((seed, mc, known, kit, rum, ws, page))
    return batch
