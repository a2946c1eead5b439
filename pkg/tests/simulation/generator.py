"""
Random Finite Categories

Seeded generators for valid finite categories, used by the property tests:

- posets: a random DAG closed transitively with networkx, one morphism per
  comparable pair
- transformation monoids: one object, the closure of a few random
  self-maps of {0..k-1} under composition
- finite-set subcategories: a few small sets, identities and random
  functions closed under composition
"""
import random
from dataclasses import dataclass
from typing import Optional

import networkx as nx
import structlog

from src.core.category.fincat import FinCategory, RawCategory, validate_category

logger = structlog.get_logger()


@dataclass
class GeneratorConfig:
    """Size limits for generated categories"""
    max_objects: int = 5
    max_morphisms: int = 20
    edge_probability: float = 0.4
    max_carrier: int = 3
    max_generators: int = 2
    max_set_size: int = 2
    max_sets: int = 3


def _word(values: tuple[int, ...]) -> str:
    return "".join(str(v) for v in values) or "e"


def _closure(generators: set[tuple[int, ...]], limit: int) -> Optional[set[tuple[int, ...]]]:
    """Close a set of self-maps under composition; None once it outgrows limit"""
    closed = set(generators)
    frontier = list(closed)
    while frontier:
        f = frontier.pop()
        for g in list(closed):
            for h in (tuple(g[x] for x in f), tuple(f[x] for x in g)):
                if h not in closed:
                    closed.add(h)
                    frontier.append(h)
                    if len(closed) > limit:
                        return None
    return closed


class CategoryGenerator:
    """Reproducible stream of valid finite categories"""

    def __init__(self, seed: int = 0, config: Optional[GeneratorConfig] = None):
        self.config = config or GeneratorConfig()
        self.rng = random.Random(seed)

    def random_poset(self, name: str = "P") -> FinCategory:
        n = self.rng.randint(1, self.config.max_objects)
        while True:
            graph = nx.DiGraph()
            graph.add_nodes_from(range(n))
            for a in range(n):
                for b in range(a + 1, n):
                    if self.rng.random() < self.config.edge_probability:
                        graph.add_edge(a, b)
            closure = nx.transitive_closure_dag(graph)
            if n + closure.number_of_edges() <= self.config.max_morphisms:
                break

        objects = [f"x{a}" for a in range(n)]
        arrow = {(a, a): f"id_x{a}" for a in range(n)}
        arrow.update({(a, b): f"x{a}<x{b}" for a, b in closure.edges})
        morphisms = [(m, f"x{a}", f"x{b}") for (a, b), m in sorted(arrow.items())]
        compose = {
            (f, g): arrow[(a, c)]
            for (a, b), f in arrow.items()
            for (b2, c), g in arrow.items()
            if b == b2
        }
        return validate_category(RawCategory(
            objects=objects,
            morphisms=morphisms,
            identity={f"x{a}": f"id_x{a}" for a in range(n)},
            compose=compose,
            name=name,
        ))

    def random_monoid(self, name: str = "M") -> FinCategory:
        while True:
            k = self.rng.randint(1, self.config.max_carrier)
            ident = tuple(range(k))
            generators = {ident}
            for _ in range(self.rng.randint(1, self.config.max_generators)):
                generators.add(tuple(self.rng.randrange(k) for _ in range(k)))
            elements = _closure(generators, self.config.max_morphisms)
            if elements is not None:
                break

        ids = {t: f"t{_word(t)}" for t in sorted(elements)}
        return validate_category(RawCategory(
            objects=["*"],
            morphisms=[(m, "*", "*") for m in ids.values()],
            identity={"*": ids[ident]},
            compose={(ids[f], ids[g]): ids[tuple(g[x] for x in f)] for f in elements for g in elements},
            name=name,
        ))

    def random_finset_subcategory(self, name: str = "S") -> FinCategory:
        while True:
            sizes = [self.rng.randint(1, self.config.max_set_size)
                     for _ in range(self.rng.randint(1, self.config.max_sets))]
            arrows: set[tuple[int, int, tuple[int, ...]]] = {
                (a, a, tuple(range(size))) for a, size in enumerate(sizes)
            }
            for _ in range(self.rng.randint(1, self.config.max_generators + 1)):
                a, b = self.rng.randrange(len(sizes)), self.rng.randrange(len(sizes))
                arrows.add((a, b, tuple(self.rng.randrange(sizes[b]) for _ in range(sizes[a]))))

            changed = True
            while changed and len(arrows) <= self.config.max_morphisms:
                changed = False
                for a, b, f in list(arrows):
                    for b2, c, g in list(arrows):
                        if b == b2:
                            h = (a, c, tuple(g[x] for x in f))
                            if h not in arrows:
                                arrows.add(h)
                                changed = True
            if len(arrows) <= self.config.max_morphisms:
                break

        ids = {arrow: f"s{arrow[0]}>s{arrow[1]}:{_word(arrow[2])}" for arrow in sorted(arrows)}
        return validate_category(RawCategory(
            objects=[f"s{a}" for a in range(len(sizes))],
            morphisms=[(m, f"s{a}", f"s{b}") for (a, b, _), m in ids.items()],
            identity={f"s{a}": ids[(a, a, tuple(range(size)))] for a, size in enumerate(sizes)},
            compose={
                (ids[(a, b, f)], ids[(b, c, g)]): ids[(a, c, tuple(g[x] for x in f))]
                for a, b, f in arrows
                for b2, c, g in arrows
                if b == b2
            },
            name=name,
        ))

    def generate(self, count: int) -> list[FinCategory]:
        """count categories, cycling through the three families"""
        makers = [self.random_poset, self.random_monoid, self.random_finset_subcategory]
        categories = [makers[k % 3](name=f"G{k}") for k in range(count)]
        logger.debug(
            "categories_generated",
            count=count,
            morphisms=[len(C.morphism_ids) for C in categories],
        )
        return categories
