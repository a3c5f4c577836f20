"""
Edificios holomorfos generalizados: grafo G, invariantes topológicos y cirugía
(nodos, pegado, aumentación, núcleo y subedificios).

Todas las operaciones devuelven edificios nuevos; los de entrada no se modifican.
"""
import logging
from dataclasses import replace
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from sftcalc.errors import (
    ConsistencyError,
    InvalidInputError,
    NoCoreError,
    SurgeryError,
)
from sftcalc.models import (
    BreakingPair,
    Building,
    Component,
    ConstraintSet,
    OrbitRef,
    Puncture,
    PunctureKey,
    format_key,
)
from sftcalc.validation import building_validator

logger = logging.getLogger(__name__)

PairSite = Union[int, BreakingPair]
Site = Union[PunctureKey, int]


def graph(b: Building) -> nx.MultiGraph:
    """Grafo G: vértices = componentes, aristas = pares de ruptura y pares nodales"""
    g = nx.MultiGraph()
    g.add_nodes_from(b.component_ids)
    for idx, (pos, neg) in enumerate(b.breaking_pairs):
        g.add_edge(pos[0], neg[0], key=("break", idx))
    for idx, (a, c) in enumerate(b.nodal_pairs):
        g.add_edge(a, c, key=("node", idx))
    return g


def euler_char(b: Building) -> int:
    """χ de la superficie compactificada y pegada (los círculos pegados tienen χ = 0)"""
    return sum(
        2 - 2 * comp.genus - len(comp.punctures) - b.node_endpoints(comp.id)
        for comp in b.components
    )


def is_connected(b: Building) -> bool:
    if not b.components:
        return False
    return nx.is_connected(graph(b))


def connected_pieces(b: Building) -> List[List[str]]:
    """Componentes conexas de G como listas ordenadas de ids"""
    return sorted(sorted(piece) for piece in nx.connected_components(graph(b)))


def arithmetic_genus(b: Building) -> int:
    """g con χ(S̄) = 2 − 2g − #Γ_ext"""
    if not is_connected(b):
        raise InvalidInputError("arithmetic genus needs a connected building")
    twice = 2 - len(b.external_keys()) - euler_char(b)
    if twice % 2:
        raise ConsistencyError(f"2 - #external - chi = {twice} is odd")
    return twice // 2


def _pair_index(b: Building, pair: PairSite) -> int:
    if isinstance(pair, int):
        if not 0 <= pair < len(b.breaking_pairs):
            raise InvalidInputError(f"building has no breaking pair {pair}")
        return pair
    for idx, candidate in enumerate(b.breaking_pairs):
        if tuple(candidate) == tuple(pair):
            return idx
    raise InvalidInputError(f"breaking pair ({format_key(pair[0])}, {format_key(pair[1])}) not found")


def is_trivial_breaking(b: Building, pair: PairSite) -> bool:
    """La arista separa G y uno de los dos lados consta sólo de cilindros triviales"""
    idx = _pair_index(b, pair)
    pos, neg = b.breaking_pairs[idx]
    upper, lower = neg[0], pos[0]
    if upper == lower:
        return False
    g = graph(b)
    g.remove_edge(lower, upper, key=("break", idx))
    if nx.has_path(g, lower, upper):
        return False
    for side in (nx.node_connected_component(g, lower), nx.node_connected_component(g, upper)):
        if all(b.component(cid).is_trivial_cylinder for cid in side):
            return True
    return False


def nontrivial_breaking_pairs(b: Building) -> List[int]:
    return [idx for idx in range(len(b.breaking_pairs)) if not is_trivial_breaking(b, idx)]


def _fresh_id(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    n = 1
    while f"{base}_{n}" in taken:
        n += 1
    return f"{base}_{n}"


def disjoint_union(a: Building, b: Building) -> Building:
    """Unión disjunta; los ids repetidos de b se renombran de forma determinista"""
    taken = set(a.component_ids)
    renames = {}
    for cid in b.component_ids:
        new = _fresh_id(taken, cid)
        renames[cid] = new
        taken.add(new)
    comps = a.components + tuple(replace(c, id=renames[c.id]) for c in b.components)
    pairs = a.breaking_pairs + tuple(
        ((renames[pos[0]], pos[1]), (renames[neg[0]], neg[1])) for pos, neg in b.breaking_pairs
    )
    nodes = a.nodal_pairs + tuple((renames[x], renames[y]) for x, y in b.nodal_pairs)
    return Building(components=comps, breaking_pairs=pairs, nodal_pairs=nodes)


def add_node(b: Building, comp_a: str, comp_b: str) -> Building:
    """Añadir un par nodal (χ baja exactamente 2)"""
    for cid in (comp_a, comp_b):
        if not b.has_component(cid):
            raise InvalidInputError(f"unknown component {cid!r}")
    return replace(b, nodal_pairs=b.nodal_pairs + ((comp_a, comp_b),))


def glue_punctures(b: Building, pos: PunctureKey, neg: PunctureKey) -> Building:
    """Pegar una puntura positiva con una negativa sobre la misma órbita"""
    for key in (pos, neg):
        if not b.has_puncture(key):
            raise InvalidInputError(f"unknown puncture {format_key(key)}")
    glued = b.glued_keys()
    zp, zn = b.puncture(pos), b.puncture(neg)
    if zp.sign != "+" or zn.sign != "-":
        raise SurgeryError(f"{format_key(pos)} must be positive and {format_key(neg)} negative")
    if zp.orbit != zn.orbit:
        raise SurgeryError(f"orbits differ: {zp.orbit} vs {zn.orbit}")
    if zp.constraint != 0 or zn.constraint != 0:
        raise SurgeryError("glued punctures must carry constraint 0")
    for key in (pos, neg):
        if key in glued:
            raise SurgeryError(f"puncture {format_key(key)} is already in a breaking pair")
    return replace(b, breaking_pairs=b.breaking_pairs + ((pos, neg),))


def trivial_cylinder(orbit: OrbitRef, component_id: str = "triv",
                     positive_constraint: float = 0.0, negative_constraint: float = 0.0) -> Building:
    """Cilindro trivial sobre γ^k como edificio de una componente"""
    return Building(components=(_cylinder_component(component_id, orbit, positive_constraint,
                                                    negative_constraint),))


def _cylinder_component(component_id: str, orbit: OrbitRef, positive_constraint: float = 0.0,
                        negative_constraint: float = 0.0) -> Component:
    return Component(
        id=component_id,
        genus=0,
        kind="trivial",
        orbit=orbit.simple,
        punctures=(
            Puncture(sign="+", orbit=orbit, constraint=float(positive_constraint)),
            Puncture(sign="-", orbit=orbit, constraint=float(negative_constraint)),
        ),
    )


def augment(b: Building, site: Site) -> Building:
    """Insertar un cilindro trivial en una puntura externa o en un par de ruptura"""
    new_id = _fresh_id(b.component_ids, "triv")
    top, bottom = (new_id, 0), (new_id, 1)

    if isinstance(site, int):
        idx = _pair_index(b, site)
        pos, neg = b.breaking_pairs[idx]
        cylinder = _cylinder_component(new_id, b.puncture(pos).orbit)
        pairs = list(b.breaking_pairs)
        pairs[idx] = (pos, bottom)
        pairs.append((top, neg))
        logger.debug("augment: cylinder %s inserted at breaking pair %d", new_id, idx)
        return replace(b, components=b.components + (cylinder,), breaking_pairs=tuple(pairs))

    key = (site[0], int(site[1]))
    z = b.puncture(key)
    if key in b.glued_keys():
        raise SurgeryError(f"puncture {format_key(key)} is glued; augment the breaking pair instead")
    if z.sign == "+":
        cylinder = _cylinder_component(new_id, z.orbit, positive_constraint=z.constraint)
        pair = (key, bottom)
    else:
        cylinder = _cylinder_component(new_id, z.orbit, negative_constraint=z.constraint)
        pair = (top, key)
    updated = b.replace_puncture(key, z.with_constraint(0.0))
    logger.debug("augment: cylinder %s inserted at puncture %s", new_id, format_key(key))
    return replace(
        updated,
        components=updated.components + (cylinder,),
        breaking_pairs=updated.breaking_pairs + (pair,),
    )


def _removable(b: Building) -> Optional[Component]:
    for comp in b.components:
        if comp.is_trivial_cylinder and b.node_endpoints(comp.id) == 0:
            return comp
    return None


def _remove_cylinder(b: Building, cyl: Component) -> Building:
    """Quitar un cilindro trivial empalmando los compañeros de sus dos punturas"""
    plus_idx = 0 if cyl.punctures[0].sign == "+" else 1
    top, bottom = (cyl.id, plus_idx), (cyl.id, 1 - plus_idx)
    glued = b.glued_keys()
    top_pair = glued.get(top)
    bottom_pair = glued.get(bottom)

    if top_pair is None and bottom_pair is None:
        raise NoCoreError(f"trivial cylinder {cyl.id!r} is a whole connected piece of the building")
    if top_pair is not None and top_pair == bottom_pair:
        raise NoCoreError(f"trivial cylinder {cyl.id!r} is glued to itself")

    result = b
    pairs = list(b.breaking_pairs)
    if top_pair is not None and bottom_pair is not None:
        upper_neg = pairs[top_pair][1]
        lower_pos = pairs[bottom_pair][0]
        kept = [p for i, p in enumerate(pairs) if i not in (top_pair, bottom_pair)]
        kept.append((lower_pos, upper_neg))
    elif top_pair is not None:
        upper_neg = pairs[top_pair][1]
        outer = cyl.punctures[bottom[1]].constraint
        result = result.replace_puncture(upper_neg, result.puncture(upper_neg).with_constraint(outer))
        kept = [p for i, p in enumerate(pairs) if i != top_pair]
    else:
        lower_pos = pairs[bottom_pair][0]
        outer = cyl.punctures[top[1]].constraint
        result = result.replace_puncture(lower_pos, result.puncture(lower_pos).with_constraint(outer))
        kept = [p for i, p in enumerate(pairs) if i != bottom_pair]

    return Building(
        components=tuple(c for c in result.components if c.id != cyl.id),
        breaking_pairs=tuple(kept),
        nodal_pairs=result.nodal_pairs,
    )


def core(b: Building) -> Building:
    """Núcleo: el único edificio sin cilindros triviales del que b es aumentación"""
    if b.components and all(c.is_trivial_cylinder for c in b.components):
        raise NoCoreError("every component is a trivial cylinder")
    if not b.components:
        raise NoCoreError("empty building has no core")
    result = b
    removed = 0
    while True:
        cyl = _removable(result)
        if cyl is None:
            break
        result = _remove_cylinder(result, cyl)
        removed += 1
    logger.debug("core: removed %d trivial cylinders", removed)
    return result


def apply_constraints(b: Building, c: ConstraintSet) -> Building:
    """Escribir las restricciones de c en las punturas externas"""
    external = set(b.external_keys())
    result = b
    for key, value in sorted(c.values.items()):
        if key not in external:
            raise InvalidInputError(f"constraint given for {format_key(key)}, which is not an external puncture")
        if value < 0:
            raise InvalidInputError(f"constraint at {format_key(key)} must be nonnegative")
        result = result.replace_puncture(key, result.puncture(key).with_constraint(value))
    return result


def subbuilding(b: Building, component_ids: Sequence[str]) -> Tuple[Building, ConstraintSet]:
    """Subedificio con restricciones inducidas (0 en las punturas de ruptura cortadas)"""
    wanted = set(component_ids)
    for cid in sorted(wanted):
        if not b.has_component(cid):
            raise InvalidInputError(f"unknown component {cid!r}")
    pairs = tuple(
        (pos, neg) for pos, neg in b.breaking_pairs if pos[0] in wanted and neg[0] in wanted
    )
    nodes = tuple((x, y) for x, y in b.nodal_pairs if x in wanted and y in wanted)
    sub = Building(
        components=tuple(c for c in b.components if c.id in wanted),
        breaking_pairs=pairs,
        nodal_pairs=nodes,
    )
    return sub, ConstraintSet.from_building(sub)


def is_trivial_building(b: Building) -> bool:
    """Conexo, sin nodos y con todas las componentes triviales"""
    return (
        is_connected(b)
        and not b.nodal_pairs
        and all(c.kind == "trivial" for c in b.components)
    )


def is_cylindrical(b: Building) -> bool:
    return is_connected(b) and arithmetic_genus(b) == 0 and len(b.external_keys()) == 2


def is_stable(b: Building) -> bool:
    return not building_validator.stability_problems(b)
