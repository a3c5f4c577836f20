#!/usr/bin/env python3
"""
Validación de tablas espectrales y de los invariantes estructurales de edificios
"""
import math
from collections import Counter, defaultdict
from typing import Dict, List

from sftcalc.errors import InvalidBuildingError
from sftcalc.models import Building, Component, SpectralTable, format_key


class TableValidator:
    """Auditoría de tablas espectrales"""

    @staticmethod
    def check_sorted(table: SpectralTable) -> List[str]:
        """Validar orden estricto de autovalores y multiplicidades positivas"""
        problems = []
        values = [e.eigenvalue for e in table.entries]
        if any(b <= a for a, b in zip(values, values[1:])):
            problems.append("eigenvalues are not strictly increasing")
        if any(e.multiplicity < 1 for e in table.entries):
            problems.append("multiplicities must be positive")
        return problems

    @staticmethod
    def check_monotone_winding(table: SpectralTable) -> List[str]:
        """El número de vueltas no decrece con el autovalor"""
        windings = [e.winding for e in table.entries]
        if any(b < a for a, b in zip(windings, windings[1:])):
            return ["winding is not monotone in the eigenvalue"]
        return []

    @staticmethod
    def check_two_per_winding(table: SpectralTable) -> List[str]:
        """Exactamente dos autovalores por número de vueltas (clases de borde: a lo sumo dos)"""
        counts: Dict[int, int] = defaultdict(int)
        for entry in table.entries:
            counts[entry.winding] += entry.multiplicity
        if not counts:
            return []
        lowest, highest = min(counts), max(counts)
        problems = []
        for w in range(lowest, highest + 1):
            total = counts.get(w, 0)
            edge = w in (lowest, highest)
            if (edge and total > 2) or (not edge and total != 2):
                problems.append(f"winding {w} carries {total} eigenvalues")
        return problems

    def audit(self, table: SpectralTable) -> List[str]:
        return (
            self.check_sorted(table)
            + self.check_monotone_winding(table)
            + self.check_two_per_winding(table)
        )


class BuildingValidator:
    """Invariantes estructurales de un edificio (sin catálogo)"""

    @staticmethod
    def validate_component(comp: Component) -> List[str]:
        """Validar una componente según su tipo"""
        problems = []
        where = f"component {comp.id!r}"
        if comp.genus < 0:
            problems.append(f"{where}: negative genus")
        if comp.wind_pi is not None and comp.wind_pi < 0:
            problems.append(f"{where}: wind_pi must be nonnegative")
        for idx, p in enumerate(comp.punctures):
            if not math.isfinite(p.constraint) or p.constraint < 0:
                problems.append(f"{where}: puncture {idx} has invalid constraint {p.constraint}")

        if comp.kind == "constant":
            if comp.punctures:
                problems.append(f"{where}: constant components carry no punctures")
            if comp.rel_c1 != 0:
                problems.append(f"{where}: constant components have rel_c1 = 0")
        elif comp.kind == "trivial":
            if comp.rel_c1 != 0:
                problems.append(f"{where}: trivial components have rel_c1 = 0")
            if comp.orbit is None:
                problems.append(f"{where}: trivial components must name their simple orbit")
            elif any(p.orbit.simple != comp.orbit for p in comp.punctures):
                problems.append(f"{where}: punctures must cover the orbit {comp.orbit!r}")
            positive = [p.orbit.k for p in comp.punctures if p.sign == "+"]
            negative = [p.orbit.k for p in comp.punctures if p.sign == "-"]
            if not positive or not negative:
                problems.append(f"{where}: trivial components need a positive and a negative puncture")
            elif sum(positive) != sum(negative):
                problems.append(
                    f"{where}: cover degrees differ at the two ends ({sum(positive)} vs {sum(negative)})"
                )
        return problems

    @staticmethod
    def validate_pairs(building: Building) -> List[str]:
        """Validar pares de ruptura y pares nodales"""
        problems = []
        seen: Counter = Counter()
        for pos, neg in building.breaking_pairs:
            if not building.has_puncture(pos) or not building.has_puncture(neg):
                problems.append(f"breaking pair ({format_key(pos)}, {format_key(neg)}) names a missing puncture")
                continue
            seen[pos] += 1
            seen[neg] += 1
            zp, zn = building.puncture(pos), building.puncture(neg)
            label = f"breaking pair ({format_key(pos)}, {format_key(neg)})"
            if zp.sign != "+" or zn.sign != "-":
                problems.append(f"{label}: must join a positive to a negative puncture")
            if zp.orbit != zn.orbit:
                problems.append(f"{label}: orbits differ ({zp.orbit} vs {zn.orbit})")
            if zp.constraint != 0 or zn.constraint != 0:
                problems.append(f"{label}: breaking punctures carry constraint 0")
        for key, count in sorted(seen.items()):
            if count > 1:
                problems.append(f"puncture {format_key(key)} appears in {count} breaking pairs")
        for a, b in building.nodal_pairs:
            if not building.has_component(a) or not building.has_component(b):
                problems.append(f"nodal pair ({a}, {b}) names a missing component")
        return problems

    @staticmethod
    def stability_problems(building: Building) -> List[str]:
        """Estabilidad: toda componente constante tiene 2 − 2g − #nodos < 0"""
        problems = []
        for comp in building.components:
            if comp.kind != "constant":
                continue
            chi = 2 - 2 * comp.genus - building.node_endpoints(comp.id)
            if chi >= 0:
                problems.append(f"constant component {comp.id!r} is unstable (chi = {chi})")
        return problems

    def problems(self, building: Building) -> List[str]:
        ids = building.component_ids
        problems = [f"duplicate component id {cid!r}" for cid, n in sorted(Counter(ids).items()) if n > 1]
        for comp in building.components:
            problems.extend(self.validate_component(comp))
        problems.extend(self.validate_pairs(building))
        return problems

    def check(self, building: Building, stable: bool = False) -> Building:
        """Lanzar InvalidBuildingError si hay problemas"""
        problems = self.problems(building)
        if stable:
            problems.extend(self.stability_problems(building))
        if problems:
            raise InvalidBuildingError(problems)
        return building


# Instancias globales
table_validator = TableValidator()
building_validator = BuildingValidator()
