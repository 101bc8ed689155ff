"""Canonical JSON serialization for fields, polygons, surfaces, verdicts.

Rationals are lowest-terms "p/q" strings so outputs are byte-stable; number
fields serialize their integer minimal polynomial (constant term first) and
a rational isolating interval.
"""

import json
from fractions import Fraction

from .errors import InputError
from .field import NumberField, rationals
from .geometry import PlanarVector
from .polygons import RationalAngle, l_shape, triangle_from_angles, validate_polygon
from .unfold import TranslationSurface

SCHEMA_VERSION = "1"


def frac_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s):
    if isinstance(s, (int, float)):
        return Fraction(s)
    return Fraction(s)


def field_to_json(field):
    lo, hi = field.interval()
    return {
        "min_poly": list(field.min_poly),
        "embedding": [lo.numerator, lo.denominator, hi.numerator, hi.denominator],
    }


def field_from_json(data):
    lo = Fraction(data["embedding"][0], data["embedding"][1])
    hi = Fraction(data["embedding"][2], data["embedding"][3])
    return NumberField(tuple(data["min_poly"]), (lo, hi))


def element_to_json(x):
    return [frac_str(c) for c in x.coords]


def element_from_json(data, field):
    return field.element([parse_frac(c) for c in data])


def vector_to_json(v):
    return [element_to_json(v.x), element_to_json(v.y)]


def vector_from_json(data, field):
    return PlanarVector(element_from_json(data[0], field),
                        element_from_json(data[1], field))


def polygon_to_json(poly):
    return {
        "schema": SCHEMA_VERSION,
        "angles": [[a.num, a.den] for a in poly.angles],
        "lengths": [element_to_json(s) for s in poly.side_lengths],
        "field": field_to_json(poly.field),
    }


def polygon_from_json(data):
    """Accepts the full polygon format or the triangle shorthand
    {"triangle": [[n1,d1],[n2,d2],[n3,d3]]} (side lengths by the law of
    sines, first side 1)."""
    if "triangle" in data:
        return triangle_from_angles([tuple(p) for p in data["triangle"]])
    if "l_shape" in data:
        spec = data["l_shape"]
        field = field_from_json(spec["field"]) if "field" in spec else None
        horizontals = [_length_from_json(v, field) for v in spec["horizontals"]]
        verticals = [_length_from_json(v, field) for v in spec["verticals"]]
        return l_shape(horizontals, verticals, field=field)
    angles = [RationalAngle(*pair) for pair in data["angles"]]
    field = field_from_json(data["field"]) if "field" in data else rationals()
    lengths = [element_from_json(s, field) for s in data["lengths"]]
    return validate_polygon(angles, lengths, field=field)


def _length_from_json(v, field):
    if isinstance(v, list):
        if field is None:
            raise InputError("field required for field-element lengths")
        return element_from_json(v, field)
    return parse_frac(v)


def surface_to_json(surface):
    gl = []
    seen = set()
    for (c, j), (c2, j2) in sorted(surface.gluings.items()):
        if (c, j) in seen:
            continue
        seen.add((c, j))
        seen.add((c2, j2))
        gl.append([c, j, c2, j2])
    return {
        "schema": SCHEMA_VERSION,
        "cells": [[vector_to_json(v) for v in cell] for cell in surface.cells],
        "gluings": gl,
        "field": field_to_json(surface.field),
    }


def surface_from_json(data):
    field = field_from_json(data["field"])
    cells = [[vector_from_json(v, field) for v in cell] for cell in data["cells"]]
    gluings = {}
    for (c, j, c2, j2) in data["gluings"]:
        gluings[(c, j)] = (c2, j2)
        gluings[(c2, j2)] = (c, j)
    return TranslationSurface(cells, gluings, field)


def verdict_to_json(verdict):
    out = {
        "weakly_mixing": verdict.weakly_mixing,
        "reason": verdict.reason,
        "kernel_dim": verdict.kernel_dim,
        "k": verdict.k,
        "witness": None,
        "cross_checks": _jsonable(verdict.cross_checks),
    }
    if verdict.subtype:
        out["subtype"] = verdict.subtype
    if verdict.witness is not None:
        out["witness"] = {
            "integer_class": list(verdict.witness["integer_class"]),
            "a": element_to_json(verdict.witness["a"]),
            "b": element_to_json(verdict.witness["b"]),
            "all_classes": [list(v) for v in verdict.witness["all_classes"]],
        }
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in sorted(x.items())}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return frac_str(x)
    if hasattr(x, "coords"):
        return element_to_json(x)
    return x


def periods_to_json(surface, basis, pm):
    return {
        "schema": SCHEMA_VERSION,
        "genus": surface.genus,
        "intersection": [list(r) for r in basis.intersection_matrix],
        "re": [element_to_json(x) for x in pm.re_row],
        "im": [element_to_json(x) for x in pm.im_row],
    }


def dump_canonical(obj):
    """Deterministic JSON text: sorted keys, no whitespace variation."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


SCHEMAS = {
    "field": {
        "min_poly": "[int] monic integer coefficients, constant term first",
        "embedding": "[lo_num, lo_den, hi_num, hi_den] rational isolating interval",
    },
    "element": '["p/q", ...] power-basis coordinates, lowest terms',
    "polygon": {
        "angles": "[[num, den], ...] interior angles as multiples of pi",
        "lengths": "[element, ...] side lengths over the ambient field",
        "field": "field serialization",
        "shorthand": {"triangle": "[[n1,d1],[n2,d2],[n3,d3]] law-of-sines sides"},
    },
    "surface": {
        "cells": "[[vector, ...], ...] ccw edge-vector loops",
        "gluings": "[[cell, edge, cell2, edge2], ...] opposite-holonomy pairs",
        "field": "field serialization",
    },
    "verdict": {
        "weakly_mixing": "bool",
        "reason": "K_TRIVIAL | GENERIC_K | TORUS_COVER | ALMOST_INTEGRABLE | "
                  "COMMENSURABLE_K2 | TORUS_FACTOR",
        "kernel_dim": "0 | 1 | 2",
        "witness": "{integer_class, a, b, all_classes} or null",
        "cross_checks": "fast-path vs exact-kernel agreement record",
    },
}
