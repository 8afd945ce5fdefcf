"""JSON schemas of the command-line reports."""
from __future__ import annotations

NUM = {"type": "number"}
NUM_OR_TAG = {"anyOf": [{"type": "number"}, {"type": "string", "enum": ["inf", "-inf", "exact"]}]}
BOOL = {"type": "boolean"}
INT = {"type": "integer"}


def _obj(props: dict, required=None) -> dict:
    return {"type": "object", "properties": props,
            "required": sorted(required if required is not None else props)}


NORM_VALUE = _obj({"value": NUM, "log": NUM, "error_radius": NUM})

POLY = _obj({"vars": INT, "degree": INT,
             "terms": {"type": "array", "items": _obj({"exp": {"type": "array", "items": INT},
                                                       "num": {"type": "string"},
                                                       "den": {"type": "string"}})}})

POINT = {"type": "object", "required": ["float", "precision"],
         "properties": {"float": {"type": "array"}, "precision": INT,
                        "exact": {"type": "array", "items": {"type": "string"}}}}

SCHEMAS = {
    "norm": _obj({"command": {"const": "norm"}, "poly": POLY, "l2": NORM_VALUE, "sup": NORM_VALUE,
                  "mahler": NORM_VALUE, "sandwich_ok": BOOL}),
    "dist": _obj({"command": {"const": "dist"}, "order": INT, "value": NUM, "error_radius": NUM}),
    "derive": _obj({"command": {"const": "derive"}, "index": {"type": "array", "items": INT},
                    "derivative_polynomial": POLY, "degree_bound": INT,
                    "value": {"type": ["array", "null"]}},
                   ["command", "index", "derivative_polynomial", "degree_bound"]),
    "mult": _obj({"command": {"const": "mult"}, "orders": {"type": "object"},
                  "bezout": {"type": ["object", "null"]}}),
    "find-approx": _obj({"command": {"const": "find-approx"}, "minpoly": {"type": "array"},
                         "alpha": POINT, "degree": INT, "height": NUM, "log_distance": NUM_OR_TAG}),
    "avoid-subspace": _obj({"command": {"const": "avoid-subspace"}, "subspace": {"type": "object"},
                            "height": NUM, "log_distance_to_X": NUM, "threshold": NUM,
                            "height_bound": NUM, "height_ok": BOOL, "candidates_scanned": INT}),
    "exponent-scan": _obj({"command": {"const": "exponent-scan"},
                           "cells": {"type": "array", "items": _obj(
                               {"D": INT, "H": NUM, "found_degree": INT, "log_distance": NUM,
                                "size": NUM, "exponent": NUM, "saturated": BOOL})}}),
    "check-criterion": _obj({"command": {"const": "check-criterion"}, "criterion": INT,
                             "verdict": {"enum": ["hypotheses-hold", "hypothesis-failed", "inconclusive"]},
                             "failed_k": {"type": ["integer", "null"]},
                             "reason": {"type": ["string", "null"]},
                             "asserted_bound": {"type": ["string", "null"]},
                             "limit": {"type": "object"}, "checks": {"type": "array"},
                             "notes": {"type": "array"}}),
    "calibrate": _obj({"command": {"const": "calibrate"}, "constants": {"type": "object"},
                       "suites": {"type": "object"}, "seed": INT}),
    "error": _obj({"command": {"type": "string"}, "error": {"type": "string"},
                   "message": {"type": "string"}}),
}
