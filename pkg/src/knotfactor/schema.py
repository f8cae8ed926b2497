"""JSON Schemas for the certificate and for ``knotfactor factor --json`` reports."""

_MOVE = {"type": "array", "minItems": 3, "maxItems": 3}
_TRACE = {
    "type": "array",
    "items": {
        "type": "array",
        "prefixItems": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}}],
        "minItems": 2,
        "maxItems": 2,
    },
}

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotfactor certificate",
    "type": "object",
    "required": ["format", "initialSignature", "chain", "terminal", "summandCount"],
    "properties": {
        "format": {"const": "knotfactor-certificate/1"},
        "initialSignature": {"type": "string"},
        "summandCount": {"type": "integer", "minimum": 0},
        "chain": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["signatureBefore", "crushedComponent", "moves", "sphere", "loopWeight"],
                "properties": {
                    "signatureBefore": {"type": "string"},
                    "crushedComponent": {"type": "integer", "minimum": 0},
                    "moves": {"type": "array", "items": _MOVE},
                    "sphere": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "loopWeight": {"enum": [0, 2]},
                },
            },
        },
        "terminal": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["component", "moves", "verdict", "trace"],
                "properties": {
                    "component": {"type": "integer", "minimum": 0},
                    "moves": {"type": "array", "items": _MOVE},
                    "verdict": {"enum": ["TRIVIAL", "NONTRIVIAL", "UNKNOWN"]},
                    "trace": _TRACE,
                    "witness": {
                        "type": "object",
                        "required": ["type", "k"],
                        "properties": {
                            "type": {"enum": ["count", "stabilizer"]},
                            "k": {"type": "integer", "minimum": 2},
                        },
                    },
                },
            },
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotfactor factor report",
    "type": "object",
    "required": ["summandCount", "summands", "unknownCount", "aborted", "stats"],
    "properties": {
        "summandCount": {"type": "integer", "minimum": 0},
        "unknownCount": {"type": "integer", "minimum": 0},
        "aborted": {"type": "boolean"},
        "message": {"type": "string"},
        "certificate": {"type": ["string", "null"]},
        "stats": {"type": "object"},
        "summands": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["signature", "tetCount", "verdict", "flagged"],
                "properties": {
                    "signature": {"type": "string"},
                    "tetCount": {"type": "integer", "minimum": 1},
                    "verdict": {"enum": ["NONTRIVIAL", "UNKNOWN"]},
                    "flagged": {"type": "boolean"},
                    "witness": {"type": ["object", "null"]},
                },
            },
        },
    },
}
