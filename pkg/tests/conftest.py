import json
from pathlib import Path

import pytest

from accessgraph import build_graph

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def worked_example_document() -> dict:
    """One account, password-and-factor behind an OR with an SMS fallback.
    The running example every golden value in these tests traces back to."""
    return {
        "nodes": [
            {"id": "acct", "kind": "account", "label": "Account"},
            {"id": "ways-in", "kind": "operator", "label": "Ways in", "op": "or"},
            {
                "id": "pw-and-factor",
                "kind": "operator",
                "label": "Password and factor",
                "op": "and",
            },
            {
                "id": "password",
                "kind": "auth_method",
                "label": "Password",
                "category": "knowledge_based",
            },
            {
                "id": "factor",
                "kind": "auth_method",
                "label": "Stored factor",
                "category": "software_based",
            },
            {
                "id": "sms",
                "kind": "auth_method",
                "label": "SMS code",
                "category": "software_based",
            },
            {"id": "memory", "kind": "access_method", "label": "Memory"},
            {"id": "tablet", "kind": "access_method", "label": "Tablet"},
            {"id": "phone", "kind": "access_method", "label": "Phone"},
        ],
        "edges": [
            ["acct", "ways-in"],
            ["ways-in", "pw-and-factor"],
            ["ways-in", "sms"],
            ["pw-and-factor", "password"],
            ["pw-and-factor", "factor"],
            ["password", "memory"],
            ["factor", "tablet"],
            ["factor", "phone"],
            ["sms", "phone"],
        ],
        "roots": ["acct"],
    }


@pytest.fixture
def example_document():
    return worked_example_document()


@pytest.fixture
def example_graph():
    return build_graph(worked_example_document())


@pytest.fixture
def sample_graph_path(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(json.dumps(worked_example_document()))
    return path
