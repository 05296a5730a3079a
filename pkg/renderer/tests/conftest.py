"""Shared fixtures for the renderer test suite."""

import pytest

from figrender_datasets import make_csv


@pytest.fixture
def csv_dir(tmp_path):
    def write(kind, text=None, name=None):
        path = tmp_path / (name or f"{kind}_abc123.csv")
        path.write_text(text if text is not None else make_csv(kind))
        return path
    return write
