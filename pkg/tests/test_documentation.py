"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

This module validates the structure and content of asymspec documentation.
"""

from pathlib import Path

import pytest

# Import asymspec to ensure coverage tracking works when running doc tests alone
import asymspec
from asymspec.cli import build_parser


class TestDocumentation:
    """Tests for documentation files."""

    @pytest.fixture
    def readme_path(self) -> Path:
        """Return path to main README.md."""
        return Path(__file__).parent.parent / "README.md"

    @pytest.fixture
    def docs_path(self) -> Path:
        """Return path to docs directory."""
        return Path(__file__).parent.parent / "docs"

    @pytest.fixture
    def changelog_path(self) -> Path:
        """Return path to CHANGELOG.md."""
        return Path(__file__).parent.parent / "CHANGELOG.md"

    def test_readme_has_quick_start(self, readme_path: Path) -> None:
        """Test that main README has quick start section."""
        content = readme_path.read_text()
        assert "Quick Start" in content, "Main README should have Quick Start section"

    def test_readme_has_installation(self, readme_path: Path) -> None:
        """Test that main README has installation instructions."""
        content = readme_path.read_text()
        assert "pip install" in content, "Main README should have installation instructions"

    def test_readme_has_features(self, readme_path: Path) -> None:
        """Test that main README has features section."""
        content = readme_path.read_text()
        assert "Features" in content, "Main README should have Features section"

    def test_readme_has_license(self, readme_path: Path) -> None:
        """Test that main README mentions license."""
        content = readme_path.read_text()
        assert "MIT" in content, "Main README should mention MIT license"

    def test_required_docs_exist(self, docs_path: Path) -> None:
        """Test that required documentation files exist."""
        required_docs = [
            "index.md",
            "quickstart.md",
            "configuration.md",
            "api.md",
            "artifacts.md",
            "validation.md",
        ]
        for doc in required_docs:
            doc_path = docs_path / doc
            assert doc_path.exists(), f"docs/{doc} should exist"

    def test_every_subcommand_documented(self, readme_path: Path, docs_path: Path) -> None:
        """Test that each CLI subcommand appears in the README and artifact docs."""
        parser = build_parser()
        subparsers = next(a for a in parser._actions if a.dest == "command")
        readme = readme_path.read_text()
        artifacts = (docs_path / "artifacts.md").read_text()
        for name in subparsers.choices:
            assert f"asymspec {name}" in readme, f"README should show asymspec {name}"
            if name != "history":
                assert f"`{name}`" in artifacts, f"artifacts doc should describe {name}"

    def test_artifact_names_documented(self, docs_path: Path) -> None:
        """Test that artifacts.md lists the files the pipelines write."""
        content = (docs_path / "artifacts.md").read_text()
        for name in (
            "eigenvalues.csv",
            "radial_histogram.csv",
            "fit_report.json",
            "ensemble_summary.json",
            "maxeig.csv",
            "maxeig_windows.csv",
            "pc_correlations.csv",
            "autocorrelation.csv",
            "pca_report.json",
            "joint_modes.json",
            "mc_fit_report.json",
        ):
            assert name in content, f"artifacts doc should mention {name}"

    def test_configuration_lists_environment(self, docs_path: Path) -> None:
        """Test that configuration.md lists every environment variable."""
        content = (docs_path / "configuration.md").read_text()
        for var in ("ASYMSPEC_THREADS", "ASYMSPEC_LOG_PATH", "ASYMSPEC_LOG_ENABLED", "ASYMSPEC_LEDGER_PATH"):
            assert var in content, f"configuration doc should mention {var}"

    def test_validation_doc_exit_codes(self, docs_path: Path) -> None:
        """Test that validation.md explains the validation exit status."""
        content = (docs_path / "validation.md").read_text()
        assert "mc-validate" in content
        assert "exit status 2" in content

    def test_changelog_exists_and_valid(self, changelog_path: Path) -> None:
        """Test that CHANGELOG.md exists and follows Keep a Changelog format."""
        content = changelog_path.read_text()

        assert "# Changelog" in content, "CHANGELOG should have title"
        assert "[Unreleased]" in content, "CHANGELOG should have Unreleased section"
        assert "Keep a Changelog" in content, "CHANGELOG should reference Keep a Changelog"

    def test_quickstart_mentions_asymspec(self, docs_path: Path) -> None:
        """Test that quickstart mentions the library entry points."""
        quickstart_path = docs_path / "quickstart.md"
        content = quickstart_path.read_text()

        assert "AsymSpec" in content, "quickstart should mention AsymSpec class"
        assert "lagged_cross" in content, "quickstart should mention lagged_cross"
        assert "eig_general" in content, "quickstart should mention eig_general"

    def test_api_doc_has_public_names(self, docs_path: Path) -> None:
        """Test that API docs mention every exported function."""
        content = (docs_path / "api.md").read_text()
        for name in asymspec.__all__:
            if name.startswith("_"):
                continue
            assert name in content, f"API docs should mention {name}"
