"""
Template Management Module

Loads Jinja2 templates with YAML frontmatter from app/templates and renders
them. Used for the comment headers of persisted CSV files and for the CLI
help epilog, so file schemas are documented in one place.
"""

from pathlib import Path

import frontmatter
from jinja2 import (
    Environment,
    FileSystemLoader,
    StrictUndefined,
    TemplateError,
    TemplateNotFound,
    meta,
)

from app.core.exceptions import ConfigurationError

TEMPLATES_DIR = Path(__file__).parent.parent / "templates"


class TemplateManager:
    """Manager class for rendering templates and reading their metadata.

    The Jinja2 environment is a class-level singleton; StrictUndefined makes a
    missing variable an error instead of an empty string.

    Example:
        header = TemplateManager.render("csv_header", title="...", columns=[...], notes=[])
    """

    _env: Environment | None = None

    @classmethod
    def _get_env(cls) -> Environment:
        if cls._env is None:
            cls._env = Environment(
                loader=FileSystemLoader(TEMPLATES_DIR),
                undefined=StrictUndefined,
                trim_blocks=True,
                keep_trailing_newline=True,
            )
        return cls._env

    @classmethod
    def _load_template_file(cls, template: str) -> frontmatter.Post:
        """Resolve `<template>.j2` and split its frontmatter from the body.

        Raises:
            ConfigurationError: If the template file does not exist
        """
        env = cls._get_env()
        assert env.loader is not None, "Jinja2 environment loader must be initialized"
        try:
            source, _, _ = env.loader.get_source(env, f"{template}.j2")
        except TemplateNotFound as exc:
            raise ConfigurationError(
                f"Template {template}.j2 not found in {TEMPLATES_DIR}"
            ) from exc
        return frontmatter.loads(source)

    @classmethod
    def render(cls, template: str, **kwargs) -> str:
        """Render a template body with the given variables.

        Raises:
            ConfigurationError: If the template is missing or rendering fails
        """
        post = cls._load_template_file(template)
        try:
            return cls._get_env().from_string(post.content).render(**kwargs)
        except TemplateError as exc:
            raise ConfigurationError(f"Error rendering template {template}: {exc}") from exc

    @classmethod
    def render_comment(cls, template: str, **kwargs) -> list[str]:
        """Render a template as `# `-prefixed comment lines."""
        body = cls.render(template, **kwargs)
        return [f"# {line}".rstrip() for line in body.strip("\n").splitlines()]

    @classmethod
    def get_template_info(cls, template: str) -> dict:
        """Frontmatter metadata and the variables a template requires."""
        post = cls._load_template_file(template)
        variables = meta.find_undeclared_variables(cls._get_env().parse(post.content))
        return {
            "name": template,
            "description": post.metadata.get("description", "No description provided"),
            "author": post.metadata.get("author", "Unknown"),
            "variables": sorted(variables),
            "frontmatter": post.metadata,
        }
