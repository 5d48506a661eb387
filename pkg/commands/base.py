import argparse
from abc import ABC, abstractmethod


class Command(ABC):
    """Base class for every CLI subcommand."""

    name: str = ""
    description: str = ""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Add command-specific flags on top of the common ones."""

    @abstractmethod
    def run(self, args: argparse.Namespace) -> int:
        """
        Execute the command.

        Args:
            args: Parsed command line (common flags plus this command's own)

        Returns:
            Process exit code
        """
        pass

    def get_help(self) -> str:
        """Return help text for this command."""
        return f"{self.name}: {self.description}"
