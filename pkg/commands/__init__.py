"""One module per subcommand; each exposes NAME, HELP, add_arguments and run."""
from dataclasses import dataclass, field


@dataclass
class CommandResult:
    results: dict
    tables: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    inputs: dict = field(default_factory=dict)
