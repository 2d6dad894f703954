"""Command-line entry point for the Trace Map Toolkit.

Responsible for:
* loading environment variables (via Settings.load_dotenv)
* configuring global logging from the user settings
* dispatching to the subcommand and turning its outcome into an exit code

To run during development:
    poetry run tmt derive --rule "a->b;b->ba"
or
    python -m trace_map_toolkit derive --rule "a->b;b->ba"
"""

from __future__ import annotations

import sys

from trace_map_toolkit.cli import main as cli_main
from trace_map_toolkit.core.logger import configure_logging
from trace_map_toolkit.core.settings import Settings


def main() -> None:
    """Run one subcommand and exit with its status."""
    # 1️⃣  Environment & settings
    Settings.load_dotenv()  # picks up .env or system variables
    settings = Settings.load()

    # 2️⃣  Logging (console on stderr + rotating file handler)
    configure_logging(settings.log_level, log_to_file=settings.log_to_file)

    # 3️⃣  Subcommand
    sys.exit(cli_main(sys.argv[1:], settings))


if __name__ == "__main__":
    main()
