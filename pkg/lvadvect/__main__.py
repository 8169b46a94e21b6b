"""Allow ``python -m lvadvect``."""

from lvadvect.cli import main

raise SystemExit(main())
