import sys

from traceineq.cli import main

sys.exit(main())
