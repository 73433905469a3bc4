import sys

from ostcert.cli import main

sys.exit(main())
