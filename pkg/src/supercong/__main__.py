import sys

from supercong.cli import main

sys.exit(main())
