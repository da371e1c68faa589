import sys

from onlinefd.cli import main

sys.exit(main())
