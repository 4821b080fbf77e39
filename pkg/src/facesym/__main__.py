import sys

from facesym.cli import main

sys.exit(main())
