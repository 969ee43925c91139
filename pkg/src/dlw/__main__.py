from dlw.cli import main
import sys

sys.exit(main())
