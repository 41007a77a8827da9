"""Test-wide switches.

Both debug flags are cheap enough for test-sized inputs and turn silent
wrong answers into loud failures, so the whole suite runs with them on.
"""

import perfectgen.exactalgs as exactalgs
import perfectgen.structure as structure

exactalgs.CHECK_COLOURINGS = True
structure.DEBUG_FLIPS = True
