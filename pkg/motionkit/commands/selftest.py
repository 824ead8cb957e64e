# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from ..selftest import CHECKS, run_selftest
from . import BaseCommand


class Command(BaseCommand):
    help = 'Run the closed-form kernel checks.'
    uses_config = False

    def add_arguments(self, parser):
        parser.add_argument("checks", nargs="*", metavar="CHECK",
                            help="run only these of: %s" % ", ".join(CHECKS))

    def handle(self, **options):
        unknown = [c for c in options["checks"] if c not in CHECKS]
        if unknown:
            self.write("unknown checks: %s" % ", ".join(unknown))
            return 2
        results = run_selftest(options["checks"] or None)
        for name, passed, message, seconds in results:
            self.write("%-26s %s %6.2fs %s" % (name, "ok  " if passed else "FAIL",
                                              seconds, message))
        failed = [r for r in results if not r[1]]
        return 1 if failed else 0
