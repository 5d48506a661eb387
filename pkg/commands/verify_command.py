import logging

from commands.base import Command
from core.commands import EXIT_OK, EXIT_VERIFY_FAILED, register_command
from core.errors import ConfigError
from core.export import write_json
from core.run_config import VerifyRunConfig, load_run_config
from core.verification import CHECKS, run_checks

logger = logging.getLogger(__name__)


@register_command
class VerifyCommand(Command):
    name = "verify"
    description = "Run the invariant suite and write a JSON pass/fail report"

    def add_arguments(self, parser):
        parser.add_argument("--perturb-cauchy", type=float, default=None, metavar="EPS",
                            help="Add EPS to the Cauchy Gram diagonal (negative control)")
        parser.add_argument("--check", action="append", dest="checks", choices=sorted(CHECKS),
                            help="Run only this check (repeatable)")

    def run(self, args) -> int:
        run = load_run_config(VerifyRunConfig, args.config)
        seed = run.seed if args.seed is None else args.seed
        perturb = run.perturb_cauchy if args.perturb_cauchy is None else args.perturb_cauchy
        checks = args.checks or run.checks
        try:
            report = run_checks(seed, perturb, checks)
        except KeyError as e:
            raise ConfigError(str(e))
        write_json(args.out or run.out, report)
        if not report["passed"]:
            logger.error(f"Verification failed: {', '.join(report['failures'])}")
            return EXIT_VERIFY_FAILED
        logger.info(f"All {len(report['checks'])} checks passed")
        return EXIT_OK
