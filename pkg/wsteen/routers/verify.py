from wsteen.models.homology_engine import Window
from wsteen.models.suites import SUITES
from wsteen.routers import CommandResult, CommandRouter

router = CommandRouter("verify", help="Run a verification suite")
router.argument("--suite", required=True, choices=list(SUITES))
router.argument("--max-index", type=int, help="Largest index in the index sets (default 4)")
router.argument("--jmax", type=int, help="Largest x_j checked by eta-inverted (default 4)")
router.argument("--weight-cap", type=int, help="Weight cap for sampled monomials and claimed bases")
router.argument("--samples", type=int, help="Random sample count")
router.argument("--seed", type=int, help="Random seed")
router.argument("--max-p", type=int, help="Window: largest |p|")
router.argument("--min-q", type=int, help="Window: smallest q")
router.argument("--max-q", type=int, help="Window: largest q")
router.argument("--no-cache", action="store_true", help="Do not store the report")


def window_from(service, args):
    if args.max_p is None and args.min_q is None and args.max_q is None:
        return None
    config = service.config
    return Window(
        max_p=config.max_p if args.max_p is None else args.max_p,
        min_q=config.min_q if args.min_q is None else args.min_q,
        max_q=config.max_q if args.max_q is None else args.max_q,
    )


@router.command
def verify(service, args) -> CommandResult:
    report = service.verify(
        args.suite,
        args.field,
        use_cache=not args.no_cache,
        max_index=args.max_index,
        jmax=args.jmax,
        weight_cap=args.weight_cap,
        samples=args.samples,
        seed=args.seed,
        window=window_from(service, args),
    )
    return CommandResult(report, "report.txt.j2", passed=report.all_passed)
