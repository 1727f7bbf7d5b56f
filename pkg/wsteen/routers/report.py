from wsteen.models.errors import InvalidArgument
from wsteen.routers import CommandResult, CommandRouter

router = CommandRouter("report", help="Show a stored verification report")
router.argument("--suite", help="Suite whose latest report to show")
router.argument("--list", action="store_true", help="List stored reports")


@router.command
def report(service, args) -> CommandResult:
    if args.list or not args.suite:
        return CommandResult({"reports": service.cache.names()}, "report_list.txt.j2")
    stored = service.stored_report(args.suite, args.field)
    if stored is None:
        raise InvalidArgument(f"no stored report for {args.suite} over {args.field}; run verify first")
    return CommandResult(stored, "report.txt.j2", passed=stored.all_passed)
