from wsteen.models.grading import Bidegree
from wsteen.models.service import BASIS_OBJECTS
from wsteen.routers import CommandResult, CommandRouter

router = CommandRouter("basis", help="List a basis of one module at one bidegree")
router.argument("--object", required=True, choices=sorted(BASIS_OBJECTS), help="Which module")
router.argument("--p", type=int, required=True, help="Topological degree")
router.argument("--q", type=int, required=True, help="Weight")
router.argument("--no-cache", action="store_true", help="Skip the result cache")


@router.command
def basis(service, args) -> CommandResult:
    report = service.basis(args.object, args.field, Bidegree(args.p, args.q), use_cache=not args.no_cache)
    return CommandResult(report, "basis.txt.j2")
