import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.arcs.arcpres import (ArcParseError, InvalidPresentation, ResourceLimitExceeded, content_lines,
                              format_arc_presentation)
from app.arcs.transit import arc_to_braid, braid_to_arc
from app.braid.word import (FORM_KINDS, BraidParseError, BraidWord, InvalidBraidWord, format_braid_word,
                            parse_braid_word)
from app.moves.moves import InapplicableMove, InvalidInsertionSite, MoveRecord, apply_move, scramble
from app.moves.sheared import (InvalidIntervalSpec, ShearedPresentation, doubled_complexity, format_sheared,
                               parse_sheared, unshear)
from app.recognize.recognize import INCONCLUSIVE, NO, YES, RecognizerError, describe, recognize
from app.search.search import GOAL_NONE, InvalidConstraints, SearchConstraints, simplify_monotonic
from app.stats.stats import EnumerationStatsGenerator
from app.utilities.render import ASCII, FORMATS, SVG, RenderSpec, render_png, render_svg, render_text, \
    trace_captions

logger = logging.getLogger(__name__)

# the exit codes of the verdicts, every error exits with _exit_error
_exit_codes = {YES: 0, NO: 1, INCONCLUSIVE: 2}
_exit_error = 3
# the exceptions reported as a one line diagnostic
_known_errors = (ArcParseError, BraidParseError, InvalidBraidWord, InvalidPresentation, InvalidIntervalSpec,
                 InapplicableMove, InvalidInsertionSite, ResourceLimitExceeded, InvalidConstraints,
                 RecognizerError, OSError, ValueError, KeyError)


def _is_braid(text: str) -> bool:
    lines = content_lines(text)
    return bool(lines) and lines[0][1].split()[0] == 'braid'


def _read_word(text: str) -> BraidWord:
    """Reads a braid word, or the braid word of an arc presentation"""
    if _is_braid(text):
        return parse_braid_word(text)
    return arc_to_braid(unshear(parse_sheared(text)))


def _read_state(text: str) -> ShearedPresentation:
    """Reads a state, or the arc presentation of a braid word"""
    if _is_braid(text):
        return ShearedPresentation.plain(braid_to_arc(parse_braid_word(text)))
    return parse_sheared(text)


def _write(text: str, output: Optional[Path]):
    if output is None:
        sys.stdout.write(text)
    else:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text)


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _trace_data(data: dict) -> dict:
    """Finds the trace in the JSON written by simplify or recognize"""
    if 'certificate' in data:
        if data['certificate'] is None:
            raise ValueError("the recognition result carries no certificate")
        return data['certificate']['trace']
    return data.get('trace', data)


def _replay_json(data: dict) -> List[ShearedPresentation]:
    """Gets the states of a trace, the initial state first"""
    data = _trace_data(data)
    state = parse_sheared(data['initial'])
    protected = frozenset(tag for tag in state.tags if tag)
    states = [state]
    for move in data['moves']:
        state = apply_move(state, MoveRecord.from_dict(move), protected)
        if 'c2' in move and doubled_complexity(state) != move['c2']:
            raise ValueError(f"the trace claims 2C = {move['c2']} after {MoveRecord.from_dict(move)}, "
                             f"replaying gives {doubled_complexity(state)}")
        states.append(state)
    return states


def cmd_convert(args: argparse.Namespace) -> int:
    text = args.input.read_text()
    target = args.to or ('arcs' if _is_braid(text) else 'braid')
    if target == 'arcs':
        _write(format_arc_presentation(unshear(_read_state(text))), args.output)
    else:
        _write(format_braid_word(_read_word(text)) + "\n", args.output)
    return 0


def cmd_recognize(args: argparse.Namespace) -> int:
    word = _read_word(args.input.read_text())
    result = recognize(word, args.move, max_states=args.max_states, max_millis=args.max_millis,
                       threads=args.threads, progress=args.progress)
    data = result.to_dict()
    data['seed'] = args.seed
    if args.json:
        sys.stdout.write(_dump_json(data))
    else:
        print(describe(result))
    if args.trace is not None:
        _write(_dump_json(data), args.trace)
    return _exit_codes[result.verdict]


def cmd_simplify(args: argparse.Namespace) -> int:
    state = _read_state(args.input.read_text())
    bounds = {}
    if args.max_states is not None:
        bounds['max_states'] = args.max_states
    if args.max_millis is not None:
        bounds['max_millis'] = args.max_millis
    protected = frozenset(tag for tag in state.tags if tag)
    result = simplify_monotonic(state, SearchConstraints(protected=protected, goal=GOAL_NONE, **bounds))
    best = result.best
    print(f"outcome: {result.outcome}, visited {result.visited} states")
    print(f"2C: {doubled_complexity(state)} -> {doubled_complexity(best)}")
    print(format_sheared(best), end="")
    if args.trace is not None:
        _write(_dump_json(result.best_trace.to_dict(result.outcome)), args.trace)
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    text = args.input.read_text()
    if args.input.suffix == '.json':
        data = json.loads(text)
        states = _replay_json(data)
        captions = trace_captions(states, _trace_moves(data))
    else:
        states = [_read_state(text)]
        captions = []
    spec = RenderSpec(args.format, cell=args.cell)
    if args.format == ASCII:
        _write(render_text(states, captions), args.output)
    elif args.format == SVG:
        _write(render_svg(states, spec, captions), args.output)
    else:
        if args.output is None:
            raise ValueError("png output needs --output")
        render_png(states, args.output, spec, captions)
    return 0


def _trace_moves(data: dict) -> List[str]:
    return [str(MoveRecord.from_dict(move)) for move in _trace_data(data)['moves']]


def cmd_enumerate(args: argparse.Namespace) -> int:
    sizes = list(range(2, args.size + 1)) if args.upto else [args.size]
    generator = EnumerationStatsGenerator(sizes, with_orbits=args.orbits, progress=args.progress)
    for record in generator.summary():
        line = f"k={record['k']} classes={record['classes']}"
        line += f" components={generator.histogram_text(record['components'])}"
        line += f" winding={generator.histogram_text(record['winding'])}"
        if 'orbits' in record:
            line += f" orbits={record['orbits']}"
        print(line)
    if args.xlsx is not None:
        print(f"report saved to {generator.generate_excel(args.xlsx)}")
    return 0


def cmd_scramble(args: argparse.Namespace) -> int:
    state = _read_state(args.input.read_text())
    scrambled, moves = scramble(state, args.seed, args.insertions, args.exchanges)
    logger.info("applied %s", " ".join(str(move) for move in moves))
    _write(format_sheared(scrambled), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='braidtool',
        description="Decides destabilizations, exchange moves and flypes of closed braids "
                    "by monotonic simplification of arc presentations")
    parser.add_argument('--verbose', '-v', action='store_true', help="log debug messages")
    commands = parser.add_subparsers(dest='command', required=True)

    convert = commands.add_parser('convert', help="convert between braid words and arc presentations")
    convert.add_argument('input', type=Path)
    convert.add_argument('--to', choices=('arcs', 'braid'), help="target format, the other one by default")
    convert.add_argument('--output', '-o', type=Path)
    convert.set_defaults(handler=cmd_convert)

    recognize_cmd = commands.add_parser('recognize', help="decide whether the closed braid admits a move")
    recognize_cmd.add_argument('input', type=Path)
    recognize_cmd.add_argument('--move', '--kind', dest='move', choices=FORM_KINDS, required=True)
    recognize_cmd.add_argument('--max-states', type=int)
    recognize_cmd.add_argument('--max-millis', type=int)
    recognize_cmd.add_argument('--threads', type=int, default=1)
    recognize_cmd.add_argument('--trace', type=Path, help="write the result with its certificate as JSON")
    recognize_cmd.add_argument('--json', action='store_true', help="print the result as JSON")
    recognize_cmd.add_argument('--progress', action='store_true')
    recognize_cmd.add_argument('--seed', type=int, default=0,
                               help="recorded in the result, the recognition itself is deterministic")
    recognize_cmd.set_defaults(handler=cmd_recognize)

    simplify = commands.add_parser('simplify', help="simplify monotonically as far as possible")
    simplify.add_argument('input', type=Path)
    simplify.add_argument('--max-states', type=int)
    simplify.add_argument('--max-millis', type=int)
    simplify.add_argument('--trace', type=Path, help="write the trace to the simplest state as JSON")
    simplify.set_defaults(handler=cmd_simplify)

    render = commands.add_parser('render', help="draw a state, or every state of a JSON trace")
    render.add_argument('input', type=Path)
    render.add_argument('--format', choices=FORMATS, default=ASCII)
    render.add_argument('--cell', type=int, default=RenderSpec().cell)
    render.add_argument('--output', '-o', type=Path)
    render.set_defaults(handler=cmd_render)

    enumerate_cmd = commands.add_parser('enumerate', help="count arc presentations up to rotation")
    enumerate_cmd.add_argument('--size', '-k', type=int, required=True)
    enumerate_cmd.add_argument('--upto', action='store_true', help="every complexity from 2 to the size")
    enumerate_cmd.add_argument('--orbits', action='store_true', help="also count the exchange orbits")
    enumerate_cmd.add_argument('--xlsx', type=Path, help="write a spreadsheet report")
    enumerate_cmd.add_argument('--progress', action='store_true')
    enumerate_cmd.set_defaults(handler=cmd_enumerate)

    scramble_cmd = commands.add_parser('scramble', help="hide a state behind random stabilizations and exchanges")
    scramble_cmd.add_argument('input', type=Path)
    scramble_cmd.add_argument('--seed', type=int, default=0)
    scramble_cmd.add_argument('--insertions', type=int, default=10)
    scramble_cmd.add_argument('--exchanges', type=int, default=20)
    scramble_cmd.add_argument('--output', '-o', type=Path)
    scramble_cmd.set_defaults(handler=cmd_scramble)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """The main logic of the application"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on a usage error, which is the inconclusive verdict here
        return 0 if e.code in (0, None) else _exit_error
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.handler(args)
    except _known_errors as e:
        print(f"error: {e}", file=sys.stderr)
        return _exit_error


if __name__ == '__main__':
    sys.exit(main())
