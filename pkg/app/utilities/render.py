# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

from app.moves.sheared import V, ShearedPresentation, doubled_complexity
from app.utilities.img import Image, rgb_black, rgb_red
from app.utilities.pixel import Pixel

logger = logging.getLogger(__name__)

ASCII = 'ascii'
SVG = 'svg'
PNG = 'png'
FORMATS = (ASCII, SVG, PNG)

# the default size of one grid cell in pixels
_default_cell = 30
# the default blank border in pixels
_default_margin = 20
# the height reserved for a caption above each drawing in pixels
_default_caption = 20
# the width of the white band drawn under a vertical arc in pixels
_default_gap_width = 8

# (kind, (column, level), (column, level)) with kind 'h', 'v' or 'bracket'
Segment = Tuple[str, Tuple[float, float], Tuple[float, float]]


@dataclass(frozen=True)
class RenderSpec:
    """How to draw a diagram"""
    format: str = ASCII
    cell: int = _default_cell
    margin: int = _default_margin

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown render format {self.format}")


def _segments(state: ShearedPresentation) -> List[Segment]:
    """Lays the state out on the grid

    Token i sits in column i + 1 and level l on grid row l + 1, a
    horizontal arc passing the end of the circle runs out to both
    borders.
    """
    count = len(state.layout)
    top = state.k + 0.5
    segments: List[Segment] = []
    for position, token in enumerate(state.layout):
        if token != V:
            segments.append(('bracket', (position + 1, 0.5), (position + 1, top)))
    for level, (start, end) in enumerate(state.rows):
        first, last = state.angle_token[start] + 1, state.angle_token[end] + 1
        if first < last:
            segments.append(('h', (first, level + 1), (last, level + 1)))
        else:
            segments.append(('h', (first, level + 1), (count + 0.5, level + 1)))
            segments.append(('h', (0.5, level + 1), (last, level + 1)))
    for angle, position in enumerate(state.angle_token):
        source, target = state.vertical(angle)
        segments.append(('v', (position + 1, source + 1), (position + 1, target + 1)))
    return segments


def render_ascii(state: ShearedPresentation) -> str:
    """Draws the state with characters, the highest level on the first line

    '+' marks an arc end, '-' a horizontal arc, '|' a vertical arc and
    ':' an interval end no arc passes at that level.
    """
    count = len(state.layout)
    width = 2 * count + 1
    grid = [[' '] * width for _ in range(state.k)]
    for position, token in enumerate(state.layout):
        if token != V:
            for line in grid:
                line[2 * position + 1] = ':'
    for level in range(state.k):
        line = grid[state.k - 1 - level]
        for cell in state.row_cells(level):
            line[2 * cell + 2] = '-'
            if cell == count - 1:
                line[0] = '-'
            following = (cell + 1) % count
            if following != state.angle_token[state.rows[level][1]]:
                line[2 * following + 1] = '-'
    for angle, position in enumerate(state.angle_token):
        source, target = state.vertical(angle)
        low, high = sorted((source, target))
        for level in range(low + 1, high):
            grid[state.k - 1 - level][2 * position + 1] = '|'
        for level in (source, target):
            grid[state.k - 1 - level][2 * position + 1] = '+'
    return "\n".join("".join(line).rstrip() for line in grid) + "\n"


def _size(state: ShearedPresentation, spec: RenderSpec) -> Tuple[int, int]:
    width = (len(state.layout) + 1) * spec.cell + 2 * spec.margin
    height = (state.k + 1) * spec.cell + 2 * spec.margin
    return width, height


def _pixels(point: Tuple[float, float], spec: RenderSpec, height: int) -> Pixel:
    return Pixel.from_grid(point[0], point[1], spec.cell, spec.margin, height)


def _svg_line(a: Pixel, a_y: int, b: Pixel, b_y: int, style: str) -> str:
    return f'<line x1="{a.x}" y1="{a_y}" x2="{b.x}" y2="{b_y}" {style}/>'


def _svg_group(state: ShearedPresentation, spec: RenderSpec, offset: int, caption: str) -> List[str]:
    width, height = _size(state, spec)
    elements = [f'<g transform="translate(0,{offset})">']
    if caption:
        elements.append(f'<text x="{spec.margin}" y="{_default_caption - 6}" font-family="monospace" '
                        f'font-size="12">{caption}</text>')
    for kind, start, end in _segments(state):
        a = _pixels(start, spec, height)
        b = _pixels(end, spec, height)
        a_y, b_y = a.y + _default_caption, b.y + _default_caption
        if kind == 'bracket':
            elements.append(_svg_line(a, a_y, b, b_y, 'stroke="red" stroke-dasharray="4 3"'))
        elif kind == 'h':
            elements.append(_svg_line(a, a_y, b, b_y, 'stroke="black" stroke-width="2"'))
        else:
            elements.append(_svg_line(a, a_y, b, b_y, f'stroke="white" stroke-width="{_default_gap_width}"'))
            elements.append(_svg_line(a, a_y, b, b_y, 'stroke="black" stroke-width="2"'))
    elements.append('</g>')
    return elements


def render_svg(states: Sequence[ShearedPresentation], spec: RenderSpec = RenderSpec(SVG),
               captions: Sequence[str] = ()) -> str:
    """Draws one or more states stacked top to bottom as an SVG document

    Vertical arcs are drawn last, over a white band, so that they pass
    over the horizontal arcs.
    """
    captions = list(captions) or [""] * len(states)
    width = max(_size(state, spec)[0] for state in states)
    offset = 0
    groups = []
    for state, caption in zip(states, captions):
        groups.extend(_svg_group(state, spec, offset, caption))
        offset += _size(state, spec)[1] + _default_caption
    header = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{offset}" viewBox="0 0 {width} {offset}">'
    background = '<rect width="100%" height="100%" fill="white"/>'
    return "\n".join([header, background] + groups + ['</svg>']) + "\n"


def render_png(states: Sequence[ShearedPresentation], save_path: Path, spec: RenderSpec = RenderSpec(PNG),
               captions: Sequence[str] = ()) -> Image:
    """Draws one or more states stacked top to bottom into a PNG file"""
    captions = list(captions) or [""] * len(states)
    width = max(_size(state, spec)[0] for state in states)
    total = sum(_size(state, spec)[1] + _default_caption for state in states)
    image = Image.create(width, total)
    offset = 0
    for state, caption in zip(states, captions):
        height = _size(state, spec)[1]
        if caption:
            image.draw_text(Pixel(spec.margin, offset + 4), caption)
        segments = _segments(state)
        shifted = []
        for kind, start, end in segments:
            a = _pixels(start, spec, height)
            b = _pixels(end, spec, height)
            shifted.append((kind, Pixel(a.x, a.y + offset + _default_caption), Pixel(b.x, b.y + offset + _default_caption)))
        for kind, a, b in shifted:
            if kind == 'bracket':
                image.draw_line(a, b, color=rgb_red, width=1)
            elif kind == 'h':
                image.draw_line(a, b, color=rgb_black)
        for kind, a, b in shifted:
            if kind == 'v':
                image.draw_gap(a, b, _default_gap_width)
                image.draw_line(a, b, color=rgb_black)
                image.draw_dot(a)
                image.draw_dot(b)
        offset += height + _default_caption
    image.save(save_path)
    logger.info("saved %d diagram(s) to %s", len(states), save_path)
    return image


def trace_captions(states: Sequence[ShearedPresentation], moves: Sequence[str]) -> List[str]:
    """Labels the states of a trace with the move leading to them and 2C"""
    captions = [f"start, 2C = {doubled_complexity(states[0])}"]
    for step, (move, state) in enumerate(zip(moves, states[1:]), start=1):
        captions.append(f"step {step}: {move}, 2C = {doubled_complexity(state)}")
    return captions


def render_text(states: Sequence[ShearedPresentation], captions: Sequence[str] = ()) -> str:
    """Draws one or more states with characters, separated by their captions"""
    captions = list(captions) or [""] * len(states)
    blocks = []
    for state, caption in zip(states, captions):
        blocks.append((caption + "\n" if caption else "") + render_ascii(state))
    return "\n".join(blocks)
