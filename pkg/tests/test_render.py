from pathlib import Path

import pytest

from app.arcs.arcpres import ArcPresentation
from app.moves.sheared import IntervalSpec, ShearedPresentation, shear
from app.utilities.img import Image
from app.utilities.pixel import Pixel
from app.utilities.render import (PNG, RenderSpec, render_ascii, render_png, render_svg, render_text,
                                  trace_captions)


def test_pixel_from_grid() -> None:
    pixel = Pixel.from_grid(1, 1, 30, 20, 130)
    assert pixel.as_tuple() == (50, 80)
    assert Pixel.from_grid(0, 0, 30, 20, 130).as_tuple() == (20, 110)


def test_render_spec() -> None:
    with pytest.raises(ValueError):
        RenderSpec('gif')


def test_ascii_round_unknot(t2: ArcPresentation) -> None:
    assert render_ascii(ShearedPresentation.plain(t2)) == "-+ +-\n +-+\n"


def test_ascii_shows_interval_ends(t3: ArcPresentation) -> None:
    drawing = render_ascii(shear(t3, IntervalSpec((0,))))
    assert drawing.count("\n") == 3
    assert render_ascii(shear(t3, IntervalSpec((0,)))) == drawing


def test_svg(t2: ArcPresentation, t3: ArcPresentation) -> None:
    document = render_svg([ShearedPresentation.plain(t2)])
    assert document.startswith('<svg xmlns="http://www.w3.org/2000/svg" width="130" height="150"')
    assert document.count('<line') == 7
    assert render_svg([ShearedPresentation.plain(t2)]) == document
    sheared = render_svg([shear(t3, IntervalSpec((0,)))])
    assert 'stroke="red"' in sheared


def test_trace_captions(t2: ArcPresentation, t3: ArcPresentation) -> None:
    states = [ShearedPresentation.plain(t3), ShearedPresentation.plain(t2)]
    captions = trace_captions(states, ["HS(0,1)"])
    assert captions == ["start, 2C = 6", "step 1: HS(0,1), 2C = 4"]
    text = render_text(states, captions)
    assert text.startswith("start, 2C = 6\n")
    assert "step 1: HS(0,1), 2C = 4\n" in text
    document = render_svg(states, captions=captions)
    assert document.count('<text') == 2


def test_png(tmp_path: Path, t2: ArcPresentation) -> None:
    save_path = tmp_path / "t2.png"
    image = render_png([ShearedPresentation.plain(t2)], save_path, RenderSpec(PNG))
    assert image.size == (130, 150)
    assert Image.open_extern(save_path).size == (130, 150)
    pixels = image.to_data_ndarray()
    assert pixels.shape[:2] == (150, 130)
    assert pixels.min() == 0


def test_ascii_horizontal_arcs_cross_vertical_columns() -> None:
    trefoil = ArcPresentation(((3, 0), (4, 1), (0, 2), (1, 3), (2, 4)))
    drawing = render_ascii(ShearedPresentation.plain(trefoil))
    assert drawing.splitlines()[0] == "     +---+"
