# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import numpy as np


class Pixel:
    """Represents a point of a drawing in pixel coordinates

    Diagrams are laid out on an integer grid of (column, level) points.
    Every renderer in this project maps them to pixels through this
    class, so that the SVG and the PNG output agree on the geometry.
    """

    def __init__(self, x: int, y: int):
        """Initialize the pixel with coordinates

        Parameters
        ----------
        x:
            The horizontal x coordinate
        y:
            The vertical y coordinate
        """
        self._x = x
        self._y = y

    @classmethod
    def from_grid(cls, column: float, level: float, cell: int, margin: int, height: int) -> Pixel:
        """Maps a grid point to a pixel, levels grow upwards

        Parameters
        ----------
        column:
            the column of the layout token
        level:
            the level of the horizontal arc
        cell:
            the size of one grid cell in pixels
        margin:
            the blank border around the drawing in pixels
        height:
            the height of the whole drawing in pixels

        Returns
        -------
        pixel:
            the pixel of the grid point
        """
        lin_tran_mtx = np.array([[cell, 0], [0, -cell]])
        translation_vec = np.array([[margin], [height - margin]])
        return cls(0, 0).transform(lin_tran_mtx, translation_vec, column, level)

    @property
    def x(self) -> int:
        """Gets the horizontal x coordinate

        Returns
        -------
        x:
            the horizontal x coordinate
        """
        return self._x

    @property
    def y(self) -> int:
        """Gets the vertical y coordinate

        Returns
        -------
        y:
            the vertical y coordinate
        """
        return self._y

    def transform(self, lin_tran_mtx: np.ndarray, translation_vec: np.ndarray,
                  x: float = None, y: float = None) -> Pixel:
        """Transforms a point to a pixel

        The transformation is parameterized by:
        -- a 2*2 linear transformation matrix A
        -- a 2*1 translation vector b
        The transformation is characterized by the following formula:
        pixel_new = A @ point + b where @ stands for matrix multiplication
        The point defaults to this pixel.

        Parameters
        ----------
        lin_tran_mtx:
            a 2*2 linear transformation matrix
        translation_vec:
            a 2*1 translation vector b
        x, y:
            the point to transform instead of this pixel

        Returns
        -------
        pixel_new:
            a new pixel
        """
        loc_vec = np.array([[self._x if x is None else x], [self._y if y is None else y]])
        loc_vec_after = lin_tran_mtx @ loc_vec + translation_vec
        return Pixel(round(loc_vec_after[0][0]), round(loc_vec_after[1][0]))

    def as_tuple(self):
        return self._x, self._y

    def __str__(self):
        """Returns the string representation of the pixel

        Example: Pixel 3:2
        """
        return f"Pixel {self._x}:{self._y}"
