import logging
from collections import Counter
from pathlib import Path
from typing import Dict, List, Tuple

from tqdm import tqdm

from app.arcs.arcpres import components, decode_key, enumerate_presentations, winding_number
from app.search.search import exchange_orbit
from app.utilities.excel import ExcelSheet

logger = logging.getLogger(__name__)


class EnumerationStatsGenerator:
    """This class generates statistics over all arc presentations of given complexities"""

    # the default excel file name
    _default_excel_file_name = 'enumeration.xlsx'
    # the titles of the worksheets
    _classes_sheet = 'classes'
    _summary_sheet = 'summary'
    _orbits_sheet = 'orbits'

    def __init__(self, sizes: List[int], with_orbits: bool = False, progress: bool = False):
        """Initializes the generator

        Parameters
        ----------
        sizes:
            the complexities to enumerate
        with_orbits:
            also partitions every complexity into exchange orbits
        progress:
            shows progress bars
        """
        self._sizes = sorted(set(sizes))
        self._with_orbits = with_orbits
        self._progress = progress
        self._classes: Dict[int, List[bytes]] = {}
        self._orbits: Dict[int, List[int]] = {}

    def classes(self, k: int) -> List[bytes]:
        """Gets the sorted canonical keys of complexity k, enumerating them once"""
        if k not in self._classes:
            self._classes[k] = sorted(enumerate_presentations(k))
        return self._classes[k]

    def class_rows(self, k: int) -> List[Tuple[int, str, int, int]]:
        """Gets (k, key, component count, winding number) for every class"""
        rows = []
        for key in self.classes(k):
            presentation = decode_key(key)
            rows.append((k, key.decode('ascii'), len(components(presentation)), winding_number(presentation)))
        return rows

    def orbit_sizes(self, k: int) -> List[int]:
        """Partitions the classes of complexity k into exchange orbits

        Returns
        -------
        sizes:
            the orbit sizes in decreasing order, they sum to the class count
        """
        if k not in self._orbits:
            remaining = set(self.classes(k))
            sizes = []
            with tqdm(total=len(remaining), disable=not self._progress,
                      bar_format='{l_bar}{bar:30}{r_bar}{bar:-10b}') as bar:
                for key in self.classes(k):
                    if key not in remaining:
                        continue
                    orbit = exchange_orbit(decode_key(key))
                    remaining -= orbit
                    sizes.append(len(orbit))
                    bar.update(len(orbit))
            self._orbits[k] = sorted(sizes, reverse=True)
            logger.info("k = %d: %d exchange orbits", k, len(sizes))
        return self._orbits[k]

    def summary(self) -> List[Dict[str, object]]:
        """Gets one record per complexity with the class count and the histograms"""
        records = []
        for k in self._sizes:
            rows = self.class_rows(k)
            record = {
                'k': k,
                'classes': len(rows),
                'components': dict(sorted(Counter(row[2] for row in rows).items())),
                'winding': dict(sorted(Counter(row[3] for row in rows).items())),
            }
            if self._with_orbits:
                record['orbits'] = len(self.orbit_sizes(k))
            records.append(record)
        return records

    def generate_excel(self, target_path: Path) -> Path:
        """Generates an excel file with one sheet of classes and one of summaries

        The classes sheet lists every canonical key with its component
        count and winding number, the summary sheet the class count and
        the histograms per complexity. With orbits, a third sheet lists
        the exchange orbit sizes.

        Parameters
        ----------
        target_path:
            the excel file, or a directory that receives the default file name

        Returns
        -------
        save_path:
            where the file was saved
        """
        save_path = target_path if target_path.suffix else target_path.joinpath(self._default_excel_file_name)
        sheet = ExcelSheet.create(self._classes_sheet)
        sheet.set_row(1, ['k', 'key', 'components', 'winding'])
        row = 2
        for k in self._sizes:
            for values in self.class_rows(k):
                sheet.set_row(row, list(values))
                row += 1
        sheet.add_sheet(self._summary_sheet)
        sheet.set_row(1, ['k', 'classes', 'components', 'winding', 'orbits'])
        for row, record in enumerate(self.summary(), start=2):
            sheet.set_row(row, [record['k'], record['classes'],
                                self.histogram_text(record['components']),
                                self.histogram_text(record['winding']),
                                record.get('orbits')])
        if self._with_orbits:
            sheet.add_sheet(self._orbits_sheet)
            sheet.set_row(1, ['k', 'orbit', 'size'])
            row = 2
            for k in self._sizes:
                for index, size in enumerate(self.orbit_sizes(k), start=1):
                    sheet.set_row(row, [k, index, size])
                    row += 1
        sheet.save(save_path)
        logger.info("saved enumeration report to %s", save_path)
        return save_path

    @staticmethod
    def histogram_text(histogram: Dict[int, int]) -> str:
        """Writes a histogram like '1:3 2:1'"""
        return " ".join(f"{value}:{number}" for value, number in histogram.items())
