"""
On-disk cache of field parameters (p, m, modulus, beta) per prime
"""
import os
import logging
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from tenacity import retry, stop_after_attempt, wait_exponential, retry_if_exception_type

from src.algebra.field import FieldCtx, FieldElem, element_order_is, field_from_parameters, make_field, root_of_unity
from src.algebra.gf2x import Gf2Poly
from src.number_theory.fermat import require_odd_prime
from src.utils.config import get_settings
from src.utils.errors import FermatSeqError, ParameterError, SequenceFileError

logger = logging.getLogger(__name__)

CACHE_SUFFIX = ".params"


class ParameterCache:
    """Stores the irreducible modulus and primitive p^2-th root found for each prime"""

    def __init__(self, cache_dir: Optional[Path] = None):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else get_settings().cache_dir

    def path_for(self, p: int) -> Path:
        return self.cache_dir / f"p{p}{CACHE_SUFFIX}"

    def load(self, p: int, max_degree: Optional[int] = None) -> Optional[Tuple[FieldCtx, FieldElem]]:
        """Cached field and beta for p, or None when absent or unusable"""
        path = self.path_for(p)
        if not path.exists():
            return None
        try:
            entries = self._parse(path.read_text(encoding="ascii"))
            if int(entries["p"]) != p:
                raise ParameterError(f"file records p={entries['p']}")
            cap = get_settings().max_field_degree if max_degree is None else max_degree
            fld = field_from_parameters(p, int(entries["m"]), Gf2Poly.from_text(entries["modulus"]), cap)
            beta = fld.element(Gf2Poly.from_text(entries["beta"]).bits)
            if not element_order_is(fld, beta, p * p):
                raise ParameterError(f"beta does not have order {p * p}")
        except (OSError, KeyError, ValueError, FermatSeqError) as e:
            logger.warning(f"Ignoring cache entry {path}: {e}")
            return None
        logger.debug(f"Loaded field parameters for p={p} from {path}")
        return fld, beta

    @retry(
        stop=stop_after_attempt(3),
        wait=wait_exponential(multiplier=0.1, min=0.1, max=1),
        retry=retry_if_exception_type(OSError)
    )
    def _write(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        # temp file is private to this writer
        with tempfile.NamedTemporaryFile("w", encoding="ascii", dir=path.parent,
                                         prefix=f"{path.name}.", suffix=".tmp", delete=False) as handle:
            handle.write(text)
            tmp = Path(handle.name)
        try:
            os.replace(tmp, path)
        except OSError:
            tmp.unlink(missing_ok=True)
            raise

    def store(self, fld: FieldCtx, beta: FieldElem) -> Path:
        """Write the parameters atomically"""
        path = self.path_for(fld.p)
        text = (
            f"p={fld.p}\n"
            f"m={fld.m}\n"
            f"modulus={fld.modulus.to_text()}\n"
            f"beta={beta.to_text()}\n"
        )
        try:
            self._write(path, text)
        except OSError as e:
            logger.error(f"Error writing cache entry {path}: {e}")
            raise SequenceFileError(str(e), path=str(path))
        logger.info(f"Cached field parameters for p={fld.p} in {path}")
        return path

    def get_or_create(self, p: int, max_degree: Optional[int] = None) -> Tuple[FieldCtx, FieldElem]:
        """Cached parameters, or a fresh field search whose result is then stored"""
        p = require_odd_prime(p)
        cached = self.load(p, max_degree)
        if cached is not None:
            return cached
        cap = get_settings().max_field_degree if max_degree is None else max_degree
        fld = make_field(p, cap)
        beta = root_of_unity(fld, p * p)
        try:
            self.store(fld, beta)
        except SequenceFileError:
            logger.warning(f"Continuing without caching parameters for p={p}")
        return fld, beta

    def list_cached(self) -> List[Dict[str, str]]:
        if not self.cache_dir.exists():
            return []
        rows = []
        for path in sorted(self.cache_dir.glob(f"p*{CACHE_SUFFIX}"), key=lambda q: int(q.stem[1:])):
            try:
                entries = self._parse(path.read_text(encoding="ascii"))
            except (OSError, ValueError) as e:
                logger.warning(f"Unreadable cache entry {path}: {e}")
                continue
            rows.append({"p": entries.get("p", "?"), "m": entries.get("m", "?"), "path": str(path)})
        return rows

    def clear(self) -> int:
        """Remove every cache entry; returns the number removed"""
        if not self.cache_dir.exists():
            return 0
        removed = 0
        for path in self.cache_dir.glob(f"p*{CACHE_SUFFIX}"):
            path.unlink()
            removed += 1
        logger.info(f"Removed {removed} cache entries from {self.cache_dir}")
        return removed

    @staticmethod
    def _parse(text: str) -> Dict[str, str]:
        entries = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed line {line!r}")
            key, value = line.split("=", 1)
            entries[key.strip()] = value.strip()
        return entries


# Global cache instance
_cache_instance = None


def get_parameter_cache() -> ParameterCache:
    """Get global parameter cache instance"""
    global _cache_instance
    if _cache_instance is None:
        _cache_instance = ParameterCache()
    return _cache_instance


def reset_parameter_cache() -> None:
    global _cache_instance
    _cache_instance = None
