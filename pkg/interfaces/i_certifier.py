from abc import ABC, abstractmethod

from core.semigroup import Element
from models.certificate import GapCertificate


class ICertifier(ABC):
    @abstractmethod
    def certify(self, first: Element, second: Element) -> GapCertificate:
        """Prove a lower bound on the gap between two enumerated elements."""
        raise NotImplementedError
