from abc import ABC, abstractmethod

from models.witness import Witness


class IAttack(ABC):
    @abstractmethod
    def search(self) -> Witness:
        """Run the bounded search and return the first witness under the selection rule."""
        raise NotImplementedError
